// Copyright 2026 The ldplab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ldplab/rng.h"

#include <cstdint>

namespace ldplab {
namespace {

uint64_t SplitMix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(uint64_t master_seed, uint64_t stream_index)
    : master_seed_(master_seed), stream_index_(stream_index) {
  // Hash the seed first so that (seed, index) and (seed', index') with
  // seed + index = seed' + index' start from unrelated SplitMix states.
  uint64_t state = master_seed;
  state = SplitMix64(state) ^ stream_index;
  state = SplitMix64(state);
  for (uint64_t& word : s_) word = SplitMix64(state);
}

}  // namespace ldplab
