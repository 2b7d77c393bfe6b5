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

#ifndef LDPLAB_RNG_H_
#define LDPLAB_RNG_H_

#include <bit>
#include <cstdint>
#include <limits>

namespace ldplab {

// A deterministic random stream keyed by (master_seed, stream_index).
//
// Two streams built from the same key produce identical sequences. Streams
// with different indices are seeded independently, so trial i of an
// experiment draws from stream i no matter which worker runs it. A stream is
// mutable state and must be owned by one worker at a time.
//
// The generator is xoshiro256++; its 256-bit state is filled by SplitMix64
// starting from a mix of the two key words.
//
// Satisfies UniformRandomBitGenerator, but callers that need reproducible
// output across standard libraries should use the helpers below rather than
// std:: distributions.
class RngStream {
 public:
  using result_type = uint64_t;

  RngStream(uint64_t master_seed, uint64_t stream_index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    const uint64_t result = std::rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform01() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  // Uniform on {0, ..., n - 1}; n must be positive. Lemire's multiply-shift
  // with rejection, so the result is exactly uniform.
  uint64_t UniformInt(uint64_t n) {
    uint64_t x = (*this)();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    uint64_t low = static_cast<uint64_t>(m);
    if (low < n) {
      const uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        x = (*this)();
        m = static_cast<unsigned __int128>(x) * n;
        low = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  bool Bernoulli(double p) { return Uniform01() < p; }

  uint64_t master_seed() const { return master_seed_; }
  uint64_t stream_index() const { return stream_index_; }

 private:
  uint64_t master_seed_;
  uint64_t stream_index_;
  uint64_t s_[4];
};

}  // namespace ldplab

#endif  // LDPLAB_RNG_H_
