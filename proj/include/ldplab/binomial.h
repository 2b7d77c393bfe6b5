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

#ifndef LDPLAB_BINOMIAL_H_
#define LDPLAB_BINOMIAL_H_

#include <optional>
#include <string>

namespace ldplab {

// C(n, r) as an exact integer when it is below 2^127, nullopt otherwise (and
// for r outside [0, n]).
std::optional<unsigned __int128> ExactBinomial(int n, int r);

// log C(n, r). Exact (rounded once) when the integer fits, log-gamma
// otherwise. -inf for r outside [0, n].
double LogBinomial(int n, int r);

// Decimal digits of a 128-bit unsigned integer.
std::string Uint128ToString(unsigned __int128 value);

}  // namespace ldplab

#endif  // LDPLAB_BINOMIAL_H_
