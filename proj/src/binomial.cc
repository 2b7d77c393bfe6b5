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

#include "ldplab/binomial.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace ldplab {
namespace {

constexpr unsigned __int128 kLimit = static_cast<unsigned __int128>(1) << 127;

unsigned __int128 Gcd(unsigned __int128 a, unsigned __int128 b) {
  while (b != 0) {
    const unsigned __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

std::optional<unsigned __int128> ExactBinomial(int n, int r) {
  if (n < 0 || r < 0 || r > n) return std::nullopt;
  r = std::min(r, n - r);
  unsigned __int128 c = 1;
  // c * (n - r + i) / i stays integral at every step; divide before
  // multiplying where possible so the intermediate fits.
  for (int i = 1; i <= r; ++i) {
    const unsigned __int128 num = static_cast<unsigned __int128>(n - r + i);
    const unsigned __int128 g = Gcd(c, static_cast<unsigned __int128>(i));
    const unsigned __int128 c_red = c / g;
    const unsigned __int128 i_red = i / g;
    const unsigned __int128 num_red = num / i_red;  // i_red divides num here
    if (num_red != 0 && c_red > (kLimit - 1) / num_red) return std::nullopt;
    c = c_red * num_red;
  }
  if (c >= kLimit) return std::nullopt;
  return c;
}

double LogBinomial(int n, int r) {
  if (n < 0 || r < 0 || r > n) return -std::numeric_limits<double>::infinity();
  if (auto exact = ExactBinomial(n, r); exact.has_value()) {
    return std::log(static_cast<long double>(*exact));
  }
  return std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0);
}

std::string Uint128ToString(unsigned __int128 value) {
  if (value == 0) return "0";
  std::string digits;
  while (value > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

}  // namespace ldplab
