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

#include "ldplab/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "ldplab/binomial.h"

namespace ldplab {

absl::Status ValidatePrivacyParameter(double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon <= kMaxEpsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("privacy parameter epsilon must lie in (0, ", kMaxEpsilon,
                     "], got ", epsilon));
  }
  return absl::OkStatus();
}

absl::Status ValidateSubsetParameters(int k, double epsilon, int d) {
  if (k < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid alphabet: k must be at least 2, got ", k));
  }
  if (d < 1 || d > k - 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "subset size d must lie in [1, ", k - 1, "], got ", d));
  }
  return ValidatePrivacyParameter(epsilon);
}

double SubsetSizeObjective(int k, double exp_epsilon, int d) {
  const double num = d * exp_epsilon + (k - d);
  return num * num / (static_cast<double>(d) * (k - d));
}

absl::StatusOr<int> OptimalSubsetSize(int k, double epsilon) {
  if (k < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid alphabet: k must be at least 2, got ", k));
  }
  if (absl::Status s = ValidatePrivacyParameter(epsilon); !s.ok()) return s;
  const double exp_eps = std::exp(epsilon);
  const double center = k / (exp_eps + 1.0);
  const int lo = std::clamp(static_cast<int>(std::floor(center)), 1, k - 1);
  const int hi = std::clamp(static_cast<int>(std::ceil(center)), 1, k - 1);
  if (lo == hi) return lo;
  const double f_lo = SubsetSizeObjective(k, exp_eps, lo);
  const double f_hi = SubsetSizeObjective(k, exp_eps, hi);
  return f_lo <= f_hi * (1.0 + 1e-12) ? lo : hi;
}

absl::StatusOr<SubsetSample> SubsetSample::FromMembers(
    int k, absl::Span<const int> members) {
  if (k < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("alphabet size must be positive, got ", k));
  }
  SubsetSample s(k);
  for (int m : members) {
    if (m < 0 || m >= k) {
      return absl::OutOfRangeError(
          absl::StrCat("symbol ", m, " outside [0, ", k, ")"));
    }
    if (s.Contains(m)) {
      return absl::InvalidArgumentError(
          absl::StrCat("symbol ", m, " listed twice"));
    }
    s.Insert(m);
  }
  return s;
}

std::vector<int> SubsetSample::Members() const {
  std::vector<int> out;
  out.reserve(size_);
  ForEachMember([&out](int s) { out.push_back(s); });
  return out;
}

void SubsetSample::FillAllExcept(int k, int excluded) {
  k_ = k;
  const size_t num_words = (k + 63) / 64;
  words_.assign(num_words, ~uint64_t{0});
  if (k % 64 != 0) words_.back() = (uint64_t{1} << (k % 64)) - 1;
  words_[excluded >> 6] &= ~(uint64_t{1} << (excluded & 63));
  size_ = k - 1;
}

SubsetMechanism::SubsetMechanism(int k, double epsilon, int d)
    : k_(k), epsilon_(epsilon), d_(d), exp_epsilon_(std::exp(epsilon)) {
  const auto with_x = ExactBinomial(k - 1, d - 1);
  const auto without_x = ExactBinomial(k - 1, d);
  if (with_x.has_value() && without_x.has_value()) {
    const long double z =
        static_cast<long double>(*with_x) * exp_epsilon_ +
        static_cast<long double>(*without_x);
    log_normalizer_ = static_cast<double>(std::log(z));
  } else {
    const double a = LogBinomial(k - 1, d - 1) + epsilon;
    const double b = LogBinomial(k - 1, d);
    const double m = std::max(a, b);
    log_normalizer_ = m + std::log(std::exp(a - m) + std::exp(b - m));
  }
  const double favored = d * exp_epsilon_;
  inclusion_probability_ = favored / (favored + (k - d));
}

absl::StatusOr<SubsetMechanism> SubsetMechanism::Create(int k, double epsilon,
                                                        int d) {
  if (absl::Status s = ValidateSubsetParameters(k, epsilon, d); !s.ok()) {
    return s;
  }
  return SubsetMechanism(k, epsilon, d);
}

double SubsetMechanism::normalizer() const {
  // Recompute from exact integers when possible so small cases are exact.
  const auto with_x = ExactBinomial(k_ - 1, d_ - 1);
  const auto without_x = ExactBinomial(k_ - 1, d_);
  if (with_x.has_value() && without_x.has_value()) {
    return static_cast<double>(static_cast<long double>(*with_x) *
                                   exp_epsilon_ +
                               static_cast<long double>(*without_x));
  }
  return std::exp(log_normalizer_);
}

double SubsetMechanism::Probability(const SubsetSample& y, int x) const {
  return std::exp((y.Contains(x) ? epsilon_ : 0.0) - log_normalizer_);
}

absl::Status SubsetPrivatizer::Privatize(int x, RngStream& rng,
                                         SubsetSample& out) const {
  if (x < 0 || x >= mechanism_.k()) {
    return absl::OutOfRangeError(
        absl::StrCat("symbol ", x, " outside [0, ", mechanism_.k(), ")"));
  }
  PrivatizeUnchecked(x, rng, out);
  return absl::OkStatus();
}

void SubsetPrivatizer::PrivatizeUnchecked(int x, RngStream& rng,
                                          SubsetSample& out) const {
  const int k = mechanism_.k();
  const bool include = rng.Bernoulli(mechanism_.inclusion_probability());
  const int others = k - 1;
  const int wanted = include ? mechanism_.d() - 1 : mechanism_.d();
  // Index i in [0, k - 1) of the symbols other than x.
  auto other = [x](int i) { return i + (i >= x ? 1 : 0); };

  // Floyd's algorithm over the smaller of the chosen and the excluded set:
  // for j = N - m, ..., N - 1 take a uniform t in [0, j], or j itself if t
  // is already taken. Every m-subset comes out with equal probability.
  const bool sample_members = wanted <= others - wanted;
  if (k <= 64) {
    uint64_t taken = 0;
    for (int j = sample_members ? others - wanted : wanted; j < others; ++j) {
      const int t = other(static_cast<int>(rng.UniformInt(j + 1)));
      const uint64_t bit = uint64_t{1} << t;
      taken |= (taken & bit) ? uint64_t{1} << other(j) : bit;
    }
    const uint64_t x_bit = uint64_t{1} << x;
    uint64_t mask = taken;
    if (!sample_members) {
      const uint64_t all = k == 64 ? ~uint64_t{0} : (uint64_t{1} << k) - 1;
      mask = all & ~taken & ~x_bit;
    }
    if (include) mask |= x_bit;
    out.AssignMask(k, mask, mechanism_.d());
    return;
  }
  if (sample_members) {
    out.Reset(k);
    for (int j = others - wanted; j < others; ++j) {
      const int t = other(static_cast<int>(rng.UniformInt(j + 1)));
      out.Insert(out.Contains(t) ? other(j) : t);
    }
  } else {
    out.FillAllExcept(k, x);
    for (int j = wanted; j < others; ++j) {
      const int t = other(static_cast<int>(rng.UniformInt(j + 1)));
      out.Remove(out.Contains(t) ? t : other(j));
    }
  }
  if (include) out.Insert(x);
}

absl::StatusOr<SubsetSample> Privatize(const SubsetMechanism& mechanism, int x,
                                       RngStream& rng) {
  SubsetPrivatizer privatizer(mechanism);
  SubsetSample out;
  if (absl::Status s = privatizer.Privatize(x, rng, out); !s.ok()) return s;
  return out;
}

absl::StatusOr<FiniteMechanism> FiniteMechanism::Create(
    int num_outputs, int k, std::vector<double> entries,
    double column_tolerance) {
  if (num_outputs < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "output alphabet must be nonempty, got L = ", num_outputs));
  }
  if (k < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid alphabet: k must be at least 2, got ", k));
  }
  if (entries.size() != static_cast<size_t>(num_outputs) * k) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", static_cast<int64_t>(num_outputs) * k,
                     " entries for a ", num_outputs, "x", k, " mechanism, got ",
                     entries.size()));
  }
  std::vector<double> column_sums(k, 0.0);
  for (int j = 0; j < num_outputs; ++j) {
    for (int v = 0; v < k; ++v) {
      const double q = entries[static_cast<size_t>(j) * k + v];
      if (!std::isfinite(q) || q < 0.0) {
        return absl::InvalidArgumentError(absl::StrCat(
            "entry (", j, ", ", v, ") is not a probability: ", q));
      }
      column_sums[v] += q;
    }
  }
  for (int v = 0; v < k; ++v) {
    if (std::abs(column_sums[v] - 1.0) > column_tolerance) {
      return absl::InvalidArgumentError(
          absl::StrCat("column for input ", v, " sums to ", column_sums[v],
                       ", not 1 within ", column_tolerance));
    }
  }
  return FiniteMechanism(num_outputs, k, std::move(entries));
}

absl::StatusOr<FiniteMechanism> Materialize(const SubsetMechanism& mechanism) {
  const int k = mechanism.k();
  const int d = mechanism.d();
  const auto count = ExactBinomial(k, d);
  if (!count.has_value() ||
      *count > static_cast<unsigned __int128>(kMaxMaterializedOutputs)) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "output alphabet C(", k, ", ", d, ") exceeds the materialization limit ",
        kMaxMaterializedOutputs));
  }
  const int num_outputs = static_cast<int>(*count);
  const double z = mechanism.normalizer();
  const double favored = mechanism.exp_epsilon() / z;
  const double plain = 1.0 / z;

  std::vector<double> entries(static_cast<size_t>(num_outputs) * k, plain);
  // Colexicographic order of index sets is ascending order of bitmask value.
  std::vector<int> c(d);
  std::iota(c.begin(), c.end(), 0);
  for (int row = 0; row < num_outputs; ++row) {
    for (int s : c) entries[static_cast<size_t>(row) * k + s] = favored;
    int i = 0;
    while (i < d - 1 && c[i] + 1 == c[i + 1]) ++i;
    ++c[i];
    for (int t = 0; t < i; ++t) c[t] = t;
  }
  return FiniteMechanism::Create(num_outputs, k, std::move(entries));
}

LdpVerification VerifyLdp(const FiniteMechanism& mechanism, double epsilon) {
  double worst = 0.0;
  for (int j = 0; j < mechanism.num_outputs(); ++j) {
    const auto row = mechanism.row(j);
    const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    if (*hi == 0.0) continue;  // 0/0 for every pair
    if (*lo == 0.0) {
      worst = std::numeric_limits<double>::infinity();
      break;
    }
    worst = std::max(worst, std::log(*hi / *lo));
  }
  return LdpVerification{.holds = worst <= epsilon + 1e-12,
                         .worst_log_ratio = worst};
}

absl::StatusOr<bool> IsExtremal(const FiniteMechanism& mechanism,
                                double epsilon) {
  constexpr double kRelTol = 1e-9;
  const double exp_eps = std::exp(epsilon);
  bool extremal = true;
  for (int j = 0; j < mechanism.num_outputs(); ++j) {
    const auto row = mechanism.row(j);
    const double lo = *std::min_element(row.begin(), row.end());
    const double hi = *std::max_element(row.begin(), row.end());
    if (hi == 0.0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "invalid mechanism: output ", j, " has zero probability everywhere"));
    }
    if (!extremal) continue;
    if (lo == 0.0) {
      extremal = false;
      continue;
    }
    for (double q : row) {
      const double ratio = q / lo;
      if (std::abs(ratio - 1.0) > kRelTol &&
          std::abs(ratio - exp_eps) > kRelTol * exp_eps) {
        extremal = false;
        break;
      }
    }
  }
  return extremal;
}

absl::StatusOr<FiniteMechanism> KaryRandomizedResponse(int k, double epsilon) {
  auto mechanism = SubsetMechanism::Create(k, epsilon, 1);
  if (!mechanism.ok()) return mechanism.status();
  return Materialize(*mechanism);
}

absl::StatusOr<FiniteMechanism> RapporMechanism(int k, double epsilon) {
  if (k < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid alphabet: k must be at least 2, got ", k));
  }
  if (k > kMaxRapporAlphabet) {
    return absl::ResourceExhaustedError(
        absl::StrCat("RAPPOR with k = ", k, " needs 2^", k,
                     " outputs; the limit is k <= ", kMaxRapporAlphabet));
  }
  if (absl::Status s = ValidatePrivacyParameter(epsilon); !s.ok()) return s;
  const double flip = 1.0 / (std::exp(epsilon / 2.0) + 1.0);
  const int num_outputs = 1 << k;
  // Powers of flip and keep probabilities, indexed by the number of flipped
  // bits.
  std::vector<double> by_flips(k + 1);
  for (int f = 0; f <= k; ++f) {
    by_flips[f] = std::pow(flip, f) * std::pow(1.0 - flip, k - f);
  }
  std::vector<double> entries(static_cast<size_t>(num_outputs) * k);
  for (int b = 0; b < num_outputs; ++b) {
    const int weight = std::popcount(static_cast<unsigned>(b));
    for (int x = 0; x < k; ++x) {
      const int bit = (b >> x) & 1;
      entries[static_cast<size_t>(b) * k + x] = by_flips[weight + 1 - 2 * bit];
    }
  }
  return FiniteMechanism::Create(num_outputs, k, std::move(entries));
}

absl::StatusOr<std::vector<double>> Marginal(const FiniteMechanism& mechanism,
                                             const ProbabilityVector& p) {
  if (p.k() != mechanism.k()) {
    return absl::InvalidArgumentError(
        absl::StrCat("dimension mismatch: mechanism has k = ", mechanism.k(),
                     ", distribution has k = ", p.k()));
  }
  std::vector<double> m(mechanism.num_outputs(), 0.0);
  for (int j = 0; j < mechanism.num_outputs(); ++j) {
    const auto row = mechanism.row(j);
    double acc = 0.0;
    for (int v = 0; v < mechanism.k(); ++v) acc += p[v] * row[v];
    m[j] = acc;
  }
  return m;
}

}  // namespace ldplab
