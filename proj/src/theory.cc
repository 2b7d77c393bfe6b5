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

#include "ldplab/theory.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace ldplab {
namespace {

absl::Status ValidateSampleCount(int64_t n) {
  if (n < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("sample count must be at least 1, got ", n));
  }
  return absl::OkStatus();
}

// k C_u M^{u/2} n^{-u/2}. Shared by LowerBound and AsymptoticRisk so the two
// agree bit for bit wherever both are defined.
absl::StatusOr<double> LeadingTerm(int k, double epsilon, double u,
                                   int64_t n) {
  if (absl::Status s = ValidateSampleCount(n); !s.ok()) return s;
  auto c_u = AbsoluteNormalMoment(u);
  if (!c_u.ok()) return c_u.status();
  auto big_m = BoundConstant(k, epsilon);
  if (!big_m.ok()) return big_m.status();
  return k * *c_u * std::pow(*big_m, u / 2.0) *
         std::pow(static_cast<double>(n), -u / 2.0);
}

}  // namespace

absl::StatusOr<double> AbsoluteNormalMoment(double u) {
  if (!(u > 0.0) || !std::isfinite(u)) {
    return absl::InvalidArgumentError(
        absl::StrCat("moment order u must be positive, got ", u));
  }
  if (u == 2.0) return 1.0;
  return std::exp(0.5 * u * std::numbers::ln2 + std::lgamma(0.5 * (u + 1.0))) *
         std::numbers::inv_sqrtpi;
}

absl::StatusOr<double> BoundConstantAt(int k, double epsilon, int d) {
  if (absl::Status s = ValidateSubsetParameters(k, epsilon, d); !s.ok()) {
    return s;
  }
  const double em1 = std::expm1(epsilon);
  const double km1 = k - 1.0;
  return km1 * km1 / (static_cast<double>(k) * k * em1 * em1) *
         SubsetSizeObjective(k, std::exp(epsilon), d);
}

absl::StatusOr<double> BoundConstant(int k, double epsilon) {
  auto d_star = OptimalSubsetSize(k, epsilon);
  if (!d_star.ok()) return d_star.status();
  return BoundConstantAt(k, epsilon, *d_star);
}

absl::StatusOr<double> ClosedFormL2Risk(int k, double epsilon, int d,
                                        int64_t n) {
  if (absl::Status s = ValidateSubsetParameters(k, epsilon, d); !s.ok()) {
    return s;
  }
  if (absl::Status s = ValidateSampleCount(n); !s.ok()) return s;
  const double e = std::exp(epsilon);
  const double em1 = std::expm1(epsilon);
  const double km1 = k - 1.0;
  const double num = d * e + (k - d);
  return km1 * km1 / (static_cast<double>(n) * k * em1 * em1) * num * num /
         (static_cast<double>(d) * (k - d));
}

absl::StatusOr<double> LowerBound(int k, double epsilon, double u, int64_t n) {
  if (!(u >= 1.0) || !std::isfinite(u)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "the lower bound holds only for loss exponents u >= 1, got ", u));
  }
  return LeadingTerm(k, epsilon, u, n);
}

absl::StatusOr<double> AsymptoticRisk(int k, double epsilon, double u,
                                      int64_t n) {
  if (!(u > 0.0) || !(u <= 2.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "the risk asymptote is established for 0 < u <= 2, got ", u));
  }
  return LeadingTerm(k, epsilon, u, n);
}

absl::StatusOr<double> FisherInformation(const FiniteMechanism& mechanism,
                                         const ProbabilityVector& p_star,
                                         int i) {
  const int k = mechanism.k();
  if (p_star.k() != k) {
    return absl::InvalidArgumentError(
        absl::StrCat("dimension mismatch: mechanism has k = ", k,
                     ", distribution has k = ", p_star.k()));
  }
  if (i < 0 || i >= k) {
    return absl::OutOfRangeError(
        absl::StrCat("coordinate ", i, " outside [0, ", k, ")"));
  }
  double sum = 0.0;
  for (int j = 0; j < mechanism.num_outputs(); ++j) {
    const auto row = mechanism.row(j);
    double row_mean = 0.0;
    double marginal = 0.0;
    for (int v = 0; v < k; ++v) {
      row_mean += row[v];
      marginal += p_star[v] * row[v];
    }
    row_mean /= k;
    const double diff = row[i] - row_mean;
    if (marginal == 0.0) {
      if (diff == 0.0) continue;
      return absl::FailedPreconditionError(absl::StrCat(
          "singular information: output ", j,
          " has zero marginal probability but depends on input ", i));
    }
    sum += diff * diff / marginal;
  }
  const double scale = static_cast<double>(k) / (k - 1.0);
  return scale * scale * sum;
}

absl::StatusOr<ColumnCheck> LemmaColumnCheck(const FiniteMechanism& mechanism,
                                             double epsilon) {
  auto extremal = IsExtremal(mechanism, epsilon);
  if (!extremal.ok()) return extremal.status();
  if (!*extremal) {
    return absl::FailedPreconditionError(
        "mechanism is not extremal: some ratio to its row minimum is neither 1 "
        "nor e^epsilon");
  }
  const int k = mechanism.k();
  auto d_star = OptimalSubsetSize(k, epsilon);
  if (!d_star.ok()) return d_star.status();

  ColumnCheck check;
  for (int j = 0; j < mechanism.num_outputs(); ++j) {
    const auto row = mechanism.row(j);
    double mean = 0.0;
    for (double q : row) mean += q;
    mean /= k;
    double lhs = 0.0;
    for (double q : row) lhs += (q / mean) * (q / mean);
    check.max_lhs = std::max(check.max_lhs, lhs);
  }
  const double e = std::exp(epsilon);
  const double em1 = std::expm1(epsilon);
  const double ds = *d_star;
  const double denom = ds * e + (k - ds);
  check.rhs = k * (1.0 + em1 * em1 * ds * (k - ds) / (denom * denom));
  check.holds = check.max_lhs <= check.rhs + 1e-9;
  return check;
}

absl::StatusOr<BoundSummary> SummarizeBounds(int k, double epsilon, double u,
                                             int64_t n) {
  auto lower = LowerBound(k, epsilon, u, n);
  if (!lower.ok()) return lower.status();
  BoundSummary summary;
  summary.k = k;
  summary.epsilon = epsilon;
  summary.u = u;
  summary.n = n;
  summary.d_star = *OptimalSubsetSize(k, epsilon);
  summary.big_m = *BoundConstant(k, epsilon);
  summary.c_u = *AbsoluteNormalMoment(u);
  summary.lower_bound = *lower;
  if (u <= 2.0) summary.asymptotic_risk = *AsymptoticRisk(k, epsilon, u, n);
  return summary;
}

}  // namespace ldplab
