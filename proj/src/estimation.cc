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

#include "ldplab/estimation.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"

namespace ldplab {

absl::StatusOr<EstimatorCoefficients> ComputeCoefficients(int k,
                                                          double epsilon,
                                                          int d) {
  auto mechanism = SubsetMechanism::Create(k, epsilon, d);
  if (!mechanism.ok()) return mechanism.status();
  return ComputeCoefficients(*mechanism);
}

EstimatorCoefficients ComputeCoefficients(const SubsetMechanism& mechanism) {
  const double k = mechanism.k();
  const double d = mechanism.d();
  const double e = mechanism.exp_epsilon();
  // expm1 keeps e^eps - 1 accurate for small epsilon.
  const double denom = (k - d) * std::expm1(mechanism.epsilon());
  return EstimatorCoefficients{
      .a = ((k - 1) * e + (k - 1) * (k - d) / d) / denom,
      .b = ((d - 1) * e + (k - d)) / denom,
  };
}

absl::Status CountVector::Add(const SubsetSample& sample) {
  if (sample.k() != k()) {
    return absl::InvalidArgumentError(
        absl::StrCat("dimension mismatch: sample alphabet ", sample.k(),
                     ", counts alphabet ", k()));
  }
  if (n_ == 0 && d_ == 0) d_ = sample.size();
  if (sample.size() != d_) {
    return absl::InvalidArgumentError(
        absl::StrCat("dimension mismatch: sample has ", sample.size(),
                     " members, expected ", d_));
  }
  AddUnchecked(sample);
  return absl::OkStatus();
}

absl::Status CountVector::Merge(const CountVector& other) {
  if (other.n_ == 0) return absl::OkStatus();
  if (other.k() != k() || (n_ > 0 && other.d_ != d_)) {
    return absl::InvalidArgumentError("dimension mismatch in CountVector merge");
  }
  d_ = other.d_;
  for (int i = 0; i < k(); ++i) counts_[i] += other.counts_[i];
  n_ += other.n_;
  return absl::OkStatus();
}

absl::StatusOr<CountVector> CountOccurrences(
    absl::Span<const SubsetSample> samples, int k) {
  if (k < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("alphabet size must be positive, got ", k));
  }
  CountVector counts(k, samples.empty() ? 0 : samples.front().size());
  for (const SubsetSample& s : samples) {
    if (absl::Status st = counts.Add(s); !st.ok()) return st;
  }
  return counts;
}

namespace internal {

void EmpiricalEstimateInto(absl::Span<const int64_t> counts, int64_t n,
                           const EstimatorCoefficients& coefficients,
                           absl::Span<double> out) {
  const double scale = coefficients.a / static_cast<double>(n);
  for (size_t i = 0; i < counts.size(); ++i) {
    out[i] = scale * static_cast<double>(counts[i]) - coefficients.b;
  }
}

void ProjectOntoSimplexInPlace(absl::Span<double> values,
                               std::vector<double>& scratch) {
  scratch.assign(values.begin(), values.end());
  std::sort(scratch.begin(), scratch.end(), std::greater<double>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (size_t j = 0; j < scratch.size(); ++j) {
    cumulative += scratch[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (scratch[j] - candidate > 0.0) theta = candidate;
  }
  for (double& v : values) v = std::max(v - theta, 0.0);
}

}  // namespace internal

absl::StatusOr<std::vector<double>> EmpiricalEstimate(
    const CountVector& counts, const EstimatorCoefficients& coefficients) {
  if (counts.n() == 0) {
    return absl::InvalidArgumentError("empty batch: no reports were counted");
  }
  std::vector<double> estimate(counts.k());
  internal::EmpiricalEstimateInto(counts.counts(), counts.n(), coefficients,
                                  absl::MakeSpan(estimate));
  double sum = 0.0;
  for (double e : estimate) sum += e;
  const double tolerance =
      1e-9 * std::max(1.0, coefficients.a * std::max(counts.d(), 1));
  if (std::abs(sum - 1.0) > tolerance) {
    return absl::FailedPreconditionError(absl::StrCat(
        "estimate sums to ", sum, "; coefficients do not match counts with d = ",
        counts.d()));
  }
  return estimate;
}

absl::StatusOr<ProbabilityVector> ProjectToSimplex(
    absl::Span<const double> estimate) {
  if (estimate.size() < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid alphabet: k must be at least 2, got ",
                     estimate.size()));
  }
  for (double v : estimate) {
    if (!std::isfinite(v)) {
      return absl::InvalidArgumentError("estimate has a non-finite entry");
    }
  }
  std::vector<double> values(estimate.begin(), estimate.end());
  // Members of the simplex (to the tolerance ProbabilityVector accepts) are
  // their own projection.
  if (auto member = ProbabilityVector::Create(values); member.ok()) {
    return member;
  }
  std::vector<double> scratch;
  internal::ProjectOntoSimplexInPlace(absl::MakeSpan(values), scratch);
  // The threshold makes the positive part sum to 1 up to rounding; fold the
  // residue into the largest entry.
  double sum = 0.0;
  for (double v : values) sum += v;
  auto largest = std::max_element(values.begin(), values.end());
  *largest += 1.0 - sum;
  return ProbabilityVector::Create(std::move(values));
}

absl::StatusOr<std::vector<CoordinateMoments>> ExactEstimatorMoments(
    const ProbabilityVector& p, double epsilon, int d, int64_t n) {
  if (n < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("sample count must be at least 1, got ", n));
  }
  auto coefficients = ComputeCoefficients(p.k(), epsilon, d);
  if (!coefficients.ok()) return coefficients.status();
  const double a = coefficients->a;
  const double b = coefficients->b;
  std::vector<CoordinateMoments> moments(p.k());
  for (int i = 0; i < p.k(); ++i) {
    moments[i].mean = p[i];
    moments[i].variance = (p[i] + b) * (a - p[i] - b) / static_cast<double>(n);
  }
  return moments;
}

absl::StatusOr<double> ExactL2Risk(const ProbabilityVector& p, double epsilon,
                                   int d, int64_t n) {
  auto moments = ExactEstimatorMoments(p, epsilon, d, n);
  if (!moments.ok()) return moments.status();
  double sum = 0.0;
  for (const CoordinateMoments& m : *moments) sum += m.variance;
  return sum;
}

}  // namespace ldplab
