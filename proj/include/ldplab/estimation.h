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

// The affine empirical estimator for the subset scheme,
//
//   p_hat_i = A * t_i / n - B,
//
// where t_i counts the reports containing symbol i, plus its exact moments.

#ifndef LDPLAB_ESTIMATION_H_
#define LDPLAB_ESTIMATION_H_

#include <cstdint>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "ldplab/core.h"
#include "ldplab/mechanisms.h"

namespace ldplab {

struct EstimatorCoefficients {
  double a = 0.0;
  double b = 0.0;
};

//   A = ((k-1) e^eps + (k-1)(k-d)/d) / ((k-d)(e^eps - 1))
//   B = ((d-1) e^eps + k - d) / ((k-d)(e^eps - 1))
absl::StatusOr<EstimatorCoefficients> ComputeCoefficients(int k,
                                                          double epsilon,
                                                          int d);
EstimatorCoefficients ComputeCoefficients(const SubsetMechanism& mechanism);

// Per-symbol report counts t_i over n reports of subset size d. Counts from
// disjoint batches merge by addition.
class CountVector {
 public:
  CountVector() = default;
  CountVector(int k, int d) : d_(d), counts_(k, 0) {}

  // Fails with InvalidArgument when the sample's alphabet or size differs.
  absl::Status Add(const SubsetSample& sample);

  // Add() without checks.
  void AddUnchecked(const SubsetSample& sample) {
    int64_t* counts = counts_.data();
    sample.ForEachMember([counts](int s) { ++counts[s]; });
    ++n_;
  }

  absl::Status Merge(const CountVector& other);

  void Clear() {
    std::fill(counts_.begin(), counts_.end(), 0);
    n_ = 0;
  }

  int k() const { return static_cast<int>(counts_.size()); }
  int d() const { return d_; }
  int64_t n() const { return n_; }
  absl::Span<const int64_t> counts() const { return counts_; }
  int64_t operator[](int i) const { return counts_[i]; }

 private:
  int d_ = 0;
  int64_t n_ = 0;
  std::vector<int64_t> counts_;
};

// Counts symbol occurrences over `samples`. Every sample must have alphabet
// size k and the same subset size; an empty span yields zeros with d = 0.
absl::StatusOr<CountVector> CountOccurrences(
    absl::Span<const SubsetSample> samples, int k);

// A * t_i / n - B for each i. The entries sum to A d - k B = 1; a mismatch
// beyond rounding means the coefficients belong to another (k, d) and is
// reported as FailedPrecondition. Fails when n = 0. Entries may be negative
// or exceed 1.
absl::StatusOr<std::vector<double>> EmpiricalEstimate(
    const CountVector& counts, const EstimatorCoefficients& coefficients);

namespace internal {

// EmpiricalEstimate() into a caller buffer, without checks.
void EmpiricalEstimateInto(absl::Span<const int64_t> counts, int64_t n,
                           const EstimatorCoefficients& coefficients,
                           absl::Span<double> out);

// Euclidean projection of `values` onto the simplex, in place.
void ProjectOntoSimplexInPlace(absl::Span<double> values,
                               std::vector<double>& scratch);

}  // namespace internal

// Euclidean projection onto the probability simplex (sort-and-threshold).
// Simplex points are fixed. Fails on non-finite entries or fewer than two.
absl::StatusOr<ProbabilityVector> ProjectToSimplex(
    absl::Span<const double> estimate);

struct CoordinateMoments {
  double mean = 0.0;
  double variance = 0.0;
};

// Exact finite-n mean and variance of each p_hat_i when reports are drawn
// from the subset scheme with input distribution p: mean p_i and variance
// (p_i + B)(A - p_i - B) / n.
absl::StatusOr<std::vector<CoordinateMoments>> ExactEstimatorMoments(
    const ProbabilityVector& p, double epsilon, int d, int64_t n);

// Sum of the exact variances, which is the expected squared l2 error.
absl::StatusOr<double> ExactL2Risk(const ProbabilityVector& p, double epsilon,
                                   int d, int64_t n);

}  // namespace ldplab

#endif  // LDPLAB_ESTIMATION_H_
