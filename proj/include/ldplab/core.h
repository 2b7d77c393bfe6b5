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

// Simplex types, categorical sampling and the l_u^u loss shared by every
// other module.

#ifndef LDPLAB_CORE_H_
#define LDPLAB_CORE_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "boost/random/discrete_distribution.hpp"
#include "ldplab/rng.h"

namespace ldplab {

// Absolute tolerance on the sum of a probability vector. Inputs outside it
// are rejected rather than renormalized.
inline constexpr double kSimplexTolerance = 1e-9;

// A point of the probability simplex over the alphabet {0, ..., k - 1}, k >= 2.
class ProbabilityVector {
 public:
  // Fails with InvalidArgument if k < 2, an entry is negative or non-finite,
  // or the entries do not sum to 1 within kSimplexTolerance.
  static absl::StatusOr<ProbabilityVector> Create(std::vector<double> probs);

  int k() const { return static_cast<int>(probs_.size()); }
  double operator[](int i) const { return probs_[i]; }
  absl::Span<const double> probs() const { return probs_; }

  // True when every entry equals 1/k exactly.
  bool IsUniform() const;

 private:
  explicit ProbabilityVector(std::vector<double> probs)
      : probs_(std::move(probs)) {}

  std::vector<double> probs_;
};

// Raw data X^n: n >= 1 symbols, each in [0, k).
struct RawSampleBatch {
  int k = 0;
  std::vector<int32_t> symbols;
};

// (1/k, ..., 1/k). Fails with InvalidArgument when k < 2.
absl::StatusOr<ProbabilityVector> UniformDistribution(int k);

// All mass on `symbol`.
absl::StatusOr<ProbabilityVector> PointMass(int k, int symbol);

// One draw from the symmetric Dirichlet(alpha, ..., alpha) distribution.
absl::StatusOr<ProbabilityVector> SampleDirichlet(int k, double alpha,
                                                  RngStream& rng);

// Draws i.i.d. symbols from a fixed distribution. Uses an alias table when the
// caller expects at least kAliasThreshold draws, inverse-CDF search
// otherwise. Immutable after construction; share freely, one RngStream per
// thread.
class CategoricalSampler {
 public:
  static constexpr int64_t kAliasThreshold = 64;

  CategoricalSampler(const ProbabilityVector& p, int64_t expected_draws);

  int Sample(RngStream& rng) const {
    if (alias_.has_value()) return (*alias_)(rng);
    return SampleInverseCdf(rng);
  }

  bool uses_alias_table() const { return alias_.has_value(); }

 private:
  int SampleInverseCdf(RngStream& rng) const;

  std::vector<double> cdf_;
  std::optional<boost::random::discrete_distribution<int, double>> alias_;
};

// n i.i.d. draws from p. Fails with InvalidArgument when n < 1.
absl::StatusOr<RawSampleBatch> SampleCategorical(const ProbabilityVector& p,
                                                 int64_t n, RngStream& rng);

// sum_i |a_i - b_i|^u. Fails on a length mismatch or when u <= 0.
absl::StatusOr<double> LpLoss(absl::Span<const double> a,
                              absl::Span<const double> b, double u);

namespace internal {

// LpLoss without argument checks, for inner loops.
double LpLossUnchecked(absl::Span<const double> a,
                       absl::Span<const double> b, double u);

}  // namespace internal
}  // namespace ldplab

#endif  // LDPLAB_CORE_H_
