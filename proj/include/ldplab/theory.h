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

// Closed-form constants, risks and bounds for private distribution
// estimation under l_u^u loss.
//
// With d* = OptimalSubsetSize(k, eps) the bound constant is
//
//   M(k, eps) = (k-1)^2 / (k^2 (e^eps - 1)^2) * (d* e^eps + k - d*)^2
//               / (d* (k - d*)),
//
// and k C_u M^{u/2} n^{-u/2} is both the minimax lower bound (u >= 1) and the
// leading term of the subset scheme's risk (0 < u <= 2).

#ifndef LDPLAB_THEORY_H_
#define LDPLAB_THEORY_H_

#include <cstdint>
#include <optional>

#include "absl/status/statusor.h"
#include "ldplab/core.h"
#include "ldplab/mechanisms.h"

namespace ldplab {

// C_u = E|X|^u for X ~ N(0, 1) = 2^{u/2} Gamma((u+1)/2) / sqrt(pi); u > 0.
absl::StatusOr<double> AbsoluteNormalMoment(double u);

// M(k, eps).
absl::StatusOr<double> BoundConstant(int k, double epsilon);

// M evaluated at an arbitrary subset size d instead of d*. Equals
// n/k times ClosedFormL2Risk(k, eps, d, n).
absl::StatusOr<double> BoundConstantAt(int k, double epsilon, int d);

// Exact expected squared l2 error of the subset scheme with the empirical
// estimator at the uniform input, which is also its worst case:
//   (k-1)^2 / (n k (e^eps - 1)^2) * (d e^eps + k - d)^2 / (d (k - d)).
absl::StatusOr<double> ClosedFormL2Risk(int k, double epsilon, int d,
                                        int64_t n);

// k C_u M^{u/2} n^{-u/2}; only claimed for u >= 1.
absl::StatusOr<double> LowerBound(int k, double epsilon, double u, int64_t n);

// Leading term of the scheme's l_u^u risk at d*, 0 < u <= 2. The same
// expression as LowerBound(), computed on the same code path.
absl::StatusOr<double> AsymptoticRisk(int k, double epsilon, double u,
                                      int64_t n);

// Per-sample Fisher information of coordinate i along the direction that
// moves p_i and spreads the change evenly over the other coordinates:
//
//   k^2/(k-1)^2 * sum_j (q_ji - (1/k) sum_v q_jv)^2 / (sum_v p*_v q_jv).
//
// Outputs with zero marginal contribute nothing when their numerator also
// vanishes; otherwise the information is infinite and FailedPrecondition is
// returned.
absl::StatusOr<double> FisherInformation(const FiniteMechanism& mechanism,
                                         const ProbabilityVector& p_star,
                                         int i);

struct ColumnCheck {
  // max over outputs j of sum_i q_ji^2 / q_j^2 with q_j = (1/k) sum_v q_jv.
  double max_lhs = 0.0;
  // k (1 + (e^eps - 1)^2 d* (k - d*) / (d* e^eps + k - d*)^2).
  double rhs = 0.0;
  bool holds = false;
};

// Row-wise second-moment bound for extremal mechanisms. Fails with
// FailedPrecondition unless IsExtremal(mechanism, epsilon).
absl::StatusOr<ColumnCheck> LemmaColumnCheck(const FiniteMechanism& mechanism,
                                             double epsilon);

struct BoundSummary {
  int k = 0;
  double epsilon = 0.0;
  double u = 0.0;
  int64_t n = 0;
  int d_star = 0;
  double big_m = 0.0;
  double c_u = 0.0;
  double lower_bound = 0.0;
  // Present when u <= 2, where it equals lower_bound.
  std::optional<double> asymptotic_risk;
};

// Everything above for one (k, eps, u, n); requires u >= 1 and n >= 1.
absl::StatusOr<BoundSummary> SummarizeBounds(int k, double epsilon, double u,
                                             int64_t n);

}  // namespace ldplab

#endif  // LDPLAB_THEORY_H_
