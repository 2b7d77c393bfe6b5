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

// Simulation engine: privatize -> count -> estimate -> loss pipelines over
// many independent trials, with risk estimates, risk curves over n and a
// worst-case scan over input distributions.
//
// Trial t of cell c draws from RngStream(master_seed, StreamIndex(c + 1, t)),
// and per-trial losses are reduced in a fixed order, so every report is a
// function of its configuration alone and not of the worker count.

#ifndef LDPLAB_MONTECARLO_H_
#define LDPLAB_MONTECARLO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "ldplab/core.h"
#include "ldplab/rng.h"

namespace ldplab {

enum class EstimatorKind { kRaw, kProjected };

struct DistributionSpec {
  enum class Kind { kUniform, kPointMass, kDirichlet, kExplicit };

  Kind kind = Kind::kUniform;
  int symbol = 0;      // kPointMass
  double alpha = 1.0;  // kDirichlet
  std::vector<double> probs;  // kExplicit
};

struct ExperimentConfig {
  int k = 0;
  double epsilon = 0.0;
  // Subset size; nullopt selects d*.
  std::optional<int> d;
  std::vector<double> u_values;
  std::vector<int64_t> n_values;
  int64_t trials = 0;
  uint64_t master_seed = 0;
  DistributionSpec distribution;
  EstimatorKind estimator = EstimatorKind::kRaw;
};

inline constexpr int kStreamGroupShift = 40;
inline constexpr int64_t kMaxTrials = int64_t{1} << kStreamGroupShift;

// Stream index of `trial` within `group`. Group 0 is reserved for drawing
// random input distributions.
inline uint64_t StreamIndex(uint64_t group, uint64_t trial) {
  return (group << kStreamGroupShift) | trial;
}

absl::Status ValidateConfig(const ExperimentConfig& config);

// The subset size the experiment runs with (d* when config.d is unset).
absl::StatusOr<int> ResolveSubsetSize(const ExperimentConfig& config);

// The input distribution. Dirichlet inputs are drawn once from stream
// (master_seed, StreamIndex(0, 0)).
absl::StatusOr<ProbabilityVector> ResolveDistribution(
    const ExperimentConfig& config);

// Flag threshold on standard_error / empirical_risk.
inline constexpr double kNoisyRelativeError = 0.1;

struct RiskCell {
  int64_t n = 0;
  double u = 0.0;
  // Mean l_u^u loss over trials.
  double empirical_risk = 0.0;
  // Sample standard deviation / sqrt(trials); absent when trials == 1.
  std::optional<double> standard_error;
  // Exact squared error risk; only for u = 2, uniform input, raw estimator.
  std::optional<double> closed_form_risk;
  // k C_u M_d^{u/2} n^{-u/2}, with M_d the bound constant at the configured d.
  double asymptote = 0.0;
  // Minimax lower bound; only for u >= 1.
  std::optional<double> lower_bound;
  double ratio_to_asymptote = 0.0;
  bool noisy = false;
};

struct RiskReport {
  ExperimentConfig config;
  int d = 0;
  std::vector<double> input_distribution;
  // One cell per (n, u), n-major in configuration order.
  std::vector<RiskCell> cells;
};

// One draw of l_u^u(p_hat(Y^n), p) for each u, all sharing the same Y^n.
absl::StatusOr<std::vector<double>> RunTrial(
    int k, double epsilon, int d, const ProbabilityVector& p, int64_t n,
    absl::Span<const double> u_values, RngStream& rng,
    EstimatorKind estimator = EstimatorKind::kRaw);

// Runs every (n, u) cell of `config`. `workers` only affects wall time.
absl::StatusOr<RiskReport> RunExperiment(const ExperimentConfig& config,
                                         int workers = 1);

struct CurvePoint {
  int64_t n = 0;
  double u = 0.0;
  double ratio = 0.0;
  // standard_error / asymptote; absent when trials == 1.
  std::optional<double> ratio_standard_error;
};

// Ratios of empirical risk to the asymptote, for each u in increasing n.
// Needs at least two distinct n values.
absl::StatusOr<std::vector<CurvePoint>> RiskCurve(
    const ExperimentConfig& config, int workers = 1);

struct ScanConfig {
  int k = 0;
  double epsilon = 0.0;
  std::optional<int> d;
  int64_t n = 0;
  double u = 2.0;
  // Used only when u != 2; the u = 2 risk is computed exactly.
  int64_t trials = 0;
  int num_distributions = 0;
  uint64_t master_seed = 0;
};

struct ScanEntry {
  std::string label;
  std::vector<double> probs;
  double risk = 0.0;
  std::optional<double> standard_error;
  bool exact = false;
  bool noisy = false;
};

struct ScanReport {
  ScanConfig config;
  int d = 0;
  // Uniform first, then the k point masses, then Dirichlet(1, ..., 1) draws.
  std::vector<ScanEntry> entries;
  int maximizer = 0;
  // Uniform's risk is within 3 combined standard errors of the maximum
  // (exactly the maximum on the exact path).
  bool uniform_within_ties = false;
};

absl::StatusOr<ScanReport> WorstCaseScan(const ScanConfig& config,
                                         int workers = 1);

// Fixed-order pairwise summation.
double PairwiseSum(absl::Span<const double> values);

}  // namespace ldplab

#endif  // LDPLAB_MONTECARLO_H_
