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

// Serialization for the command-line front end: the flat experiment config
// format, and JSON / CSV renderings of every report.
//
// Config grammar, one "key = value" per line, '#' starts a comment:
//
//   k            integer >= 2                          (required)
//   epsilon      real in (0, 50]                       (required)
//   u_values     comma list of reals in (0, 2]         (required)
//   n_values     comma list of integers >= 1           (required)
//   trials       integer >= 1                          (required)
//   d            integer, or "auto" for d*             (default auto)
//   master_seed  unsigned 64-bit integer               (default 0)
//   distribution uniform | point_mass:<i> | dirichlet:<alpha>
//                | explicit:<p0>,<p1>,...              (default uniform)
//   estimator    raw | projected                       (default raw)
//
// Real numbers in reports carry 12 significant digits.

#ifndef LDPLAB_EXPERIMENT_IO_H_
#define LDPLAB_EXPERIMENT_IO_H_

#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "json.hpp"
#include "ldplab/mechanisms.h"
#include "ldplab/montecarlo.h"
#include "ldplab/theory.h"

namespace ldplab {

// Syntax errors, unknown or repeated keys, missing required keys, and
// nonpositive trials or sample counts are InvalidArgument naming the line.
// Domain checks (k, epsilon, d, u ranges) are left to ValidateConfig().
absl::StatusOr<ExperimentConfig> ParseExperimentConfig(absl::string_view text);

// Inverse of ParseExperimentConfig for the config's own fields.
std::string FormatExperimentConfig(const ExperimentConfig& config);

std::string DescribeDistribution(const DistributionSpec& distribution);
absl::StatusOr<DistributionSpec> ParseDistribution(absl::string_view text);

// x rounded to 12 significant digits.
double RoundSignificant(double x);

// One row per cell: n,u,empirical_risk,std_error,asymptote,lower_bound,ratio.
// Absent values are written as NA.
std::string RiskReportToCsv(const RiskReport& report);

nlohmann::json RiskReportToJson(const RiskReport& report);
nlohmann::json BoundSummaryToJson(const BoundSummary& summary);
nlohmann::json ScanReportToJson(const ScanReport& report);
nlohmann::json VerificationToJson(const FiniteMechanism& mechanism,
                                  double epsilon,
                                  const LdpVerification& verification,
                                  bool extremal);
// Description of Q_{k,eps,d}: normalizer, estimator coefficients, output
// alphabet size and the inclusion probability.
nlohmann::json SubsetMechanismToJson(const SubsetMechanism& mechanism);

}  // namespace ldplab

#endif  // LDPLAB_EXPERIMENT_IO_H_
