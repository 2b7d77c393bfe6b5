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

#include "ldplab/experiment_io.h"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"
#include "ldplab/binomial.h"
#include "ldplab/estimation.h"

namespace ldplab {
namespace {

using nlohmann::json;

absl::Status LineError(int line, absl::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat("line ", line, ": ", what));
}

absl::StatusOr<std::vector<double>> ParseRealList(absl::string_view text) {
  std::vector<double> out;
  for (absl::string_view field : absl::StrSplit(text, ',')) {
    double v = 0.0;
    if (!absl::SimpleAtod(absl::StripAsciiWhitespace(field), &v)) {
      return absl::InvalidArgumentError(
          absl::StrCat("not a number: \"", field, "\""));
    }
    out.push_back(v);
  }
  return out;
}

absl::StatusOr<std::vector<int64_t>> ParseIntList(absl::string_view text) {
  std::vector<int64_t> out;
  for (absl::string_view field : absl::StrSplit(text, ',')) {
    int64_t v = 0;
    if (!absl::SimpleAtoi(absl::StripAsciiWhitespace(field), &v)) {
      return absl::InvalidArgumentError(
          absl::StrCat("not an integer: \"", field, "\""));
    }
    out.push_back(v);
  }
  return out;
}

std::string FormatReal(double x) { return absl::StrFormat("%.12g", x); }

std::string FormatOptional(const std::optional<double>& x) {
  return x.has_value() ? FormatReal(*x) : "NA";
}

json Real(double x) {
  if (!std::isfinite(x)) return json(nullptr);
  return json(RoundSignificant(x));
}

json OptionalReal(const std::optional<double>& x) {
  return x.has_value() ? Real(*x) : json(nullptr);
}

json RealArray(absl::Span<const double> values) {
  json out = json::array();
  for (double v : values) out.push_back(Real(v));
  return out;
}

}  // namespace

double RoundSignificant(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(absl::StrFormat("%.12g", x).c_str(), nullptr);
}

std::string DescribeDistribution(const DistributionSpec& distribution) {
  switch (distribution.kind) {
    case DistributionSpec::Kind::kUniform:
      return "uniform";
    case DistributionSpec::Kind::kPointMass:
      return absl::StrCat("point_mass:", distribution.symbol);
    case DistributionSpec::Kind::kDirichlet:
      return absl::StrCat("dirichlet:", FormatReal(distribution.alpha));
    case DistributionSpec::Kind::kExplicit: {
      std::vector<std::string> parts;
      for (double p : distribution.probs) parts.push_back(absl::StrFormat("%.17g", p));
      return absl::StrCat("explicit:", absl::StrJoin(parts, ","));
    }
  }
  return "unknown";
}

absl::StatusOr<DistributionSpec> ParseDistribution(absl::string_view text) {
  text = absl::StripAsciiWhitespace(text);
  DistributionSpec spec;
  if (text == "uniform") return spec;
  if (absl::ConsumePrefix(&text, "point_mass:")) {
    spec.kind = DistributionSpec::Kind::kPointMass;
    if (!absl::SimpleAtoi(absl::StripAsciiWhitespace(text), &spec.symbol)) {
      return absl::InvalidArgumentError(
          absl::StrCat("point_mass needs an integer symbol, got \"", text, "\""));
    }
    return spec;
  }
  if (absl::ConsumePrefix(&text, "dirichlet:")) {
    spec.kind = DistributionSpec::Kind::kDirichlet;
    if (!absl::SimpleAtod(absl::StripAsciiWhitespace(text), &spec.alpha)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "dirichlet needs a real concentration, got \"", text, "\""));
    }
    return spec;
  }
  if (absl::ConsumePrefix(&text, "explicit:")) {
    spec.kind = DistributionSpec::Kind::kExplicit;
    auto probs = ParseRealList(text);
    if (!probs.ok()) return probs.status();
    spec.probs = *std::move(probs);
    return spec;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown distribution \"", text,
      "\"; expected uniform, point_mass:<i>, dirichlet:<alpha> or "
      "explicit:<p0>,<p1>,..."));
}

absl::StatusOr<ExperimentConfig> ParseExperimentConfig(absl::string_view text) {
  ExperimentConfig config;
  std::map<std::string, int> seen;
  int line_number = 0;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_number;
    absl::string_view line = raw;
    if (size_t hash = line.find('#'); hash != absl::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return LineError(line_number, "expected \"key = value\"");
    }
    const std::string key(absl::StripAsciiWhitespace(line.substr(0, eq)));
    const absl::string_view value = absl::StripAsciiWhitespace(line.substr(eq + 1));
    if (value.empty()) {
      return LineError(line_number, absl::StrCat("empty value for ", key));
    }
    if (!seen.emplace(key, line_number).second) {
      return LineError(line_number, absl::StrCat("duplicate key ", key));
    }

    if (key == "k") {
      if (!absl::SimpleAtoi(value, &config.k)) {
        return LineError(line_number, "k must be an integer");
      }
    } else if (key == "epsilon") {
      if (!absl::SimpleAtod(value, &config.epsilon)) {
        return LineError(line_number, "epsilon must be a real number");
      }
    } else if (key == "d") {
      if (value != "auto") {
        int d = 0;
        if (!absl::SimpleAtoi(value, &d)) {
          return LineError(line_number, "d must be an integer or \"auto\"");
        }
        config.d = d;
      }
    } else if (key == "u_values") {
      auto list = ParseRealList(value);
      if (!list.ok()) return LineError(line_number, list.status().message());
      config.u_values = *std::move(list);
    } else if (key == "n_values") {
      auto list = ParseIntList(value);
      if (!list.ok()) return LineError(line_number, list.status().message());
      for (int64_t n : *list) {
        if (n < 1) {
          return LineError(line_number, "sample counts must be at least 1");
        }
      }
      config.n_values = *std::move(list);
    } else if (key == "trials") {
      if (!absl::SimpleAtoi(value, &config.trials)) {
        return LineError(line_number, "trials must be an integer");
      }
      if (config.trials < 1) {
        return LineError(line_number, "trials must be at least 1");
      }
    } else if (key == "master_seed") {
      if (!absl::SimpleAtoi(value, &config.master_seed)) {
        return LineError(line_number,
                         "master_seed must be an unsigned 64-bit integer");
      }
    } else if (key == "distribution") {
      auto dist = ParseDistribution(value);
      if (!dist.ok()) return LineError(line_number, dist.status().message());
      config.distribution = *std::move(dist);
    } else if (key == "estimator") {
      if (value == "raw") {
        config.estimator = EstimatorKind::kRaw;
      } else if (value == "projected") {
        config.estimator = EstimatorKind::kProjected;
      } else {
        return LineError(line_number, "estimator must be raw or projected");
      }
    } else {
      return LineError(line_number, absl::StrCat("unknown key ", key));
    }
  }
  for (const char* required : {"k", "epsilon", "u_values", "n_values", "trials"}) {
    if (!seen.contains(required)) {
      return LineError(line_number,
                       absl::StrCat("missing required key ", required));
    }
  }
  return config;
}

std::string FormatExperimentConfig(const ExperimentConfig& config) {
  std::vector<std::string> us;
  for (double u : config.u_values) us.push_back(absl::StrFormat("%.17g", u));
  return absl::StrCat(
      "k = ", config.k, "\n",
      "epsilon = ", absl::StrFormat("%.17g", config.epsilon), "\n",
      "d = ", config.d.has_value() ? absl::StrCat(*config.d) : "auto", "\n",
      "u_values = ", absl::StrJoin(us, ", "), "\n",
      "n_values = ", absl::StrJoin(config.n_values, ", "), "\n",
      "trials = ", config.trials, "\n",
      "master_seed = ", config.master_seed, "\n",
      "distribution = ", DescribeDistribution(config.distribution), "\n",
      "estimator = ",
      config.estimator == EstimatorKind::kRaw ? "raw" : "projected", "\n");
}

std::string RiskReportToCsv(const RiskReport& report) {
  std::string out =
      "n,u,empirical_risk,std_error,asymptote,lower_bound,ratio\n";
  for (const RiskCell& cell : report.cells) {
    absl::StrAppend(&out, cell.n, ",", FormatReal(cell.u), ",",
                    FormatReal(cell.empirical_risk), ",",
                    FormatOptional(cell.standard_error), ",",
                    FormatReal(cell.asymptote), ",",
                    FormatOptional(cell.lower_bound), ",",
                    FormatReal(cell.ratio_to_asymptote), "\n");
  }
  return out;
}

json RiskReportToJson(const RiskReport& report) {
  const ExperimentConfig& c = report.config;
  json config = {
      {"k", c.k},
      {"epsilon", Real(c.epsilon)},
      {"d", c.d.has_value() ? json(*c.d) : json("auto")},
      {"u_values", RealArray(c.u_values)},
      {"n_values", c.n_values},
      {"trials", c.trials},
      {"master_seed", c.master_seed},
      {"distribution", DescribeDistribution(c.distribution)},
      {"estimator", c.estimator == EstimatorKind::kRaw ? "raw" : "projected"},
  };
  json cells = json::array();
  for (const RiskCell& cell : report.cells) {
    cells.push_back({
        {"n", cell.n},
        {"u", Real(cell.u)},
        {"empirical_risk", Real(cell.empirical_risk)},
        {"standard_error", OptionalReal(cell.standard_error)},
        {"closed_form_risk", OptionalReal(cell.closed_form_risk)},
        {"asymptote", Real(cell.asymptote)},
        {"lower_bound", OptionalReal(cell.lower_bound)},
        {"ratio_to_asymptote", Real(cell.ratio_to_asymptote)},
        {"noisy", cell.noisy},
    });
  }
  return {
      {"config", config},
      {"d", report.d},
      {"input_distribution", RealArray(report.input_distribution)},
      {"cells", cells},
  };
}

json BoundSummaryToJson(const BoundSummary& s) {
  return {
      {"k", s.k},
      {"epsilon", Real(s.epsilon)},
      {"u", Real(s.u)},
      {"n", s.n},
      {"d_star", s.d_star},
      {"M", Real(s.big_m)},
      {"C_u", Real(s.c_u)},
      {"lower_bound", Real(s.lower_bound)},
      {"asymptotic_risk", OptionalReal(s.asymptotic_risk)},
  };
}

json ScanReportToJson(const ScanReport& report) {
  const ScanConfig& c = report.config;
  json entries = json::array();
  bool any_noisy = false;
  for (size_t e = 0; e < report.entries.size(); ++e) {
    const ScanEntry& entry = report.entries[e];
    any_noisy = any_noisy || entry.noisy;
    entries.push_back({
        {"label", entry.label},
        {"probs", RealArray(entry.probs)},
        {"risk", Real(entry.risk)},
        {"standard_error", OptionalReal(entry.standard_error)},
        {"exact", entry.exact},
        {"noisy", entry.noisy},
        {"maximizer", static_cast<int>(e) == report.maximizer},
    });
  }
  return {
      {"k", c.k},
      {"epsilon", Real(c.epsilon)},
      {"d", report.d},
      {"n", c.n},
      {"u", Real(c.u)},
      {"trials", c.trials},
      {"num_distributions", c.num_distributions},
      {"master_seed", c.master_seed},
      {"exact", c.u == 2.0},
      {"entries", entries},
      {"maximizer", report.entries[report.maximizer].label},
      {"uniform_within_ties", report.uniform_within_ties},
      {"noisy", any_noisy},
  };
}

json VerificationToJson(const FiniteMechanism& mechanism, double epsilon,
                        const LdpVerification& verification, bool extremal) {
  json worst = std::isfinite(verification.worst_log_ratio)
                   ? Real(verification.worst_log_ratio)
                   : json("inf");
  return {
      {"L", mechanism.num_outputs()},
      {"k", mechanism.k()},
      {"epsilon", Real(epsilon)},
      {"ldp_holds", verification.holds},
      {"worst_log_ratio", worst},
      {"extremal", extremal},
  };
}

json SubsetMechanismToJson(const SubsetMechanism& mechanism) {
  const EstimatorCoefficients coefficients = ComputeCoefficients(mechanism);
  const auto outputs = ExactBinomial(mechanism.k(), mechanism.d());
  const double log10_outputs =
      LogBinomial(mechanism.k(), mechanism.d()) / std::log(10.0);
  return {
      {"k", mechanism.k()},
      {"epsilon", Real(mechanism.epsilon())},
      {"d", mechanism.d()},
      {"Z", Real(mechanism.normalizer())},
      {"log_Z", Real(mechanism.log_normalizer())},
      {"A", Real(coefficients.a)},
      {"B", Real(coefficients.b)},
      {"output_alphabet_size",
       outputs.has_value() ? json(Uint128ToString(*outputs)) : json(nullptr)},
      {"output_alphabet_size_log10", Real(log10_outputs)},
      {"inclusion_probability", Real(mechanism.inclusion_probability())},
  };
}

}  // namespace ldplab
