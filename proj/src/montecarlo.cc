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

#include "ldplab/montecarlo.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "ldplab/estimation.h"
#include "ldplab/mechanisms.h"
#include "ldplab/theory.h"

namespace ldplab {
namespace {

// Runs body(begin, end) over [0, count) in dynamically claimed chunks.
void ParallelFor(int64_t count,
                 int workers,
                 const std::function<void(int64_t, int64_t)>& body) {
  if (count <= 0) return;
  const int64_t usable =
      std::clamp<int64_t>(workers, 1, std::max<int64_t>(count, 1));
  if (usable == 1) {
    body(0, count);
    return;
  }
  const int64_t chunk = std::max<int64_t>(1, count / (usable * 16));
  std::atomic<int64_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(usable);
  for (int64_t w = 0; w < usable; ++w) {
    threads.emplace_back([&] {
      for (;;) {
        const int64_t begin = next.fetch_add(chunk);
        if (begin >= count) break;
        body(begin, std::min(begin + chunk, count));
      }
    });
  }
  for (std::thread& t : threads) t.join();
}

// Per-worker scratch for running trials of one mechanism at one input.
class TrialEngine {
 public:
  TrialEngine(const SubsetMechanism& mechanism,
              const EstimatorCoefficients& coefficients,
              const ProbabilityVector& p, const CategoricalSampler& sampler,
              absl::Span<const double> u_values, EstimatorKind estimator)
      : coefficients_(coefficients),
        p_(p),
        sampler_(sampler),
        u_values_(u_values),
        estimator_(estimator),
        privatizer_(mechanism),
        sample_(mechanism.k()),
        counts_(mechanism.k(), mechanism.d()),
        estimate_(mechanism.k()) {}

  void Run(int64_t n, RngStream& rng, absl::Span<double> losses) {
    counts_.Clear();
    for (int64_t s = 0; s < n; ++s) {
      const int x = sampler_.Sample(rng);
      privatizer_.PrivatizeUnchecked(x, rng, sample_);
      counts_.AddUnchecked(sample_);
    }
    internal::EmpiricalEstimateInto(counts_.counts(), n, coefficients_,
                                    absl::MakeSpan(estimate_));
    if (estimator_ == EstimatorKind::kProjected) {
      internal::ProjectOntoSimplexInPlace(absl::MakeSpan(estimate_),
                                          scratch_);
    }
    for (size_t i = 0; i < u_values_.size(); ++i) {
      losses[i] = internal::LpLossUnchecked(estimate_, p_.probs(), u_values_[i]);
    }
  }

 private:
  EstimatorCoefficients coefficients_;
  const ProbabilityVector& p_;
  const CategoricalSampler& sampler_;
  absl::Span<const double> u_values_;
  EstimatorKind estimator_;
  SubsetPrivatizer privatizer_;
  SubsetSample sample_;
  CountVector counts_;
  std::vector<double> estimate_;
  std::vector<double> scratch_;
};

struct TrialStats {
  double mean = 0.0;
  std::optional<double> standard_error;
};

TrialStats Summarize(absl::Span<const double> values) {
  TrialStats stats;
  const double count = static_cast<double>(values.size());
  stats.mean = PairwiseSum(values) / count;
  if (values.size() > 1) {
    std::vector<double> sq(values.size());
    for (size_t i = 0; i < values.size(); ++i) {
      const double dev = values[i] - stats.mean;
      sq[i] = dev * dev;
    }
    const double variance = PairwiseSum(sq) / (count - 1.0);
    stats.standard_error = std::sqrt(variance / count);
  }
  return stats;
}

// Losses of `trials` independent trials, trial-major with one column per u.
std::vector<double> SimulateCell(const SubsetMechanism& mechanism,
                                 const EstimatorCoefficients& coefficients,
                                 const ProbabilityVector& p, int64_t n,
                                 absl::Span<const double> u_values,
                                 EstimatorKind estimator, int64_t trials,
                                 uint64_t master_seed, uint64_t group,
                                 int workers) {
  const size_t width = u_values.size();
  std::vector<double> losses(static_cast<size_t>(trials) * width);
  const CategoricalSampler sampler(p, n);
  ParallelFor(trials, workers, [&](int64_t begin, int64_t end) {
    TrialEngine engine(mechanism, coefficients, p, sampler, u_values,
                       estimator);
    for (int64_t t = begin; t < end; ++t) {
      RngStream rng(master_seed, StreamIndex(group, t));
      engine.Run(n, rng,
                 absl::MakeSpan(losses).subspan(static_cast<size_t>(t) * width,
                                                width));
    }
  });
  return losses;
}

std::vector<double> Column(const std::vector<double>& losses, size_t width,
                           size_t column) {
  std::vector<double> out(losses.size() / width);
  for (size_t t = 0; t < out.size(); ++t) out[t] = losses[t * width + column];
  return out;
}

absl::StatusOr<double> AsymptoteAt(int k, double epsilon, int d, int d_star,
                                   double u, int64_t n) {
  if (d == d_star) return AsymptoticRisk(k, epsilon, u, n);
  auto c_u = AbsoluteNormalMoment(u);
  if (!c_u.ok()) return c_u.status();
  auto big_m = BoundConstantAt(k, epsilon, d);
  if (!big_m.ok()) return big_m.status();
  return k * *c_u * std::pow(*big_m, u / 2.0) *
         std::pow(static_cast<double>(n), -u / 2.0);
}

absl::Status ValidateExponent(double u) {
  if (!(u > 0.0) || !(u <= 2.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("loss exponent u must lie in (0, 2], got ", u));
  }
  return absl::OkStatus();
}

}  // namespace

double PairwiseSum(absl::Span<const double> values) {
  if (values.size() <= 16) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum;
  }
  const size_t half = values.size() / 2;
  return PairwiseSum(values.subspan(0, half)) +
         PairwiseSum(values.subspan(half));
}

absl::Status ValidateConfig(const ExperimentConfig& config) {
  if (config.k < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid alphabet: k must be at least 2, got ", config.k));
  }
  if (absl::Status s = ValidatePrivacyParameter(config.epsilon); !s.ok()) {
    return s;
  }
  if (config.d.has_value()) {
    if (absl::Status s =
            ValidateSubsetParameters(config.k, config.epsilon, *config.d);
        !s.ok()) {
      return s;
    }
  }
  if (config.trials < 1 || config.trials >= kMaxTrials) {
    return absl::InvalidArgumentError(absl::StrCat(
        "trials must lie in [1, 2^", kStreamGroupShift, "), got ",
        config.trials));
  }
  if (config.u_values.empty()) {
    return absl::InvalidArgumentError("at least one loss exponent is required");
  }
  for (double u : config.u_values) {
    if (absl::Status s = ValidateExponent(u); !s.ok()) return s;
  }
  if (config.n_values.empty()) {
    return absl::InvalidArgumentError("at least one sample count is required");
  }
  for (int64_t n : config.n_values) {
    if (n < 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("sample counts must be at least 1, got ", n));
    }
  }
  const DistributionSpec& dist = config.distribution;
  switch (dist.kind) {
    case DistributionSpec::Kind::kUniform:
      break;
    case DistributionSpec::Kind::kPointMass:
      if (dist.symbol < 0 || dist.symbol >= config.k) {
        return absl::InvalidArgumentError(absl::StrCat(
            "point mass symbol ", dist.symbol, " outside [0, ", config.k, ")"));
      }
      break;
    case DistributionSpec::Kind::kDirichlet:
      if (!(dist.alpha > 0.0) || !std::isfinite(dist.alpha)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "Dirichlet concentration must be positive, got ", dist.alpha));
      }
      break;
    case DistributionSpec::Kind::kExplicit:
      if (static_cast<int>(dist.probs.size()) != config.k) {
        return absl::InvalidArgumentError(
            absl::StrCat("explicit distribution has ", dist.probs.size(),
                         " entries, expected k = ", config.k));
      }
      if (auto p = ProbabilityVector::Create(dist.probs); !p.ok()) {
        return p.status();
      }
      break;
  }
  return absl::OkStatus();
}

absl::StatusOr<int> ResolveSubsetSize(const ExperimentConfig& config) {
  if (config.d.has_value()) return *config.d;
  return OptimalSubsetSize(config.k, config.epsilon);
}

absl::StatusOr<ProbabilityVector> ResolveDistribution(
    const ExperimentConfig& config) {
  const DistributionSpec& dist = config.distribution;
  switch (dist.kind) {
    case DistributionSpec::Kind::kUniform:
      return UniformDistribution(config.k);
    case DistributionSpec::Kind::kPointMass:
      return PointMass(config.k, dist.symbol);
    case DistributionSpec::Kind::kDirichlet: {
      RngStream rng(config.master_seed, StreamIndex(0, 0));
      return SampleDirichlet(config.k, dist.alpha, rng);
    }
    case DistributionSpec::Kind::kExplicit:
      return ProbabilityVector::Create(dist.probs);
  }
  return absl::InternalError("unknown distribution kind");
}

absl::StatusOr<std::vector<double>> RunTrial(
    int k, double epsilon, int d, const ProbabilityVector& p, int64_t n,
    absl::Span<const double> u_values, RngStream& rng,
    EstimatorKind estimator) {
  auto mechanism = SubsetMechanism::Create(k, epsilon, d);
  if (!mechanism.ok()) return mechanism.status();
  if (p.k() != k) {
    return absl::InvalidArgumentError(absl::StrCat(
        "dimension mismatch: k = ", k, ", distribution has ", p.k()));
  }
  if (n < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("sample count must be at least 1, got ", n));
  }
  for (double u : u_values) {
    if (absl::Status s = ValidateExponent(u); !s.ok()) return s;
  }
  const CategoricalSampler sampler(p, n);
  TrialEngine engine(*mechanism, ComputeCoefficients(*mechanism), p, sampler,
                     u_values, estimator);
  std::vector<double> losses(u_values.size());
  engine.Run(n, rng, absl::MakeSpan(losses));
  return losses;
}

absl::StatusOr<RiskReport> RunExperiment(const ExperimentConfig& config,
                                         int workers) {
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  auto d = ResolveSubsetSize(config);
  if (!d.ok()) return d.status();
  auto p = ResolveDistribution(config);
  if (!p.ok()) return p.status();
  auto mechanism = SubsetMechanism::Create(config.k, config.epsilon, *d);
  if (!mechanism.ok()) return mechanism.status();
  const int d_star = *OptimalSubsetSize(config.k, config.epsilon);
  const EstimatorCoefficients coefficients = ComputeCoefficients(*mechanism);
  const bool uniform_raw =
      p->IsUniform() && config.estimator == EstimatorKind::kRaw;

  RiskReport report;
  report.config = config;
  report.d = *d;
  report.input_distribution.assign(p->probs().begin(), p->probs().end());
  const size_t width = config.u_values.size();
  for (size_t c = 0; c < config.n_values.size(); ++c) {
    const int64_t n = config.n_values[c];
    const std::vector<double> losses = SimulateCell(
        *mechanism, coefficients, *p, n, config.u_values, config.estimator,
        config.trials, config.master_seed, c + 1, workers);
    for (size_t ui = 0; ui < width; ++ui) {
      const double u = config.u_values[ui];
      const TrialStats stats = Summarize(Column(losses, width, ui));
      RiskCell cell;
      cell.n = n;
      cell.u = u;
      cell.empirical_risk = stats.mean;
      cell.standard_error = stats.standard_error;
      if (u == 2.0 && uniform_raw) {
        cell.closed_form_risk =
            *ClosedFormL2Risk(config.k, config.epsilon, *d, n);
      }
      auto asymptote = AsymptoteAt(config.k, config.epsilon, *d, d_star, u, n);
      if (!asymptote.ok()) return asymptote.status();
      cell.asymptote = *asymptote;
      if (u >= 1.0) {
        cell.lower_bound = *LowerBound(config.k, config.epsilon, u, n);
      }
      cell.ratio_to_asymptote = cell.empirical_risk / cell.asymptote;
      cell.noisy = cell.standard_error.has_value() &&
                   *cell.standard_error > kNoisyRelativeError * cell.empirical_risk;
      report.cells.push_back(cell);
    }
  }
  return report;
}

absl::StatusOr<std::vector<CurvePoint>> RiskCurve(
    const ExperimentConfig& config, int workers) {
  std::vector<int64_t> distinct = config.n_values;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2) {
    return absl::InvalidArgumentError(
        "a risk curve needs at least two distinct sample counts");
  }
  ExperimentConfig sorted = config;
  sorted.n_values = distinct;
  auto report = RunExperiment(sorted, workers);
  if (!report.ok()) return report.status();
  std::vector<CurvePoint> points;
  points.reserve(report->cells.size());
  for (size_t ui = 0; ui < sorted.u_values.size(); ++ui) {
    for (size_t c = 0; c < distinct.size(); ++c) {
      const RiskCell& cell =
          report->cells[c * sorted.u_values.size() + ui];
      CurvePoint point;
      point.n = cell.n;
      point.u = cell.u;
      point.ratio = cell.ratio_to_asymptote;
      if (cell.standard_error.has_value()) {
        point.ratio_standard_error = *cell.standard_error / cell.asymptote;
      }
      points.push_back(point);
    }
  }
  return points;
}

absl::StatusOr<ScanReport> WorstCaseScan(const ScanConfig& config,
                                         int workers) {
  if (config.k < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid alphabet: k must be at least 2, got ", config.k));
  }
  if (absl::Status s = ValidatePrivacyParameter(config.epsilon); !s.ok()) {
    return s;
  }
  if (config.n < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("sample count must be at least 1, got ", config.n));
  }
  if (absl::Status s = ValidateExponent(config.u); !s.ok()) return s;
  if (config.num_distributions < 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "number of random distributions must be nonnegative, got ",
        config.num_distributions));
  }
  const bool exact_path = config.u == 2.0;
  if (!exact_path && (config.trials < 1 || config.trials >= kMaxTrials)) {
    return absl::InvalidArgumentError(
        absl::StrCat("trials must be positive, got ", config.trials));
  }
  const int d = config.d.has_value()
                    ? *config.d
                    : *OptimalSubsetSize(config.k, config.epsilon);
  auto mechanism = SubsetMechanism::Create(config.k, config.epsilon, d);
  if (!mechanism.ok()) return mechanism.status();
  const EstimatorCoefficients coefficients = ComputeCoefficients(*mechanism);

  std::vector<std::pair<std::string, ProbabilityVector>> inputs;
  inputs.emplace_back("uniform", *UniformDistribution(config.k));
  for (int i = 0; i < config.k; ++i) {
    inputs.emplace_back(absl::StrCat("point_mass:", i),
                        *PointMass(config.k, i));
  }
  for (int t = 0; t < config.num_distributions; ++t) {
    RngStream rng(config.master_seed, StreamIndex(0, t));
    inputs.emplace_back(absl::StrCat("dirichlet#", t),
                        *SampleDirichlet(config.k, 1.0, rng));
  }

  ScanReport report;
  report.config = config;
  report.d = d;
  const std::vector<double> u_values = {config.u};
  for (size_t e = 0; e < inputs.size(); ++e) {
    const ProbabilityVector& p = inputs[e].second;
    ScanEntry entry;
    entry.label = inputs[e].first;
    entry.probs.assign(p.probs().begin(), p.probs().end());
    if (exact_path) {
      entry.risk = *ExactL2Risk(p, config.epsilon, d, config.n);
      entry.exact = true;
    } else {
      const std::vector<double> losses = SimulateCell(
          *mechanism, coefficients, p, config.n, u_values, EstimatorKind::kRaw,
          config.trials, config.master_seed, e + 1, workers);
      const TrialStats stats = Summarize(losses);
      entry.risk = stats.mean;
      entry.standard_error = stats.standard_error;
      entry.noisy = stats.standard_error.has_value() &&
                    *stats.standard_error > kNoisyRelativeError * stats.mean;
    }
    report.entries.push_back(std::move(entry));
  }
  for (size_t e = 1; e < report.entries.size(); ++e) {
    if (report.entries[e].risk > report.entries[report.maximizer].risk) {
      report.maximizer = static_cast<int>(e);
    }
  }
  const ScanEntry& uniform = report.entries.front();
  const ScanEntry& top = report.entries[report.maximizer];
  if (exact_path) {
    report.uniform_within_ties = report.maximizer == 0;
  } else {
    const double se_u = uniform.standard_error.value_or(0.0);
    const double se_top = top.standard_error.value_or(0.0);
    report.uniform_within_ties =
        top.risk - uniform.risk <= 3.0 * std::sqrt(se_u * se_u + se_top * se_top);
  }
  return report;
}

}  // namespace ldplab
