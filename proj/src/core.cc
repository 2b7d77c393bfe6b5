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

#include "ldplab/core.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/types/span.h"
#include "boost/random/gamma_distribution.hpp"

namespace ldplab {

absl::StatusOr<ProbabilityVector> ProbabilityVector::Create(
    std::vector<double> probs) {
  if (probs.size() < 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "invalid alphabet: k must be at least 2, got ", probs.size()));
  }
  double sum = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) {
    if (!std::isfinite(probs[i]) || probs[i] < 0.0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "probability entry ", i, " is not a nonnegative number: ",
          probs[i]));
    }
    sum += probs[i];
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    return absl::InvalidArgumentError(absl::StrCat(
        "probabilities sum to ", sum, ", not 1 within ", kSimplexTolerance));
  }
  return ProbabilityVector(std::move(probs));
}

bool ProbabilityVector::IsUniform() const {
  const double target = 1.0 / k();
  return std::all_of(probs_.begin(), probs_.end(),
                     [target](double p) { return p == target; });
}

absl::StatusOr<ProbabilityVector> UniformDistribution(int k) {
  if (k < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid alphabet: k must be at least 2, got ", k));
  }
  return ProbabilityVector::Create(std::vector<double>(k, 1.0 / k));
}

absl::StatusOr<ProbabilityVector> PointMass(int k, int symbol) {
  if (k < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid alphabet: k must be at least 2, got ", k));
  }
  if (symbol < 0 || symbol >= k) {
    return absl::OutOfRangeError(
        absl::StrCat("symbol ", symbol, " outside [0, ", k, ")"));
  }
  std::vector<double> probs(k, 0.0);
  probs[symbol] = 1.0;
  return ProbabilityVector::Create(std::move(probs));
}

absl::StatusOr<ProbabilityVector> SampleDirichlet(int k, double alpha,
                                                  RngStream& rng) {
  if (k < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid alphabet: k must be at least 2, got ", k));
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Dirichlet concentration must be positive, got ", alpha));
  }
  std::vector<double> g(k);
  double total = 0.0;
  do {
    total = 0.0;
    for (int i = 0; i < k; ++i) {
      if (alpha == 1.0) {
        // Gamma(1) is Exp(1); 1 - U keeps the argument in (0, 1].
        g[i] = -std::log1p(-rng.Uniform01());
      } else {
        // Boost's sampler is header code, so draws do not depend on the
        // standard library in use.
        boost::random::gamma_distribution<double> gamma(alpha, 1.0);
        g[i] = gamma(rng);
      }
      total += g[i];
    }
  } while (!(total > 0.0));
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    g[i] /= total;
    sum += g[i];
  }
  // Pin the last coordinate so the sum check cannot trip on rounding.
  g[k - 1] = std::max(0.0, g[k - 1] + (1.0 - sum));
  return ProbabilityVector::Create(std::move(g));
}

CategoricalSampler::CategoricalSampler(const ProbabilityVector& p,
                                       int64_t expected_draws) {
  if (expected_draws >= kAliasThreshold) {
    alias_.emplace(p.probs().begin(), p.probs().end());
    return;
  }
  cdf_.resize(p.k());
  double acc = 0.0;
  for (int i = 0; i < p.k(); ++i) {
    acc += p[i];
    cdf_[i] = acc;
  }
}

int CategoricalSampler::SampleInverseCdf(RngStream& rng) const {
  const double u = rng.Uniform01() * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  int idx = static_cast<int>(it - cdf_.begin());
  if (idx >= static_cast<int>(cdf_.size())) idx = cdf_.size() - 1;
  // Zero-mass symbols share a cdf value with their predecessor and are never
  // selected by upper_bound.
  return idx;
}

absl::StatusOr<RawSampleBatch> SampleCategorical(const ProbabilityVector& p,
                                                 int64_t n, RngStream& rng) {
  if (n < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("sample count must be at least 1, got ", n));
  }
  CategoricalSampler sampler(p, n);
  RawSampleBatch batch;
  batch.k = p.k();
  batch.symbols.resize(n);
  for (int64_t i = 0; i < n; ++i) batch.symbols[i] = sampler.Sample(rng);
  return batch;
}

absl::StatusOr<double> LpLoss(absl::Span<const double> a,
                              absl::Span<const double> b, double u) {
  if (a.size() != b.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "dimension mismatch: ", a.size(), " vs ", b.size()));
  }
  if (!(u > 0.0) || !std::isfinite(u)) {
    return absl::InvalidArgumentError(
        absl::StrCat("loss exponent must be positive, got ", u));
  }
  return internal::LpLossUnchecked(a, b, u);
}

namespace internal {

double LpLossUnchecked(absl::Span<const double> a,
                       absl::Span<const double> b, double u) {
  double sum = 0.0;
  if (u == 2.0) {
    for (size_t i = 0; i < a.size(); ++i) {
      const double diff = a[i] - b[i];
      sum += diff * diff;
    }
  } else if (u == 1.0) {
    for (size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  } else {
    for (size_t i = 0; i < a.size(); ++i) {
      sum += std::pow(std::abs(a[i] - b[i]), u);
    }
  }
  return sum;
}

}  // namespace internal
}  // namespace ldplab
