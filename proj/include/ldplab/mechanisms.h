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

// Privatization schemes: the subset-selection family in implicit form, a
// sampler for it, explicit finite mechanisms, and the privacy/extremality
// checks that run on explicit matrices.

#ifndef LDPLAB_MECHANISMS_H_
#define LDPLAB_MECHANISMS_H_

#include <bit>
#include <cstdint>
#include <vector>

#include "absl/container/inlined_vector.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "ldplab/core.h"
#include "ldplab/rng.h"

namespace ldplab {

// Upper limit on epsilon; e^50 is far from overflow and the scheme is
// effectively non-private well before it.
inline constexpr double kMaxEpsilon = 50.0;

// Largest output alphabet Materialize() will build.
inline constexpr int64_t kMaxMaterializedOutputs = 1'000'000;

// Largest alphabet RapporMechanism() will build (2^k output rows).
inline constexpr int kMaxRapporAlphabet = 20;

// Checks k >= 2, 1 <= d <= k - 1 and 0 < epsilon <= kMaxEpsilon.
absl::Status ValidateSubsetParameters(int k, double epsilon, int d);
absl::Status ValidatePrivacyParameter(double epsilon);

// (d e^eps + k - d)^2 / (d (k - d)), the d-dependent factor of the squared
// error risk. Minimized over d by OptimalSubsetSize().
double SubsetSizeObjective(int k, double exp_epsilon, int d);

// argmin over d in [1, k-1] of SubsetSizeObjective. Only the two integers
// around k / (e^eps + 1) are compared; the objective is unimodal with its
// continuous minimum there. Objectives equal to relative 1e-12 count as a tie
// and resolve to the smaller d.
absl::StatusOr<int> OptimalSubsetSize(int k, double epsilon);

// A d-element subset of {0, ..., k - 1}, stored as a bitmask of ceil(k/64)
// words. For k <= 64 the mask is a single inline word.
class SubsetSample {
 public:
  SubsetSample() = default;

  // Empty subset of a k-symbol alphabet.
  explicit SubsetSample(int k) { Reset(k); }

  static absl::StatusOr<SubsetSample> FromMembers(int k,
                                                  absl::Span<const int> members);

  int k() const { return k_; }
  int size() const { return size_; }

  bool Contains(int symbol) const {
    return (words_[symbol >> 6] >> (symbol & 63)) & 1u;
  }

  // Low word of the mask; the whole subset when k <= 64.
  uint64_t mask() const { return words_.empty() ? 0 : words_[0]; }
  absl::Span<const uint64_t> words() const { return words_; }

  // Members in increasing order.
  std::vector<int> Members() const;

  template <typename F>
  void ForEachMember(F&& f) const {
    for (size_t w = 0; w < words_.size(); ++w) {
      uint64_t bits = words_[w];
      while (bits != 0) {
        f(static_cast<int>(w * 64 + std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

  void Reset(int k) {
    k_ = k;
    size_ = 0;
    words_.assign((k + 63) / 64, 0);
  }

  // Every symbol except `excluded`.
  void FillAllExcept(int k, int excluded);

  // Replaces the subset with `mask` over a k <= 64 alphabet; `size` must be
  // its popcount.
  void AssignMask(int k, uint64_t mask, int size) {
    k_ = k;
    size_ = size;
    if (words_.size() != 1) words_.resize(1);
    words_[0] = mask;
  }

  void Insert(int symbol) {
    uint64_t& w = words_[symbol >> 6];
    const uint64_t bit = uint64_t{1} << (symbol & 63);
    size_ += (w & bit) == 0;
    w |= bit;
  }

  void Remove(int symbol) {
    uint64_t& w = words_[symbol >> 6];
    const uint64_t bit = uint64_t{1} << (symbol & 63);
    size_ -= (w & bit) != 0;
    w &= ~bit;
  }

  friend bool operator==(const SubsetSample& a, const SubsetSample& b) {
    return a.k_ == b.k_ && a.words_ == b.words_;
  }

 private:
  int k_ = 0;
  int size_ = 0;
  absl::InlinedVector<uint64_t, 1> words_;
};

// The subset-selection scheme Q_{k,eps,d}: outputs are d-subsets y of the
// alphabet and
//
//   Q(y | x) = (e^eps [x in y] + [x not in y]) / Z,
//   Z = C(k-1, d-1) e^eps + C(k-1, d).
//
// The C(k, d) outputs are never enumerated except by Materialize().
class SubsetMechanism {
 public:
  static absl::StatusOr<SubsetMechanism> Create(int k, double epsilon, int d);

  int k() const { return k_; }
  double epsilon() const { return epsilon_; }
  int d() const { return d_; }
  double exp_epsilon() const { return exp_epsilon_; }

  // log Z and Z. Z overflows to +inf once C(k, d) leaves double range; use
  // the log form for large alphabets.
  double log_normalizer() const { return log_normalizer_; }
  double normalizer() const;

  // P(x in Y | X = x) = C(k-1, d-1) e^eps / Z = d e^eps / (d e^eps + k - d).
  double inclusion_probability() const { return inclusion_probability_; }

  // Q(y | x); y must be a d-subset of this alphabet.
  double Probability(const SubsetSample& y, int x) const;

 private:
  SubsetMechanism(int k, double epsilon, int d);

  int k_;
  double epsilon_;
  int d_;
  double exp_epsilon_;
  double log_normalizer_;
  double inclusion_probability_;
};

// Draws outputs of a SubsetMechanism: x is kept with its inclusion
// probability, and the remaining members form a uniform subset of the other
// symbols, sampled with O(min(d, k - d)) random numbers and O(k / 64) word
// writes. Holds no per-draw state, so draws are a function of the RngStream
// alone. Not thread-safe only in that `out` and `rng` must not be shared.
class SubsetPrivatizer {
 public:
  explicit SubsetPrivatizer(const SubsetMechanism& mechanism)
      : mechanism_(mechanism) {}

  // Writes a draw from Q(. | x) into `out`, reusing its storage. Fails with
  // OutOfRange if x is not a symbol of the alphabet.
  absl::Status Privatize(int x, RngStream& rng, SubsetSample& out) const;

  // Privatize() without the range check.
  void PrivatizeUnchecked(int x, RngStream& rng, SubsetSample& out) const;

  const SubsetMechanism& mechanism() const { return mechanism_; }

 private:
  SubsetMechanism mechanism_;
};

// One draw from Q(. | x).
absl::StatusOr<SubsetSample> Privatize(const SubsetMechanism& mechanism, int x,
                                       RngStream& rng);

// An explicit conditional distribution with L outputs and k inputs;
// entry (j, v) is Q(j | v). Every input column sums to 1.
class FiniteMechanism {
 public:
  // `entries` is row-major, L rows of k values. Fails with InvalidArgument on
  // a shape mismatch, a negative or non-finite entry, or an input whose
  // column does not sum to 1 within `column_tolerance`.
  static absl::StatusOr<FiniteMechanism> Create(
      int num_outputs, int k, std::vector<double> entries,
      double column_tolerance = kSimplexTolerance);

  int num_outputs() const { return num_outputs_; }
  int k() const { return k_; }
  double operator()(int j, int v) const {
    return entries_[static_cast<size_t>(j) * k_ + v];
  }
  absl::Span<const double> row(int j) const {
    return absl::MakeConstSpan(entries_).subspan(static_cast<size_t>(j) * k_,
                                                 k_);
  }

 private:
  FiniteMechanism(int num_outputs, int k, std::vector<double> entries)
      : num_outputs_(num_outputs), k_(k), entries_(std::move(entries)) {}

  int num_outputs_;
  int k_;
  std::vector<double> entries_;
};

// Explicit matrix of a subset mechanism. Rows are the d-subsets in ascending
// order of their bitmask value (bit i for symbol i). Fails with
// ResourceExhausted when C(k, d) > kMaxMaterializedOutputs.
absl::StatusOr<FiniteMechanism> Materialize(const SubsetMechanism& mechanism);

struct LdpVerification {
  bool holds = false;
  // max over outputs j and inputs x, x' of log(Q(j|x) / Q(j|x')), with 0/0
  // read as 1 and positive/0 as +inf.
  double worst_log_ratio = 0.0;
};

LdpVerification VerifyLdp(const FiniteMechanism& mechanism, double epsilon);

// True when every entry divided by its row minimum is 1 or e^eps, to
// relative tolerance 1e-9. Fails with InvalidArgument if an output has zero
// probability under every input.
absl::StatusOr<bool> IsExtremal(const FiniteMechanism& mechanism,
                                double epsilon);

// k-ary randomized response, the d = 1 member of the subset family.
absl::StatusOr<FiniteMechanism> KaryRandomizedResponse(int k, double epsilon);

// Basic one-hot RAPPOR: each of the k bits flips independently with
// probability 1 / (e^{eps/2} + 1). Row b is the output bit vector with value
// b. Fails with ResourceExhausted when k > kMaxRapporAlphabet.
absl::StatusOr<FiniteMechanism> RapporMechanism(int k, double epsilon);

// Output distribution m_j = sum_v p_v Q(j | v).
absl::StatusOr<std::vector<double>> Marginal(const FiniteMechanism& mechanism,
                                             const ProbabilityVector& p);

}  // namespace ldplab

#endif  // LDPLAB_MECHANISMS_H_
