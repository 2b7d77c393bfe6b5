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

#include "ldplab/theory.h"

#include <cmath>
#include <numbers>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>
#include "ldplab/core.h"
#include "ldplab/mechanisms.h"
#include "ldplab/rng.h"
#include "testing/oracles.h"
#include "testing/status_matchers.h"

namespace ldplab {
namespace {

using ::ldplab::testing::IsOkAndHolds;
using ::ldplab::testing::StatusIs;
using ::testing::DoubleNear;
using ::testing::HasSubstr;

const double kLn2 = std::log(2.0);
const double kLn3 = std::log(3.0);

const std::vector<double>& EpsilonGrid() {
  static const auto* grid = new std::vector<double>{
      0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0, 7.5, 10.0};
  return *grid;
}

// M recomputed in long double from the exhaustive d*.
double OracleBoundConstant(int k, double eps) {
  const long double e = std::exp(static_cast<long double>(eps));
  const int d = oracles::ExhaustiveOptimalD(k, static_cast<double>(e));
  const long double lead = static_cast<long double>(k - 1) * (k - 1) /
                           (static_cast<long double>(k) * k * (e - 1) * (e - 1));
  return static_cast<double>(lead * oracles::Objective(k, e, d));
}

TEST(AbsoluteNormalMomentTest, KnownValues) {
  EXPECT_THAT(AbsoluteNormalMoment(2.0), IsOkAndHolds(1.0));
  EXPECT_THAT(AbsoluteNormalMoment(1.0),
              IsOkAndHolds(DoubleNear(std::sqrt(2.0 / std::numbers::pi), 1e-15)));
  EXPECT_THAT(AbsoluteNormalMoment(1.5), IsOkAndHolds(DoubleNear(0.8600, 5e-5)));
  EXPECT_THAT(AbsoluteNormalMoment(4.0), IsOkAndHolds(DoubleNear(3.0, 1e-13)));
}

TEST(AbsoluteNormalMomentTest, AgreesWithQuadrature) {
  for (int step = 1; step <= 30; ++step) {
    const double u = 0.1 * step;
    ASSERT_OK_AND_ASSIGN(double c_u, AbsoluteNormalMoment(u));
    EXPECT_NEAR(c_u, oracles::QuadratureAbsNormalMoment(u), 1e-8) << "u=" << u;
  }
}

TEST(AbsoluteNormalMomentTest, RejectsNonPositiveOrder) {
  EXPECT_THAT(AbsoluteNormalMoment(0.0),
              StatusIs(absl::StatusCode::kInvalidArgument, HasSubstr("u")));
}

TEST(BoundConstantTest, Examples) {
  EXPECT_THAT(BoundConstant(2, kLn3), IsOkAndHolds(DoubleNear(1.0, 1e-14)));
  EXPECT_THAT(BoundConstant(5, kLn2),
              IsOkAndHolds(DoubleNear(784.0 / 150.0, 1e-13)));
}

TEST(BoundConstantTest, MatchesOracleAndClosedFormRiskOnGrid) {
  for (int k = 2; k <= 50; ++k) {
    for (double eps : EpsilonGrid()) {
      ASSERT_OK_AND_ASSIGN(double m, BoundConstant(k, eps));
      EXPECT_NEAR(m, OracleBoundConstant(k, eps), 1e-12 * m)
          << "k=" << k << " eps=" << eps;
      ASSERT_OK_AND_ASSIGN(int d_star, OptimalSubsetSize(k, eps));
      ASSERT_OK_AND_ASSIGN(double risk, ClosedFormL2Risk(k, eps, d_star, 777));
      EXPECT_NEAR(k * m / 777.0, risk, 1e-12 * risk);
      ASSERT_OK_AND_ASSIGN(double m_at, BoundConstantAt(k, eps, d_star));
      EXPECT_EQ(m_at, m);
    }
  }
}

TEST(ClosedFormL2RiskTest, Examples) {
  EXPECT_THAT(ClosedFormL2Risk(2, kLn3, 1, 1),
              IsOkAndHolds(DoubleNear(2.0, 1e-14)));
  EXPECT_THAT(ClosedFormL2Risk(5, kLn2, 2, 1000),
              IsOkAndHolds(DoubleNear(26.133333333333e-3, 1e-14)));
  EXPECT_THAT(ClosedFormL2Risk(5, kLn2, 2, 0),
              StatusIs(absl::StatusCode::kInvalidArgument, ::testing::_));
  EXPECT_THAT(ClosedFormL2Risk(5, kLn2, 5, 10),
              StatusIs(absl::StatusCode::kInvalidArgument, ::testing::_));
}

TEST(ClosedFormL2RiskTest, MinimizedAtOptimalSubsetSize) {
  for (int k = 2; k <= 50; ++k) {
    for (double eps : EpsilonGrid()) {
      ASSERT_OK_AND_ASSIGN(int d_star, OptimalSubsetSize(k, eps));
      ASSERT_OK_AND_ASSIGN(double best, ClosedFormL2Risk(k, eps, d_star, 10));
      for (int d = 1; d < k; ++d) {
        ASSERT_OK_AND_ASSIGN(double r, ClosedFormL2Risk(k, eps, d, 10));
        EXPECT_GE(r, best * (1.0 - 1e-12)) << "k=" << k << " d=" << d;
      }
    }
  }
}

TEST(LowerBoundTest, Examples) {
  ASSERT_OK_AND_ASSIGN(double two, LowerBound(2, kLn3, 1.0, 10000));
  EXPECT_NEAR(two, 2.0 * std::sqrt(2.0 / std::numbers::pi) / 100.0, 1e-15);
  EXPECT_NEAR(two, 0.015958, 1e-6);
  ASSERT_OK_AND_ASSIGN(double l2, LowerBound(7, 1.3, 2.0, 500));
  ASSERT_OK_AND_ASSIGN(int d_star, OptimalSubsetSize(7, 1.3));
  ASSERT_OK_AND_ASSIGN(double closed, ClosedFormL2Risk(7, 1.3, d_star, 500));
  EXPECT_NEAR(l2, closed, 1e-14);
}

TEST(LowerBoundTest, ScalesAsPowerOfN) {
  for (double u : {1.0, 1.3, 2.0, 3.0}) {
    ASSERT_OK_AND_ASSIGN(double at_n, LowerBound(9, 0.7, u, 1000));
    ASSERT_OK_AND_ASSIGN(double at_2n, LowerBound(9, 0.7, u, 2000));
    EXPECT_NEAR(at_2n / at_n, std::pow(2.0, -u / 2.0), 1e-14);
  }
}

TEST(LowerBoundTest, RejectsExponentBelowOne) {
  EXPECT_THAT(LowerBound(5, 1.0, 0.5, 10),
              StatusIs(absl::StatusCode::kInvalidArgument, HasSubstr("u >= 1")));
}

TEST(AsymptoticRiskTest, EqualsLowerBoundExactly) {
  for (int k = 2; k <= 50; ++k) {
    for (double eps : EpsilonGrid()) {
      for (double u : {1.0, 1.1, 1.25, 1.5, 1.75, 1.9, 2.0}) {
        ASSERT_OK_AND_ASSIGN(double lower, LowerBound(k, eps, u, 12345));
        ASSERT_OK_AND_ASSIGN(double asymptote, AsymptoticRisk(k, eps, u, 12345));
        EXPECT_EQ(lower, asymptote);
      }
    }
  }
}

TEST(AsymptoticRiskTest, DomainDiffersFromLowerBound) {
  EXPECT_OK(AsymptoticRisk(5, 1.0, 0.5, 10));
  EXPECT_THAT(AsymptoticRisk(5, 1.0, 2.5, 10),
              StatusIs(absl::StatusCode::kInvalidArgument, HasSubstr("u <= 2")));
  ASSERT_OK_AND_ASSIGN(double m, BoundConstant(5, 1.0));
  EXPECT_THAT(AsymptoticRisk(5, 1.0, 2.0, 10),
              IsOkAndHolds(DoubleNear(5.0 * m / 10.0, 1e-14)));
}

TEST(FisherInformationTest, BinaryRandomizedResponse) {
  ASSERT_OK_AND_ASSIGN(FiniteMechanism rr, KaryRandomizedResponse(2, kLn3));
  ASSERT_OK_AND_ASSIGN(ProbabilityVector uniform, UniformDistribution(2));
  EXPECT_THAT(FisherInformation(rr, uniform, 0),
              IsOkAndHolds(DoubleNear(1.0, 1e-14)));
}

TEST(FisherInformationTest, ConstantMechanismCarriesNoInformation) {
  ASSERT_OK_AND_ASSIGN(
      FiniteMechanism q,
      FiniteMechanism::Create(2, 3, {0.3, 0.3, 0.3, 0.7, 0.7, 0.7}));
  ASSERT_OK_AND_ASSIGN(ProbabilityVector uniform, UniformDistribution(3));
  EXPECT_THAT(FisherInformation(q, uniform, 1),
              IsOkAndHolds(DoubleNear(0.0, 1e-15)));
}

TEST(FisherInformationTest, OptimalSubsetSizeAttainsInverseBoundConstant) {
  for (int k = 2; k <= 12; ++k) {
    ASSERT_OK_AND_ASSIGN(ProbabilityVector uniform, UniformDistribution(k));
    for (double eps : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      ASSERT_OK_AND_ASSIGN(double m, BoundConstant(k, eps));
      ASSERT_OK_AND_ASSIGN(int d_star, OptimalSubsetSize(k, eps));
      for (int d = 1; d < k; ++d) {
        ASSERT_OK_AND_ASSIGN(SubsetMechanism s, SubsetMechanism::Create(k, eps, d));
        ASSERT_OK_AND_ASSIGN(FiniteMechanism q, Materialize(s));
        for (int i = 0; i < k; ++i) {
          ASSERT_OK_AND_ASSIGN(double info, FisherInformation(q, uniform, i));
          if (d == d_star) {
            EXPECT_NEAR(info * m, 1.0, 1e-10) << "k=" << k << " eps=" << eps;
          } else {
            EXPECT_LE(info * m, 1.0 + 1e-12) << "k=" << k << " d=" << d;
          }
        }
      }
    }
  }
}

TEST(FisherInformationTest, MatchesFiniteDifferencesOffUniform) {
  RngStream rng(12, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 3 + static_cast<int>(rng.UniformInt(5));
    ASSERT_OK_AND_ASSIGN(ProbabilityVector p, SampleDirichlet(k, 3.0, rng));
    const double eps = 0.2 + 2.0 * rng.Uniform01();
    ASSERT_OK_AND_ASSIGN(FiniteMechanism q, RapporMechanism(k, eps));
    const int i = static_cast<int>(rng.UniformInt(k));
    ASSERT_OK_AND_ASSIGN(double info, FisherInformation(q, p, i));
    EXPECT_NEAR(info, oracles::FiniteDifferenceFisher(q, p, i, 1e-6),
                1e-6 * info);
  }
}

TEST(FisherInformationTest, SingularOutputIsAnError) {
  // Output 0 is impossible under the point mass at 1 but depends on input 0.
  ASSERT_OK_AND_ASSIGN(
      FiniteMechanism q,
      FiniteMechanism::Create(2, 2, {0.5, 0.0, 0.5, 1.0}));
  ASSERT_OK_AND_ASSIGN(ProbabilityVector p, PointMass(2, 1));
  EXPECT_THAT(FisherInformation(q, p, 0),
              StatusIs(absl::StatusCode::kFailedPrecondition,
                       HasSubstr("singular")));
  ASSERT_OK_AND_ASSIGN(ProbabilityVector uniform, UniformDistribution(3));
  EXPECT_THAT(FisherInformation(q, uniform, 0),
              StatusIs(absl::StatusCode::kInvalidArgument, ::testing::_));
}

TEST(LemmaColumnCheckTest, BinaryPatternIsTight) {
  // Rows (3/4, 1/4) and (1/4, 3/4): e^eps = 3, one favored entry per row.
  ASSERT_OK_AND_ASSIGN(FiniteMechanism rr, KaryRandomizedResponse(2, kLn3));
  ASSERT_OK_AND_ASSIGN(ColumnCheck check, LemmaColumnCheck(rr, kLn3));
  EXPECT_NEAR(check.max_lhs, 2.5, 1e-14);
  EXPECT_NEAR(check.rhs, 2.5, 1e-14);
  EXPECT_TRUE(check.holds);
}

TEST(LemmaColumnCheckTest, RowValueDependsOnlyOnFavoredCount) {
  for (int k = 2; k <= 20; ++k) {
    for (double eps : {0.1, 1.0, 3.0}) {
      const double e = std::exp(eps);
      for (int d = 1; d < k; ++d) {
        const double closed =
            k * (1.0 + (e - 1) * (e - 1) * d * (k - d) /
                           ((d * e + k - d) * (d * e + k - d)));
        EXPECT_NEAR(oracles::RowSecondMoment(k, e, d), closed, 1e-12 * closed);
        ASSERT_OK_AND_ASSIGN(SubsetMechanism s, SubsetMechanism::Create(k, eps, d));
        if (k <= 12) {
          ASSERT_OK_AND_ASSIGN(FiniteMechanism q, Materialize(s));
          ASSERT_OK_AND_ASSIGN(ColumnCheck check, LemmaColumnCheck(q, eps));
          EXPECT_NEAR(check.max_lhs, closed, 1e-12 * closed);
          EXPECT_TRUE(check.holds);
        }
      }
      EXPECT_NEAR(oracles::RowSecondMoment(k, e, 0), k, 1e-12 * k);
      EXPECT_NEAR(oracles::RowSecondMoment(k, e, k), k, 1e-12 * k);
    }
  }
}

TEST(LemmaColumnCheckTest, ConstantRowsGiveK) {
  ASSERT_OK_AND_ASSIGN(
      FiniteMechanism q,
      FiniteMechanism::Create(2, 3, {0.3, 0.3, 0.3, 0.7, 0.7, 0.7}));
  ASSERT_OK_AND_ASSIGN(ColumnCheck check, LemmaColumnCheck(q, 1.0));
  EXPECT_NEAR(check.max_lhs, 3.0, 1e-14);
  EXPECT_TRUE(check.holds);
}

TEST(LemmaColumnCheckTest, RandomExtremalMechanismsSatisfyBound) {
  RngStream rng(13, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 2 + static_cast<int>(rng.UniformInt(11));
    const double eps = 0.1 + 4.9 * rng.Uniform01();
    const int patterns = 1 + static_cast<int>(rng.UniformInt(4));
    const FiniteMechanism q =
        oracles::RandomExtremalMechanism(k, eps, patterns, rng);
    ASSERT_THAT(IsExtremal(q, eps), IsOkAndHolds(true));
    ASSERT_OK_AND_ASSIGN(ColumnCheck check, LemmaColumnCheck(q, eps));
    EXPECT_TRUE(check.holds) << check.max_lhs << " > " << check.rhs;
    EXPECT_LE(check.max_lhs, check.rhs + 1e-9);
  }
}

TEST(LemmaColumnCheckTest, RejectsNonExtremalMechanism) {
  ASSERT_OK_AND_ASSIGN(FiniteMechanism q,
                       FiniteMechanism::Create(2, 2, {0.6, 0.4, 0.4, 0.6}));
  EXPECT_THAT(LemmaColumnCheck(q, kLn2),
              StatusIs(absl::StatusCode::kFailedPrecondition,
                       HasSubstr("extremal")));
}

TEST(SummarizeBoundsTest, FieldsAgreeWithComponents) {
  ASSERT_OK_AND_ASSIGN(BoundSummary s, SummarizeBounds(2, 1.0986, 2.0, 100));
  EXPECT_EQ(s.d_star, 1);
  EXPECT_NEAR(s.big_m, 1.0, 1e-4);
  EXPECT_NEAR(s.lower_bound, 0.02, 1e-6);
  EXPECT_EQ(s.c_u, 1.0);
  ASSERT_TRUE(s.asymptotic_risk.has_value());
  EXPECT_EQ(*s.asymptotic_risk, s.lower_bound);

  ASSERT_OK_AND_ASSIGN(BoundSummary wide, SummarizeBounds(4, 1.0, 3.0, 100));
  EXPECT_FALSE(wide.asymptotic_risk.has_value());
  EXPECT_THAT(SummarizeBounds(4, 1.0, 0.5, 100),
              StatusIs(absl::StatusCode::kInvalidArgument, ::testing::_));
  EXPECT_THAT(SummarizeBounds(4, 0.0, 1.0, 100),
              StatusIs(absl::StatusCode::kInvalidArgument, ::testing::_));
}

}  // namespace
}  // namespace ldplab
