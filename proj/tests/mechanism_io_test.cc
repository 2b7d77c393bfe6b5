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

#include "ldplab/mechanism_io.h"

#include <cmath>
#include <string>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>
#include "ldplab/mechanisms.h"
#include "testing/status_matchers.h"

namespace ldplab {
namespace {

using ::ldplab::testing::StatusIs;
using ::testing::HasSubstr;

TEST(ParseMechanismCsvTest, ReadsMatrix) {
  ASSERT_OK_AND_ASSIGN(FiniteMechanism m,
                       ParseMechanismCsv("3,2\n0.5,0.25\n0.25, 0.5\n0.25,0.25\n\n"));
  EXPECT_EQ(m.num_outputs(), 3);
  EXPECT_EQ(m.k(), 2);
  EXPECT_EQ(m(1, 1), 0.5);
  EXPECT_EQ(m(2, 0), 0.25);
}

TEST(ParseMechanismCsvTest, ColumnToleranceIsOneInAMillion) {
  EXPECT_OK(ParseMechanismCsv("2,2\n0.5000005,0.5\n0.5,0.5\n").status());
  EXPECT_THAT(ParseMechanismCsv("2,2\n0.500002,0.5\n0.5,0.5\n"),
              StatusIs(absl::StatusCode::kInvalidArgument,
                       HasSubstr("column 1 sums to")));
}

TEST(ParseMechanismCsvTest, ErrorsNameTheLine) {
  struct Case {
    const char* text;
    const char* message;
  };
  for (const Case& c : std::vector<Case>{
           {"", "line 1: empty file"},
           {"two,2\n", "line 1: header"},
           {"1,2,3\n", "line 1: header"},
           {"0,2\n", "line 1: need L >= 1 and k >= 2"},
           {"2,1\n1\n0\n", "line 1: need L >= 1 and k >= 2"},
           {"2,2\n0.5,0.5\n", "line 2: expected 2 rows, found 1"},
           {"2,2\n0.5,0.5\n0.5\n", "line 3: expected 2 values, found 1"},
           {"2,2\n0.5,0.5\n0.5,x\n", "line 3: not a number"},
           {"2,2\n1.5,0.5\n-0.5,0.5\n", "line 3: not a probability"},
           {"2,2\n0.5,nan\n0.5,0.5\n", "line 2: not a probability"},
           {"2,2\n0.5,0.5\n0.4,0.5\n", "line 3: column 1 sums to"},
       }) {
    EXPECT_THAT(ParseMechanismCsv(c.text),
                StatusIs(absl::StatusCode::kInvalidArgument,
                         HasSubstr(c.message)))
        << c.text;
  }
}

TEST(FormatMechanismCsvTest, RoundTripsExactly) {
  ASSERT_OK_AND_ASSIGN(SubsetMechanism scheme, SubsetMechanism::Create(6, 0.7, 2));
  ASSERT_OK_AND_ASSIGN(FiniteMechanism m, Materialize(scheme));
  const std::string text = FormatMechanismCsv(m);
  EXPECT_THAT(text, ::testing::StartsWith("15,6\n"));
  ASSERT_OK_AND_ASSIGN(FiniteMechanism back, ParseMechanismCsv(text));
  ASSERT_EQ(back.num_outputs(), m.num_outputs());
  for (int j = 0; j < m.num_outputs(); ++j) {
    for (int v = 0; v < m.k(); ++v) EXPECT_EQ(back(j, v), m(j, v));
  }
  EXPECT_EQ(FormatMechanismCsv(back), text);
}

TEST(FormatMechanismCsvTest, RapporFileVerifies) {
  ASSERT_OK_AND_ASSIGN(FiniteMechanism rappor, RapporMechanism(4, 1.0));
  ASSERT_OK_AND_ASSIGN(FiniteMechanism back,
                       ParseMechanismCsv(FormatMechanismCsv(rappor)));
  const LdpVerification v = VerifyLdp(back, 1.0);
  EXPECT_TRUE(v.holds);
  EXPECT_NEAR(v.worst_log_ratio, 1.0, 1e-12);
}

}  // namespace
}  // namespace ldplab
