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
#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"

namespace ldplab {
namespace {

absl::Status LineError(int line, absl::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat("line ", line, ": ", what));
}

}  // namespace

absl::StatusOr<FiniteMechanism> ParseMechanismCsv(absl::string_view text) {
  std::vector<absl::string_view> lines = absl::StrSplit(text, '\n');
  while (!lines.empty() &&
         absl::StripAsciiWhitespace(lines.back()).empty()) {
    lines.pop_back();
  }
  if (lines.empty()) return LineError(1, "empty file; expected header \"L,k\"");

  std::vector<absl::string_view> header =
      absl::StrSplit(absl::StripAsciiWhitespace(lines[0]), ',');
  int num_outputs = 0;
  int k = 0;
  if (header.size() != 2 ||
      !absl::SimpleAtoi(absl::StripAsciiWhitespace(header[0]), &num_outputs) ||
      !absl::SimpleAtoi(absl::StripAsciiWhitespace(header[1]), &k)) {
    return LineError(1, "header must be \"L,k\" with two integers");
  }
  if (num_outputs < 1 || k < 2) {
    return LineError(1, absl::StrCat("need L >= 1 and k >= 2, got L = ",
                                     num_outputs, ", k = ", k));
  }
  if (static_cast<int64_t>(lines.size()) - 1 != num_outputs) {
    return LineError(static_cast<int>(lines.size()),
                     absl::StrCat("expected ", num_outputs, " rows, found ",
                                  lines.size() - 1));
  }

  std::vector<double> entries;
  entries.reserve(static_cast<size_t>(num_outputs) * k);
  for (int j = 0; j < num_outputs; ++j) {
    const int line = j + 2;
    std::vector<absl::string_view> fields =
        absl::StrSplit(absl::StripAsciiWhitespace(lines[j + 1]), ',');
    if (static_cast<int>(fields.size()) != k) {
      return LineError(line, absl::StrCat("expected ", k, " values, found ",
                                          fields.size()));
    }
    for (absl::string_view field : fields) {
      double q = 0.0;
      if (!absl::SimpleAtod(absl::StripAsciiWhitespace(field), &q)) {
        return LineError(line, absl::StrCat("not a number: \"", field, "\""));
      }
      if (!(q >= 0.0) || !std::isfinite(q)) {
        return LineError(line, absl::StrCat("not a probability: ", field));
      }
      entries.push_back(q);
    }
  }
  std::vector<double> sums(k, 0.0);
  for (int j = 0; j < num_outputs; ++j) {
    for (int v = 0; v < k; ++v) sums[v] += entries[static_cast<size_t>(j) * k + v];
  }
  for (int v = 0; v < k; ++v) {
    if (std::abs(sums[v] - 1.0) > kCsvColumnTolerance) {
      return LineError(num_outputs + 1,
                       absl::StrCat("column ", v + 1, " sums to ", sums[v],
                                    ", not 1 within ", kCsvColumnTolerance));
    }
  }
  return FiniteMechanism::Create(num_outputs, k, std::move(entries),
                                 kCsvColumnTolerance);
}

std::string FormatMechanismCsv(const FiniteMechanism& mechanism) {
  std::string out = absl::StrCat(mechanism.num_outputs(), ",", mechanism.k(),
                                 "\n");
  for (int j = 0; j < mechanism.num_outputs(); ++j) {
    const auto row = mechanism.row(j);
    for (int v = 0; v < mechanism.k(); ++v) {
      if (v > 0) out.push_back(',');
      absl::StrAppendFormat(&out, "%.17g", row[v]);
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace ldplab
