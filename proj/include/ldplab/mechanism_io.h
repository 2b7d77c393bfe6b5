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

// Text format for explicit mechanisms:
//
//   L,k
//   q(0|0),q(0|1),...,q(0|k-1)
//   ...
//   q(L-1|0),...,q(L-1|k-1)
//
// Row j, column v holds Q(j | v). Blank trailing lines are ignored.

#ifndef LDPLAB_MECHANISM_IO_H_
#define LDPLAB_MECHANISM_IO_H_

#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "ldplab/mechanisms.h"

namespace ldplab {

// Column sums of a parsed file must be within this of 1.
inline constexpr double kCsvColumnTolerance = 1e-6;

// Errors are InvalidArgument and name the offending 1-based line.
absl::StatusOr<FiniteMechanism> ParseMechanismCsv(absl::string_view text);

// Writes entries with 17 significant digits so parsing restores them exactly.
std::string FormatMechanismCsv(const FiniteMechanism& mechanism);

}  // namespace ldplab

#endif  // LDPLAB_MECHANISM_IO_H_
