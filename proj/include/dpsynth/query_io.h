//
// Copyright 2026 The dpsynth Authors.
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
//

// Reading statistical queries from JSON definition files. The schema is
// documented in docs/formats.md.

#ifndef DPSYNTH_QUERY_IO_H_
#define DPSYNTH_QUERY_IO_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "dpsynth/core.h"
#include "dpsynth/queries.h"

namespace dpsynth {

// Widens a table given only for the codes [0, m) to all 2^l codes: code v >= m
// takes the value of code m - 1, its nearest valid code when the column is a
// single categorical attribute with m levels.
absl::StatusOr<std::vector<double>> ExtendTable(std::span<const double> table,
                                                DataUniverse universe);

// Parses one definition object or an array of them and instantiates each for
// databases of `n` rows over `universe`.
absl::StatusOr<std::vector<StatisticalQuery>> ParseQueryDefinitions(
    std::string_view json_text, DataUniverse universe, size_t n);

}  // namespace dpsynth

#endif  // DPSYNTH_QUERY_IO_H_
