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

#include "dpsynth/query_io.h"

#include <string>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "dpsynth/status_macros.h"
#include "json.hpp"

namespace dpsynth {

namespace {

using json = nlohmann::json;

absl::StatusOr<StatisticalQuery> ParseTablesQuery(const json& def,
                                                  DataUniverse universe,
                                                  size_t n) {
  if (!def.contains("tables") || !def["tables"].is_array() ||
      def["tables"].empty()) {
    return absl::InvalidArgumentError(
        "\"tables\" query needs a nonempty \"tables\" array");
  }
  std::vector<RowFunction> functions;
  for (const json& entry : def["tables"]) {
    ASSIGN_OR_RETURN(std::vector<double> table,
                     ExtendTable(entry.get<std::vector<double>>(), universe));
    ASSIGN_OR_RETURN(RowFunction fn,
                     RowFunction::Create(universe, std::move(table)));
    functions.push_back(std::move(fn));
  }
  std::vector<uint32_t> assignment;
  if (def.contains("assignment")) {
    assignment = def["assignment"].get<std::vector<uint32_t>>();
    if (assignment.size() != n) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "dimension mismatch: assignment has %d entries, database has %d rows",
          assignment.size(), n));
    }
  } else {
    // Contiguous equal blocks, one per table.
    const size_t count = functions.size();
    if (n % count != 0) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "%d tables do not split %d rows into equal blocks; give an "
          "explicit \"assignment\"",
          count, n));
    }
    assignment.resize(n);
    for (size_t i = 0; i < n; ++i) {
      assignment[i] = static_cast<uint32_t>(i / (n / count));
    }
  }
  return StatisticalQuery::Create(universe, std::move(functions),
                                  std::move(assignment));
}

absl::StatusOr<StatisticalQuery> ParseOne(const json& def,
                                          DataUniverse universe, size_t n) {
  if (!def.is_object() || !def.contains("type") || !def["type"].is_string()) {
    return absl::InvalidArgumentError(
        "query definition must be an object with a string \"type\"");
  }
  if (def.contains("bits") && def["bits"].get<int>() != universe.bits()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: query declares %d bits, database has %d",
        def["bits"].get<int>(), universe.bits()));
  }
  const std::string type = def["type"].get<std::string>();
  if (type == "predicate") {
    if (!def.contains("conjuncts")) {
      return absl::InvalidArgumentError("predicate query needs \"conjuncts\"");
    }
    return MakePredicateQuery(universe, n,
                              def["conjuncts"].get<std::vector<int>>());
  }
  if (type == "hamming") {
    if (!def.contains("z")) {
      return absl::InvalidArgumentError("hamming query needs \"z\"");
    }
    std::vector<Row> z = def["z"].get<std::vector<Row>>();
    if (z.size() != n) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "dimension mismatch: z has %d rows, database has %d", z.size(), n));
    }
    ASSIGN_OR_RETURN(const Database reference,
                     Database::Create(universe, std::move(z)));
    return MakeHammingQuery(reference);
  }
  if (type == "tables") {
    return ParseTablesQuery(def, universe, n);
  }
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown query type \"%s\"", type));
}

}  // namespace

absl::StatusOr<std::vector<double>> ExtendTable(std::span<const double> table,
                                                DataUniverse universe) {
  if (table.empty() || table.size() > universe.cardinality()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("table has %d entries; expected between 1 and %d",
                        table.size(), universe.cardinality()));
  }
  std::vector<double> full(universe.cardinality(), table.back());
  std::copy(table.begin(), table.end(), full.begin());
  return full;
}

absl::StatusOr<std::vector<StatisticalQuery>> ParseQueryDefinitions(
    std::string_view json_text, DataUniverse universe, size_t n) {
  json document;
  try {
    document = json::parse(json_text);
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("malformed query file: %s", e.what()));
  }
  std::vector<StatisticalQuery> queries;
  try {
    if (document.is_array()) {
      for (const json& def : document) {
        ASSIGN_OR_RETURN(StatisticalQuery q, ParseOne(def, universe, n));
        queries.push_back(std::move(q));
      }
    } else {
      ASSIGN_OR_RETURN(StatisticalQuery q, ParseOne(document, universe, n));
      queries.push_back(std::move(q));
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("malformed query definition: %s", e.what()));
  }
  if (queries.empty()) {
    return absl::InvalidArgumentError("query file defines no queries");
  }
  return queries;
}

}  // namespace dpsynth
