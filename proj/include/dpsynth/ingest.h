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

// Loading categorical CSV data into databases, and the plain-text database
// format used by the command-line tool.
//
// A schema is a JSON object:
//
//   {
//     "bits": 5,                      // optional; total must fit
//     "columns": [
//       {"name": "rating", "values": ["1", "2", "3", "4", "5"]},
//       {"name": "weekday", "cardinality": 7, "offset": 1}
//     ]
//   }
//
// A column with m categories takes ceil(log2 m) bits. The first column sits
// in the lowest bits. "values" columns map the i-th listed string to code i;
// "cardinality" columns take integers offset..offset+m-1 to codes 0..m-1.
// The CSV must start with a header naming every schema column; other columns
// are ignored.

#ifndef DPSYNTH_INGEST_H_
#define DPSYNTH_INGEST_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "dpsynth/core.h"

namespace dpsynth {

struct SchemaColumn {
  std::string name;
  // Empty for integer columns.
  std::vector<std::string> values;
  uint32_t cardinality = 0;
  int64_t offset = 0;

  int bits() const;
};

class CsvSchema {
 public:
  static absl::StatusOr<CsvSchema> Parse(std::string_view json_text);
  static absl::StatusOr<CsvSchema> Create(std::vector<SchemaColumn> columns,
                                          int declared_bits = 0);

  std::span<const SchemaColumn> columns() const { return columns_; }
  // Bit offset of each column inside a code.
  std::span<const int> shifts() const { return shifts_; }
  DataUniverse universe() const { return universe_; }

 private:
  CsvSchema(std::vector<SchemaColumn> columns, std::vector<int> shifts,
            DataUniverse universe)
      : columns_(std::move(columns)),
        shifts_(std::move(shifts)),
        universe_(universe) {}

  std::vector<SchemaColumn> columns_;
  std::vector<int> shifts_;
  DataUniverse universe_;
};

// Splits RFC 4180 CSV text into records. Quoted fields may contain commas,
// doubled quotes and newlines. Blank lines are skipped.
struct CsvRecord {
  int line = 0;
  std::vector<std::string> fields;
};
absl::StatusOr<std::vector<CsvRecord>> ParseCsv(std::string_view text);

// Errors carry the CSV line number.
absl::StatusOr<Database> IngestCsv(std::string_view csv_text,
                                   const CsvSchema& schema);

// Replaces every out-of-range column field of `code` by the column's largest
// valid code. Valid codes map to themselves.
Row NearestValidCode(Row code, const CsvSchema& schema);

// table[code] := table[NearestValidCode(code)] for every code of the schema's
// universe. `table` must have 2^l entries.
absl::StatusOr<std::vector<double>> ExtendTableWithSchema(
    std::span<const double> table, const CsvSchema& schema);

// Plain-text databases: one non-negative integer code per line. Blank lines
// and '#' comments are skipped.
absl::StatusOr<Database> ParseDatabaseText(std::string_view text,
                                           DataUniverse universe);
std::string FormatDatabaseText(const Database& x);

}  // namespace dpsynth

#endif  // DPSYNTH_INGEST_H_
