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

#include "dpsynth/ingest.h"

#include <algorithm>
#include <bit>
#include <map>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "dpsynth/status_macros.h"
#include "json.hpp"

namespace dpsynth {

namespace {

using json = nlohmann::json;

uint32_t Cardinality(const SchemaColumn& column) {
  return column.values.empty() ? column.cardinality
                               : static_cast<uint32_t>(column.values.size());
}

}  // namespace

int SchemaColumn::bits() const {
  const uint32_t m = Cardinality(*this);
  return m <= 1 ? 0 : std::bit_width(m - 1);
}

absl::StatusOr<CsvSchema> CsvSchema::Create(std::vector<SchemaColumn> columns,
                                            int declared_bits) {
  if (columns.empty()) {
    return absl::InvalidArgumentError("schema has no columns");
  }
  std::vector<int> shifts;
  int total = 0;
  std::map<std::string, int> seen;
  for (const SchemaColumn& column : columns) {
    if (!seen.emplace(column.name, 0).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("column \"", column.name, "\" appears twice"));
    }
    if (Cardinality(column) == 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("column \"", column.name, "\" has no categories"));
    }
    if (!column.values.empty()) {
      std::vector<std::string> sorted = column.values;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        return absl::InvalidArgumentError(
            absl::StrCat("column \"", column.name, "\" lists a value twice"));
      }
    }
    shifts.push_back(total);
    total += column.bits();
  }
  if (total == 0) {
    return absl::InvalidArgumentError(
        "every column has a single category; nothing to encode");
  }
  if (declared_bits != 0 && total > declared_bits) {
    return absl::InvalidArgumentError(
        absl::StrFormat("columns need %d bits but the schema declares l = %d",
                        total, declared_bits));
  }
  const int bits = declared_bits != 0 ? declared_bits : total;
  if (bits > kMaxAttributeBits) {
    return absl::InvalidArgumentError(
        absl::StrFormat("columns need %d bits; at most %d are supported", bits,
                        kMaxAttributeBits));
  }
  ASSIGN_OR_RETURN(const DataUniverse universe, DataUniverse::Create(bits));
  return CsvSchema(std::move(columns), std::move(shifts), universe);
}

absl::StatusOr<CsvSchema> CsvSchema::Parse(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("schema: ", e.what()));
  }
  if (!doc.is_object() || !doc.contains("columns") ||
      !doc["columns"].is_array()) {
    return absl::InvalidArgumentError(
        "schema must be an object with a \"columns\" array");
  }
  std::vector<SchemaColumn> columns;
  try {
    for (const json& entry : doc["columns"]) {
      SchemaColumn column;
      column.name = entry.at("name").get<std::string>();
      if (entry.contains("values")) {
        for (const json& v : entry["values"]) {
          column.values.push_back(v.is_string() ? v.get<std::string>()
                                                : v.dump());
        }
      } else if (entry.contains("cardinality")) {
        const int64_t m = entry["cardinality"].get<int64_t>();
        if (m < 1 || m > (int64_t{1} << kMaxAttributeBits)) {
          return absl::InvalidArgumentError(
              absl::StrCat("column \"", column.name, "\" has cardinality ", m));
        }
        column.cardinality = static_cast<uint32_t>(m);
        column.offset = entry.value("offset", int64_t{0});
      } else {
        return absl::InvalidArgumentError(
            absl::StrCat("column \"", column.name,
                         "\" needs either \"values\" or \"cardinality\""));
      }
      columns.push_back(std::move(column));
    }
    const int declared = doc.value("bits", 0);
    return Create(std::move(columns), declared);
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("schema: ", e.what()));
  }
}

absl::StatusOr<std::vector<CsvRecord>> ParseCsv(std::string_view text) {
  std::vector<CsvRecord> records;
  CsvRecord current;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  int line = 1;
  current.line = 1;

  auto end_record = [&] {
    const bool blank =
        current.fields.empty() && field.empty() && !field_started;
    if (!blank) {
      current.fields.push_back(std::move(field));
      records.push_back(std::move(current));
    }
    current = CsvRecord();
    field.clear();
    field_started = false;
  };

  for (size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!field.empty()) {
          return absl::InvalidArgumentError(
              absl::StrFormat("line %d: quote inside an unquoted field", line));
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        current.fields.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        current.line = line;
        break;
      default:
        field.push_back(ch);
    }
  }
  if (in_quotes) {
    return absl::InvalidArgumentError(
        absl::StrFormat("line %d: unterminated quoted field", line));
  }
  end_record();
  return records;
}

absl::StatusOr<Database> IngestCsv(std::string_view csv_text,
                                   const CsvSchema& schema) {
  ASSIGN_OR_RETURN(const std::vector<CsvRecord> records, ParseCsv(csv_text));
  if (records.empty()) {
    return absl::InvalidArgumentError("CSV file is empty");
  }
  const CsvRecord& header = records.front();
  std::vector<size_t> positions;
  for (const SchemaColumn& column : schema.columns()) {
    size_t position = header.fields.size();
    for (size_t f = 0; f < header.fields.size(); ++f) {
      if (absl::StripAsciiWhitespace(header.fields[f]) == column.name) {
        position = f;
        break;
      }
    }
    if (position == header.fields.size()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "line %d: header has no column \"%s\"", header.line, column.name));
    }
    positions.push_back(position);
  }
  if (records.size() == 1) {
    return absl::InvalidArgumentError("CSV file has a header but no rows");
  }

  std::vector<Row> rows;
  rows.reserve(records.size() - 1);
  for (size_t r = 1; r < records.size(); ++r) {
    const CsvRecord& record = records[r];
    if (record.fields.size() != header.fields.size()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("line %d: %d fields, header has %d", record.line,
                          record.fields.size(), header.fields.size()));
    }
    Row code = 0;
    for (size_t c = 0; c < positions.size(); ++c) {
      const SchemaColumn& column = schema.columns()[c];
      const absl::string_view cell =
          absl::StripAsciiWhitespace(record.fields[positions[c]]);
      uint32_t field_code = 0;
      if (!column.values.empty()) {
        auto it = std::find(column.values.begin(), column.values.end(), cell);
        if (it == column.values.end()) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "line %d: \"%s\" is not a listed value of column \"%s\"",
              record.line, std::string(cell), column.name));
        }
        field_code = static_cast<uint32_t>(it - column.values.begin());
      } else {
        int64_t value = 0;
        if (!absl::SimpleAtoi(cell, &value) || value < column.offset ||
            value - column.offset >= column.cardinality) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "line %d: \"%s\" is not an integer in [%d, %d] for column "
              "\"%s\"",
              record.line, std::string(cell), column.offset,
              column.offset + column.cardinality - 1, column.name));
        }
        field_code = static_cast<uint32_t>(value - column.offset);
      }
      code |= field_code << schema.shifts()[c];
    }
    rows.push_back(code);
  }
  return Database::Create(schema.universe(), std::move(rows));
}

Row NearestValidCode(Row code, const CsvSchema& schema) {
  Row result = 0;
  for (size_t c = 0; c < schema.columns().size(); ++c) {
    const SchemaColumn& column = schema.columns()[c];
    const int bits = column.bits();
    const Row mask = bits == 0 ? 0 : (Row{1} << bits) - 1;
    const Row field = (code >> schema.shifts()[c]) & mask;
    result |= std::min(field, Cardinality(column) - 1) << schema.shifts()[c];
  }
  return result;
}

absl::StatusOr<std::vector<double>> ExtendTableWithSchema(
    std::span<const double> table, const CsvSchema& schema) {
  const uint32_t size = schema.universe().cardinality();
  if (table.size() != size) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: table has %d entries, schema universe has %d",
        table.size(), size));
  }
  std::vector<double> extended(size);
  for (Row code = 0; code < size; ++code) {
    extended[code] = table[NearestValidCode(code, schema)];
  }
  return extended;
}

absl::StatusOr<Database> ParseDatabaseText(std::string_view text,
                                           DataUniverse universe) {
  std::vector<Row> rows;
  int line_number = 0;
  for (absl::string_view line :
       absl::StrSplit(absl::string_view(text.data(), text.size()), '\n')) {
    ++line_number;
    const size_t hash = line.find('#');
    if (hash != absl::string_view::npos) line = line.substr(0, hash);
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    uint64_t value = 0;
    if (!absl::SimpleAtoi(line, &value) || !universe.Contains(value)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "line %d: \"%s\" is not a code in [0, %d)", line_number,
          std::string(line), universe.cardinality()));
    }
    rows.push_back(static_cast<Row>(value));
  }
  if (rows.empty()) {
    return absl::InvalidArgumentError("database file has no rows");
  }
  return Database::Create(universe, std::move(rows));
}

std::string FormatDatabaseText(const Database& x) {
  std::string out;
  out.reserve(x.size() * 4);
  for (Row r : x.rows()) absl::StrAppend(&out, r, "\n");
  return out;
}

}  // namespace dpsynth
