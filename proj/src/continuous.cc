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

#include "dpsynth/continuous.h"

#include <algorithm>
#include <charconv>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "dpsynth/estimators.h"
#include "dpsynth/mechanism.h"
#include "dpsynth/status_macros.h"

namespace dpsynth {

namespace {

constexpr double kTolerance = 1e-9;

}  // namespace

absl::StatusOr<ContinuousDatabase> ContinuousDatabase::Create(
    std::vector<double> rows) {
  if (rows.empty()) {
    return absl::InvalidArgumentError("database must have at least one row");
  }
  for (size_t i = 0; i < rows.size(); ++i) {
    if (!(rows[i] >= 0.0 && rows[i] <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("row %d = %g is outside [0, 1]", i, rows[i]));
    }
  }
  return ContinuousDatabase(std::move(rows));
}

absl::StatusOr<ContinuousDatabase> ParseContinuousCsv(std::string_view text) {
  std::vector<double> rows;
  int line_number = 0;
  bool seen_content = false;
  for (absl::string_view line :
       absl::StrSplit(absl::string_view(text.data(), text.size()), '\n')) {
    ++line_number;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    double value = 0.0;
    if (!absl::SimpleAtod(line, &value)) {
      if (!seen_content) {
        seen_content = true;  // header
        continue;
      }
      return absl::InvalidArgumentError(absl::StrFormat(
          "line %d: \"%s\" is not a number", line_number, std::string(line)));
    }
    seen_content = true;
    if (!(value >= 0.0 && value <= 1.0)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "line %d: value %g is outside [0, 1]", line_number, value));
    }
    rows.push_back(value);
  }
  if (rows.empty()) {
    return absl::InvalidArgumentError("no data rows");
  }
  return ContinuousDatabase::Create(std::move(rows));
}

absl::StatusOr<LipschitzQuery> LipschitzQuery::Create(
    std::vector<LipschitzRowFunction> functions) {
  if (functions.empty()) {
    return absl::InvalidArgumentError("query needs at least one row function");
  }
  const double step = 1.0 / (kLipschitzCheckPoints - 1);
  for (size_t f = 0; f < functions.size(); ++f) {
    const LipschitzRowFunction& fn = functions[f];
    if (!fn.phi) {
      return absl::InvalidArgumentError("row function is empty");
    }
    if (!(fn.lipschitz >= 0.0) || !std::isfinite(fn.lipschitz)) {
      return absl::InvalidArgumentError(
          "Lipschitz constant must be finite and nonnegative");
    }
    if (!(fn.max > fn.min)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "row function %d has declared range [%g, %g]; need max > min", f,
          fn.min, fn.max));
    }
    double observed_min = fn.phi(0.0);
    double observed_max = observed_min;
    double previous = observed_min;
    for (int j = 1; j < kLipschitzCheckPoints; ++j) {
      const double u = j == kLipschitzCheckPoints - 1 ? 1.0 : j * step;
      const double value = fn.phi(u);
      if (!std::isfinite(value)) {
        return absl::InvalidArgumentError(
            absl::StrFormat("row function %d is not finite at %g", f, u));
      }
      if (std::abs(value - previous) >
          fn.lipschitz * step * (1.0 + kTolerance) + kTolerance) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "row function %d violates its Lipschitz constant %g near %g", f,
            fn.lipschitz, u));
      }
      observed_min = std::min(observed_min, value);
      observed_max = std::max(observed_max, value);
      previous = value;
    }
    // The grid must stay inside the declared range and come within one grid
    // step of both ends of it.
    const double slack = fn.lipschitz * step + kTolerance;
    if (observed_min < fn.min - kTolerance ||
        observed_max > fn.max + kTolerance || observed_min > fn.min + slack ||
        observed_max < fn.max - slack) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "row function %d spans [%g, %g] on the check grid, declared [%g, %g]",
          f, observed_min, observed_max, fn.min, fn.max));
    }
  }
  return LipschitzQuery(std::move(functions));
}

double LipschitzQuery::lipschitz() const {
  double l = 0.0;
  for (const auto& fn : functions_) l = std::max(l, fn.lipschitz);
  return l;
}

double LipschitzQuery::lower() const {
  double a = functions_[0].min;
  for (const auto& fn : functions_) a = std::min(a, fn.min);
  return a;
}

double LipschitzQuery::upper() const {
  double b = functions_[0].max;
  for (const auto& fn : functions_) b = std::max(b, fn.max);
  return b;
}

double LipschitzQuery::min_range() const {
  double c = functions_[0].max - functions_[0].min;
  for (const auto& fn : functions_) c = std::min(c, fn.max - fn.min);
  return c;
}

absl::StatusOr<size_t> LipschitzQuery::FunctionForRow(size_t i,
                                                      size_t n) const {
  if (n % functions_.size() != 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%d row functions do not split %d rows into equal blocks",
        functions_.size(), n));
  }
  if (i >= n) return absl::OutOfRangeError("row index past the database");
  return i / (n / functions_.size());
}

absl::StatusOr<double> LipschitzQuery::Evaluate(
    const ContinuousDatabase& x) const {
  CompensatedSum values, ranges;
  for (size_t i = 0; i < x.size(); ++i) {
    ASSIGN_OR_RETURN(const size_t f, FunctionForRow(i, x.size()));
    values.Add(functions_[f].phi(x.rows()[i]));
    ranges.Add(functions_[f].max - functions_[f].min);
  }
  return values.Total() / ranges.Total();
}

int ChooseDiscretizationBits(int64_t n) {
  if (n <= 1) return 1;
  const double k = std::round(std::log2(static_cast<double>(n)) / 4.0);
  return std::max(1, static_cast<int>(k));
}

absl::StatusOr<Database> Discretize(const ContinuousDatabase& x, int k) {
  ASSIGN_OR_RETURN(const DataUniverse universe, DataUniverse::Create(k));
  const Row top = universe.cardinality() - 1;
  std::vector<Row> codes(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const double value = x.rows()[i];
    if (!(value >= 0.0 && value <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("row %d = %g is outside [0, 1]", i, value));
    }
    codes[i] =
        std::min(top, static_cast<Row>(std::floor(std::ldexp(value, k))));
  }
  return Database::Create(universe, std::move(codes));
}

absl::StatusOr<StatisticalQuery> InduceGridQuery(const LipschitzQuery& q, int k,
                                                 size_t n) {
  ASSIGN_OR_RETURN(const DataUniverse universe, DataUniverse::Create(k));
  if (k > kMaxTableBits) {
    return absl::ResourceExhaustedError("grid too fine for row tables");
  }
  std::vector<RowFunction> tables;
  const double transfer_slack = 1.0 - std::ldexp(1.0, -k);
  for (const LipschitzRowFunction& fn : q.functions()) {
    std::vector<double> table(universe.cardinality());
    for (Row code = 0; code < universe.cardinality(); ++code) {
      table[code] = fn.phi(CellValue(code, k));
    }
    absl::StatusOr<RowFunction> grid =
        RowFunction::Create(universe, std::move(table));
    if (!grid.ok()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("induced %d-bit grid query is degenerate: %s", k,
                          grid.status().message()));
    }
    const double declared = fn.max - fn.min;
    if (std::abs(grid->range() - declared) >
        fn.lipschitz * transfer_slack + kTolerance) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "grid range %g differs from declared range %g by more than "
          "L (1 - 2^-k)",
          grid->range(), declared));
    }
    tables.push_back(*std::move(grid));
  }
  std::vector<uint32_t> assignment(n);
  for (size_t i = 0; i < n; ++i) {
    ASSIGN_OR_RETURN(const size_t f, q.FunctionForRow(i, n));
    assignment[i] = static_cast<uint32_t>(f);
  }
  return StatisticalQuery::Create(universe, std::move(tables),
                                  std::move(assignment),
                                  /*deduplicate=*/false);
}

absl::StatusOr<ContinuousRelease> ReleaseContinuous(const ContinuousDatabase& x,
                                                    const LipschitzQuery& q,
                                                    double epsilon,
                                                    RandomSource& rng) {
  if (!(epsilon > 0.0)) {
    return absl::FailedPreconditionError(
        "estimator undefined at eps = 0 (division by 1 - e^{-eps})");
  }
  const int k = ChooseDiscretizationBits(static_cast<int64_t>(x.size()));
  ASSIGN_OR_RETURN(const Database discretized, Discretize(x, k));
  ASSIGN_OR_RETURN(const StatisticalQuery grid,
                   InduceGridQuery(q, k, x.size()));
  ASSIGN_OR_RETURN(const MechanismParams params,
                   MechanismParams::Create(epsilon, discretized.universe()));
  ASSIGN_OR_RETURN(const Database released,
                   SampleSynthetic(discretized, params, rng));
  ASSIGN_OR_RETURN(const double raw, EstimateUnbiased(grid, released, params));
  ASSIGN_OR_RETURN(
      const double proper,
      ProjectProper(grid, raw, ProjectionStrategy::kIntervalClamp));

  CompensatedSum declared_ranges;
  for (size_t i = 0; i < x.size(); ++i) {
    const auto& fn = q.functions()[grid.assignment()[i]];
    declared_ranges.Add(fn.max - fn.min);
  }
  ContinuousRelease result;
  result.estimate = proper * grid.range_sum() / declared_ranges.Total();
  result.bits = k;
  result.grid_lower = grid.lower();
  result.grid_upper = grid.upper();
  result.grid_min_range = grid.min_range();
  return result;
}

}  // namespace dpsynth
