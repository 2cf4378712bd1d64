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

#include "dpsynth/queries.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "dpsynth/status_macros.h"

namespace dpsynth {

RowFunction::RowFunction(std::vector<double> table) : table_(std::move(table)) {
  const auto [lo, hi] = std::minmax_element(table_.begin(), table_.end());
  min_ = *lo;
  max_ = *hi;
  CompensatedSum sum;
  for (double v : table_) sum.Add(v);
  sum_ = sum.Total();
}

absl::StatusOr<RowFunction> RowFunction::Create(DataUniverse universe,
                                                std::vector<double> table) {
  if (universe.bits() > kMaxTableBits) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "row-function tables are limited to %d-bit universes, got %d",
        kMaxTableBits, universe.bits()));
  }
  if (table.size() != universe.cardinality()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("row-function table has %d entries, universe needs %d",
                        table.size(), universe.cardinality()));
  }
  for (size_t v = 0; v < table.size(); ++v) {
    if (!std::isfinite(table[v])) {
      return absl::InvalidArgumentError(
          absl::StrFormat("row-function entry %d is not finite", v));
    }
  }
  RowFunction function(std::move(table));
  if (!(function.max() > function.min())) {
    return absl::InvalidArgumentError(
        "row function is constant (max == min); statistical queries need "
        "c_i > 0");
  }
  return function;
}

StatisticalQuery::StatisticalQuery(DataUniverse universe,
                                   std::vector<RowFunction> functions,
                                   std::vector<uint32_t> assignment)
    : universe_(universe),
      functions_(std::move(functions)),
      assignment_(std::move(assignment)) {
  std::vector<size_t> counts(functions_.size(), 0);
  for (uint32_t f : assignment_) ++counts[f];

  CompensatedSum range_sum, lower_sum, upper_sum, table_sum;
  lower_ = functions_[0].min();
  upper_ = functions_[0].max();
  min_range_ = functions_[0].range();
  for (size_t f = 0; f < functions_.size(); ++f) {
    const RowFunction& fn = functions_[f];
    const double count = static_cast<double>(counts[f]);
    range_sum.Add(count * fn.range());
    lower_sum.Add(count * fn.min());
    upper_sum.Add(count * fn.max());
    table_sum.Add(count * fn.sum());
    lower_ = std::min(lower_, fn.min());
    upper_ = std::max(upper_, fn.max());
    min_range_ = std::min(min_range_, fn.range());
  }
  range_sum_ = range_sum.Total();
  centering_ = table_sum.Total() / range_sum_;
  min_value_ = lower_sum.Total() / range_sum_;
  max_value_ = upper_sum.Total() / range_sum_;

  // Heterogeneity counts distinct tables even when storage is not merged.
  std::vector<std::span<const double>> tables;
  tables.reserve(functions_.size());
  for (const RowFunction& fn : functions_) tables.push_back(fn.table());
  std::sort(tables.begin(), tables.end(), [](auto a, auto b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  heterogeneity_ = static_cast<size_t>(
      std::unique(tables.begin(), tables.end(),
                  [](auto a, auto b) {
                    return std::equal(a.begin(), a.end(), b.begin(), b.end());
                  }) -
      tables.begin());
}

absl::StatusOr<StatisticalQuery> StatisticalQuery::Create(
    DataUniverse universe, std::vector<RowFunction> functions,
    std::vector<uint32_t> assignment, bool deduplicate) {
  if (assignment.empty()) {
    return absl::InvalidArgumentError("query must cover at least one row");
  }
  for (const RowFunction& fn : functions) {
    if (fn.table().size() != universe.cardinality()) {
      return absl::InvalidArgumentError(
          "dimension mismatch: row-function table size differs from universe");
    }
  }
  for (size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] >= functions.size()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("row %d references function %d, only %d given", i,
                          assignment[i], functions.size()));
    }
  }

  // Compact to the functions actually referenced, merging equal tables.
  std::vector<RowFunction> kept;
  std::vector<int64_t> remap(functions.size(), -1);
  std::map<std::vector<double>, uint32_t> seen;
  for (uint32_t& f : assignment) {
    if (remap[f] < 0) {
      if (deduplicate) {
        std::vector<double> key(functions[f].table().begin(),
                                functions[f].table().end());
        auto [it, inserted] =
            seen.emplace(std::move(key), static_cast<uint32_t>(kept.size()));
        if (inserted) kept.push_back(functions[f]);
        remap[f] = it->second;
      } else {
        remap[f] = static_cast<int64_t>(kept.size());
        kept.push_back(functions[f]);
      }
    }
    f = static_cast<uint32_t>(remap[f]);
  }
  return StatisticalQuery(universe, std::move(kept), std::move(assignment));
}

double StatisticalQuery::EvaluateRows(std::span<const Row> rows) const {
  CompensatedSum sum;
  for (size_t i = 0; i < rows.size(); ++i) {
    sum.Add(functions_[assignment_[i]](rows[i]));
  }
  return sum.Total() / range_sum_;
}

absl::StatusOr<double> StatisticalQuery::EvaluateHistogram(
    std::span<const uint64_t> counts) const {
  if (!is_linear()) {
    return absl::FailedPreconditionError(
        "histogram evaluation needs a linear query");
  }
  if (counts.size() != universe_.cardinality()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: %d counts for a universe of %d values",
        counts.size(), universe_.cardinality()));
  }
  uint64_t total = 0;
  CompensatedSum sum;
  const RowFunction& phi = functions_[0];
  for (size_t v = 0; v < counts.size(); ++v) {
    total += counts[v];
    sum.Add(static_cast<double>(counts[v]) * phi(static_cast<Row>(v)));
  }
  if (total != size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: counts sum to %d, query has %d rows", total,
        size()));
  }
  return sum.Total() / range_sum_;
}

absl::StatusOr<double> StatisticalQuery::Evaluate(const Database& x) const {
  if (x.universe() != universe_) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: database has %d bits, query expects %d",
        x.universe().bits(), universe_.bits()));
  }
  if (x.size() != size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: database has %d rows, query expects %d", x.size(),
        size()));
  }
  return EvaluateRows(x.rows());
}

absl::StatusOr<StatisticalQuery> MakePredicateQuery(
    DataUniverse universe, size_t n, std::vector<int> conjunct_bits) {
  if (conjunct_bits.empty()) {
    return absl::InvalidArgumentError("predicate needs at least one conjunct");
  }
  if (n == 0) {
    return absl::InvalidArgumentError("query must cover at least one row");
  }
  Row mask = 0;
  for (int bit : conjunct_bits) {
    if (bit < 0 || bit >= universe.bits()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "conjunct attribute %d outside [0, %d)", bit, universe.bits()));
    }
    mask |= Row{1} << bit;
  }
  std::vector<double> table(universe.cardinality());
  for (Row v = 0; v < universe.cardinality(); ++v) {
    table[v] = (v & mask) == mask ? 1.0 : 0.0;
  }
  ASSIGN_OR_RETURN(RowFunction predicate,
                   RowFunction::Create(universe, std::move(table)));
  return StatisticalQuery::Create(universe, {std::move(predicate)},
                                  std::vector<uint32_t>(n, 0));
}

absl::StatusOr<StatisticalQuery> MakeHammingQuery(const Database& z) {
  const DataUniverse universe = z.universe();
  std::vector<RowFunction> functions;
  std::vector<uint32_t> assignment(z.size());
  std::map<Row, uint32_t> index_of;
  for (size_t i = 0; i < z.size(); ++i) {
    auto [it, inserted] =
        index_of.emplace(z[i], static_cast<uint32_t>(functions.size()));
    if (inserted) {
      std::vector<double> table(universe.cardinality(), 1.0);
      table[z[i]] = 0.0;
      ASSIGN_OR_RETURN(RowFunction fn,
                       RowFunction::Create(universe, std::move(table)));
      functions.push_back(std::move(fn));
    }
    assignment[i] = it->second;
  }
  return StatisticalQuery::Create(universe, std::move(functions),
                                  std::move(assignment));
}

absl::StatusOr<StatisticalQuery> GenerateRandomQuery(DataUniverse universe,
                                                     size_t n,
                                                     size_t heterogeneity,
                                                     RandomSource& rng) {
  if (heterogeneity < 1 || heterogeneity > n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "heterogeneity must be in [1, n = %d], got %d", n, heterogeneity));
  }
  if (n % heterogeneity != 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "heterogeneity %d does not divide n = %d", heterogeneity, n));
  }
  if (universe.bits() > kMaxTableBits) {
    return absl::ResourceExhaustedError("universe too large for tables");
  }
  std::vector<RowFunction> functions;
  functions.reserve(heterogeneity);
  while (functions.size() < heterogeneity) {
    std::vector<double> table(universe.cardinality());
    for (double& v : table) v = rng.Uniform();
    const auto [lo_it, hi_it] = std::minmax_element(table.begin(), table.end());
    const double lo = *lo_it;
    const double spread = *hi_it - lo;
    if (!(spread > 0.0)) continue;
    for (double& v : table) v = (v - lo) / spread;
    ASSIGN_OR_RETURN(RowFunction fn,
                     RowFunction::Create(universe, std::move(table)));
    functions.push_back(std::move(fn));
  }
  const size_t block = n / heterogeneity;
  std::vector<uint32_t> assignment(n);
  for (size_t i = 0; i < n; ++i) {
    assignment[i] = static_cast<uint32_t>(i / block);
  }
  return StatisticalQuery::Create(universe, std::move(functions),
                                  std::move(assignment));
}

}  // namespace dpsynth
