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

// Statistical queries: q(x) = (1 / sum_i c_i) * sum_i phi_i(x_i), where each
// row function phi_i is an arbitrary bounded table over the data universe and
// c_i = max phi_i - min phi_i. Linear queries are the special case in which
// every row uses the same table.

#ifndef DPSYNTH_QUERIES_H_
#define DPSYNTH_QUERIES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "dpsynth/core.h"

namespace dpsynth {

// Row-function tables hold 2^l doubles, so they are limited to smaller
// universes than DataUniverse itself allows.
inline constexpr int kMaxTableBits = 24;

// A dense table of phi(v) for every v in the universe.
class RowFunction {
 public:
  // The table must have exactly 2^l finite entries that are not all equal.
  static absl::StatusOr<RowFunction> Create(DataUniverse universe,
                                            std::vector<double> table);

  double operator()(Row v) const { return table_[v]; }
  std::span<const double> table() const { return table_; }
  double min() const { return min_; }
  double max() const { return max_; }
  double range() const { return max_ - min_; }
  // sum_v phi(v).
  double sum() const { return sum_; }

  friend bool operator==(const RowFunction& a, const RowFunction& b) {
    return a.table_ == b.table_;
  }

 private:
  explicit RowFunction(std::vector<double> table);

  std::vector<double> table_;
  double min_;
  double max_;
  double sum_;
};

class StatisticalQuery {
 public:
  // Row i is evaluated with functions[assignment[i]]. Identical tables are
  // merged when `deduplicate` is set; unused functions are dropped either way.
  static absl::StatusOr<StatisticalQuery> Create(
      DataUniverse universe, std::vector<RowFunction> functions,
      std::vector<uint32_t> assignment, bool deduplicate = true);

  const DataUniverse& universe() const { return universe_; }
  // Number of rows n the query was instantiated for.
  size_t size() const { return assignment_.size(); }

  std::span<const RowFunction> functions() const { return functions_; }
  std::span<const uint32_t> assignment() const { return assignment_; }
  const RowFunction& function_for_row(size_t i) const {
    return functions_[assignment_[i]];
  }

  // Number of distinct row functions; 1 iff the query is linear.
  size_t heterogeneity() const { return heterogeneity_; }
  bool is_linear() const { return heterogeneity_ == 1; }

  // a = min_i a_i, b = max_i b_i, c = min_i c_i.
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  double min_range() const { return min_range_; }
  // sum_i c_i.
  double range_sum() const { return range_sum_; }
  // C_phi = (1 / sum_i c_i) sum_i sum_v phi_i(v).
  double centering_constant() const { return centering_; }
  // Extremes of q over all databases: sum_i a_i / sum_i c_i and
  // sum_i b_i / sum_i c_i. They always differ by exactly 1.
  double min_value() const { return min_value_; }
  double max_value() const { return max_value_; }

  absl::StatusOr<double> Evaluate(const Database& x) const;
  // Evaluate() without shape checks; `rows` must have size() valid entries.
  double EvaluateRows(std::span<const Row> rows) const;
  // Linear queries only: q from per-value row counts, as produced by
  // RowHistogram(). Counts must sum to size().
  absl::StatusOr<double> EvaluateHistogram(
      std::span<const uint64_t> counts) const;

 private:
  StatisticalQuery(DataUniverse universe, std::vector<RowFunction> functions,
                   std::vector<uint32_t> assignment);

  DataUniverse universe_;
  std::vector<RowFunction> functions_;
  std::vector<uint32_t> assignment_;
  size_t heterogeneity_ = 0;
  double lower_ = 0.0;
  double upper_ = 0.0;
  double min_range_ = 0.0;
  double range_sum_ = 0.0;
  double centering_ = 0.0;
  double min_value_ = 0.0;
  double max_value_ = 0.0;
};

inline double CenteringConstant(const StatisticalQuery& q) {
  return q.centering_constant();
}

// Fraction of rows whose attributes in `conjunct_bits` are all 1.
absl::StatusOr<StatisticalQuery> MakePredicateQuery(
    DataUniverse universe, size_t n, std::vector<int> conjunct_bits);

// q_z(x) = d(x, z) / n.
absl::StatusOr<StatisticalQuery> MakeHammingQuery(const Database& z);

// `heterogeneity` independent tables with i.i.d. Uniform[0, 1) entries, each
// mapped affinely onto [0, 1] so that a_i = 0 and b_i = c_i = 1. Rows are split
// into `heterogeneity` contiguous equal blocks, block j using table j.
absl::StatusOr<StatisticalQuery> GenerateRandomQuery(DataUniverse universe,
                                                     size_t n,
                                                     size_t heterogeneity,
                                                     RandomSource& rng);

}  // namespace dpsynth

#endif  // DPSYNTH_QUERIES_H_
