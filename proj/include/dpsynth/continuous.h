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

// Statistical queries over databases with rows in [0, 1]. Rows are
// discretized to k bits, released through the discrete mechanism, and
// answered with the interval-clamped proper estimator on the induced grid
// query. Choosing 2^{2k} ~ sqrt(n) balances discretization bias against the
// mechanism's variance, which grows with 2^k.

#ifndef DPSYNTH_CONTINUOUS_H_
#define DPSYNTH_CONTINUOUS_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "dpsynth/core.h"
#include "dpsynth/queries.h"

namespace dpsynth {

class ContinuousDatabase {
 public:
  // Every row must lie in [0, 1].
  static absl::StatusOr<ContinuousDatabase> Create(std::vector<double> rows);

  std::span<const double> rows() const { return rows_; }
  size_t size() const { return rows_.size(); }

 private:
  explicit ContinuousDatabase(std::vector<double> rows)
      : rows_(std::move(rows)) {}
  std::vector<double> rows_;
};

// One real per line; an optional non-numeric first line is a header, blank
// lines and '#' comments are skipped. Values outside [0, 1] are rejected.
absl::StatusOr<ContinuousDatabase> ParseContinuousCsv(std::string_view text);

// Number of grid points used to spot-check the Lipschitz constant.
inline constexpr int kLipschitzCheckPoints = 10'000;

struct LipschitzRowFunction {
  std::function<double(double)> phi;
  double lipschitz = 0.0;
  // Declared min and max of phi over [0, 1].
  double min = 0.0;
  double max = 1.0;
};

// A statistical query whose row functions are L-Lipschitz on [0, 1]. With
// several functions, rows are split into equal contiguous blocks.
class LipschitzQuery {
 public:
  // Checks on a kLipschitzCheckPoints grid that each phi respects its
  // declared constant and range, and that max > min.
  static absl::StatusOr<LipschitzQuery> Create(
      std::vector<LipschitzRowFunction> functions);

  std::span<const LipschitzRowFunction> functions() const { return functions_; }
  // Largest declared Lipschitz constant.
  double lipschitz() const;
  // Class constants over the declared ranges.
  double lower() const;
  double upper() const;
  double min_range() const;

  // Function index for row i of an n-row database.
  absl::StatusOr<size_t> FunctionForRow(size_t i, size_t n) const;

  // (1 / sum_i c_i) sum_i phi_i(x_i) with the declared c_i = max - min.
  absl::StatusOr<double> Evaluate(const ContinuousDatabase& x) const;

 private:
  explicit LipschitzQuery(std::vector<LipschitzRowFunction> functions)
      : functions_(std::move(functions)) {}
  std::vector<LipschitzRowFunction> functions_;
};

// k = max(1, round(log2(n) / 4)), the integer closest to the solution of
// 2^{2k} = sqrt(n).
int ChooseDiscretizationBits(int64_t n);

// Row x_i becomes code floor(x_i 2^k), with x_i = 1 placed in the top cell.
absl::StatusOr<Database> Discretize(const ContinuousDatabase& x, int k);

// Value represented by a code: its cell's left endpoint code / 2^k.
inline double CellValue(Row code, int k) { return std::ldexp(code, -k); }

// The statistical query on the k-bit grid whose table for row i is
// phi_i(code / 2^k). Fails if some grid table is constant or if a grid range
// strays from the declared range by more than L (1 - 2^{-k}).
absl::StatusOr<StatisticalQuery> InduceGridQuery(const LipschitzQuery& q, int k,
                                                 size_t n);

struct ContinuousRelease {
  // Estimate of q(x) in q's own normalization.
  double estimate = 0.0;
  int bits = 0;
  // Instance constants of the induced grid query (a, b, c), reported next to
  // the declared continuous ones.
  double grid_lower = 0.0;
  double grid_upper = 0.0;
  double grid_min_range = 0.0;
};

// Discretize with k = ChooseDiscretizationBits(n), release through the
// mechanism at l = k, and answer with the interval-clamped proper estimator,
// rescaled from the grid query's normalization to q's. eps must be > 0.
absl::StatusOr<ContinuousRelease> ReleaseContinuous(const ContinuousDatabase& x,
                                                    const LipschitzQuery& q,
                                                    double epsilon,
                                                    RandomSource& rng);

}  // namespace dpsynth

#endif  // DPSYNTH_CONTINUOUS_H_
