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

// Experiment suites: heterogeneity, query-set size and database-size sweeps
// for statistical queries, random-bisection cut scaling on synthetic graphs,
// and a table of analytic bounds. Results are emitted as CSV.
//
// Every run r of a sweep draws from RandomSource(seed).Fork(r), and grid
// point j inside a run from a further Fork, so output depends only on
// (config, seed).

#ifndef DPSYNTH_HARNESS_H_
#define DPSYNTH_HARNESS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpsynth/bounds.h"
#include "dpsynth/core.h"
#include "dpsynth/estimators.h"

namespace dpsynth {

enum class ExperimentKind {
  kHeterogeneity,
  kQuerySetSize,
  kDatabaseScaling,
  kCutScaling,
  kBoundsTable,
};

enum class GraphModel { kErdosRenyi, kPowerLaw };

absl::StatusOr<ExperimentKind> ParseExperimentKind(std::string_view name);
std::string_view ExperimentKindName(ExperimentKind kind);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kHeterogeneity;
  // Database sizes. Sweeps other than kDatabaseScaling use the first entry.
  std::vector<int64_t> n_grid;
  int l = 3;
  double epsilon = 1.0;
  // Queries per set (heterogeneity and database scaling).
  int query_count = 200;
  std::vector<int64_t> heterogeneity_grid;
  std::vector<int64_t> query_set_sizes;
  // Databases per run in the query-set-size sweep; the worst case is taken
  // over all of them.
  int database_count = 1;
  // Independent runs averaged per grid point.
  int trial_count = 20;
  uint64_t seed = 1;
  EstimatorKind estimator = EstimatorKind::kUnbiased;
  ProjectionStrategy projection = ProjectionStrategy::kIntervalClamp;

  std::vector<int64_t> vertex_grid;
  int cut_count = 100;
  GraphModel graph_model = GraphModel::kPowerLaw;
  double average_degree = 20.0;
  double power_law_exponent = 2.5;
  double edge_probability = 0.05;

  // kBoundsTable grid; n comes from n_grid.
  std::vector<int> l_grid;
  std::vector<double> epsilon_grid;

  // Where the CLI writes the CSV; empty means stdout.
  std::string output;

  // Desk-scale defaults for `kind`.
  static ExperimentConfig Defaults(ExperimentKind kind);
  // JSON object with an "experiment" name; absent fields take Defaults().
  static absl::StatusOr<ExperimentConfig> Parse(std::string_view json_text);

  absl::Status Validate() const;
};

struct ResultRow {
  std::string experiment;
  // Name of the swept parameter: "heterogeneity", "query_set_size", "n" or
  // "vertices".
  std::string grid_parameter;
  int64_t grid_value = 0;
  DistortionMeasure measure = DistortionMeasure::kAbsolute;
  // Per run: the largest distortion over the query set. Averaged over runs.
  double worst_case_distortion = 0.0;
  // Standard error of that average.
  double worst_case_stderr = 0.0;
  // Average over runs and queries.
  double mean_distortion = 0.0;
  double analytic_bound = 0.0;
  // Fraction of (run, query) pairs whose distortion is within the bound.
  double bound_compliance = 0.0;
  // Cut scaling only: mean |error| / mean true cut.
  std::optional<double> relative_error;
  int runs = 0;
  uint64_t seed = 0;
};

struct BoundsRow {
  BoundInputs inputs;
  double upper_squared = 0.0;
  double upper_squared_proper = 0.0;
  double upper_absolute = 0.0;
  double upper_absolute_proper = 0.0;
  double lower_asymptotic = 0.0;
  double lower_finite_n = 0.0;
  // Set when inputs.lipschitz is.
  std::optional<double> continuous_upper;
};

absl::StatusOr<BoundsRow> ComputeBoundsRow(const BoundInputs& inputs);

// Ordinary least squares of y on x.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  int points = 0;
};
// Needs at least two distinct x values; the standard error needs three
// points and is 0 otherwise.
absl::StatusOr<SlopeFit> FitLine(std::span<const double> x,
                                 std::span<const double> y);

struct ExperimentResult {
  ExperimentKind experiment = ExperimentKind::kHeterogeneity;
  std::vector<ResultRow> rows;
  std::vector<BoundsRow> bounds;
  // Heterogeneity: per-run worst case against log2(h). Query-set size: per-run
  // worst case against log2(size). Database and cut scaling: log-log fit of
  // the averaged worst case. Absent with fewer than two grid points.
  std::optional<SlopeFit> fit;
};

// `count` rows of rating-like data: codes 0..min(5, 2^l)-1 drawn from a
// fixed skewed distribution; higher codes never occur.
absl::StatusOr<Database> SyntheticRatings(DataUniverse universe, size_t count,
                                          RandomSource& rng);

absl::StatusOr<ExperimentResult> RunHeterogeneitySweep(
    const ExperimentConfig& config);
absl::StatusOr<ExperimentResult> RunQuerySetSizeSweep(
    const ExperimentConfig& config);
absl::StatusOr<ExperimentResult> RunDatabaseScaling(
    const ExperimentConfig& config);
absl::StatusOr<ExperimentResult> RunCutScaling(const ExperimentConfig& config);
absl::StatusOr<ExperimentResult> RunBoundsTable(const ExperimentConfig& config);
// Dispatches on config.experiment after validating.
absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& config);

// RFC 4180, one header line, reals with 9 significant digits.
std::string FormatResultsCsv(const ExperimentResult& result);
std::string FormatBoundsCsv(std::span<const BoundsRow> rows);
// Quotes a field when it contains a comma, quote or line break.
std::string CsvField(std::string_view field);

}  // namespace dpsynth

#endif  // DPSYNTH_HARNESS_H_
