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

#include "dpsynth/harness.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dpsynth/graph.h"
#include "dpsynth/mechanism.h"
#include "dpsynth/queries.h"
#include "dpsynth/status_macros.h"
#include "json.hpp"

namespace dpsynth {

namespace {

using json = nlohmann::json;

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 5>
    kExperimentNames = {{
        {ExperimentKind::kHeterogeneity, "heterogeneity"},
        {ExperimentKind::kQuerySetSize, "query_set_size"},
        {ExperimentKind::kDatabaseScaling, "database_scaling"},
        {ExperimentKind::kCutScaling, "cut_scaling"},
        {ExperimentKind::kBoundsTable, "bounds_table"},
    }};

// Roughly the star-rating mix of a large public movie-rating corpus.
constexpr std::array<double, 5> kRatingWeights = {0.046, 0.101, 0.287, 0.336,
                                                  0.230};

std::vector<int64_t> PowersOfTwo(int from, int to) {
  std::vector<int64_t> out;
  for (int e = from; e <= to; ++e) out.push_back(int64_t{1} << e);
  return out;
}

std::string Real(double v) { return absl::StrFormat("%.9g", v); }

// Accumulates per-run worst cases and all individual distortions for one grid
// point.
class GridPointStats {
 public:
  void BeginRun() { run_worst_.push_back(0.0); }
  void Add(double distortion, double bound) {
    run_worst_.back() = std::max(run_worst_.back(), distortion);
    total_.Add(distortion);
    ++count_;
    if (distortion <= bound) ++compliant_;
  }
  std::span<const double> run_worst() const { return run_worst_; }

  ResultRow Finish(std::string experiment, std::string parameter, int64_t value,
                   DistortionMeasure measure, double bound,
                   uint64_t seed) const {
    ResultRow row;
    row.experiment = std::move(experiment);
    row.grid_parameter = std::move(parameter);
    row.grid_value = value;
    row.measure = measure;
    row.runs = static_cast<int>(run_worst_.size());
    row.seed = seed;
    row.analytic_bound = bound;
    CompensatedSum worst;
    for (double w : run_worst_) worst.Add(w);
    const double runs = static_cast<double>(run_worst_.size());
    row.worst_case_distortion = worst.Total() / runs;
    if (run_worst_.size() > 1) {
      CompensatedSum squares;
      for (double w : run_worst_) {
        squares.Add((w - row.worst_case_distortion) *
                    (w - row.worst_case_distortion));
      }
      row.worst_case_stderr = std::sqrt(squares.Total() / (runs - 1) / runs);
    }
    row.mean_distortion = total_.Total() / static_cast<double>(count_);
    row.bound_compliance =
        static_cast<double>(compliant_) / static_cast<double>(count_);
    return row;
  }

 private:
  std::vector<double> run_worst_;
  CompensatedSum total_;
  int64_t count_ = 0;
  int64_t compliant_ = 0;
};

double Distortion(double estimate, double truth, DistortionMeasure measure) {
  const double diff = estimate - truth;
  return measure == DistortionMeasure::kSquared ? diff * diff : std::abs(diff);
}

absl::StatusOr<double> Estimate(const StatisticalQuery& q, double raw,
                                const MechanismParams& params,
                                const ExperimentConfig& config) {
  const double unbiased = DebiasQueryValue(q, raw, params);
  if (config.estimator == EstimatorKind::kUnbiased) return unbiased;
  return ProjectProper(q, unbiased, config.projection);
}

BoundInputs NormalizedInputs(int64_t n, const ExperimentConfig& config) {
  BoundInputs in;
  in.n = n;
  in.l = config.l;
  in.epsilon = config.epsilon;
  return in;
}

bool HasTwoDistinct(std::span<const int64_t> grid) {
  return std::adjacent_find(grid.begin(), grid.end(), std::not_equal_to<>()) !=
         grid.end();
}

// Fit of per-run worst cases against log2 of the grid values. Omitted when
// the grid has a single distinct value.
absl::StatusOr<std::optional<SlopeFit>> FitPerRun(
    std::span<const int64_t> grid, std::span<const GridPointStats> stats) {
  if (!HasTwoDistinct(grid)) return std::optional<SlopeFit>();
  std::vector<double> x, y;
  for (size_t g = 0; g < grid.size(); ++g) {
    for (double w : stats[g].run_worst()) {
      x.push_back(std::log2(static_cast<double>(grid[g])));
      y.push_back(w);
    }
  }
  ASSIGN_OR_RETURN(const SlopeFit fit, FitLine(x, y));
  return std::optional<SlopeFit>(fit);
}

absl::StatusOr<std::optional<SlopeFit>> FitLogLog(
    std::span<const ResultRow> rows) {
  std::vector<int64_t> grid;
  for (const ResultRow& row : rows) grid.push_back(row.grid_value);
  if (!HasTwoDistinct(grid)) return std::optional<SlopeFit>();
  std::vector<double> x, y;
  for (const ResultRow& row : rows) {
    if (!(row.worst_case_distortion > 0.0)) {
      return absl::FailedPreconditionError(
          "log-log fit needs positive worst-case distortions");
    }
    x.push_back(std::log10(static_cast<double>(row.grid_value)));
    y.push_back(std::log10(row.worst_case_distortion));
  }
  ASSIGN_OR_RETURN(const SlopeFit fit, FitLine(x, y));
  return std::optional<SlopeFit>(fit);
}

template <typename T>
absl::Status ReadField(const json& doc, const char* key, T& out) {
  if (!doc.contains(key)) return absl::OkStatus();
  try {
    out = doc.at(key).get<T>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("config field \"", key, "\": ", e.what()));
  }
  return absl::OkStatus();
}

absl::Status CheckGrid(const char* name, std::span<const int64_t> grid,
                       int64_t min_value) {
  if (grid.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(name, " is empty"));
  }
  for (int64_t v : grid) {
    if (v < min_value) {
      return absl::InvalidArgumentError(
          absl::StrCat(name, " entry ", v, " is below ", min_value));
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<ExperimentKind> ParseExperimentKind(std::string_view name) {
  for (const auto& [kind, text] : kExperimentNames) {
    if (text == name) return kind;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown experiment \"", std::string(name), "\""));
}

std::string_view ExperimentKindName(ExperimentKind kind) {
  for (const auto& [k, text] : kExperimentNames) {
    if (k == kind) return text;
  }
  return "unknown";
}

ExperimentConfig ExperimentConfig::Defaults(ExperimentKind kind) {
  ExperimentConfig config;
  config.experiment = kind;
  switch (kind) {
    case ExperimentKind::kHeterogeneity:
      config.n_grid = {4096};
      config.heterogeneity_grid = PowersOfTwo(0, 11);
      break;
    case ExperimentKind::kQuerySetSize:
      config.n_grid = {1500};
      config.query_set_sizes = {64, 1024, 16384};
      break;
    case ExperimentKind::kDatabaseScaling:
      config.n_grid = PowersOfTwo(10, 16);
      break;
    case ExperimentKind::kCutScaling:
      config.vertex_grid = {64, 128, 256, 512};
      config.trial_count = 10;
      break;
    case ExperimentKind::kBoundsTable:
      config.n_grid = {100, 1000, 10000, 1000000};
      config.l_grid = {1, 2, 3, 4, 5, 6, 7, 8};
      config.epsilon_grid = {0.1, 0.5, 1.0, 2.0, 5.0};
      break;
  }
  return config;
}

absl::StatusOr<ExperimentConfig> ExperimentConfig::Parse(
    std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("config: ", e.what()));
  }
  if (!doc.is_object() || !doc.contains("experiment") ||
      !doc["experiment"].is_string()) {
    return absl::InvalidArgumentError(
        "config must be an object with a string \"experiment\" field");
  }
  ASSIGN_OR_RETURN(const ExperimentKind kind,
                   ParseExperimentKind(doc["experiment"].get<std::string>()));
  ExperimentConfig config = Defaults(kind);

  static const std::set<std::string> kKnown = {"experiment",
                                               "n",
                                               "n_grid",
                                               "l",
                                               "epsilon",
                                               "query_count",
                                               "heterogeneity_grid",
                                               "query_set_sizes",
                                               "database_count",
                                               "trial_count",
                                               "seed",
                                               "estimator",
                                               "projection",
                                               "vertex_grid",
                                               "cut_count",
                                               "graph_model",
                                               "average_degree",
                                               "power_law_exponent",
                                               "edge_probability",
                                               "l_grid",
                                               "epsilon_grid",
                                               "output"};
  for (const auto& [key, value] : doc.items()) {
    if (!kKnown.contains(key)) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown config field \"", key, "\""));
    }
  }

  if (doc.contains("n")) {
    int64_t n = 0;
    RETURN_IF_ERROR(ReadField(doc, "n", n));
    config.n_grid = {n};
  }
  RETURN_IF_ERROR(ReadField(doc, "n_grid", config.n_grid));
  RETURN_IF_ERROR(ReadField(doc, "l", config.l));
  RETURN_IF_ERROR(ReadField(doc, "epsilon", config.epsilon));
  RETURN_IF_ERROR(ReadField(doc, "query_count", config.query_count));
  RETURN_IF_ERROR(
      ReadField(doc, "heterogeneity_grid", config.heterogeneity_grid));
  RETURN_IF_ERROR(ReadField(doc, "query_set_sizes", config.query_set_sizes));
  RETURN_IF_ERROR(ReadField(doc, "database_count", config.database_count));
  RETURN_IF_ERROR(ReadField(doc, "trial_count", config.trial_count));
  RETURN_IF_ERROR(ReadField(doc, "seed", config.seed));
  RETURN_IF_ERROR(ReadField(doc, "vertex_grid", config.vertex_grid));
  RETURN_IF_ERROR(ReadField(doc, "cut_count", config.cut_count));
  RETURN_IF_ERROR(ReadField(doc, "average_degree", config.average_degree));
  RETURN_IF_ERROR(
      ReadField(doc, "power_law_exponent", config.power_law_exponent));
  RETURN_IF_ERROR(ReadField(doc, "edge_probability", config.edge_probability));
  RETURN_IF_ERROR(ReadField(doc, "l_grid", config.l_grid));
  RETURN_IF_ERROR(ReadField(doc, "epsilon_grid", config.epsilon_grid));
  RETURN_IF_ERROR(ReadField(doc, "output", config.output));

  std::string text;
  if (doc.contains("estimator")) {
    RETURN_IF_ERROR(ReadField(doc, "estimator", text));
    if (text == "unbiased") {
      config.estimator = EstimatorKind::kUnbiased;
    } else if (text == "proper") {
      config.estimator = EstimatorKind::kProper;
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("estimator must be unbiased or proper, got ", text));
    }
  }
  if (doc.contains("projection")) {
    RETURN_IF_ERROR(ReadField(doc, "projection", text));
    if (text == "interval_clamp") {
      config.projection = ProjectionStrategy::kIntervalClamp;
    } else if (text == "exact_range") {
      config.projection = ProjectionStrategy::kExactRange;
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          "projection must be interval_clamp or exact_range, got ", text));
    }
  }
  if (doc.contains("graph_model")) {
    RETURN_IF_ERROR(ReadField(doc, "graph_model", text));
    if (text == "erdos_renyi") {
      config.graph_model = GraphModel::kErdosRenyi;
    } else if (text == "power_law") {
      config.graph_model = GraphModel::kPowerLaw;
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          "graph_model must be erdos_renyi or power_law, got ", text));
    }
  }
  RETURN_IF_ERROR(config.Validate());
  return config;
}

absl::Status ExperimentConfig::Validate() const {
  if (trial_count < 1) {
    return absl::InvalidArgumentError("trial_count must be at least 1");
  }
  if (experiment == ExperimentKind::kBoundsTable) {
    RETURN_IF_ERROR(CheckGrid("n_grid", n_grid, 1));
    if (l_grid.empty() || epsilon_grid.empty()) {
      return absl::InvalidArgumentError("l_grid and epsilon_grid must be set");
    }
    for (int bits : l_grid) {
      if (bits < 1 || bits > kMaxAttributeBits) {
        return absl::InvalidArgumentError(
            absl::StrCat("l_grid entry ", bits, " is out of range"));
      }
    }
    for (double e : epsilon_grid) {
      if (!(e > 0.0) || !std::isfinite(e)) {
        return absl::InvalidArgumentError(
            absl::StrCat("epsilon_grid entry ", e, " must be positive"));
      }
    }
    return absl::OkStatus();
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        "epsilon must be positive and finite; the estimators divide by "
        "1 - e^{-eps}");
  }
  if (experiment == ExperimentKind::kCutScaling) {
    RETURN_IF_ERROR(CheckGrid("vertex_grid", vertex_grid, 2));
    for (int64_t v : vertex_grid) {
      if (static_cast<uint64_t>(v) * static_cast<uint64_t>(v) >
          kMaxGraphPairs) {
        return absl::InvalidArgumentError(
            absl::StrCat("vertex_grid entry ", v, " exceeds the pair cap"));
      }
    }
    if (cut_count < 1) {
      return absl::InvalidArgumentError("cut_count must be at least 1");
    }
    return absl::OkStatus();
  }

  if (l < 1 || l > kMaxTableBits) {
    return absl::InvalidArgumentError(
        absl::StrFormat("l must be in [1, %d]", kMaxTableBits));
  }
  RETURN_IF_ERROR(CheckGrid("n_grid", n_grid, 1));
  switch (experiment) {
    case ExperimentKind::kHeterogeneity:
      if (query_count < 1) {
        return absl::InvalidArgumentError("query set is empty");
      }
      RETURN_IF_ERROR(CheckGrid("heterogeneity_grid", heterogeneity_grid, 1));
      for (int64_t h : heterogeneity_grid) {
        if (h > n_grid[0] || n_grid[0] % h != 0) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "heterogeneity %d does not divide n = %d", h, n_grid[0]));
        }
      }
      break;
    case ExperimentKind::kQuerySetSize:
      RETURN_IF_ERROR(CheckGrid("query_set_sizes", query_set_sizes, 1));
      if (!std::is_sorted(query_set_sizes.begin(), query_set_sizes.end())) {
        return absl::InvalidArgumentError("query_set_sizes must ascend");
      }
      if (database_count < 1) {
        return absl::InvalidArgumentError("database_count must be at least 1");
      }
      break;
    case ExperimentKind::kDatabaseScaling:
      if (query_count < 1) {
        return absl::InvalidArgumentError("query set is empty");
      }
      break;
    default:
      break;
  }
  return absl::OkStatus();
}

absl::StatusOr<BoundsRow> ComputeBoundsRow(const BoundInputs& inputs) {
  BoundsRow row;
  row.inputs = inputs;
  ASSIGN_OR_RETURN(row.upper_squared, UpperBoundSquared(inputs, false));
  ASSIGN_OR_RETURN(row.upper_squared_proper, UpperBoundSquared(inputs, true));
  ASSIGN_OR_RETURN(row.upper_absolute, UpperBoundAbsolute(inputs, false));
  ASSIGN_OR_RETURN(row.upper_absolute_proper, UpperBoundAbsolute(inputs, true));
  ASSIGN_OR_RETURN(row.lower_asymptotic, LowerBoundSquaredAsymptotic(inputs));
  ASSIGN_OR_RETURN(row.lower_finite_n, LowerBoundFiniteN(inputs));
  if (inputs.lipschitz.has_value()) {
    ASSIGN_OR_RETURN(const double continuous, ContinuousUpperBound(inputs));
    row.continuous_upper = continuous;
  }
  return row;
}

absl::StatusOr<SlopeFit> FitLine(std::span<const double> x,
                                 std::span<const double> y) {
  if (x.size() != y.size()) {
    return absl::InvalidArgumentError("dimension mismatch: x and y sizes");
  }
  const auto m = static_cast<double>(x.size());
  CompensatedSum sx, sy;
  for (size_t i = 0; i < x.size(); ++i) {
    sx.Add(x[i]);
    sy.Add(y[i]);
  }
  const double mx = sx.Total() / m;
  const double my = sy.Total() / m;
  CompensatedSum sxx, sxy;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx.Add((x[i] - mx) * (x[i] - mx));
    sxy.Add((x[i] - mx) * (y[i] - my));
  }
  if (x.size() < 2 || !(sxx.Total() > 0.0)) {
    return absl::InvalidArgumentError(
        "line fit needs at least two distinct x values");
  }
  SlopeFit fit;
  fit.points = static_cast<int>(x.size());
  fit.slope = sxy.Total() / sxx.Total();
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    CompensatedSum residuals;
    for (size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - (fit.intercept + fit.slope * x[i]);
      residuals.Add(r * r);
    }
    fit.slope_stderr = std::sqrt(residuals.Total() / (m - 2) / sxx.Total());
  }
  return fit;
}

absl::StatusOr<Database> SyntheticRatings(DataUniverse universe, size_t count,
                                          RandomSource& rng) {
  const size_t categories =
      std::min<size_t>(kRatingWeights.size(), universe.cardinality());
  std::vector<double> cdf(categories);
  double total = 0.0;
  for (size_t c = 0; c < categories; ++c) total += kRatingWeights[c];
  double running = 0.0;
  for (size_t c = 0; c < categories; ++c) {
    running += kRatingWeights[c] / total;
    cdf[c] = running;
  }
  cdf.back() = 1.0;
  std::vector<Row> rows(count);
  for (Row& r : rows) {
    const double u = rng.Uniform();
    r = static_cast<Row>(std::upper_bound(cdf.begin(), cdf.end(), u) -
                         cdf.begin());
  }
  return Database::Create(universe, std::move(rows));
}

absl::StatusOr<ExperimentResult> RunHeterogeneitySweep(
    const ExperimentConfig& config) {
  RETURN_IF_ERROR(config.Validate());
  ASSIGN_OR_RETURN(const DataUniverse universe, DataUniverse::Create(config.l));
  ASSIGN_OR_RETURN(const MechanismParams params,
                   MechanismParams::Create(config.epsilon, universe));
  const int64_t n = config.n_grid[0];
  const auto& grid = config.heterogeneity_grid;
  std::vector<GridPointStats> stats(grid.size());
  const RandomSource root(config.seed);
  ASSIGN_OR_RETURN(
      const double bound,
      UpperBoundAbsolute(NormalizedInputs(n, config),
                         config.estimator == EstimatorKind::kProper));

  for (int run = 0; run < config.trial_count; ++run) {
    const RandomSource run_rng = root.Fork(run);
    RandomSource db_rng = run_rng.Fork(0);
    ASSIGN_OR_RETURN(const Database x, SyntheticRatings(universe, n, db_rng));
    for (size_t g = 0; g < grid.size(); ++g) {
      RandomSource rng = run_rng.Fork(1 + g);
      ASSIGN_OR_RETURN(const Database y, SampleSynthetic(x, params, rng));
      stats[g].BeginRun();
      for (int k = 0; k < config.query_count; ++k) {
        ASSIGN_OR_RETURN(const StatisticalQuery q,
                         GenerateRandomQuery(universe, n, grid[g], rng));
        const double truth = q.EvaluateRows(x.rows());
        ASSIGN_OR_RETURN(const double estimate,
                         Estimate(q, q.EvaluateRows(y.rows()), params, config));
        stats[g].Add(Distortion(estimate, truth, DistortionMeasure::kAbsolute),
                     bound);
      }
    }
  }

  ExperimentResult result;
  result.experiment = config.experiment;
  for (size_t g = 0; g < grid.size(); ++g) {
    result.rows.push_back(stats[g].Finish("heterogeneity", "heterogeneity",
                                          grid[g], DistortionMeasure::kAbsolute,
                                          bound, config.seed));
  }
  ASSIGN_OR_RETURN(result.fit, FitPerRun(grid, stats));
  return result;
}

absl::StatusOr<ExperimentResult> RunQuerySetSizeSweep(
    const ExperimentConfig& config) {
  RETURN_IF_ERROR(config.Validate());
  ASSIGN_OR_RETURN(const DataUniverse universe, DataUniverse::Create(config.l));
  ASSIGN_OR_RETURN(const MechanismParams params,
                   MechanismParams::Create(config.epsilon, universe));
  const int64_t n = config.n_grid[0];
  const auto& grid = config.query_set_sizes;
  std::vector<GridPointStats> stats(grid.size());
  const RandomSource root(config.seed);
  ASSIGN_OR_RETURN(
      const double bound,
      UpperBoundAbsolute(NormalizedInputs(n, config),
                         config.estimator == EstimatorKind::kProper));

  for (int run = 0; run < config.trial_count; ++run) {
    const RandomSource run_rng = root.Fork(run);
    for (size_t g = 0; g < grid.size(); ++g) {
      RandomSource rng = run_rng.Fork(1 + g);
      std::vector<std::vector<uint64_t>> truth_counts, released_counts;
      for (int d = 0; d < config.database_count; ++d) {
        ASSIGN_OR_RETURN(const Database x, SyntheticRatings(universe, n, rng));
        ASSIGN_OR_RETURN(const Database y, SampleSynthetic(x, params, rng));
        truth_counts.push_back(RowHistogram(x));
        released_counts.push_back(RowHistogram(y));
      }
      stats[g].BeginRun();
      for (int64_t k = 0; k < grid[g]; ++k) {
        ASSIGN_OR_RETURN(const StatisticalQuery q,
                         GenerateRandomQuery(universe, n, 1, rng));
        for (int d = 0; d < config.database_count; ++d) {
          ASSIGN_OR_RETURN(const double truth,
                           q.EvaluateHistogram(truth_counts[d]));
          ASSIGN_OR_RETURN(const double raw,
                           q.EvaluateHistogram(released_counts[d]));
          ASSIGN_OR_RETURN(const double estimate,
                           Estimate(q, raw, params, config));
          stats[g].Add(
              Distortion(estimate, truth, DistortionMeasure::kAbsolute), bound);
        }
      }
    }
  }

  ExperimentResult result;
  result.experiment = config.experiment;
  for (size_t g = 0; g < grid.size(); ++g) {
    result.rows.push_back(stats[g].Finish("query_set_size", "query_set_size",
                                          grid[g], DistortionMeasure::kAbsolute,
                                          bound, config.seed));
  }
  ASSIGN_OR_RETURN(result.fit, FitPerRun(grid, stats));
  return result;
}

absl::StatusOr<ExperimentResult> RunDatabaseScaling(
    const ExperimentConfig& config) {
  RETURN_IF_ERROR(config.Validate());
  ASSIGN_OR_RETURN(const DataUniverse universe, DataUniverse::Create(config.l));
  ASSIGN_OR_RETURN(const MechanismParams params,
                   MechanismParams::Create(config.epsilon, universe));
  const auto& grid = config.n_grid;
  const int64_t largest = *std::max_element(grid.begin(), grid.end());
  std::vector<GridPointStats> stats(grid.size());
  std::vector<double> bounds(grid.size());
  for (size_t g = 0; g < grid.size(); ++g) {
    ASSIGN_OR_RETURN(
        bounds[g],
        UpperBoundSquared(NormalizedInputs(grid[g], config),
                          config.estimator == EstimatorKind::kProper));
  }
  const RandomSource root(config.seed);

  for (int run = 0; run < config.trial_count; ++run) {
    const RandomSource run_rng = root.Fork(run);
    // One query set per run, shared by every database size.
    RandomSource query_rng = run_rng.Fork(0);
    std::vector<RowFunction> tables;
    for (int k = 0; k < config.query_count; ++k) {
      ASSIGN_OR_RETURN(const StatisticalQuery one,
                       GenerateRandomQuery(universe, 1, 1, query_rng));
      tables.push_back(one.functions()[0]);
    }
    // Smaller databases are prefixes of the largest one.
    RandomSource db_rng = run_rng.Fork(1);
    ASSIGN_OR_RETURN(const Database population,
                     SyntheticRatings(universe, largest, db_rng));
    for (size_t g = 0; g < grid.size(); ++g) {
      RandomSource rng = run_rng.Fork(2 + g);
      const auto rows = population.rows().first(grid[g]);
      ASSIGN_OR_RETURN(const Database x,
                       Database::Create(universe, {rows.begin(), rows.end()}));
      ASSIGN_OR_RETURN(const Database y, SampleSynthetic(x, params, rng));
      const std::vector<uint64_t> truth_counts = RowHistogram(x);
      const std::vector<uint64_t> released_counts = RowHistogram(y);
      stats[g].BeginRun();
      for (const RowFunction& table : tables) {
        ASSIGN_OR_RETURN(
            const StatisticalQuery q,
            StatisticalQuery::Create(universe, {table},
                                     std::vector<uint32_t>(grid[g], 0)));
        ASSIGN_OR_RETURN(const double truth, q.EvaluateHistogram(truth_counts));
        ASSIGN_OR_RETURN(const double raw,
                         q.EvaluateHistogram(released_counts));
        ASSIGN_OR_RETURN(const double estimate,
                         Estimate(q, raw, params, config));
        stats[g].Add(Distortion(estimate, truth, DistortionMeasure::kSquared),
                     bounds[g]);
      }
    }
  }

  ExperimentResult result;
  result.experiment = config.experiment;
  for (size_t g = 0; g < grid.size(); ++g) {
    result.rows.push_back(stats[g].Finish("database_scaling", "n", grid[g],
                                          DistortionMeasure::kSquared,
                                          bounds[g], config.seed));
  }
  ASSIGN_OR_RETURN(result.fit, FitLogLog(result.rows));
  return result;
}

absl::StatusOr<ExperimentResult> RunCutScaling(const ExperimentConfig& config) {
  RETURN_IF_ERROR(config.Validate());
  const auto& grid = config.vertex_grid;
  std::vector<GridPointStats> stats(grid.size());
  std::vector<double> bounds(grid.size());
  std::vector<CompensatedSum> error_sums(grid.size()), cut_sums(grid.size());
  for (size_t g = 0; g < grid.size(); ++g) {
    ASSIGN_OR_RETURN(bounds[g], CutBound(grid[g] / 2, grid[g] - grid[g] / 2,
                                         config.epsilon));
  }
  const CutEstimate kind = config.estimator == EstimatorKind::kProper
                               ? CutEstimate::kClamped
                               : CutEstimate::kUnbiased;
  const RandomSource root(config.seed);

  for (int run = 0; run < config.trial_count; ++run) {
    const RandomSource run_rng = root.Fork(run);
    for (size_t g = 0; g < grid.size(); ++g) {
      RandomSource rng = run_rng.Fork(1 + g);
      const auto vertices = static_cast<uint32_t>(grid[g]);
      absl::StatusOr<Graph> graph =
          config.graph_model == GraphModel::kPowerLaw
              ? PowerLawGraph(vertices,
                              std::min(config.average_degree, vertices - 1.0),
                              config.power_law_exponent, rng)
              : ErdosRenyiGraph(vertices, config.edge_probability, rng);
      if (!graph.ok()) return graph.status();
      ASSIGN_OR_RETURN(const Database y,
                       ReleaseGraph(*graph, config.epsilon, rng));
      stats[g].BeginRun();
      for (int k = 0; k < config.cut_count; ++k) {
        ASSIGN_OR_RETURN(const CutQuery cut, RandomBisectionCut(vertices, rng));
        ASSIGN_OR_RETURN(const int64_t truth, CutValue(*graph, cut));
        ASSIGN_OR_RETURN(const double estimate,
                         AnswerCut(y, cut, config.epsilon, kind));
        const double error = std::abs(estimate - static_cast<double>(truth));
        stats[g].Add(error, bounds[g]);
        error_sums[g].Add(error);
        cut_sums[g].Add(static_cast<double>(truth));
      }
    }
  }

  ExperimentResult result;
  result.experiment = config.experiment;
  for (size_t g = 0; g < grid.size(); ++g) {
    ResultRow row =
        stats[g].Finish("cut_scaling", "vertices", grid[g],
                        DistortionMeasure::kAbsolute, bounds[g], config.seed);
    if (cut_sums[g].Total() > 0.0) {
      row.relative_error = error_sums[g].Total() / cut_sums[g].Total();
    }
    result.rows.push_back(std::move(row));
  }
  ASSIGN_OR_RETURN(result.fit, FitLogLog(result.rows));
  return result;
}

absl::StatusOr<ExperimentResult> RunBoundsTable(
    const ExperimentConfig& config) {
  RETURN_IF_ERROR(config.Validate());
  ExperimentResult result;
  result.experiment = config.experiment;
  for (int64_t n : config.n_grid) {
    for (int bits : config.l_grid) {
      for (double epsilon : config.epsilon_grid) {
        BoundInputs in;
        in.n = n;
        in.l = bits;
        in.epsilon = epsilon;
        ASSIGN_OR_RETURN(BoundsRow row, ComputeBoundsRow(in));
        result.bounds.push_back(std::move(row));
      }
    }
  }
  return result;
}

absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& config) {
  switch (config.experiment) {
    case ExperimentKind::kHeterogeneity:
      return RunHeterogeneitySweep(config);
    case ExperimentKind::kQuerySetSize:
      return RunQuerySetSizeSweep(config);
    case ExperimentKind::kDatabaseScaling:
      return RunDatabaseScaling(config);
    case ExperimentKind::kCutScaling:
      return RunCutScaling(config);
    case ExperimentKind::kBoundsTable:
      return RunBoundsTable(config);
  }
  return absl::InvalidArgumentError("unknown experiment");
}

std::string CsvField(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string FormatResultsCsv(const ExperimentResult& result) {
  if (result.experiment == ExperimentKind::kBoundsTable) {
    return FormatBoundsCsv(result.bounds);
  }
  std::string out =
      "experiment,grid_parameter,grid_value,measure,worst_case_distortion,"
      "worst_case_stderr,mean_distortion,analytic_bound,bound_compliance,"
      "relative_error,runs,seed\r\n";
  for (const ResultRow& row : result.rows) {
    absl::StrAppend(
        &out, CsvField(row.experiment), ",", CsvField(row.grid_parameter), ",",
        row.grid_value, ",",
        row.measure == DistortionMeasure::kSquared ? "squared" : "absolute",
        ",", Real(row.worst_case_distortion), ",", Real(row.worst_case_stderr),
        ",", Real(row.mean_distortion), ",", Real(row.analytic_bound), ",",
        Real(row.bound_compliance), ",",
        row.relative_error.has_value() ? Real(*row.relative_error) : "", ",",
        row.runs, ",", row.seed, "\r\n");
  }
  return out;
}

std::string FormatBoundsCsv(std::span<const BoundsRow> rows) {
  std::string out =
      "n,l,epsilon,a,b,c,lipschitz,upper_squared,upper_squared_proper,"
      "upper_absolute,upper_absolute_proper,lower_asymptotic,lower_finite_n,"
      "continuous_upper\r\n";
  for (const BoundsRow& row : rows) {
    const BoundInputs& in = row.inputs;
    absl::StrAppend(
        &out, in.n, ",", in.l, ",", Real(in.epsilon), ",", Real(in.a), ",",
        Real(in.b), ",", Real(in.c), ",",
        in.lipschitz.has_value() ? Real(*in.lipschitz) : "", ",",
        Real(row.upper_squared), ",", Real(row.upper_squared_proper), ",",
        Real(row.upper_absolute), ",", Real(row.upper_absolute_proper), ",",
        Real(row.lower_asymptotic), ",", Real(row.lower_finite_n), ",",
        row.continuous_upper.has_value() ? Real(*row.continuous_upper) : "",
        "\r\n");
  }
  return out;
}

}  // namespace dpsynth
