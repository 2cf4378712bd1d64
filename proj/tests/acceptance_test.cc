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

// One test per acceptance criterion. Each prints a single
// "[PASS] criterion N: ..." or "[FAIL] criterion N: ..." line.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "dpsynth/bounds.h"
#include "dpsynth/continuous.h"
#include "dpsynth/core.h"
#include "dpsynth/estimators.h"
#include "dpsynth/graph.h"
#include "dpsynth/harness.h"
#include "dpsynth/mechanism.h"
#include "dpsynth/oracle.h"
#include "dpsynth/queries.h"
#include "gtest/gtest.h"
#include "test_util.h"

#ifndef DPSYNTH_CLI_PATH
#error "DPSYNTH_CLI_PATH must point at the dpsynth binary"
#endif

namespace dpsynth {
namespace {

// Collects sub-check failures and timing for one criterion.
class Criterion {
 public:
  Criterion(int number, double runtime_limit_seconds)
      : number_(number),
        limit_(runtime_limit_seconds),
        start_(std::chrono::steady_clock::now()) {}

  void Check(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void Note(const std::string& text) { notes_.push_back(text); }

  // Prints the result line and reports it to gtest.
  void Finish() {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    if (limit_ > 0.0) {
      Check(elapsed < limit_,
            absl::StrFormat("runtime %.1f s exceeds %.0f s", elapsed, limit_));
    }
    std::string line = absl::StrFormat(
        "[%s] criterion %d:", failures_.empty() ? "PASS" : "FAIL", number_);
    for (const std::string& n : notes_) absl::StrAppend(&line, " ", n, ";");
    absl::StrAppend(&line, absl::StrFormat(" %.1fs", elapsed));
    for (const std::string& f : failures_) absl::StrAppend(&line, " | ", f);
    std::cout << line << std::endl;
    EXPECT_TRUE(failures_.empty())
        << "criterion " << number_
        << " not met: " << absl::StrJoin(failures_, "; ");
  }

 private:
  int number_;
  double limit_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> notes_;
  std::vector<std::string> failures_;
};

Database RandomDatabase(DataUniverse universe, size_t n, RandomSource& rng) {
  std::vector<Row> rows(n);
  for (Row& r : rows)
    r = static_cast<Row>(rng.UniformInt(universe.cardinality()));
  return *Database::Create(universe, std::move(rows));
}

struct MicroInstance {
  StatisticalQuery query;
  Database x;
  double epsilon;
};

// A random query over n * l <= max_bits with a random heterogeneity that
// divides n.
MicroInstance RandomMicroInstance(int max_bits, RandomSource& rng) {
  const int l = 1 + static_cast<int>(rng.UniformInt(3));
  const size_t n = 1 + rng.UniformInt(static_cast<uint64_t>(max_bits / l));
  std::vector<size_t> divisors;
  for (size_t h = 1; h <= n; ++h) {
    if (n % h == 0) divisors.push_back(h);
  }
  const size_t h = divisors[rng.UniformInt(divisors.size())];
  const DataUniverse universe = *DataUniverse::Create(l);
  StatisticalQuery q = *GenerateRandomQuery(universe, n, h, rng);
  Database x = RandomDatabase(universe, n, rng);
  const double epsilons[] = {0.25, 1.0, 2.0};
  return {std::move(q), std::move(x), epsilons[rng.UniformInt(3)]};
}

BoundInputs InstanceInputs(const StatisticalQuery& q, double epsilon) {
  BoundInputs in;
  in.n = static_cast<int64_t>(q.size());
  in.l = q.universe().bits();
  in.epsilon = epsilon;
  in.a = q.lower();
  in.b = q.upper();
  in.c = q.min_range();
  return in;
}

TEST(AcceptanceTest, Criterion01DpExactness) {
  Criterion crit(1, 10.0);
  double worst_gap = 0.0;
  double worst_oracle_gap = 0.0;
  int cases = 0;
  for (int l = 1; l <= 12; ++l) {
    const DataUniverse universe = *DataUniverse::Create(l);
    for (size_t n = 1; n * l <= 12; ++n) {
      for (double epsilon : {0.25, 1.0, 2.0}) {
        const MechanismParams params =
            *MechanismParams::Create(epsilon, universe);
        auto ratio = VerifyDp(universe, n, params);
        auto oracle_ratio = oracle::MaxNeighborLogRatio(universe, n, epsilon);
        if (!ratio.ok() || !oracle_ratio.ok()) {
          crit.Check(false, absl::StrCat("n=", n, " l=", l, ": ",
                                         ratio.status().ToString(),
                                         oracle_ratio.status().ToString()));
          continue;
        }
        worst_gap = std::max(worst_gap, std::abs(*ratio - epsilon));
        worst_oracle_gap =
            std::max(worst_oracle_gap, std::abs(*oracle_ratio - epsilon));
        ++cases;
      }
    }
  }
  crit.Note(
      absl::StrFormat("%d (n,l,eps) cases, max |ratio-eps| %.3g, "
                      "oracle %.3g",
                      cases, worst_gap, worst_oracle_gap));
  crit.Check(worst_gap <= 1e-12, "production log-ratio off by more than 1e-12");
  crit.Check(worst_oracle_gap <= 1e-12,
             "oracle log-ratio off by more than 1e-12");
  crit.Finish();
}

TEST(AcceptanceTest, Criterion02Unbiasedness) {
  Criterion crit(2, 30.0);
  RandomSource rng(202);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const MicroInstance inst = RandomMicroInstance(10, rng);
    const MechanismParams params =
        *MechanismParams::Create(inst.epsilon, inst.x.universe());
    ASSERT_OK_AND_ASSIGN(
        oracle::ExactDistribution dist,
        oracle::ComputeExactDistribution(inst.x, inst.epsilon));
    const double mean = dist.Expectation([&](std::span<const Row> y) {
      return DebiasQueryValue(inst.query, inst.query.EvaluateRows(y), params);
    });
    worst = std::max(worst, std::abs(mean - *inst.query.Evaluate(inst.x)));
  }
  crit.Note(absl::StrFormat("100 instances, max |E[q_u] - q(x)| %.3g", worst));
  crit.Check(worst <= 1e-10, "bias above 1e-10");
  crit.Finish();
}

TEST(AcceptanceTest, Criterion03SquaredErrorBound) {
  Criterion crit(3, 120.0);
  RandomSource rng(303);
  double worst_ratio = 0.0;
  for (int i = 0; i < 60; ++i) {
    const MicroInstance inst = RandomMicroInstance(8, rng);
    const StatisticalQuery& q = inst.query;
    ASSERT_OK_AND_ASSIGN(std::vector<double> mse,
                         oracle::UnbiasedDistortion(q, inst.epsilon));
    // Closed form computed here, then compared with the bounds module.
    const double e = std::exp(-inst.epsilon);
    const double g = 1.0 + (std::ldexp(1.0, q.universe().bits()) - 1.0) * e;
    const double spread = q.upper() - q.lower();
    const double bound = spread * spread * g * g /
                         (q.min_range() * q.min_range() * (1 - e) * (1 - e) *
                          static_cast<double>(q.size()));
    ASSERT_OK_AND_ASSIGN(
        double library_bound,
        UpperBoundSquared(InstanceInputs(q, inst.epsilon), false));
    crit.Check(std::abs(library_bound - bound) <= 1e-12 * bound,
               "bounds module disagrees with the closed form");
    for (double m : mse) worst_ratio = std::max(worst_ratio, m / bound);
  }
  crit.Check(worst_ratio <= 1.0, "exact MSE above the bound");

  const DataUniverse universe = *DataUniverse::Create(1);
  const size_t n = 10000;
  RandomSource data_rng(31);
  const Database x = RandomDatabase(universe, n, data_rng);
  ASSERT_OK_AND_ASSIGN(StatisticalQuery q,
                       MakePredicateQuery(universe, n, {0}));
  const MechanismParams params = *MechanismParams::Create(1.0, universe);
  DistortionOptions options;
  options.measure = DistortionMeasure::kSquared;
  ASSERT_OK_AND_ASSIGN(
      DistortionReport report,
      MeasureDistortion(q, x, params, options, 100000, RandomSource(32)));
  BoundInputs in;
  in.n = 10000;
  in.l = 1;
  in.epsilon = 1.0;
  const double bound_at_n = *UpperBoundSquared(in, false);
  crit.Note(absl::StrFormat(
      "exact max MSE/bound %.4f; MC MSE %.4g +- %.2g (bound at n=1e4 %.4g)",
      worst_ratio, report.empirical_mean, report.empirical_stderr, bound_at_n));
  crit.Check(report.empirical_mean <= 4.683e-3, "MC MSE above 4.683e-3");
  crit.Check(report.empirical_mean <= 4.683e-4, "MC MSE above 4.683e-4");
  crit.Finish();
}

TEST(AcceptanceTest, Criterion04FactorFourQuantization) {
  Criterion crit(4, 60.0);
  RandomSource rng(404);
  int64_t pointwise_checks = 0;
  double worst_mse_ratio = 0.0;
  for (int i = 0; i < 40; ++i) {
    const MicroInstance inst = RandomMicroInstance(8, rng);
    const StatisticalQuery& q = inst.query;
    const int bits = q.universe().bits();
    const size_t n = q.size();
    const MechanismParams params =
        *MechanismParams::Create(inst.epsilon, q.universe());
    const uint64_t outputs = uint64_t{1} << (bits * n);
    const double bound =
        *UpperBoundSquared(InstanceInputs(q, inst.epsilon), false);
    for (ProjectionStrategy strategy : {ProjectionStrategy::kIntervalClamp,
                                        ProjectionStrategy::kExactRange}) {
      ASSERT_OK_AND_ASSIGN(ProperProjector projector,
                           ProperProjector::Create(q, strategy));
      // Every q(x) is an achievable value, so the condition holds for all x.
      for (uint64_t xi = 0; xi < outputs; ++xi) {
        const std::vector<Row> x_rows = oracle::DecodeDatabase(xi, bits, n);
        const double truth = q.EvaluateRows(x_rows);
        for (uint64_t yi = 0; yi < outputs; ++yi) {
          const double unbiased = DebiasQueryValue(
              q, q.EvaluateRows(oracle::DecodeDatabase(yi, bits, n)), params);
          const double proper = projector.Project(unbiased);
          ++pointwise_checks;
          if (std::abs(proper - truth) >
              2.0 * std::abs(unbiased - truth) + 1e-12) {
            crit.Check(false,
                       absl::StrFormat("pointwise factor 2 broken: x=%d y=%d",
                                       xi, yi));
          }
        }
        DistortionOptions options;
        options.estimator = EstimatorKind::kProper;
        options.measure = DistortionMeasure::kSquared;
        options.projection = strategy;
        const Database x = *Database::Create(q.universe(), x_rows);
        ASSERT_OK_AND_ASSIGN(double mse,
                             ExactDistortion(q, x, params, options));
        worst_mse_ratio = std::max(worst_mse_ratio, mse / (4.0 * bound));
      }
    }
  }
  crit.Note(
      absl::StrFormat("%d pointwise checks; max proper MSE / (4 x bound) %.4f",
                      pointwise_checks, worst_mse_ratio));
  crit.Check(worst_mse_ratio <= 1.0, "proper MSE above 4x the bound");
  crit.Finish();
}

TEST(AcceptanceTest, Criterion05ScalingLaw) {
  Criterion crit(5, 600.0);
  const ExperimentConfig config =
      ExperimentConfig::Defaults(ExperimentKind::kDatabaseScaling);
  ASSERT_OK_AND_ASSIGN(ExperimentResult result, RunDatabaseScaling(config));
  ASSERT_TRUE(result.fit.has_value());
  int under = 0;
  for (const ResultRow& row : result.rows) {
    if (row.worst_case_distortion <= row.analytic_bound) ++under;
  }
  crit.Note(absl::StrFormat(
      "n=2^10..2^16, %d queries, %d runs: slope %.4f +- %.4f; %d/%d points "
      "under bound",
      config.query_count, config.trial_count, result.fit->slope,
      result.fit->slope_stderr, under, static_cast<int>(result.rows.size())));
  crit.Check(result.fit->slope >= -1.15 && result.fit->slope <= -0.85,
             "slope outside [-1.15, -0.85]");
  crit.Finish();
}

TEST(AcceptanceTest, Criterion06Heterogeneity) {
  Criterion crit(6, 300.0);
  // The default sweep, read at its two ends.
  const ExperimentConfig config =
      ExperimentConfig::Defaults(ExperimentKind::kHeterogeneity);
  const int64_t n = config.n_grid[0];
  ASSERT_EQ(config.heterogeneity_grid.front(), 1);
  ASSERT_EQ(config.heterogeneity_grid.back(), n / 2);
  ASSERT_OK_AND_ASSIGN(ExperimentResult result, RunHeterogeneitySweep(config));
  const ResultRow& linear = result.rows.front();
  const ResultRow& mixed = result.rows.back();
  const double pooled =
      std::hypot(linear.worst_case_stderr, mixed.worst_case_stderr);
  const double gap =
      std::abs(mixed.worst_case_distortion - linear.worst_case_distortion);
  crit.Note(absl::StrFormat(
      "n=%d: h=1 worst %.4f +- %.4f, h=%d worst %.4f +- %.4f, gap %.2f "
      "pooled SE (means %.4f vs %.4f)",
      n, linear.worst_case_distortion, linear.worst_case_stderr, n / 2,
      mixed.worst_case_distortion, mixed.worst_case_stderr, gap / pooled,
      linear.mean_distortion, mixed.mean_distortion));
  crit.Check(gap < 3.0 * pooled, "gap not below 3 pooled standard errors");
  crit.Finish();
}

TEST(AcceptanceTest, Criterion07QuerySetSize) {
  Criterion crit(7, 600.0);
  const ExperimentConfig config =
      ExperimentConfig::Defaults(ExperimentKind::kQuerySetSize);
  ASSERT_OK_AND_ASSIGN(ExperimentResult result, RunQuerySetSizeSweep(config));
  ASSERT_TRUE(result.fit.has_value());
  BoundInputs in;
  in.n = config.n_grid[0];
  in.l = config.l;
  in.epsilon = config.epsilon;
  const double bound = *UpperBoundAbsolute(in, false);
  std::string values;
  for (const ResultRow& row : result.rows) {
    absl::StrAppend(&values, absl::StrFormat("%d:%.4f ", row.grid_value,
                                             row.worst_case_distortion));
    crit.Check(row.worst_case_distortion <= bound,
               absl::StrCat("size ", row.grid_value, " above the bound"));
  }
  crit.Note(absl::StrFormat(
      "worst %sbound %.4f; slope %.5f, SE %.5f (%.2f SE)", values, bound,
      result.fit->slope, result.fit->slope_stderr,
      std::abs(result.fit->slope) / result.fit->slope_stderr));
  crit.Check(std::abs(result.fit->slope) < 2.0 * result.fit->slope_stderr,
             "|slope| not below 2 standard errors");
  crit.Finish();
}

TEST(AcceptanceTest, Criterion08CutRelease) {
  Criterion crit(8, 600.0);
  const double epsilon = 1.0;
  const DataUniverse bit = *DataUniverse::Create(1);

  // Every graph on 2 and 3 vertices, every cut with nonempty sides.
  double worst_exact_ratio = 0.0;
  for (uint32_t v = 2; v <= 3; ++v) {
    const size_t n = size_t{v} * v;
    std::vector<CutQuery> cuts;
    uint32_t labels = 1;
    for (uint32_t i = 0; i < v; ++i) labels *= 3;
    for (uint32_t code = 0; code < labels; ++code) {
      std::vector<uint32_t> s, t;
      uint32_t rest = code;
      for (uint32_t i = 0; i < v; ++i, rest /= 3) {
        if (rest % 3 == 1) s.push_back(i);
        if (rest % 3 == 2) t.push_back(i);
      }
      if (s.empty() || t.empty()) continue;
      cuts.push_back(*CutQuery::Create(v, s, t));
    }
    for (uint64_t gi = 0; gi < (uint64_t{1} << n); ++gi) {
      const Database x =
          *Database::Create(bit, oracle::DecodeDatabase(gi, 1, n));
      const Graph graph = *Graph::FromDatabase(x);
      ASSERT_OK_AND_ASSIGN(oracle::ExactDistribution dist,
                           oracle::ComputeExactDistribution(x, epsilon));
      for (const CutQuery& cut : cuts) {
        const double truth = static_cast<double>(*CutValue(graph, cut));
        const double mean_abs = dist.Expectation([&](std::span<const Row> y) {
          const Database released =
              *Database::Create(bit, std::vector<Row>(y.begin(), y.end()));
          return std::abs(*AnswerCut(released, cut, epsilon) - truth);
        });
        const double bound =
            *CutBound(static_cast<int64_t>(cut.source().size()),
                      static_cast<int64_t>(cut.sink().size()), epsilon);
        worst_exact_ratio = std::max(worst_exact_ratio, mean_abs / bound);
      }
    }
  }
  crit.Check(worst_exact_ratio <= 1.0, "exact micro-graph error above bound");
  crit.Note(
      absl::StrFormat("micro-graphs max E|err|/bound %.4f", worst_exact_ratio));

  for (uint32_t v : {64u, 256u}) {
    RandomSource rng(800 + v);
    RandomSource graph_rng = rng.Fork(0);
    ASSERT_OK_AND_ASSIGN(Graph graph, PowerLawGraph(v, 20.0, 2.5, graph_rng));
    RandomSource cut_rng = rng.Fork(1);
    ASSERT_OK_AND_ASSIGN(CutQuery cut, RandomBisectionCut(v, cut_rng));
    const double truth = static_cast<double>(*CutValue(graph, cut));
    CompensatedSum total;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
      RandomSource trial_rng = rng.Fork(2 + t);
      ASSERT_OK_AND_ASSIGN(Database y, ReleaseGraph(graph, epsilon, trial_rng));
      total.Add(std::abs(*AnswerCut(y, cut, epsilon) - truth));
    }
    const double mean_abs = total.Total() / trials;
    const double bound =
        *CutBound(static_cast<int64_t>(cut.source().size()),
                  static_cast<int64_t>(cut.sink().size()), epsilon);
    crit.Note(absl::StrFormat("|V|=%d mean |err| %.2f, bound %.2f", v, mean_abs,
                              bound));
    crit.Check(mean_abs <= bound,
               absl::StrCat("|V|=", v, " mean error above the bound"));
  }

  const ExperimentConfig config =
      ExperimentConfig::Defaults(ExperimentKind::kCutScaling);
  ASSERT_OK_AND_ASSIGN(ExperimentResult sweep, RunCutScaling(config));
  ASSERT_TRUE(sweep.fit.has_value());
  std::string relative;
  for (const ResultRow& row : sweep.rows) {
    absl::StrAppend(&relative,
                    absl::StrFormat("%d:%.1f%% ", row.grid_value,
                                    100.0 * row.relative_error.value_or(0)));
  }
  crit.Note(absl::StrFormat(
      "cut-scaling slope %.3f; relative errors %s(reference 4.7-11.7%%, not "
      "gated)",
      sweep.fit->slope, relative));
  crit.Check(sweep.fit->slope <= 1.1, "cut-scaling slope above 1.1");
  crit.Finish();
}

TEST(AcceptanceTest, Criterion09BoundsConsistency) {
  Criterion crit(9, 5.0);
  double worst_square_gap = 0.0;
  int grid_points = 0;
  for (int64_t n : {100, 300, 1000, 10000, 100000, 1000000, 100000000}) {
    for (int l = 1; l <= 8; ++l) {
      for (double epsilon : {0.1, 0.25, 0.5, 1.0, 2.0, 3.5, 5.0}) {
        BoundInputs in;
        in.n = n;
        in.l = l;
        in.epsilon = epsilon;
        for (bool proper : {false, true}) {
          const double abs_bound = *UpperBoundAbsolute(in, proper);
          const double sq_bound = *UpperBoundSquared(in, proper);
          // 1e-12 absolute below 1, relative above: at n=100, l=8, eps=0.1
          // the bound is ~6e4 and one ulp is already ~7e-12.
          worst_square_gap = std::max(
              worst_square_gap, std::abs(abs_bound * abs_bound - sq_bound) /
                                    std::max(1.0, sq_bound));
        }
        const double upper = *UpperBoundSquared(in, false);
        const double asymptotic = *LowerBoundSquaredAsymptotic(in);
        const double finite = *LowerBoundFiniteN(in);
        crit.Check(
            asymptotic <= upper,
            absl::StrFormat("asymptotic lower > upper at n=%d l=%d eps=%g", n,
                            l, epsilon));
        crit.Check(finite <= upper,
                   absl::StrFormat("finite-n lower > upper at n=%d l=%d eps=%g",
                                   n, l, epsilon));
        ++grid_points;
      }
    }
  }
  crit.Check(worst_square_gap <= 1e-12,
             "absolute^2 != squared within 1e-12 (relative above 1)");
  BoundInputs big;
  big.n = 100000000;
  big.l = 1;
  big.epsilon = 1.0;
  const double finite = *LowerBoundFiniteN(big);
  const double leading = *LowerBoundSquaredAsymptotic(big);
  const double rel = std::abs(finite / leading - 1.0);
  crit.Note(
      absl::StrFormat("%d grid points, max |abs^2-sq|/max(1,sq) %.2g, n=1e8 "
                      "finite/leading-1 = %.4g",
                      grid_points, worst_square_gap, rel));
  crit.Check(rel <= 0.01, "finite-n bound not within 1% at n=1e8");
  crit.Finish();
}

TEST(AcceptanceTest, Criterion10ContinuousPipeline) {
  Criterion crit(10, 300.0);
  ASSERT_OK_AND_ASSIGN(
      LipschitzQuery query,
      LipschitzQuery::Create({{[](double t) { return t; }, 1.0, 0.0, 1.0}}));
  for (int64_t n : {256, 4096}) {
    RandomSource rng(1000 + n);
    RandomSource data_rng = rng.Fork(0);
    std::vector<double> rows(n);
    for (double& r : rows) r = data_rng.Uniform();
    ASSERT_OK_AND_ASSIGN(ContinuousDatabase x,
                         ContinuousDatabase::Create(std::move(rows)));
    const double truth = *query.Evaluate(x);
    CompensatedSum total;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
      RandomSource trial_rng = rng.Fork(1 + t);
      ASSERT_OK_AND_ASSIGN(ContinuousRelease release,
                           ReleaseContinuous(x, query, 1.0, trial_rng));
      total.Add((release.estimate - truth) * (release.estimate - truth));
    }
    const double mse = total.Total() / trials;
    BoundInputs in;
    in.n = n;
    in.epsilon = 1.0;
    in.lipschitz = 1.0;
    const double bound = *ContinuousUpperBound(in);
    crit.Note(absl::StrFormat("n=%d MSE %.4g vs 1.25 x %.4g", n, mse, bound));
    crit.Check(mse <= 1.25 * bound,
               absl::StrCat("n=", n, " MSE above 1.25x the bound"));
  }
  crit.Finish();
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

TEST(AcceptanceTest, Criterion11Determinism) {
  Criterion crit(11, 0.0);
  const std::string dir = ::testing::TempDir();
  const std::string config_path = dir + "/acceptance_determinism.json";
  {
    std::ofstream config(config_path);
    config << R"({"experiment": "heterogeneity", "n": 1024,
                  "heterogeneity_grid": [1, 4, 512], "query_count": 50,
                  "trial_count": 5, "seed": 11})";
  }
  std::vector<std::string> outputs;
  for (int i = 0; i < 2; ++i) {
    const std::string out = absl::StrCat(dir, "/acceptance_run", i, ".csv");
    std::remove(out.c_str());
    const std::string cmd =
        absl::StrCat(DPSYNTH_CLI_PATH, " experiment --config ", config_path,
                     " --output ", out, " > /dev/null 2>&1");
    const int code = std::system(cmd.c_str());
    crit.Check(code == 0, absl::StrCat("run ", i, " exited with ", code));
    outputs.push_back(ReadFile(out));
  }
  crit.Check(!outputs[0].empty(), "empty CSV");
  crit.Check(outputs[0] == outputs[1], "CSV bytes differ between runs");
  crit.Note(absl::StrFormat("two CLI runs, %d bytes each, identical=%s",
                            outputs[0].size(),
                            outputs[0] == outputs[1] ? "yes" : "no"));
  crit.Finish();
}

}  // namespace
}  // namespace dpsynth
