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

#include "dpsynth/estimators.h"

#include <cmath>
#include <vector>

#include "dpsynth/bounds.h"
#include "dpsynth/mechanism.h"
#include "dpsynth/queries.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dpsynth {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

DataUniverse Universe(int bits) { return *DataUniverse::Create(bits); }
MechanismParams Params(double eps, int bits) {
  return *MechanismParams::Create(eps, Universe(bits));
}

StatisticalQuery SingleRowIdentityQuery() {
  RowFunction f = *RowFunction::Create(Universe(1), {0, 1});
  return *StatisticalQuery::Create(Universe(1), {f}, {0});
}

TEST(EstimateUnbiasedTest, HandEvaluatedSingleRow) {
  // g = 4/3, 1 - e^-eps = 2/3: 2 * 1 - (1/2) * 1.
  const StatisticalQuery q = SingleRowIdentityQuery();
  ASSERT_OK_AND_ASSIGN(Database y, Database::Create(Universe(1), {1}));
  ASSERT_OK_AND_ASSIGN(double v,
                       EstimateUnbiased(q, y, Params(std::log(3.0), 1)));
  EXPECT_NEAR(v, 1.5, 1e-14);
}

TEST(EstimateUnbiasedTest, IdentityLeavesAnswerUnchanged) {
  RandomSource rng(4);
  ASSERT_OK_AND_ASSIGN(StatisticalQuery q,
                       GenerateRandomQuery(Universe(2), 6, 3, rng));
  ASSERT_OK_AND_ASSIGN(Database y,
                       Database::Create(Universe(2), {0, 1, 2, 3, 2, 1}));
  ASSERT_OK_AND_ASSIGN(double v, EstimateUnbiased(q, y, Params(700.0, 2)));
  EXPECT_EQ(v, *q.Evaluate(y));
}

TEST(EstimateUnbiasedTest, ZeroEpsilonIsUndefined) {
  const StatisticalQuery q = SingleRowIdentityQuery();
  ASSERT_OK_AND_ASSIGN(Database y, Database::Create(Universe(1), {1}));
  auto result = EstimateUnbiased(q, y, Params(0.0, 1));
  EXPECT_STATUS_CODE(result, absl::StatusCode::kFailedPrecondition);
  EXPECT_THAT(std::string(result.status().message()), HasSubstr("undefined"));
}

TEST(EstimateUnbiasedTest, UnbiasedOnTwoRows) {
  // Exact expectation over the four outputs, written out by hand from the
  // per-row keep probability.
  RandomSource rng(17);
  ASSERT_OK_AND_ASSIGN(StatisticalQuery q,
                       GenerateRandomQuery(Universe(1), 2, 2, rng));
  const MechanismParams p = Params(1.0, 1);
  const double keep = 1.0 / (1.0 + std::exp(-1.0));
  for (Row x0 = 0; x0 < 2; ++x0) {
    for (Row x1 = 0; x1 < 2; ++x1) {
      ASSERT_OK_AND_ASSIGN(Database x, Database::Create(Universe(1), {x0, x1}));
      double mean = 0.0;
      for (Row y0 = 0; y0 < 2; ++y0) {
        for (Row y1 = 0; y1 < 2; ++y1) {
          const double prob =
              (y0 == x0 ? keep : 1 - keep) * (y1 == x1 ? keep : 1 - keep);
          ASSERT_OK_AND_ASSIGN(Database y,
                               Database::Create(Universe(1), {y0, y1}));
          mean += prob * *EstimateUnbiased(q, y, p);
        }
      }
      EXPECT_NEAR(mean, *q.Evaluate(x), 1e-10);
    }
  }
}

TEST(ProjectProperTest, IntervalClampIsIdentityInsideRange) {
  ASSERT_OK_AND_ASSIGN(StatisticalQuery q,
                       MakePredicateQuery(Universe(2), 4, {0}));
  EXPECT_EQ(*ProjectProper(q, 0.37, ProjectionStrategy::kIntervalClamp), 0.37);
  EXPECT_EQ(*ProjectProper(q, -0.2, ProjectionStrategy::kIntervalClamp), 0.0);
  EXPECT_EQ(*ProjectProper(q, 1.7, ProjectionStrategy::kIntervalClamp), 1.0);
}

TEST(ProjectProperTest, ExactRangeNearestValueWithTiesDown) {
  ASSERT_OK_AND_ASSIGN(StatisticalQuery q,
                       MakePredicateQuery(Universe(2), 4, {0, 1}));
  ASSERT_OK_AND_ASSIGN(std::vector<double> values, AchievableValues(q));
  EXPECT_THAT(values, ElementsAre(0, 0.25, 0.5, 0.75, 1));
  EXPECT_EQ(*ProjectProper(q, 0.3, ProjectionStrategy::kExactRange), 0.25);
  EXPECT_EQ(*ProjectProper(q, 0.375, ProjectionStrategy::kExactRange), 0.25);
  EXPECT_EQ(*ProjectProper(q, -3.0, ProjectionStrategy::kExactRange), 0.0);
  EXPECT_EQ(*ProjectProper(q, 9.0, ProjectionStrategy::kExactRange), 1.0);
}

TEST(ProjectProperTest, AchievableValuesOfHeterogeneousQuery) {
  RowFunction f = *RowFunction::Create(Universe(1), {0, 1});
  RowFunction g = *RowFunction::Create(Universe(1), {0, 2});
  ASSERT_OK_AND_ASSIGN(StatisticalQuery q,
                       StatisticalQuery::Create(Universe(1), {f, g}, {0, 1}));
  ASSERT_OK_AND_ASSIGN(std::vector<double> values, AchievableValues(q));
  ASSERT_EQ(values.size(), 4u);
  EXPECT_DOUBLE_EQ(values[1], 1.0 / 3);
  EXPECT_DOUBLE_EQ(values[2], 2.0 / 3);
}

TEST(ProjectProperTest, ExactRangeCap) {
  RandomSource rng(2);
  ASSERT_OK_AND_ASSIGN(StatisticalQuery q,
                       GenerateRandomQuery(Universe(4), 40, 40, rng));
  EXPECT_STATUS_CODE(AchievableValues(q, 1000),
                     absl::StatusCode::kResourceExhausted);
}

TEST(ProjectProperTest, WithinFactorTwoOfRawError) {
  ASSERT_OK_AND_ASSIGN(StatisticalQuery q,
                       MakePredicateQuery(Universe(2), 5, {1}));
  ASSERT_OK_AND_ASSIGN(std::vector<double> values, AchievableValues(q));
  for (double truth : values) {
    for (double raw = -1.5; raw <= 2.5; raw += 0.01) {
      for (auto s : {ProjectionStrategy::kIntervalClamp,
                     ProjectionStrategy::kExactRange}) {
        ASSERT_OK_AND_ASSIGN(double p, ProjectProper(q, raw, s));
        EXPECT_LE(std::abs(p - truth), 2 * std::abs(raw - truth) + 1e-15);
      }
    }
  }
}

TEST(EstimateCutTest, SinglePairWithoutEdge) {
  ASSERT_OK_AND_ASSIGN(Database y, Database::Create(Universe(1), {0, 0, 0, 0}));
  const std::vector<uint32_t> s = {0}, t = {1};
  ASSERT_OK_AND_ASSIGN(double v, EstimateCut(y, s, t, 1.0));
  EXPECT_NEAR(v, -0.58198, 1e-5);
  ASSERT_OK_AND_ASSIGN(double clamped,
                       EstimateCut(y, s, t, 1.0, CutEstimate::kClamped));
  EXPECT_EQ(clamped, 0.0);
}

TEST(EstimateCutTest, IdentityReturnsRawCount) {
  // Edges 0->1 and 0->2 of a 3-vertex graph.
  ASSERT_OK_AND_ASSIGN(
      Database y, Database::Create(Universe(1), {0, 1, 1, 0, 0, 0, 0, 0, 0}));
  const std::vector<uint32_t> s = {0}, t = {1, 2};
  EXPECT_EQ(*EstimateCut(y, s, t, 800.0), 2.0);
}

TEST(EstimateCutTest, Errors) {
  ASSERT_OK_AND_ASSIGN(Database y, Database::Create(Universe(1), {0, 0, 0, 0}));
  const std::vector<uint32_t> s = {0}, t = {1}, overlap = {0};
  EXPECT_STATUS_CODE(EstimateCut(y, s, t, 0.0),
                     absl::StatusCode::kFailedPrecondition);
  auto both = EstimateCut(y, s, overlap, 1.0);
  EXPECT_STATUS_CODE(both, absl::StatusCode::kInvalidArgument);
  EXPECT_THAT(std::string(both.status().message()), HasSubstr("overlap"));
  ASSERT_OK_AND_ASSIGN(Database odd, Database::Create(Universe(1), {0, 0, 0}));
  EXPECT_STATUS_CODE(EstimateCut(odd, s, t, 1.0),
                     absl::StatusCode::kInvalidArgument);
  const std::vector<uint32_t> far = {5};
  EXPECT_STATUS_CODE(EstimateCut(y, s, far, 1.0),
                     absl::StatusCode::kInvalidArgument);
}

TEST(ExactDistortionTest, BoundHoldsOnEnumerableInstances) {
  RandomSource rng(31);
  for (int bits : {1, 2}) {
    for (size_t n : {size_t{1}, size_t{2}, size_t{4}}) {
      if (n * bits > 8) continue;
      ASSERT_OK_AND_ASSIGN(StatisticalQuery q,
                           GenerateRandomQuery(Universe(bits), n, n, rng));
      std::vector<Row> rows(n);
      for (Row& r : rows) r = rng.UniformInt(1u << bits);
      ASSERT_OK_AND_ASSIGN(Database x, Database::Create(Universe(bits), rows));
      for (double eps : {0.25, 1.0, 2.0}) {
        const MechanismParams p = Params(eps, bits);
        for (auto measure :
             {DistortionMeasure::kSquared, DistortionMeasure::kAbsolute}) {
          DistortionOptions unbiased{.measure = measure};
          DistortionOptions proper{.estimator = EstimatorKind::kProper,
                                   .measure = measure};
          ASSERT_OK_AND_ASSIGN(double du, ExactDistortion(q, x, p, unbiased));
          ASSERT_OK_AND_ASSIGN(double dp, ExactDistortion(q, x, p, proper));
          ASSERT_OK_AND_ASSIGN(double bound_u, AnalyticBound(q, p, unbiased));
          ASSERT_OK_AND_ASSIGN(double bound_p, AnalyticBound(q, p, proper));
          EXPECT_LE(du, bound_u * (1 + 1e-12));
          EXPECT_LE(dp, bound_p * (1 + 1e-12));
          EXPECT_LE(dp, (measure == DistortionMeasure::kSquared ? 4 : 2) * du +
                            1e-15);
        }
      }
    }
  }
}

TEST(ExactDistortionTest, IdentityIsZeroAndCapIsEnforced) {
  ASSERT_OK_AND_ASSIGN(StatisticalQuery q,
                       MakePredicateQuery(Universe(2), 3, {0}));
  ASSERT_OK_AND_ASSIGN(Database x, Database::Create(Universe(2), {1, 2, 3}));
  EXPECT_EQ(*ExactDistortion(q, x, Params(700.0, 2), {}), 0.0);
  ASSERT_OK_AND_ASSIGN(StatisticalQuery big,
                       MakePredicateQuery(Universe(2), 7, {0}));
  ASSERT_OK_AND_ASSIGN(Database bx,
                       Database::Create(Universe(2), {0, 0, 0, 0, 0, 0, 0}));
  EXPECT_STATUS_CODE(ExactDistortion(big, bx, Params(1.0, 2), {}),
                     absl::StatusCode::kResourceExhausted);
}

TEST(MeasureDistortionTest, AgreesWithExactValue) {
  RandomSource rng(5);
  ASSERT_OK_AND_ASSIGN(StatisticalQuery q,
                       GenerateRandomQuery(Universe(2), 4, 2, rng));
  ASSERT_OK_AND_ASSIGN(Database x, Database::Create(Universe(2), {0, 3, 1, 1}));
  for (auto estimator : {EstimatorKind::kUnbiased, EstimatorKind::kProper}) {
    DistortionOptions options{.estimator = estimator, .query_id = "q7"};
    ASSERT_OK_AND_ASSIGN(DistortionReport report,
                         MeasureDistortion(q, x, Params(1.0, 2), options, 20000,
                                           RandomSource(9)));
    ASSERT_TRUE(report.exact_value.has_value());
    EXPECT_FALSE(report.exact_mismatch);
    EXPECT_LE(std::abs(report.empirical_mean - *report.exact_value),
              6 * report.empirical_stderr);
    EXPECT_EQ(report.query_id, "q7");
    EXPECT_EQ(report.sample_count, 20000);
    EXPECT_EQ(report.analytic_bound,
              *AnalyticBound(q, Params(1.0, 2), options));
  }
}

TEST(MeasureDistortionTest, IdentityGivesZero) {
  ASSERT_OK_AND_ASSIGN(StatisticalQuery q,
                       MakePredicateQuery(Universe(3), 20, {0, 1}));
  ASSERT_OK_AND_ASSIGN(Database x,
                       Database::Create(Universe(3), std::vector<Row>(20, 3)));
  ASSERT_OK_AND_ASSIGN(
      DistortionReport report,
      MeasureDistortion(q, x, Params(700.0, 3), {}, 50, RandomSource(1)));
  EXPECT_EQ(report.empirical_mean, 0.0);
  EXPECT_FALSE(report.exact_value.has_value());
}

TEST(MeasureDistortionTest, ReproducibleAndRejectsZeroTrials) {
  ASSERT_OK_AND_ASSIGN(StatisticalQuery q,
                       MakePredicateQuery(Universe(2), 30, {0}));
  ASSERT_OK_AND_ASSIGN(Database x,
                       Database::Create(Universe(2), std::vector<Row>(30, 1)));
  const MechanismParams p = Params(0.5, 2);
  auto a = MeasureDistortion(q, x, p, {}, 100, RandomSource(3));
  auto b = MeasureDistortion(q, x, p, {}, 100, RandomSource(3));
  ASSERT_OK(a.status());
  EXPECT_EQ(a->empirical_mean, b->empirical_mean);
  EXPECT_STATUS_CODE(MeasureDistortion(q, x, p, {}, 0, RandomSource(3)),
                     absl::StatusCode::kInvalidArgument);
  EXPECT_STATUS_CODE(
      MeasureDistortion(q, x, Params(0.0, 2), {}, 5, RandomSource(3)),
      absl::StatusCode::kFailedPrecondition);
}

}  // namespace
}  // namespace dpsynth
