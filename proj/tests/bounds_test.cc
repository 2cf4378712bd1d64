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

#include "dpsynth/bounds.h"

#include <cmath>
#include <numbers>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dpsynth {
namespace {

using ::testing::HasSubstr;

BoundInputs Inputs(int64_t n, int l, double eps) {
  BoundInputs in;
  in.n = n;
  in.l = l;
  in.epsilon = eps;
  return in;
}

// Composite Simpson rule for the standard normal density on [0, t].
double SimpsonCdf(double t) {
  const int steps = 20000;
  const double h = t / steps;
  auto density = [](double u) {
    return std::exp(-0.5 * u * u) / std::sqrt(2 * std::numbers::pi);
  };
  double sum = density(0) + density(t);
  for (int i = 1; i < steps; ++i) sum += (i % 2 ? 4 : 2) * density(i * h);
  return 0.5 + sum * h / 3;
}

TEST(StdNormalCdfTest, MatchesQuadrature) {
  EXPECT_EQ(StdNormalCdf(0.0), 0.5);
  EXPECT_NEAR(StdNormalCdf(1.0), SimpsonCdf(1.0), 1e-12);
  EXPECT_NEAR(StdNormalCdf(1.0), 0.8413447460685429, 1e-12);
  EXPECT_NEAR(StdNormalCdf(2.5), SimpsonCdf(2.5), 1e-12);
  EXPECT_NEAR(StdNormalCdf(-1.0), 1.0 - StdNormalCdf(1.0), 1e-15);
}

TEST(UpperBoundTest, ReferenceValues) {
  ASSERT_OK_AND_ASSIGN(double sq, UpperBoundSquared(Inputs(1000, 1, 1), false));
  EXPECT_NEAR(sq, 4.6827e-3, 1e-7);
  ASSERT_OK_AND_ASSIGN(double sq_proper,
                       UpperBoundSquared(Inputs(1000, 1, 1), true));
  EXPECT_NEAR(sq_proper, 1.87307e-2, 4e-7);
  ASSERT_OK_AND_ASSIGN(double abs,
                       UpperBoundAbsolute(Inputs(10000, 1, 1), false));
  EXPECT_NEAR(abs, 2.16395e-2, 1e-6);
  ASSERT_OK_AND_ASSIGN(double abs_proper,
                       UpperBoundAbsolute(Inputs(10000, 1, 1), true));
  EXPECT_DOUBLE_EQ(abs_proper, 2 * abs);
}

TEST(UpperBoundTest, ClosedFormWithGeneralConstants) {
  BoundInputs in = Inputs(37, 3, 0.4);
  in.a = -0.5;
  in.b = 2.0;
  in.c = 0.75;
  const double g = 1 + 7 * std::exp(-0.4);
  const double expected =
      2.5 * 2.5 * g * g / (0.75 * 0.75 * std::pow(1 - std::exp(-0.4), 2) * 37);
  EXPECT_NEAR(*UpperBoundSquared(in, false), expected, 1e-12 * expected);
}

TEST(UpperBoundTest, LargeEpsilonLimit) {
  BoundInputs in = Inputs(50, 4, 700);
  in.b = 3;
  EXPECT_DOUBLE_EQ(*UpperBoundSquared(in, false), 9.0 / 50);
}

TEST(UpperBoundTest, AbsoluteSquaredEqualsSquared) {
  for (int64_t n : {1, 100, 123456}) {
    for (int l = 1; l <= 8; ++l) {
      for (double eps : {0.1, 1.0, 5.0}) {
        const BoundInputs in = Inputs(n, l, eps);
        const double a = *UpperBoundAbsolute(in, false);
        const double s = *UpperBoundSquared(in, false);
        EXPECT_NEAR(a * a, s, 1e-12 * s);
      }
    }
  }
}

TEST(LowerBoundTest, AsymptoticReferenceValue) {
  ASSERT_OK_AND_ASSIGN(double lb,
                       LowerBoundSquaredAsymptotic(Inputs(1'000'000, 1, 1)));
  EXPECT_NEAR(lb, 1.5300e-11, 1e-14);
  const double tail = 1 - SimpsonCdf(1.0);
  EXPECT_NEAR(lb, tail * tail / (32 * std::pow(1 + std::exp(1.0), 3)) / 1e6,
              1e-20);
}

TEST(LowerBoundTest, FiniteNClampsAndConverges) {
  EXPECT_EQ(*LowerBoundFiniteN(Inputs(10, 1, 1)), 0.0);
  const BoundInputs big = Inputs(100'000'000, 1, 1);
  const double finite = *LowerBoundFiniteN(big);
  const double asymptotic = *LowerBoundSquaredAsymptotic(big);
  EXPECT_NEAR(finite / asymptotic, 1.0, 0.01);
  EXPECT_LE(finite, asymptotic * 1.01);
}

TEST(LowerBoundTest, BelowUpperAndDecreasing) {
  for (int64_t n : {100, 1000, 10000, 1000000}) {
    for (int l = 1; l <= 8; ++l) {
      for (double eps : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        const BoundInputs in = Inputs(n, l, eps);
        const double upper = *UpperBoundSquared(in, false);
        EXPECT_LE(*LowerBoundSquaredAsymptotic(in), upper);
        EXPECT_LE(*LowerBoundFiniteN(in), upper);
        EXPECT_LT(*LowerBoundSquaredAsymptotic(Inputs(2 * n, l, eps)),
                  *LowerBoundSquaredAsymptotic(in));
      }
    }
  }
}

TEST(ContinuousBoundTest, ReferenceValueAndLimits) {
  BoundInputs in = Inputs(10000, 1, 1);
  in.lipschitz = 1.0;
  // (1 + 4 e^-2 / (1 - e^-1)^2) / 100 = 0.0235479 by hand.
  EXPECT_NEAR(*ContinuousUpperBound(in), 2.35479e-2, 1e-6);
  const double e = std::exp(-1.0);
  EXPECT_NEAR(*ContinuousUpperBound(in),
              (1 + 4 * e * e / ((1 - e) * (1 - e))) / 100, 1e-15);
  in.lipschitz = 0.0;
  EXPECT_NEAR(*ContinuousUpperBound(in), 4 * e * e / ((1 - e) * (1 - e)) / 100,
              1e-15);
  in.lipschitz = 1.0;
  double previous = INFINITY;
  for (double eps : {0.1, 0.5, 1.0, 3.0}) {
    in.epsilon = eps;
    const double v = *ContinuousUpperBound(in);
    EXPECT_LT(v, previous);
    previous = v;
  }
}

TEST(ContinuousBoundTest, NeedsLipschitzConstant) {
  auto result = ContinuousUpperBound(Inputs(10, 1, 1));
  EXPECT_STATUS_CODE(result, absl::StatusCode::kInvalidArgument);
  EXPECT_THAT(std::string(result.status().message()), HasSubstr("Lipschitz"));
}

TEST(CutBoundTest, ReferenceValueAndScaling) {
  EXPECT_NEAR(*CutBound(1, 1, 1.0), 2.16395, 1e-5);
  EXPECT_DOUBLE_EQ(*CutBound(6, 10, 0.7), 2 * *CutBound(3, 5, 0.7));
  EXPECT_EQ(*CutBound(4, 9, 700.0), 6.0);
  EXPECT_STATUS_CODE(CutBound(0, 3, 1.0), absl::StatusCode::kInvalidArgument);
  EXPECT_STATUS_CODE(CutBound(1, 3, 0.0), absl::StatusCode::kInvalidArgument);
}

TEST(BoundInputsTest, Validation) {
  BoundInputs in = Inputs(10, 1, 1);
  EXPECT_OK(in.Validate());
  in.b = in.a;
  EXPECT_STATUS_CODE(UpperBoundSquared(in, false),
                     absl::StatusCode::kInvalidArgument);
  EXPECT_STATUS_CODE(UpperBoundSquared(Inputs(0, 1, 1), false),
                     absl::StatusCode::kInvalidArgument);
  EXPECT_STATUS_CODE(UpperBoundSquared(Inputs(10, 1, 0), false),
                     absl::StatusCode::kInvalidArgument);
  BoundInputs bad_c = Inputs(10, 1, 1);
  bad_c.c = 0;
  EXPECT_STATUS_CODE(UpperBoundAbsolute(bad_c, false),
                     absl::StatusCode::kInvalidArgument);
}

}  // namespace
}  // namespace dpsynth
