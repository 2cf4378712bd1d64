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

#include "dpsynth/core.h"

#include <cmath>
#include <set>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dpsynth {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

TEST(DataUniverseTest, AcceptsOneToThirtyBits) {
  EXPECT_STATUS_CODE(DataUniverse::Create(0),
                     absl::StatusCode::kInvalidArgument);
  EXPECT_STATUS_CODE(DataUniverse::Create(31),
                     absl::StatusCode::kInvalidArgument);
  ASSERT_OK_AND_ASSIGN(DataUniverse one, DataUniverse::Create(1));
  EXPECT_EQ(one.cardinality(), 2u);
  ASSERT_OK_AND_ASSIGN(DataUniverse top, DataUniverse::Create(30));
  EXPECT_EQ(top.cardinality(), uint32_t{1} << 30);
  EXPECT_TRUE(top.Contains((uint64_t{1} << 30) - 1));
  EXPECT_FALSE(top.Contains(uint64_t{1} << 30));
}

TEST(DatabaseTest, RejectsEmptyAndOutOfRangeRows) {
  ASSERT_OK_AND_ASSIGN(DataUniverse u, DataUniverse::Create(2));
  EXPECT_STATUS_CODE(Database::Create(u, {}),
                     absl::StatusCode::kInvalidArgument);
  EXPECT_STATUS_CODE(Database::Create(u, {0, 4}),
                     absl::StatusCode::kInvalidArgument);
  ASSERT_OK_AND_ASSIGN(Database x, Database::Create(u, {0, 3, 2}));
  EXPECT_EQ(x.size(), 3u);
  EXPECT_EQ(x[1], 3u);
}

TEST(HammingDistanceTest, CountsDifferingRows) {
  ASSERT_OK_AND_ASSIGN(DataUniverse u, DataUniverse::Create(2));
  ASSERT_OK_AND_ASSIGN(Database x, Database::Create(u, {0, 1, 2, 3}));
  ASSERT_OK_AND_ASSIGN(Database y, Database::Create(u, {0, 2, 2, 0}));
  ASSERT_OK_AND_ASSIGN(int64_t d, HammingDistance(x, y));
  EXPECT_EQ(d, 2);
  ASSERT_OK_AND_ASSIGN(int64_t self, HammingDistance(x, x));
  EXPECT_EQ(self, 0);
}

TEST(HammingDistanceTest, MismatchedShapesAreErrors) {
  ASSERT_OK_AND_ASSIGN(DataUniverse u1, DataUniverse::Create(1));
  ASSERT_OK_AND_ASSIGN(DataUniverse u2, DataUniverse::Create(2));
  ASSERT_OK_AND_ASSIGN(Database a, Database::Create(u1, {0, 1}));
  ASSERT_OK_AND_ASSIGN(Database b, Database::Create(u2, {0, 1}));
  ASSERT_OK_AND_ASSIGN(Database c, Database::Create(u1, {0, 1, 1}));
  auto wrong_universe = HammingDistance(a, b);
  EXPECT_STATUS_CODE(wrong_universe, absl::StatusCode::kInvalidArgument);
  EXPECT_THAT(std::string(wrong_universe.status().message()),
              HasSubstr("dimension mismatch"));
  EXPECT_STATUS_CODE(HammingDistance(a, c), absl::StatusCode::kInvalidArgument);
}

TEST(IsNeighborTest, ExactlyOneRowDiffers) {
  ASSERT_OK_AND_ASSIGN(DataUniverse u, DataUniverse::Create(1));
  ASSERT_OK_AND_ASSIGN(Database x, Database::Create(u, {0, 0}));
  ASSERT_OK_AND_ASSIGN(Database y, Database::Create(u, {0, 1}));
  ASSERT_OK_AND_ASSIGN(Database z, Database::Create(u, {1, 1}));
  ASSERT_OK_AND_ASSIGN(bool xy, IsNeighbor(x, y));
  ASSERT_OK_AND_ASSIGN(bool xz, IsNeighbor(x, z));
  ASSERT_OK_AND_ASSIGN(bool xx, IsNeighbor(x, x));
  EXPECT_TRUE(xy);
  EXPECT_FALSE(xz);
  EXPECT_FALSE(xx);
}

TEST(DatabaseEnumerationTest, VisitsEveryDatabaseOnce) {
  ASSERT_OK_AND_ASSIGN(DataUniverse u, DataUniverse::Create(2));
  ASSERT_OK_AND_ASSIGN(DatabaseEnumeration all, EnumerateDatabases(u, 3));
  EXPECT_EQ(all.size(), 64u);
  std::set<std::vector<Row>> seen;
  uint64_t index = 0;
  for (const Database& x : all) {
    EXPECT_EQ(all.IndexOf(x), index++);
    seen.insert({x.rows().begin(), x.rows().end()});
  }
  EXPECT_EQ(seen.size(), 64u);
}

TEST(DatabaseEnumerationTest, RowZeroIsTheLowestDigit) {
  ASSERT_OK_AND_ASSIGN(DataUniverse u, DataUniverse::Create(2));
  ASSERT_OK_AND_ASSIGN(DatabaseEnumeration all, EnumerateDatabases(u, 2));
  const Database x = all.At(1 + 4 * 3);
  EXPECT_THAT(std::vector<Row>(x.rows().begin(), x.rows().end()),
              ElementsAre(1, 3));
}

TEST(DatabaseEnumerationTest, RefusesHugeEnumerations) {
  ASSERT_OK_AND_ASSIGN(DataUniverse u, DataUniverse::Create(5));
  EXPECT_STATUS_CODE(EnumerateDatabases(u, 5),
                     absl::StatusCode::kResourceExhausted);
  EXPECT_OK(EnumerateDatabases(u, 4));
}

TEST(RowHistogramTest, CountsEachValue) {
  ASSERT_OK_AND_ASSIGN(DataUniverse u, DataUniverse::Create(2));
  ASSERT_OK_AND_ASSIGN(Database x, Database::Create(u, {3, 1, 3, 3}));
  EXPECT_THAT(RowHistogram(x), ElementsAre(0, 1, 0, 3));
}

TEST(RandomSourceTest, SameSeedSameStream) {
  RandomSource a(42, 7), b(42, 7), c(42, 8);
  bool any_difference = false;
  for (int i = 0; i < 100; ++i) {
    const uint64_t va = a(), vb = b(), vc = c();
    EXPECT_EQ(va, vb);
    any_difference = any_difference || va != vc;
  }
  EXPECT_TRUE(any_difference);
}

TEST(RandomSourceTest, ForkDoesNotAdvanceParent) {
  RandomSource a(3), b(3);
  RandomSource child = a.Fork(5);
  EXPECT_EQ(a(), b());
  RandomSource again = RandomSource(3).Fork(5);
  EXPECT_EQ(child(), again());
  EXPECT_NE(RandomSource(3).Fork(5)(), RandomSource(3).Fork(6)());
}

TEST(RandomSourceTest, UniformStaysInUnitInterval) {
  RandomSource rng(1);
  double sum = 0.0;
  const int count = 200000;
  for (int i = 0; i < count; ++i) {
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // Standard error of the mean is sqrt(1/12 / count) ~ 6.5e-4.
  EXPECT_NEAR(sum / count, 0.5, 5 * 6.5e-4);
}

TEST(RandomSourceTest, UniformIntCoversItsRange) {
  RandomSource rng(9);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rng.UniformInt(7)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
  EXPECT_EQ(rng.UniformInt(1), 0u);
}

TEST(CompensatedSumTest, RecoversSmallTermsLostByNaiveSummation) {
  CompensatedSum sum;
  double naive = 0.0;
  for (double v : {1e16, 1.0, -1e16, 1.0}) {
    sum.Add(v);
    naive += v;
  }
  EXPECT_EQ(sum.Total(), 2.0);
  EXPECT_NE(naive, 2.0);
}

}  // namespace
}  // namespace dpsynth
