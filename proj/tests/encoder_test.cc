/*
 * Copyright 2026 The mid Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "mid/encoder.h"

#include <random>

#include <gtest/gtest.h>

#include "mid/error.h"

namespace mid {
namespace {

double weight_sum(const Encoded& e) {
  double s = 0.0;
  for (int i = 0; i < e.size; ++i) s += e.weight[static_cast<std::size_t>(i)];
  return s;
}

Column uniform_column(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = unit(rng);
  return Column::numeric("x", v);
}

TEST(QuantileTest, TypeSevenHandValues) {
  // h = (n - 1) p; x[floor h] + frac(h) * (x[floor h + 1] - x[floor h]).
  const std::vector<double> sorted = {1, 2, 3, 4, 10};
  EXPECT_DOUBLE_EQ(quantile_sorted(sorted, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(sorted, 0.3), 2.2);
  EXPECT_DOUBLE_EQ(quantile_sorted(sorted, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(sorted, 0.9), 7.6);
  EXPECT_DOUBLE_EQ(quantile_sorted(sorted, 1.0), 10.0);
}

TEST(EncoderTest, WeightsSumToOneEverywhereIncludingExtrapolation) {
  const Column column = uniform_column(500, 1);
  for (auto kind : {EncodingKind::kLinear, EncodingKind::kStep}) {
    const Encoder enc = Encoder::build(column, 25, kind);
    for (double x = -1.0; x <= 2.0; x += 0.0137) {
      const Encoded e = enc.encode(x);
      EXPECT_NEAR(weight_sum(e), 1.0, 1e-15) << encoding_kind_name(kind) << " at " << x;
      for (int i = 0; i < e.size; ++i) {
        EXPECT_GE(e.weight[static_cast<std::size_t>(i)], 0.0);
        EXPECT_LT(e.index[static_cast<std::size_t>(i)], enc.size());
      }
    }
  }
}

TEST(EncoderTest, LinearKnotsSpanObservedRangeAndExtrapolateConstantly) {
  const Column column = uniform_column(400, 2);
  const Encoder enc = Encoder::build(column, 25);
  ASSERT_EQ(enc.kind(), EncodingKind::kLinear);
  ASSERT_EQ(enc.size(), 25);
  const auto [lo, hi] = std::minmax_element(column.values().begin(), column.values().end());
  EXPECT_EQ(enc.grid().front(), *lo);
  EXPECT_EQ(enc.grid().back(), *hi);
  EXPECT_EQ(enc.dense(Value(*lo - 5.0)), enc.dense(Value(*lo)));
  EXPECT_EQ(enc.dense(Value(*hi + 5.0)), enc.dense(Value(*hi)));
  const auto below = enc.dense(Value(*lo - 1.0));
  EXPECT_EQ(below[0], 1.0);
}

TEST(EncoderTest, HatFunctionsInterpolateLinearly) {
  const Encoder enc = Encoder::linear({0.0, 1.0, 3.0});
  EXPECT_EQ(enc.dense(Value(1.0)), (std::vector<double>{0.0, 1.0, 0.0}));
  const auto mid = enc.dense(Value(2.5));
  EXPECT_DOUBLE_EQ(mid[1], 0.25);
  EXPECT_DOUBLE_EQ(mid[2], 0.75);
}

TEST(EncoderTest, StepCellsAreHalfOpen) {
  const Encoder enc = Encoder::step({0.5, 0.8});
  EXPECT_EQ(enc.size(), 3);
  EXPECT_EQ(enc.dense(Value(0.49)), (std::vector<double>{1, 0, 0}));
  EXPECT_EQ(enc.dense(Value(0.5)), (std::vector<double>{0, 1, 0}));
  EXPECT_EQ(enc.dense(Value(0.8)), (std::vector<double>{0, 0, 1}));
  EXPECT_EQ(enc.dense(Value(-9.0)), (std::vector<double>{1, 0, 0}));
}

TEST(EncoderTest, FewDistinctValuesGiveIndicator) {
  const Column column = Column::numeric("x", {3, 1, 2, 1, 3, 3});
  const Encoder enc = Encoder::build(column, 25);
  EXPECT_EQ(enc.kind(), EncodingKind::kIndicator);
  EXPECT_EQ(enc.grid(), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(enc.dense(Value(2.0)), (std::vector<double>{0, 1, 0}));
  EXPECT_THROW(enc.encode(2.5), DataError);
}

TEST(EncoderTest, CategoricalLevelsAndUnknownLevel) {
  const std::vector<std::string> cells = {"b", "a", "c", "a"};
  const Encoder enc = Encoder::build(Column::categorical_from_strings("c", cells), 2);
  EXPECT_TRUE(enc.categorical());
  EXPECT_EQ(enc.size(), 3);
  EXPECT_EQ(enc.dense(Value(std::string("c"))), (std::vector<double>{0, 0, 1}));
  try {
    enc.encode(std::string_view("zzz"));
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown level 'zzz'"), std::string::npos);
  }
}

TEST(EncoderTest, DuplicateQuantilesCollapse) {
  std::vector<double> values(100, 0.0);
  for (int i = 0; i < 40; ++i) values[static_cast<std::size_t>(i)] = i;  // 60 zeros
  const Encoder enc = Encoder::build(Column::numeric("x", values), 25);
  ASSERT_EQ(enc.kind(), EncodingKind::kLinear);
  EXPECT_LT(enc.size(), 25);
  for (std::size_t i = 1; i < enc.grid().size(); ++i) EXPECT_LT(enc.grid()[i - 1], enc.grid()[i]);
  const Encoder step = Encoder::build(Column::numeric("x", values), 25, EncodingKind::kStep);
  for (std::size_t i = 1; i < step.grid().size(); ++i) EXPECT_LT(step.grid()[i - 1], step.grid()[i]);
}

TEST(EncoderTest, InvalidGridsAreRejected) {
  EXPECT_THROW(Encoder::linear({1.0}), UsageError);
  EXPECT_THROW(Encoder::linear({1.0, 1.0}), UsageError);
  EXPECT_THROW(Encoder::step({}), UsageError);
  EXPECT_THROW(Encoder::build(uniform_column(10, 1), 1), UsageError);
  EXPECT_THROW(parse_encoding_kind("spline"), UsageError);
}

}  // namespace
}  // namespace mid
