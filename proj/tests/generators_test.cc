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


#include "mid/generators.h"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "mid/error.h"
#include "test_util.h"

namespace mid {
namespace {

// E[sin(pi U V)] for independent uniforms, frozen from the midpoint-rule
// oracle below.
constexpr double kMeanSinProduct = 0.524663067575319;
// Structural Friedman-1 mean: 10 E[sin(pi U V)] + 20/12 + 10/2 + 5/2.
constexpr double kFriedmanMean = 14.413297342419856;

TEST(FriedmanOracleTest, FrozenMeanMatchesNumericIntegration) {
  const double integral = testing::integrate_unit_square(
      [](double u, double v) { return std::sin(std::numbers::pi * u * v); }, 2000);
  EXPECT_NEAR(integral, kMeanSinProduct, 1e-7);
  EXPECT_NEAR(10.0 * integral + 20.0 / 12.0 + 7.5, kFriedmanMean, 1e-6);
}

TEST(FriedmanTest, StructuralValueAtCentre) {
  std::vector<Column> columns;
  for (int j = 1; j <= 10; ++j) columns.push_back(Column::numeric("x" + std::to_string(j), {0.5}));
  const auto y = eval_builtin(BuiltinFunction::kFriedman1, Dataset(columns));
  EXPECT_NEAR(y[0], 14.5711, 1e-4);
}

TEST(FriedmanTest, DeterministicAndInRange) {
  const auto a = gen_friedman1(300, 42);
  const auto b = gen_friedman1(300, 42);
  EXPECT_EQ(a.predictions, b.predictions);
  for (std::size_t j = 0; j < 10; ++j) {
    EXPECT_EQ(a.dataset.column(j).values(), b.dataset.column(j).values());
    for (double v : a.dataset.column(j).values()) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
  const auto c = gen_friedman1(300, 43);
  EXPECT_NE(a.predictions, c.predictions);
}

TEST(FriedmanTest, SampleMeanNearStructuralMean) {
  const auto data = gen_friedman1(2000, 1);
  double mean = 0.0, sq = 0.0;
  for (double y : data.predictions) mean += y;
  mean /= 2000.0;
  for (double y : data.predictions) sq += (y - mean) * (y - mean);
  const double standard_error = std::sqrt(sq / 1999.0 / 2000.0);
  EXPECT_NEAR(mean, kFriedmanMean, 4.0 * standard_error);
}

TEST(FriedmanTest, NoiseChangesOnlyPredictions) {
  const auto clean = gen_friedman1(200, 5, 0.0);
  const auto noisy = gen_friedman1(200, 5, 1.0);
  EXPECT_EQ(clean.dataset.column(0).values(), noisy.dataset.column(0).values());
  double ss = 0.0;
  for (std::size_t i = 0; i < 200; ++i) ss += std::pow(noisy.predictions[i] - clean.predictions[i], 2);
  EXPECT_NEAR(std::sqrt(ss / 200.0), 1.0, 0.2);
}

TEST(CorrelatedPairTest, CorrelationSpreadAndRange) {
  const Dataset data = gen_correlated_pair(200, 1);
  const auto& x1 = data.column(0).values();
  const auto& x2 = data.column(1).values();
  double m1 = 0, m2 = 0;
  for (std::size_t i = 0; i < 200; ++i) m1 += x1[i], m2 += x2[i];
  m1 /= 200, m2 /= 200;
  double s11 = 0, s22 = 0, s12 = 0, gap_mean = 0, gap_ss = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    s11 += (x1[i] - m1) * (x1[i] - m1);
    s22 += (x2[i] - m2) * (x2[i] - m2);
    s12 += (x1[i] - m1) * (x2[i] - m2);
    gap_mean += x1[i] - x2[i];
    EXPECT_GE(x1[i], -0.5);
    EXPECT_LE(x1[i], 1.5);
    EXPECT_GE(x2[i], -0.5);
    EXPECT_LE(x2[i], 1.5);
  }
  EXPECT_GT(s12 / std::sqrt(s11 * s22), 0.9);
  gap_mean /= 200;
  for (std::size_t i = 0; i < 200; ++i) gap_ss += std::pow(x1[i] - x2[i] - gap_mean, 2);
  const double gap_sd = std::sqrt(gap_ss / 199.0);
  // sd of a sample sd is about sigma / sqrt(2 (n - 1)).
  const double sigma = std::sqrt(2.0) * 0.05;
  EXPECT_NEAR(gap_sd, sigma, 3.0 * sigma / std::sqrt(2.0 * 199.0));
  EXPECT_EQ(gen_correlated_pair(200, 1).column(0).values(), x1);
}

TEST(BuiltinTest, StabilityFunctions) {
  const Dataset point({Column::numeric("x1", {0.3}), Column::numeric("x2", {0.5})});
  EXPECT_DOUBLE_EQ(eval_builtin(BuiltinFunction::kStabilityA, point)[0], 0.55);
  const Dataset diagonal({Column::numeric("x1", {0.1, 0.7}), Column::numeric("x2", {0.1, 0.7})});
  EXPECT_EQ(eval_builtin(BuiltinFunction::kStabilityA, diagonal),
            eval_builtin(BuiltinFunction::kStabilityB, diagonal));
  EXPECT_THROW(eval_builtin(BuiltinFunction::kFriedman1, point), DataError);
  EXPECT_THROW(parse_builtin("nope"), UsageError);
}

// In two and three dimensions the ball lies inside the cube and holds
// exactly half of it, so the labels split evenly up to sampling error.
TEST(CircleTest, LabelsSplitInHalfWhileBallFitsInCube) {
  for (std::size_t d : {2u, 3u}) {
    const auto data = gen_circle(4000, d, 3);
    double inside = 0.0;
    for (double y : data.predictions) {
      ASSERT_TRUE(y == 1.0 || y == 2.0);
      inside += y == 1.0;
    }
    EXPECT_NEAR(inside / 4000.0, 0.5, 4.0 * std::sqrt(0.25 / 4000.0)) << "d = " << d;
  }
}

// From four dimensions on the radius exceeds 1, so the ball is clipped by
// the cube and fewer than half of the points fall inside. The share is
// checked against the volume fraction estimated independently with a
// different generator.
TEST(CircleTest, ClippedBallShareMatchesMonteCarlo) {
  const std::size_t d = 8;
  const double pi = std::numbers::pi;
  const double unit_ball = std::pow(pi, 4.0) / 24.0;
  const double radius2 = std::pow(128.0 / unit_ball, 2.0 / 8.0);
  std::minstd_rand rng(12345);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  int hits = 0;
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) {
    double r2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double v = unif(rng);
      r2 += v * v;
    }
    hits += r2 < radius2;
  }
  const double expected = static_cast<double>(hits) / draws;
  const auto data = gen_circle(4000, d, 3);
  double inside = 0.0;
  for (double y : data.predictions) inside += y == 1.0;
  EXPECT_LT(expected, 0.45);
  EXPECT_NEAR(inside / 4000.0, expected, 4.0 * std::sqrt(0.25 / 4000.0));
}

}  // namespace
}  // namespace mid
