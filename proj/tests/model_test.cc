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


#include "mid/model.h"

#include <cmath>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "mid/error.h"
#include "mid/generators.h"
#include "test_util.h"

namespace mid {
namespace {

TEST(ModelTest, ConstantPredictionsGiveZeroEffects) {
  const Dataset data = testing::random_dataset(50, 3, 1, true);
  const PredictionVector y(50, 4.25);
  const MidModel model = fit(data, y);
  EXPECT_EQ(model.intercept(), 4.25);
  EXPECT_FALSE(model.uvr_train().has_value());
  for (const auto& table : model.terms()) {
    for (double b : table.coefficients) EXPECT_EQ(b, 0.0);
  }
  for (double p : predict(model, data)) EXPECT_EQ(p, 4.25);
  EXPECT_THROW(uvr(model, data, y), DataError);
}

TEST(ModelTest, BinaryFeatureTwoCellSolution) {
  const std::vector<std::string> cells = {"a", "b", "a", "b", "a", "b"};
  const Dataset data({Column::categorical_from_strings("g", cells)});
  const PredictionVector y = {1, 3, 1, 3, 1, 3};
  const MidModel model = fit(data, y);
  EXPECT_DOUBLE_EQ(model.intercept(), 2.0);
  ASSERT_EQ(model.terms().size(), 1u);  // a single feature has no pairs
  EXPECT_NEAR(model.terms()[0].coefficients[0], -1.0, 1e-12);
  EXPECT_NEAR(model.terms()[0].coefficients[1], 1.0, 1e-12);
  EXPECT_NEAR(*model.uvr_train(), 0.0, 1e-20);

  const Dataset numeric({Column::numeric("g", {0, 1, 0, 1, 0, 1})});
  const MidModel same = fit(numeric, y);
  EXPECT_EQ(same.features()[0].main.kind(), EncodingKind::kIndicator);
  EXPECT_NEAR(same.terms()[0].coefficients[0], -1.0, 1e-12);
  EXPECT_NEAR(same.terms()[0].coefficients[1], 1.0, 1e-12);
}

TEST(ModelTest, FriedmanTrainingUvr) {
  const LabeledData train = gen_friedman1(2000, 1);
  const MidModel model = fit(train.dataset, train.predictions);
  EXPECT_EQ(model.count_terms(1), 10u);
  EXPECT_EQ(model.count_terms(2), 45u);
  ASSERT_TRUE(model.uvr_train().has_value());
  EXPECT_LE(*model.uvr_train(), 0.01);
  EXPECT_LE(testing::centering_violation(model), 1e-8);
}

TEST(ModelTest, EveryMethodSatisfiesCentering) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Dataset data = testing::random_dataset(150, 4, seed, seed % 2 == 0);
    const PredictionVector y = testing::random_response(data, seed + 100);
    for (auto method : {SolveMethod::kNullspaceSvd, SolveMethod::kPenalty,
                        SolveMethod::kNormalCholesky}) {
      FitOptions options;
      options.k_main = 8;
      options.k_interaction = 3;
      options.solver.method = method;
      const MidModel model = fit(data, y, options);
      EXPECT_LE(testing::centering_violation(model), 1e-8)
          << "seed " << seed << " " << solve_method_name(method);
    }
  }
}

TEST(ModelTest, UvrIsAffineInvariant) {
  const Dataset data = testing::random_dataset(120, 3, 9, true);
  const PredictionVector y = testing::random_response(data, 10);
  PredictionVector z(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) z[i] = -3.5 * y[i] + 12.0;
  const MidModel a = fit(data, y);
  const MidModel b = fit(data, z);
  EXPECT_NEAR(*a.uvr_train(), *b.uvr_train(), 1e-10);
  EXPECT_NEAR(uvr(a, data, y), uvr(b, data, z), 1e-10);
  const PredictionVector pa = predict(a, data), pb = predict(b, data);
  for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(pb[i], -3.5 * pa[i] + 12.0, 1e-9);
}

TEST(ModelTest, SaveLoadRoundTripIsExact) {
  const Dataset data = testing::random_dataset(80, 4, 21, true);
  const PredictionVector y = testing::random_response(data, 22);
  FitOptions options;
  options.k_main = 6;
  options.k_interaction = 3;
  const MidModel model = fit(data, y, options);
  const auto path = std::filesystem::temp_directory_path() / "mid_model_test_roundtrip.json";
  save(model, path);
  const MidModel loaded = load(path);
  std::filesystem::remove(path);
  EXPECT_EQ(predict(loaded, data), predict(model, data));
  EXPECT_EQ(loaded.intercept(), model.intercept());
  EXPECT_EQ(loaded.uvr_train(), model.uvr_train());
  EXPECT_EQ(to_json_string(loaded), to_json_string(model));
}

TEST(ModelTest, RejectsOtherFormatVersions) {
  const Dataset data = testing::random_dataset(30, 2, 2, false);
  const MidModel model = fit(data, testing::random_response(data, 3));
  std::string text = to_json_string(model);
  const auto at = text.find("\"version\": 1");
  ASSERT_NE(at, std::string::npos);
  text.replace(at, 12, "\"version\": 99");
  EXPECT_THROW(from_json_string(text), DataError);
  EXPECT_THROW(from_json_string("{not json"), DataError);
  EXPECT_THROW(load("/nonexistent/model.json"), DataError);
}

TEST(ModelTest, ExplicitTermsAndOrderOne) {
  const Dataset data = testing::random_dataset(60, 4, 4, false);
  const PredictionVector y = testing::random_response(data, 5);
  FitOptions options;
  options.order = 1;
  const MidModel mains = fit(data, y, options);
  EXPECT_EQ(mains.count_terms(1), 4u);
  EXPECT_EQ(mains.count_terms(2), 0u);
  options.order = 2;
  options.terms = {"f1", "f2:f3"};
  const MidModel chosen = fit(data, y, options);
  ASSERT_EQ(chosen.terms().size(), 2u);
  EXPECT_EQ(chosen.term_name(chosen.terms()[1].term), "f2:f3");
  EXPECT_EQ(chosen.parse_term("f3:f2"), TermKey(1, 2));
  options.terms = {"f1:f1"};
  EXPECT_THROW(fit(data, y, options), UsageError);
  options.terms = {"nope"};
  EXPECT_THROW(fit(data, y, options), DataError);
}

TEST(ModelTest, EffectEvaluationMatchesContributions) {
  const Dataset data = testing::random_dataset(100, 3, 31, false);
  const PredictionVector y = testing::random_response(data, 32);
  const MidModel model = fit(data, y);
  const Eigen::MatrixXd contributions = model.term_contributions(data);
  const TermKey pair(0, 1);
  std::vector<std::vector<Value>> points;
  for (std::size_t i = 0; i < 5; ++i) points.push_back({data.column(0).value(i), data.column(1).value(i)});
  const auto pure = effect(model, pair, points);
  const auto with_mains = effect(model, pair, points, true);
  const auto t_pair = *model.term_index(pair);
  const auto t0 = *model.term_index(TermKey(0));
  const auto t1 = *model.term_index(TermKey(1));
  for (std::size_t i = 0; i < 5; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    EXPECT_NEAR(pure[i], contributions(r, static_cast<Eigen::Index>(t_pair)), 1e-14);
    EXPECT_NEAR(with_mains[i], pure[i] + contributions(r, static_cast<Eigen::Index>(t0)) +
                                   contributions(r, static_cast<Eigen::Index>(t1)), 1e-12);
  }
  // Predictions are the intercept plus every contribution.
  const PredictionVector p = predict(model, data);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_NEAR(p[i], model.intercept() + contributions.row(static_cast<Eigen::Index>(i)).sum(), 1e-12);
  }
}

TEST(ModelTest, FitIsDeterministic) {
  const Dataset data = testing::random_dataset(90, 4, 41, true);
  const PredictionVector y = testing::random_response(data, 42);
  const MidModel a = fit(data, y);
  const MidModel b = fit(data, y);
  ASSERT_EQ(a.terms().size(), b.terms().size());
  for (std::size_t t = 0; t < a.terms().size(); ++t) {
    EXPECT_EQ(a.terms()[t].coefficients, b.terms()[t].coefficients);
  }
  EXPECT_EQ(predict(a, data), predict(b, data));
}

TEST(ModelTest, InvalidFitsAreRejected) {
  const Dataset data = testing::random_dataset(20, 2, 1, false);
  const PredictionVector y = testing::random_response(data, 2);
  FitOptions options;
  options.order = 3;
  EXPECT_THROW(fit(data, y, options), UsageError);
  options.order = 2;
  options.k_interaction = 1;
  EXPECT_THROW(fit(data, y, options), UsageError);
  EXPECT_THROW(fit(data, PredictionVector(19, 0.0)), DataError);
  PredictionVector bad = y;
  bad[3] = INFINITY;
  EXPECT_THROW(fit(data, bad), DataError);
  EXPECT_THROW(fit(data.head(1), PredictionVector(1, 0.0)), DataError);
}

TEST(ModelTest, UnknownLevelAtPredictionIsAnError) {
  const std::vector<std::string> train = {"a", "b", "a", "b"};
  const Dataset data({Column::categorical_from_strings("g", train)});
  const MidModel model = fit(data, {1, 2, 1, 2});
  const std::vector<std::string> other = {"c"};
  EXPECT_THROW(predict(model, Dataset({Column::categorical_from_strings("g", other)})),
               DataError);
}

}  // namespace
}  // namespace mid
