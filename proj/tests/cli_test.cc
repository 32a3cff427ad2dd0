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


#include "cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "mid/dataset.h"
#include "mid/model.h"

namespace mid {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) fields.push_back(f);
  return fields;
}

nlohmann::json metadata_of(const std::string& text) {
  const auto first = lines_of(text).at(0);
  EXPECT_EQ(first.rfind("# ", 0), 0u);
  return nlohmann::json::parse(first.substr(2));
}

// A temporary directory holding a small Friedman dataset and a model fitted
// to it, shared by the query tests.
class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / "mid_cli_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    data_ = (dir_ / "train.csv").string();
    model_ = (dir_ / "model.json").string();
    ASSERT_EQ(run({"generate", "friedman1", "--n", "300", "--seed", "7", "--out", data_}).code, 0);
    const Result fit = run({"fit", "--data", data_, "--k", "10,3", "--out", model_});
    ASSERT_EQ(fit.code, 0) << fit.err;
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static fs::path dir_;
  static std::string data_;
  static std::string model_;
};
fs::path CliTest::dir_;
std::string CliTest::data_;
std::string CliTest::model_;

TEST_F(CliTest, FitSummaryCountsTerms) {
  const Result r = run({"fit", "--data", data_, "--order", "2", "--k", "6,3", "--out",
                        (dir_ / "summary.json").string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("Main effects: 10 terms"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("Interactions: 45 terms"), std::string::npos);
  EXPECT_NE(r.out.find("Uninterpreted Variation Ratio:"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "summary.json"));
}

TEST_F(CliTest, FitRejectsBadColumnAndOrder) {
  const Result bad = run({"fit", "--data", data_, "--pred-col", "nosuch", "--out",
                          (dir_ / "x.json").string()});
  EXPECT_EQ(bad.code, cli::kExitData);
  EXPECT_NE(bad.err.find("nosuch"), std::string::npos) << bad.err;
  const Result order = run({"fit", "--data", data_, "--order", "3", "--out",
                            (dir_ / "x.json").string()});
  EXPECT_EQ(order.code, cli::kExitUsage);
  EXPECT_NE(order.err.find("order"), std::string::npos) << order.err;
  EXPECT_FALSE(fs::exists(dir_ / "x.json"));
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"fit", "--data", data_}).code, cli::kExitUsage);
}

TEST_F(CliTest, EffectsCsvHasTwoColumnsAndMetadata) {
  const Result r = run({"effects", "--model", model_, "--term", "x4", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 1u + 1u + 101u);
  const auto meta = metadata_of(r.out);
  EXPECT_EQ(meta["command"], "effects");
  EXPECT_EQ(meta["version"], std::string(cli::kVersion));
  EXPECT_EQ(lines[1], "x4,effect");
  for (std::size_t i = 2; i < lines.size(); ++i) EXPECT_EQ(fields_of(lines[i]).size(), 2u);
}

TEST_F(CliTest, BreakdownEndsAtPrediction) {
  const auto out = dir_ / "breakdown.csv";
  ASSERT_EQ(run({"breakdown", "--model", model_, "--data", data_, "--row", "1", "--out",
                 out.string()}).code, 0);
  const std::string text = slurp(out);
  const auto lines = lines_of(text);
  const double cumulative = std::stod(fields_of(lines.back()).back());
  const MidModel model = load(model_);
  CsvOptions options;
  options.prediction_column = "yhat";
  const LabeledData data = load_csv(data_, options);
  const double prediction = predict(model, data.dataset)[0];
  EXPECT_EQ(cumulative, prediction);
  EXPECT_EQ(metadata_of(text)["prediction"].get<double>(), prediction);
}

TEST_F(CliTest, ShapRowsSumToPredictions) {
  const auto out = dir_ / "shap.csv";
  ASSERT_EQ(run({"shap", "--model", model_, "--data", data_, "--out", out.string()}).code, 0);
  const std::string text = slurp(out);
  const double intercept = metadata_of(text)["intercept"].get<double>();
  const MidModel model = load(model_);
  CsvOptions options;
  options.prediction_column = "yhat";
  const PredictionVector p = predict(model, load_csv(data_, options).dataset);
  const auto lines = lines_of(text);
  ASSERT_EQ(lines.size(), 2u + p.size());
  const auto header = fields_of(lines[1]);
  ASSERT_EQ(header.front(), "row");
  ASSERT_EQ(header.back(), "prediction");
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto f = fields_of(lines[i + 2]);
    double sum = intercept;
    for (std::size_t j = 1; j + 1 < f.size(); ++j) sum += std::stod(f[j]);
    EXPECT_NEAR(sum, p[i], 1e-10);
    EXPECT_EQ(std::stod(f.back()), p[i]);
  }
}

TEST_F(CliTest, SvgIsValidXmlWithOnePlotPerTerm) {
  const auto out = dir_ / "effects.svg";
  ASSERT_EQ(run({"effects", "--model", model_, "--term", "x1,x4,x1:x2",
                 "--format", "svg", "--out", out.string()}).code, 0);
  const std::string text = slurp(out);
  std::size_t plots = 0;
  for (auto at = text.find("<g class=\"plot\""); at != std::string::npos;
       at = text.find("<g class=\"plot\"", at + 1)) {
    ++plots;
  }
  EXPECT_EQ(plots, 3u);
  if (std::system("python3 -c 'import xml.etree.ElementTree' > /dev/null 2>&1") != 0) {
    GTEST_SKIP() << "python3 not available for the XML check";
  }
  const std::string check =
      "python3 -c \"import sys, xml.etree.ElementTree as E; r = E.parse(sys.argv[1]).getroot(); "
      "n = sum(1 for g in r.iter('{http://www.w3.org/2000/svg}g') if g.get('class') == 'plot'); "
      "sys.exit(0 if n == 3 else 1)\" " + out.string();
  EXPECT_EQ(std::system(check.c_str()), 0);
}

TEST_F(CliTest, OtherQueriesSucceed) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"importance", "--model", model_, "--data", data_, "--format", "svg"},
           {"ice", "--model", model_, "--data", data_, "--variable", "x1", "--max-rows", "5",
            "--centered"},
           {"pd", "--builtin", "friedman1", "--data", data_, "--features", "x1,x2", "--grid", "5",
            "--max-rows", "50"},
           {"hstat", "--model", model_, "--data", data_, "--pairs", "x1:x2", "--max-rows", "50"},
       }) {
    const Result r = run(args);
    EXPECT_EQ(r.code, 0) << args[0] << ": " << r.err;
    EXPECT_FALSE(r.out.empty());
  }
}

TEST(CliCommandTest, SimulateFriedmanWritesBothUvrs) {
  const auto dir = fs::temp_directory_path() / "mid_cli_simulate";
  fs::remove_all(dir);
  const Result r = run({"simulate", "friedman", "--n", "400", "--k", "8,3", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
  EXPECT_TRUE(report.contains("uvr_train"));
  EXPECT_TRUE(report.contains("uvr_test"));
  EXPECT_TRUE(fs::exists(dir / "model.json"));
  fs::remove_all(dir);
}

TEST(CliCommandTest, UnknownScenarioListsValidNames) {
  const Result r = run({"simulate", "weather", "--out", "/tmp/never"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("friedman"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("stability"), std::string::npos);
}

TEST(CliCommandTest, BenchValidatesAndUsesColumnFormula) {
  EXPECT_EQ(run({"bench", "--reps", "0"}).code, cli::kExitUsage);
  // m = 25 * 16 + 25 * 16 * 15 / 2 = 3400; 30000 * 3400 exceeds the guard.
  const Result r = run({"bench", "--n", "30000", "--d", "16"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("30000*3400 = 102000000"), std::string::npos) << r.err;
  const Result small = run({"bench", "--n", "300", "--d", "3", "--k", "5,3", "--reps", "1"});
  ASSERT_EQ(small.code, 0) << small.err;
  EXPECT_NE(small.out.find("m = 42"), std::string::npos) << small.out;
}

TEST(CliCommandTest, GenerateIsDeterministic) {
  const auto path = (fs::temp_directory_path() / "mid_cli_generate.csv").string();
  ASSERT_EQ(run({"generate", "correlated_pair", "--n", "50", "--seed", "3", "--label",
                 "stability_a", "--out", path}).code, 0);
  const std::string first = slurp(path);
  ASSERT_EQ(run({"generate", "correlated_pair", "--n", "50", "--seed", "3", "--label",
                 "stability_a", "--out", path}).code, 0);
  EXPECT_EQ(slurp(path), first);
  EXPECT_TRUE(fs::exists(path + ".json"));
  fs::remove(path);
  fs::remove(path + ".json");
}

}  // namespace
}  // namespace mid
