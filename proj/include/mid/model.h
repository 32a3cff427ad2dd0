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

// Maximum Interpretation Decomposition surrogate models.
//
// A MidModel is an intercept plus centred main effects and (optionally)
// pairwise interaction effects, each linear in the encoding functions of
// its features. Fitting solves one joint constrained least-squares problem
// on the centred predictions.

#ifndef MID_MODEL_H_
#define MID_MODEL_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mid/dataset.h"
#include "mid/design.h"
#include "mid/encoder.h"
#include "mid/predictor.h"
#include "mid/solver.h"

namespace mid {

inline constexpr int kModelFormatVersion = 1;

// Coefficients of one effect. Interactions are stored row-major with shape
// {k_p, k_q}.
struct EffectTable {
  TermKey term;
  std::vector<int> shape;
  std::vector<double> coefficients;
  std::vector<double> delta;
};

struct FitOptions {
  int order = 2;
  // Explicit terms by feature name ("x1", "x1:x2"); all main effects (and all
  // pairs when order is 2) when empty.
  std::vector<std::string> terms;
  int k_main = 25;
  int k_interaction = 5;
  std::optional<EncodingKind> numeric_kind;  // linear when unset
  SolverConfig solver;
};

struct FitMeta {
  SolveReport report;
  int order = 2;
  int k_main = 25;
  int k_interaction = 5;
  std::string numeric_kind = "linear";
  std::string knot_rule = "type-7 empirical quantiles, duplicates collapsed";
  std::size_t n_train = 0;
  std::optional<std::uint64_t> seed;  // provenance, when data was generated
};

class MidModel {
 public:
  MidModel() = default;

  double intercept() const { return intercept_; }
  const std::vector<FeatureEncoding>& features() const { return features_; }
  const std::vector<EffectTable>& terms() const { return terms_; }
  const FitMeta& meta() const { return meta_; }
  FitMeta& mutable_meta() { return meta_; }
  // Unset when the training predictions were constant.
  std::optional<double> uvr_train() const { return uvr_train_; }

  std::size_t n_features() const { return features_.size(); }
  std::optional<int> feature_index(std::string_view name) const;
  std::optional<std::size_t> term_index(const TermKey& key) const;
  // Parses "x1" or "x1:x2".
  TermKey parse_term(std::string_view name) const;
  std::string term_name(const TermKey& key) const;
  std::size_t count_terms(std::size_t order) const;

  // Effect value of term `t` for one encoded row.
  double effect_value(std::size_t t, std::span<const Encoded> main,
                      std::span<const Encoded> interaction) const;

  // Encodes the model's features for every row of `rows`.
  struct EncodedRows {
    std::vector<std::vector<Encoded>> main;         // per feature (may be empty)
    std::vector<std::vector<Encoded>> interaction;  // per feature (may be empty)
  };
  EncodedRows encode_rows(const Dataset& rows) const;

  // n x T matrix of effect values f_J(x_iJ), one column per term.
  Eigen::MatrixXd term_contributions(const Dataset& rows) const;

  static MidModel from_parts(double intercept, std::vector<FeatureEncoding> features,
                             std::vector<EffectTable> terms, FitMeta meta = {},
                             std::optional<double> uvr_train = std::nullopt);

 private:
  friend MidModel fit(const Dataset&, const PredictionVector&, const FitOptions&);

  double intercept_ = 0.0;
  std::vector<FeatureEncoding> features_;
  std::vector<EffectTable> terms_;
  FitMeta meta_;
  std::optional<double> uvr_train_;
};

MidModel fit(const Dataset& dataset, const PredictionVector& predictions,
             const FitOptions& options = {});

// Adds an intercept to per-term contributions in a fixed order: largest
// magnitude first, ties by term order. Every prediction path uses it so that
// predictions and breakdown totals agree bit for bit.
double sum_contributions(double intercept, std::span<const double> contributions,
                         std::span<const TermKey> keys);
std::vector<std::size_t> contribution_order(std::span<const double> contributions,
                                            std::span<const TermKey> keys);

PredictionVector predict(const MidModel& model, const Dataset& rows);

// Evaluates one term at explicit points (one value per feature of the term).
// With include_main_effects, interaction values include both main effects
// when the model has them.
std::vector<double> effect(const MidModel& model, const TermKey& term,
                           std::span<const std::vector<Value>> points,
                           bool include_main_effects = false);

// Sum of squared residuals over total sum of squares, using the supplied
// predictions' own mean. Throws DataError when the predictions are constant.
double uvr(const MidModel& model, const Dataset& rows, const PredictionVector& predictions);

void save(const MidModel& model, const std::filesystem::path& path);
MidModel load(const std::filesystem::path& path);
std::string to_json_string(const MidModel& model);
MidModel from_json_string(std::string_view text);

class ModelPredictor final : public Predictor {
 public:
  explicit ModelPredictor(const MidModel& model) : model_(model) {}
  PredictionVector predict(const Dataset& rows) const override {
    return mid::predict(model_, rows);
  }

 private:
  const MidModel& model_;
};

}  // namespace mid

#endif  // MID_MODEL_H_
