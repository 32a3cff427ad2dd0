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

// Queries over a fitted MidModel: effect importance, prediction breakdowns,
// ceteris-paribus (ICE) curves and Shapley attributions.

#ifndef MID_INTERPRET_H_
#define MID_INTERPRET_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mid/dataset.h"
#include "mid/model.h"

namespace mid {

struct ImportanceRow {
  TermKey term;
  std::string name;
  double importance = 0.0;  // mean |f_J(x_iJ)|
  std::size_t rank = 0;     // 1-based
};

// Sorted by importance descending, ties by term key.
std::vector<ImportanceRow> importance(const MidModel& model, const Dataset& rows);

struct BreakdownItem {
  TermKey term;
  std::string name;
  double contribution = 0.0;
  double cumulative = 0.0;  // intercept plus this and all earlier items
};

struct BreakdownResult {
  double intercept = 0.0;
  std::vector<BreakdownItem> items;  // |contribution| descending
  double total = 0.0;
};

BreakdownResult breakdown(const MidModel& model, const Dataset& rows, std::size_t row);

struct IceCurves {
  std::string variable;
  std::vector<Value> grid;
  Eigen::MatrixXd curves;          // rows x grid points
  bool centered = false;
  std::optional<TermKey> term;     // set for term-restricted curves
};

// Ceteris-paribus curves for every row of `rows` as `variable` sweeps its
// grid: the observed categories or indicator values, otherwise grid_size
// equispaced points over the observed range. Centred curves subtract the
// value at the first grid point. With `term`, only that interaction's
// contribution f_jk(x_j, x_ik) is traced. A column that no model term uses
// gives constant curves; a name found in neither the model nor `rows` is a
// UsageError.
IceCurves ice(const MidModel& model, const Dataset& rows, std::string_view variable,
              std::size_t grid_size, bool centered = false,
              std::optional<TermKey> term = std::nullopt);

// Evaluation grid used by ICE and the effect exports.
std::vector<Value> feature_grid(const MidModel& model, const Dataset* rows,
                                std::string_view feature, std::size_t grid_size);

struct ShapMatrix {
  std::vector<std::string> features;
  Eigen::MatrixXd values;  // rows x features
  double intercept = 0.0;
};

// Each feature receives its main effect plus half of every pairwise effect
// that contains it.
ShapMatrix mid_shapley(const MidModel& model, const Dataset& rows);

// Exact Shapley values of one row by enumerating all feature subsets, with
// v(S) the sum of the effects whose features all lie in S. For testing.
std::vector<double> brute_force_shapley(const MidModel& model, const Dataset& rows,
                                        std::size_t row);

struct FeatureImportance {
  std::string feature;
  double importance = 0.0;  // mean |phi_j|
};

std::vector<FeatureImportance> shap_importance(const ShapMatrix& shap);

}  // namespace mid

#endif  // MID_INTERPRET_H_
