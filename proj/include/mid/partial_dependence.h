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


// Partial dependence over any predictor, the PD-based decomposition into
// centred main and pairwise effects, and the H-statistic built on it. All
// expectations are empirical averages over the supplied dataset.

#ifndef MID_PARTIAL_DEPENDENCE_H_
#define MID_PARTIAL_DEPENDENCE_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mid/dataset.h"
#include "mid/predictor.h"

namespace mid {

inline constexpr std::size_t kDefaultPdGridSize = 51;

// Average prediction over all rows of `dataset` with the columns named in
// `features` (one or two) overwritten by each point of `points`. Each point
// holds one value per feature.
std::vector<double> pd(const Predictor& predictor, const Dataset& dataset,
                       std::span<const std::string> features,
                       std::span<const std::vector<Value>> points);

// Default evaluation grid: the levels of a categorical column, otherwise
// grid_size equispaced points over the observed range.
std::vector<Value> pd_grid(const Column& column, std::size_t grid_size = kDefaultPdGridSize);

struct PdDecomposition {
  std::vector<std::string> features;
  std::vector<std::vector<Value>> grids;             // per feature
  std::vector<std::vector<double>> main_on_grid;     // centred f_j on its grid
  std::vector<std::vector<double>> main_at_rows;     // centred f_j(x_ij)
  std::optional<std::vector<double>> interaction_at_rows;  // f_jk(x_ij, x_ik)
  // f_jk over grids[0] x grids[1] (row-major); only when requested.
  std::optional<Eigen::MatrixXd> interaction_on_grid;
};

struct PdOptions {
  std::size_t grid_size = kDefaultPdGridSize;
  // Explicit grids per feature; defaults to pd_grid when empty.
  std::vector<std::vector<Value>> grids;
  bool interaction_surface = false;
};

// f_j = PD_j minus its mean over the rows; for a pair, f_jk = PD_jk minus its
// row mean minus both centred mains.
PdDecomposition pd_decompose(const Predictor& predictor, const Dataset& dataset,
                             std::span<const std::string> features,
                             const PdOptions& options = {});

// Share of the pair's centred joint PD variation carried by the pure
// interaction, evaluated at the dataset rows. Unset when the joint PD is
// constant over the rows.
std::optional<double> h_statistic(const Predictor& predictor, const Dataset& dataset,
                                  const std::string& first, const std::string& second);

}  // namespace mid

#endif  // MID_PARTIAL_DEPENDENCE_H_
