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


#include "mid/partial_dependence.h"

#include <algorithm>
#include <cmath>

#include "mid/error.h"
#include "mid/parallel.h"

namespace mid {
namespace {

std::vector<std::size_t> resolve(const Dataset& dataset, std::span<const std::string> features) {
  if (features.empty() || features.size() > 2) {
    throw UsageError("partial dependence takes one or two features");
  }
  if (features.size() == 2 && features[0] == features[1]) {
    throw UsageError("partial dependence pair must name two distinct features");
  }
  std::vector<std::size_t> indices;
  for (const auto& name : features) {
    const auto index = dataset.find(name);
    if (!index) throw DataError("feature '" + name + "' not found in the dataset");
    indices.push_back(*index);
  }
  return indices;
}

double mean(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::vector<std::vector<Value>> row_points(const Dataset& dataset,
                                           std::span<const std::size_t> columns) {
  std::vector<std::vector<Value>> points(dataset.n_rows());
  for (std::size_t i = 0; i < dataset.n_rows(); ++i) {
    for (std::size_t c : columns) points[i].push_back(dataset.column(c).value(i));
  }
  return points;
}

}  // namespace

std::vector<double> pd(const Predictor& predictor, const Dataset& dataset,
                       std::span<const std::string> features,
                       std::span<const std::vector<Value>> points) {
  const std::vector<std::size_t> columns = resolve(dataset, features);
  if (dataset.n_rows() == 0) throw DataError("partial dependence needs at least one row");
  for (const auto& point : points) {
    if (point.size() != columns.size()) {
      throw UsageError("each grid point needs one value per feature");
    }
    for (const auto& value : point) {
      if (const auto* real = std::get_if<double>(&value); real && !std::isfinite(*real)) {
        throw DataError("partial dependence grid points must be finite");
      }
    }
  }
  std::vector<double> out(points.size());
  parallel_for(points.size(), [&](std::size_t g) {
    Dataset modified = dataset;
    for (std::size_t f = 0; f < columns.size(); ++f) {
      modified = modified.with_column(columns[f],
                                      dataset.column(columns[f]).filled(points[g][f]));
    }
    const PredictionVector predictions = predictor.predict(modified);
    out[g] = mean(predictions);
  });
  return out;
}

std::vector<Value> pd_grid(const Column& column, std::size_t grid_size) {
  std::vector<Value> grid;
  if (!column.is_numeric()) {
    for (const auto& level : column.levels()) grid.emplace_back(level);
    return grid;
  }
  if (grid_size < 2) throw UsageError("grid size must be at least 2");
  if (column.size() == 0) throw DataError("cannot build a grid for an empty column");
  const auto [lo, hi] = std::minmax_element(column.values().begin(), column.values().end());
  for (std::size_t g = 0; g < grid_size; ++g) {
    const double t = static_cast<double>(g) / static_cast<double>(grid_size - 1);
    grid.emplace_back(g + 1 == grid_size ? *hi : *lo + t * (*hi - *lo));
  }
  return grid;
}

PdDecomposition pd_decompose(const Predictor& predictor, const Dataset& dataset,
                             std::span<const std::string> features,
                             const PdOptions& options) {
  const std::vector<std::size_t> columns = resolve(dataset, features);
  if (!options.grids.empty() && options.grids.size() != columns.size()) {
    throw UsageError("one grid per feature is required");
  }
  PdDecomposition out;
  out.features.assign(features.begin(), features.end());
  for (std::size_t f = 0; f < columns.size(); ++f) {
    out.grids.push_back(options.grids.empty()
                            ? pd_grid(dataset.column(columns[f]), options.grid_size)
                            : options.grids[f]);
  }

  // Main effects, centred over the rows' own feature values.
  std::vector<double> offsets;
  for (std::size_t f = 0; f < columns.size(); ++f) {
    const std::size_t one[] = {columns[f]};
    const std::string name[] = {features[f]};
    std::vector<double> at_rows = pd(predictor, dataset, name, row_points(dataset, one));
    const double offset = mean(at_rows);
    for (double& v : at_rows) v -= offset;
    std::vector<std::vector<Value>> grid_points;
    for (const auto& value : out.grids[f]) grid_points.push_back({value});
    std::vector<double> on_grid = pd(predictor, dataset, name, grid_points);
    for (double& v : on_grid) v -= offset;
    out.main_at_rows.push_back(std::move(at_rows));
    out.main_on_grid.push_back(std::move(on_grid));
    offsets.push_back(offset);
  }
  if (columns.size() == 1) return out;

  std::vector<double> joint = pd(predictor, dataset, features, row_points(dataset, columns));
  const double joint_offset = mean(joint);
  for (std::size_t i = 0; i < joint.size(); ++i) {
    joint[i] -= joint_offset + out.main_at_rows[0][i] + out.main_at_rows[1][i];
  }
  out.interaction_at_rows = std::move(joint);

  if (options.interaction_surface) {
    const auto& g0 = out.grids[0];
    const auto& g1 = out.grids[1];
    std::vector<std::vector<Value>> points;
    for (const auto& a : g0) {
      for (const auto& b : g1) points.push_back({a, b});
    }
    const std::vector<double> surface = pd(predictor, dataset, features, points);
    Eigen::MatrixXd grid(static_cast<Eigen::Index>(g0.size()), static_cast<Eigen::Index>(g1.size()));
    for (std::size_t a = 0; a < g0.size(); ++a) {
      for (std::size_t b = 0; b < g1.size(); ++b) {
        grid(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
            surface[a * g1.size() + b] - joint_offset - out.main_on_grid[0][a] -
            out.main_on_grid[1][b];
      }
    }
    out.interaction_on_grid = std::move(grid);
  }
  return out;
}

std::optional<double> h_statistic(const Predictor& predictor, const Dataset& dataset,
                                  const std::string& first, const std::string& second) {
  const std::string pair[] = {first, second};
  const PdDecomposition parts = pd_decompose(predictor, dataset, pair);
  double numerator = 0.0;
  double denominator = 0.0;
  for (std::size_t i = 0; i < dataset.n_rows(); ++i) {
    const double pure = (*parts.interaction_at_rows)[i];
    const double joint = pure + parts.main_at_rows[0][i] + parts.main_at_rows[1][i];
    numerator += pure * pure;
    denominator += joint * joint;
  }
  if (!(denominator > 0.0)) return std::nullopt;
  return numerator / denominator;
}

}  // namespace mid
