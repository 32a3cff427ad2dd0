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

#include "mid/interpret.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "mid/error.h"
#include "mid/parallel.h"

namespace mid {
namespace {

using Eigen::Index;

std::vector<TermKey> term_keys(const MidModel& model) {
  std::vector<TermKey> keys;
  for (const auto& t : model.terms()) keys.push_back(t.term);
  return keys;
}

std::vector<Value> equispaced(double lo, double hi, std::size_t count) {
  std::vector<Value> grid;
  if (count < 2) throw UsageError("grid size must be at least 2");
  for (std::size_t g = 0; g < count; ++g) {
    const double t = static_cast<double>(g) / static_cast<double>(count - 1);
    grid.emplace_back(g + 1 == count ? hi : lo + t * (hi - lo));
  }
  return grid;
}

}  // namespace

std::vector<ImportanceRow> importance(const MidModel& model, const Dataset& rows) {
  if (rows.n_rows() == 0) throw DataError("importance needs at least one row");
  const Eigen::MatrixXd contributions = model.term_contributions(rows);
  std::vector<ImportanceRow> out;
  for (std::size_t t = 0; t < model.terms().size(); ++t) {
    ImportanceRow row;
    row.term = model.terms()[t].term;
    row.name = model.term_name(row.term);
    row.importance = contributions.col(static_cast<Index>(t)).cwiseAbs().mean();
    out.push_back(std::move(row));
  }
  std::stable_sort(out.begin(), out.end(), [](const ImportanceRow& a, const ImportanceRow& b) {
    if (a.importance != b.importance) return a.importance > b.importance;
    return a.term < b.term;
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
  return out;
}

BreakdownResult breakdown(const MidModel& model, const Dataset& rows, std::size_t row) {
  if (row >= rows.n_rows()) {
    throw DataError("row " + std::to_string(row + 1) + " out of range (dataset has " +
                    std::to_string(rows.n_rows()) + " rows)");
  }
  const std::size_t one[] = {row};
  const Dataset single = rows.subset(one);
  const Eigen::MatrixXd contributions = model.term_contributions(single);
  const std::vector<TermKey> keys = term_keys(model);
  std::vector<double> values(keys.size());
  for (std::size_t t = 0; t < keys.size(); ++t) values[t] = contributions(0, static_cast<Index>(t));

  BreakdownResult out;
  out.intercept = model.intercept();
  double running = out.intercept;
  for (std::size_t t : contribution_order(values, keys)) {
    running += values[t];
    out.items.push_back({keys[t], model.term_name(keys[t]), values[t], running});
  }
  out.total = running;
  return out;
}

std::vector<Value> feature_grid(const MidModel& model, const Dataset* rows,
                                std::string_view feature, std::size_t grid_size) {
  const auto index = model.feature_index(feature);
  if (index) {
    const FeatureEncoding& fe = model.features()[static_cast<std::size_t>(*index)];
    for (const Encoder* enc : {&fe.main, &fe.interaction}) {
      if (enc->categorical() || enc->kind() == EncodingKind::kIndicator) return enc->anchors();
    }
  }
  if (rows != nullptr) {
    const Column& column = rows->column(feature);
    if (!column.is_numeric()) {
      std::vector<Value> grid;
      for (const auto& level : column.levels()) grid.emplace_back(level);
      return grid;
    }
    const auto [lo, hi] = std::minmax_element(column.values().begin(), column.values().end());
    return equispaced(*lo, *hi, grid_size);
  }
  if (!index) throw UsageError("unknown feature '" + std::string(feature) + "'");
  const auto anchors = model.features()[static_cast<std::size_t>(*index)].main.anchors();
  return equispaced(std::get<double>(anchors.front()), std::get<double>(anchors.back()),
                    grid_size);
}

IceCurves ice(const MidModel& model, const Dataset& rows, std::string_view variable,
              std::size_t grid_size, bool centered, std::optional<TermKey> term) {
  if (grid_size < 2) throw UsageError("grid size must be at least 2");
  if (!model.feature_index(variable) && !rows.find(variable)) {
    throw UsageError("unknown variable '" + std::string(variable) + "'");
  }
  IceCurves out;
  out.variable = std::string(variable);
  out.centered = centered;
  out.term = term;
  out.grid = feature_grid(model, &rows, variable, grid_size);
  const std::size_t n = rows.n_rows();
  const std::size_t g_count = out.grid.size();
  out.curves.resize(static_cast<Index>(n), static_cast<Index>(g_count));

  const auto j = model.feature_index(variable);
  const std::vector<TermKey> keys = term_keys(model);
  std::optional<std::size_t> restricted;
  if (term) {
    if (!j || !term->contains(*j) || term->order() != 2) {
      throw UsageError("ICE term must be an interaction containing '" + std::string(variable) + "'");
    }
    restricted = model.term_index(*term);
    if (!restricted) throw UsageError("term '" + model.term_name(*term) + "' is not in the model");
  }

  const Eigen::MatrixXd base = model.term_contributions(rows);
  const auto& features = model.features();

  // Encodings of the swept variable at each grid point.
  std::vector<Encoded> grid_main(g_count), grid_inter(g_count);
  if (j) {
    const FeatureEncoding& fe = features[static_cast<std::size_t>(*j)];
    for (std::size_t g = 0; g < g_count; ++g) {
      grid_main[g] = fe.main.encode(out.grid[g]);
      grid_inter[g] = fe.interaction.encode(out.grid[g]);
    }
  }
  std::vector<std::size_t> touched;
  if (j) {
    for (std::size_t t = 0; t < keys.size(); ++t) {
      if (keys[t].contains(*j)) touched.push_back(t);
    }
  }
  const MidModel::EncodedRows enc = model.encode_rows(rows);

  parallel_for(n, [&](std::size_t i) {
    std::vector<Encoded> main(features.size()), inter(features.size());
    for (std::size_t f = 0; f < features.size(); ++f) {
      if (!enc.main[f].empty()) main[f] = enc.main[f][i];
      if (!enc.interaction[f].empty()) inter[f] = enc.interaction[f][i];
    }
    std::vector<double> values(keys.size());
    for (std::size_t t = 0; t < keys.size(); ++t) values[t] = base(static_cast<Index>(i), static_cast<Index>(t));
    for (std::size_t g = 0; g < g_count; ++g) {
      if (j) {
        main[static_cast<std::size_t>(*j)] = grid_main[g];
        inter[static_cast<std::size_t>(*j)] = grid_inter[g];
      }
      double v;
      if (restricted) {
        v = model.effect_value(*restricted, main, inter);
      } else {
        for (std::size_t t : touched) values[t] = model.effect_value(t, main, inter);
        v = sum_contributions(model.intercept(), values, keys);
      }
      out.curves(static_cast<Index>(i), static_cast<Index>(g)) = v;
    }
  });
  if (centered) {
    for (Index i = 0; i < out.curves.rows(); ++i) {
      const double ref = out.curves(i, 0);
      out.curves.row(i).array() -= ref;
    }
  }
  return out;
}

ShapMatrix mid_shapley(const MidModel& model, const Dataset& rows) {
  const Eigen::MatrixXd contributions = model.term_contributions(rows);
  ShapMatrix out;
  out.intercept = model.intercept();
  for (const auto& f : model.features()) out.features.push_back(f.name);
  out.values = Eigen::MatrixXd::Zero(static_cast<Index>(rows.n_rows()),
                                     static_cast<Index>(model.n_features()));
  for (std::size_t t = 0; t < model.terms().size(); ++t) {
    const TermKey& key = model.terms()[t].term;
    const double share = 1.0 / static_cast<double>(key.order());
    for (int f : key.features()) {
      out.values.col(f) += share * contributions.col(static_cast<Index>(t));
    }
  }
  return out;
}

std::vector<double> brute_force_shapley(const MidModel& model, const Dataset& rows,
                                        std::size_t row) {
  const std::size_t d = model.n_features();
  if (d > 20) throw UsageError("brute-force Shapley supports at most 20 features");
  if (row >= rows.n_rows()) throw DataError("row out of range");
  const std::size_t one[] = {row};
  const Eigen::MatrixXd contributions = model.term_contributions(rows.subset(one));

  std::vector<std::uint32_t> masks;
  for (const auto& t : model.terms()) {
    std::uint32_t mask = 0;
    for (int f : t.term.features()) mask |= 1u << f;
    masks.push_back(mask);
  }
  // v(S) = sum of effects whose feature set is contained in S.
  const std::uint32_t subsets = 1u << d;
  std::vector<double> v(subsets, 0.0);
  for (std::uint32_t s = 0; s < subsets; ++s) {
    for (std::size_t t = 0; t < masks.size(); ++t) {
      if ((masks[t] & s) == masks[t]) v[s] += contributions(0, static_cast<Index>(t));
    }
  }
  // Weights |S|! (d - |S| - 1)! / d!.
  std::vector<double> weight(d, 0.0);
  for (std::size_t size = 0; size < d; ++size) {
    weight[size] = std::exp(std::lgamma(static_cast<double>(size) + 1.0) +
                            std::lgamma(static_cast<double>(d - size)) -
                            std::lgamma(static_cast<double>(d) + 1.0));
  }
  std::vector<double> phi(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    const std::uint32_t bit = 1u << j;
    for (std::uint32_t s = 0; s < subsets; ++s) {
      if (s & bit) continue;
      const auto size = static_cast<std::size_t>(std::popcount(s));
      phi[j] += weight[size] * (v[s | bit] - v[s]);
    }
  }
  return phi;
}

std::vector<FeatureImportance> shap_importance(const ShapMatrix& shap) {
  if (shap.values.rows() == 0) throw DataError("SHAP importance of an empty matrix");
  std::vector<FeatureImportance> out;
  for (Index j = 0; j < shap.values.cols(); ++j) {
    out.push_back({shap.features[static_cast<std::size_t>(j)], shap.values.col(j).cwiseAbs().mean()});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.importance != b.importance) return a.importance > b.importance;
    return a.feature < b.feature;
  });
  return out;
}

}  // namespace mid
