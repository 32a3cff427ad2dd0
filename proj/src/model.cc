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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "mid/error.h"

namespace mid {
namespace {

using nlohmann::json;

std::vector<std::string> split_term(std::string_view name) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = name.find(':', start);
    parts.emplace_back(name.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double uvr_ratio(const PredictionVector& predicted, const PredictionVector& actual) {
  const auto n = static_cast<double>(actual.size());
  const double mean = std::accumulate(actual.begin(), actual.end(), 0.0) / n;
  double rss = 0.0;
  double tss = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double r = actual[i] - predicted[i];
    const double c = actual[i] - mean;
    rss += r * r;
    tss += c * c;
  }
  if (tss == 0.0) {
    throw DataError("uninterpreted variation ratio is undefined: predictions are constant");
  }
  return rss / tss;
}

}  // namespace

std::optional<int> MidModel::feature_index(std::string_view name) const {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::optional<std::size_t> MidModel::term_index(const TermKey& key) const {
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    if (terms_[t].term == key) return t;
  }
  return std::nullopt;
}

TermKey MidModel::parse_term(std::string_view name) const {
  const auto parts = split_term(name);
  if (parts.empty() || parts.size() > 2) {
    throw UsageError("term '" + std::string(name) + "' must name one or two features");
  }
  std::vector<int> indices;
  for (const auto& part : parts) {
    auto index = feature_index(part);
    if (!index) throw UsageError("unknown feature '" + part + "' in term '" + std::string(name) + "'");
    indices.push_back(*index);
  }
  return TermKey::from(indices);
}

std::string MidModel::term_name(const TermKey& key) const {
  return mid::term_name(key, features_);
}

std::size_t MidModel::count_terms(std::size_t order) const {
  return static_cast<std::size_t>(std::count_if(
      terms_.begin(), terms_.end(),
      [order](const EffectTable& t) { return t.term.order() == order; }));
}

double MidModel::effect_value(std::size_t t, std::span<const Encoded> main,
                              std::span<const Encoded> interaction) const {
  const EffectTable& table = terms_[t];
  if (table.term.order() == 1) {
    const Encoded& e = main[static_cast<std::size_t>(table.term[0])];
    double v = 0.0;
    for (int a = 0; a < e.size; ++a) {
      v += e.weight[a] * table.coefficients[static_cast<std::size_t>(e.index[a])];
    }
    return v;
  }
  const Encoded& ep = interaction[static_cast<std::size_t>(table.term[0])];
  const Encoded& eq = interaction[static_cast<std::size_t>(table.term[1])];
  const int kq = table.shape[1];
  double v = 0.0;
  for (int a = 0; a < ep.size; ++a) {
    for (int b = 0; b < eq.size; ++b) {
      v += ep.weight[a] * eq.weight[b] *
           table.coefficients[static_cast<std::size_t>(ep.index[a] * kq + eq.index[b])];
    }
  }
  return v;
}

MidModel::EncodedRows MidModel::encode_rows(const Dataset& rows) const {
  EncodedRows out;
  out.main.resize(features_.size());
  out.interaction.resize(features_.size());
  std::vector<bool> need_main(features_.size(), false);
  std::vector<bool> need_inter(features_.size(), false);
  for (const auto& table : terms_) {
    for (int f : table.term.features()) {
      (table.term.order() == 1 ? need_main : need_inter)[static_cast<std::size_t>(f)] = true;
    }
  }
  for (std::size_t f = 0; f < features_.size(); ++f) {
    if (!need_main[f] && !need_inter[f]) continue;
    const Column& column = rows.column(features_[f].name);
    if (need_main[f]) out.main[f] = features_[f].main.encode_column(column);
    if (need_inter[f]) out.interaction[f] = features_[f].interaction.encode_column(column);
  }
  return out;
}

Eigen::MatrixXd MidModel::term_contributions(const Dataset& rows) const {
  const EncodedRows enc = encode_rows(rows);
  const std::size_t n = rows.n_rows();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(terms_.size()));
  std::vector<Encoded> main(features_.size());
  std::vector<Encoded> inter(features_.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < features_.size(); ++f) {
      if (!enc.main[f].empty()) main[f] = enc.main[f][i];
      if (!enc.interaction[f].empty()) inter[f] = enc.interaction[f][i];
    }
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) =
          effect_value(t, main, inter);
    }
  }
  return out;
}

MidModel MidModel::from_parts(double intercept, std::vector<FeatureEncoding> features,
                              std::vector<EffectTable> terms, FitMeta meta,
                              std::optional<double> uvr_train) {
  MidModel model;
  model.intercept_ = intercept;
  model.features_ = std::move(features);
  model.terms_ = std::move(terms);
  model.meta_ = std::move(meta);
  model.uvr_train_ = uvr_train;
  for (const auto& table : model.terms_) {
    std::size_t expected = 1;
    for (std::size_t i = 0; i < table.term.order(); ++i) {
      const int f = table.term[i];
      if (f < 0 || f >= static_cast<int>(model.features_.size())) {
        throw DataError("effect references unknown feature index");
      }
      const Encoder& enc = table.term.order() == 1
                               ? model.features_[static_cast<std::size_t>(f)].main
                               : model.features_[static_cast<std::size_t>(f)].interaction;
      if (table.shape.size() != table.term.order() || table.shape[i] != enc.size()) {
        throw DataError("effect shape does not match its encoders");
      }
      expected *= static_cast<std::size_t>(enc.size());
    }
    if (table.coefficients.size() != expected || table.delta.size() != expected) {
      throw DataError("effect coefficient count does not match its shape");
    }
  }
  return model;
}

std::vector<std::size_t> contribution_order(std::span<const double> contributions,
                                            std::span<const TermKey> keys) {
  std::vector<std::size_t> order(contributions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ma = std::abs(contributions[a]);
    const double mb = std::abs(contributions[b]);
    if (ma != mb) return ma > mb;
    return keys[a] < keys[b];
  });
  return order;
}

double sum_contributions(double intercept, std::span<const double> contributions,
                         std::span<const TermKey> keys) {
  double total = intercept;
  for (std::size_t t : contribution_order(contributions, keys)) total += contributions[t];
  return total;
}

MidModel fit(const Dataset& dataset, const PredictionVector& predictions,
             const FitOptions& options) {
  const std::size_t n = dataset.n_rows();
  if (n < 2) throw DataError("fit needs at least 2 rows");
  if (predictions.size() != n) {
    throw DataError("prediction vector length " + std::to_string(predictions.size()) +
                    " does not match " + std::to_string(n) + " rows");
  }
  for (double y : predictions) {
    if (!std::isfinite(y)) throw DataError("predictions must be finite");
  }
  if (options.order != 1 && options.order != 2) {
    throw UsageError("order must be 1 or 2 (got " + std::to_string(options.order) +
                     "); higher-order effects are not supported");
  }
  if (options.k_main < 2 || options.k_interaction < 2) {
    throw UsageError("k values must be at least 2");
  }
  options.solver.validate();

  // Resolve the term list against dataset column indices.
  std::vector<std::vector<std::size_t>> wanted;
  if (options.terms.empty()) {
    for (std::size_t c = 0; c < dataset.n_cols(); ++c) wanted.push_back({c});
    if (options.order == 2) {
      for (std::size_t a = 0; a < dataset.n_cols(); ++a) {
        for (std::size_t b = a + 1; b < dataset.n_cols(); ++b) wanted.push_back({a, b});
      }
    }
  } else {
    for (const auto& name : options.terms) {
      std::vector<std::size_t> cols;
      for (const auto& part : split_term(name)) {
        auto c = dataset.find(part);
        if (!c) throw DataError("term '" + name + "' references missing column '" + part + "'");
        cols.push_back(*c);
      }
      if (cols.size() > 2) throw UsageError("term '" + name + "' has order above 2");
      if (cols.size() == 2 && options.order < 2) {
        throw UsageError("term '" + name + "' needs order 2");
      }
      if (cols.size() == 2 && cols[0] == cols[1]) {
        throw UsageError("term '" + name + "' repeats a feature");
      }
      wanted.push_back(cols);
    }
  }
  if (wanted.empty()) throw DataError("dataset has no feature columns");

  std::vector<bool> used(dataset.n_cols(), false);
  for (const auto& cols : wanted) {
    for (auto c : cols) used[c] = true;
  }
  std::vector<int> feature_of_column(dataset.n_cols(), -1);
  std::vector<FeatureEncoding> features;
  for (std::size_t c = 0; c < dataset.n_cols(); ++c) {
    if (!used[c]) continue;
    feature_of_column[c] = static_cast<int>(features.size());
    const Column& column = dataset.column(c);
    features.push_back({column.name(),
                        Encoder::build(column, options.k_main, options.numeric_kind),
                        Encoder::build(column, options.k_interaction, options.numeric_kind)});
  }
  std::vector<TermKey> keys;
  for (const auto& cols : wanted) {
    keys.push_back(cols.size() == 1
                       ? TermKey(feature_of_column[cols[0]])
                       : TermKey(feature_of_column[cols[0]], feature_of_column[cols[1]]));
  }
  std::sort(keys.begin(), keys.end(), [](const TermKey& a, const TermKey& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a < b;
  });
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  MidModel model;
  model.intercept_ =
      std::accumulate(predictions.begin(), predictions.end(), 0.0) / static_cast<double>(n);
  Eigen::VectorXd y_tilde(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    y_tilde[static_cast<Eigen::Index>(i)] = predictions[i] - model.intercept_;
  }

  const LinearSystem system = assemble(dataset, features, keys);
  SolveReport report = solve(system, y_tilde, options.solver);

  for (const auto& block : system.blocks) {
    EffectTable table;
    table.term = block.key;
    table.shape = block.shape;
    table.coefficients.assign(report.coefficients.data() + block.col_begin,
                              report.coefficients.data() + block.col_end);
    table.delta.assign(system.delta.data() + block.col_begin,
                       system.delta.data() + block.col_end);
    model.terms_.push_back(std::move(table));
  }
  model.features_ = std::move(features);
  model.meta_.report = std::move(report);
  model.meta_.order = options.order;
  model.meta_.k_main = options.k_main;
  model.meta_.k_interaction = options.k_interaction;
  model.meta_.numeric_kind =
      std::string(encoding_kind_name(options.numeric_kind.value_or(EncodingKind::kLinear)));
  model.meta_.n_train = n;

  try {
    model.uvr_train_ = uvr(model, dataset, predictions);
  } catch (const DataError&) {
    model.uvr_train_ = std::nullopt;
  }
  return model;
}

PredictionVector predict(const MidModel& model, const Dataset& rows) {
  const Eigen::MatrixXd contributions = model.term_contributions(rows);
  std::vector<TermKey> keys;
  for (const auto& t : model.terms()) keys.push_back(t.term);
  PredictionVector out(rows.n_rows());
  std::vector<double> row(model.terms().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t t = 0; t < row.size(); ++t) {
      row[t] = contributions(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t));
    }
    out[i] = sum_contributions(model.intercept(), row, keys);
  }
  return out;
}

std::vector<double> effect(const MidModel& model, const TermKey& term,
                           std::span<const std::vector<Value>> points,
                           bool include_main_effects) {
  const auto t = model.term_index(term);
  if (!t) throw UsageError("term '" + model.term_name(term) + "' is not in the model");
  std::vector<std::optional<std::size_t>> mains;
  if (include_main_effects && term.order() == 2) {
    for (int f : term.features()) mains.push_back(model.term_index(TermKey(f)));
  }
  const auto& features = model.features();
  std::vector<Encoded> main(features.size());
  std::vector<Encoded> inter(features.size());
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& point : points) {
    if (point.size() != term.order()) {
      throw UsageError("effect point arity does not match term '" + model.term_name(term) + "'");
    }
    for (std::size_t i = 0; i < term.order(); ++i) {
      const auto f = static_cast<std::size_t>(term[i]);
      main[f] = features[f].main.encode(point[i]);
      inter[f] = features[f].interaction.encode(point[i]);
    }
    double v = model.effect_value(*t, main, inter);
    for (const auto& m : mains) {
      if (m) v += model.effect_value(*m, main, inter);
    }
    out.push_back(v);
  }
  return out;
}

double uvr(const MidModel& model, const Dataset& rows, const PredictionVector& predictions) {
  if (predictions.size() != rows.n_rows()) {
    throw DataError("prediction vector length does not match dataset rows");
  }
  if (predictions.empty()) throw DataError("uvr of an empty dataset");
  return uvr_ratio(predict(model, rows), predictions);
}

// Serialization.

namespace {

json encoder_to_json(const std::string& feature, std::string_view role, const Encoder& e) {
  json j;
  j["feature"] = feature;
  j["role"] = role;
  j["kind"] = encoding_kind_name(e.kind());
  if (e.categorical()) {
    j["type"] = "categorical";
    j["levels"] = e.levels();
  } else {
    j["type"] = "numeric";
    j["grid"] = e.grid();
  }
  return j;
}

Encoder encoder_from_json(const json& j) {
  const EncodingKind kind = parse_encoding_kind(j.at("kind").get<std::string>());
  if (j.at("type").get<std::string>() == "categorical") {
    if (kind != EncodingKind::kIndicator) throw DataError("categorical encoder must be indicator");
    return Encoder::level_indicator(j.at("levels").get<std::vector<std::string>>());
  }
  auto grid = j.at("grid").get<std::vector<double>>();
  switch (kind) {
    case EncodingKind::kIndicator:
      return Encoder::numeric_indicator(std::move(grid));
    case EncodingKind::kStep:
      return Encoder::step(std::move(grid));
    case EncodingKind::kLinear:
      return Encoder::linear(std::move(grid));
  }
  throw DataError("bad encoder kind");
}

json nullable(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string to_json_string(const MidModel& model) {
  json j;
  j["version"] = kModelFormatVersion;
  j["intercept"] = model.intercept();
  j["encoders"] = json::array();
  for (const auto& f : model.features()) {
    j["encoders"].push_back(encoder_to_json(f.name, "main", f.main));
    j["encoders"].push_back(encoder_to_json(f.name, "interaction", f.interaction));
  }
  j["terms"] = json::array();
  for (const auto& t : model.terms()) {
    json term;
    std::vector<std::string> names;
    for (int f : t.term.features()) names.push_back(model.features()[static_cast<std::size_t>(f)].name);
    term["features"] = names;
    term["shape"] = t.shape;
    term["coefficients"] = t.coefficients;
    term["delta"] = t.delta;
    j["terms"].push_back(std::move(term));
  }
  j["uvr_train"] = nullable(model.uvr_train());
  const FitMeta& m = model.meta();
  const SolveReport& r = m.report;
  json meta;
  meta["order"] = m.order;
  meta["k"] = {m.k_main, m.k_interaction};
  meta["numeric_kind"] = m.numeric_kind;
  meta["knot_rule"] = m.knot_rule;
  meta["n_train"] = m.n_train;
  meta["seed"] = m.seed ? json(*m.seed) : json(nullptr);
  json solver;
  solver["method"] = solve_method_name(r.method);
  solver["rank"] = r.rank ? json(*r.rank) : json("not determined");
  solver["residual_ss"] = r.residual_ss;
  solver["constraint_violation"] = r.constraint_violation;
  solver["elapsed_seconds"] = r.elapsed_seconds;
  solver["kappa"] = nullable(r.kappa);
  solver["rank_tol"] = r.rank_tol;
  solver["ridge_applied"] = r.ridge_applied;
  solver["refinement_steps"] = r.refinement_steps;
  solver["dead_columns"] = r.dead_columns;
  meta["solver"] = solver;
  j["fit_meta"] = meta;
  return j.dump(1);
}

MidModel from_json_string(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("corrupt model file: ") + e.what());
  }
  try {
    if (!j.contains("version") || !j["version"].is_number_integer()) {
      throw DataError("model file has no version");
    }
    const int version = j["version"].get<int>();
    if (version != kModelFormatVersion) {
      throw DataError("unsupported model format version " + std::to_string(version) +
                      " (this build reads version " + std::to_string(kModelFormatVersion) + ")");
    }
    std::vector<FeatureEncoding> features;
    for (const auto& e : j.at("encoders")) {
      const std::string name = e.at("feature").get<std::string>();
      auto it = std::find_if(features.begin(), features.end(),
                             [&](const FeatureEncoding& f) { return f.name == name; });
      Encoder enc = encoder_from_json(e);
      const std::string role = e.at("role").get<std::string>();
      if (it == features.end()) {
        features.push_back({name, enc, enc});
        it = features.end() - 1;
      }
      if (role == "main") {
        it->main = std::move(enc);
      } else if (role == "interaction") {
        it->interaction = std::move(enc);
      } else {
        throw DataError("unknown encoder role '" + role + "'");
      }
    }
    std::vector<EffectTable> terms;
    for (const auto& t : j.at("terms")) {
      std::vector<int> idx;
      for (const auto& name : t.at("features")) {
        const std::string fname = name.get<std::string>();
        auto it = std::find_if(features.begin(), features.end(),
                               [&](const FeatureEncoding& f) { return f.name == fname; });
        if (it == features.end()) throw DataError("term references unknown feature '" + fname + "'");
        idx.push_back(static_cast<int>(it - features.begin()));
      }
      EffectTable table;
      table.term = TermKey::from(idx);
      table.shape = t.at("shape").get<std::vector<int>>();
      table.coefficients = t.at("coefficients").get<std::vector<double>>();
      table.delta = t.at("delta").get<std::vector<double>>();
      terms.push_back(std::move(table));
    }
    FitMeta meta;
    std::optional<double> uvr_train;
    if (j.contains("uvr_train") && !j["uvr_train"].is_null()) uvr_train = j["uvr_train"].get<double>();
    if (j.contains("fit_meta")) {
      const auto& m = j["fit_meta"];
      meta.order = m.value("order", 2);
      if (m.contains("k")) {
        meta.k_main = m["k"].at(0).get<int>();
        meta.k_interaction = m["k"].at(1).get<int>();
      }
      meta.numeric_kind = m.value("numeric_kind", std::string("linear"));
      meta.knot_rule = m.value("knot_rule", meta.knot_rule);
      meta.n_train = m.value("n_train", std::size_t{0});
      if (m.contains("seed") && !m["seed"].is_null()) meta.seed = m["seed"].get<std::uint64_t>();
      if (m.contains("solver")) {
        const auto& s = m["solver"];
        SolveReport& r = meta.report;
        r.method = parse_solve_method(s.value("method", std::string("nullspace_svd")));
        if (s.contains("rank") && s["rank"].is_number_integer()) r.rank = s["rank"].get<Eigen::Index>();
        r.residual_ss = s.value("residual_ss", 0.0);
        r.constraint_violation = s.value("constraint_violation", 0.0);
        r.elapsed_seconds = s.value("elapsed_seconds", 0.0);
        if (s.contains("kappa") && !s["kappa"].is_null()) r.kappa = s["kappa"].get<double>();
        r.rank_tol = s.value("rank_tol", 0.0);
        r.ridge_applied = s.value("ridge_applied", false);
        r.refinement_steps = s.value("refinement_steps", 0);
        r.dead_columns = s.value("dead_columns", Eigen::Index{0});
      }
    }
    return MidModel::from_parts(j.at("intercept").get<double>(), std::move(features),
                                std::move(terms), std::move(meta), uvr_train);
  } catch (const json::exception& e) {
    throw DataError(std::string("corrupt model file: ") + e.what());
  } catch (const UsageError& e) {
    throw DataError(std::string("corrupt model file: ") + e.what());
  }
}

void save(const MidModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << to_json_string(model) << '\n';
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

MidModel load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_string(buffer.str());
}

}  // namespace mid
