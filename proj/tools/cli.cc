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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mid/dataset.h"
#include "mid/error.h"
#include "mid/generators.h"
#include "mid/interpret.h"
#include "mid/model.h"
#include "mid/partial_dependence.h"
#include "svg.h"

namespace mid::cli {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Shared plumbing.

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::vector<std::string> args;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  std::istringstream in(text);
  while (std::getline(in, current, sep)) {
    if (!current.empty()) parts.push_back(current);
  }
  return parts;
}

std::pair<int, int> parse_k(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.empty() || parts.size() > 2) {
    throw UsageError("--k expects 'main,interaction' (for example 25,5); got '" + text + "'");
  }
  std::pair<int, int> k;
  try {
    k.first = std::stoi(parts[0]);
    k.second = parts.size() == 2 ? std::stoi(parts[1]) : k.first;
  } catch (const std::exception&) {
    throw UsageError("--k expects integers; got '" + text + "'");
  }
  if (k.first < 2 || k.second < 2) throw UsageError("--k values must be at least 2");
  return k;
}

Json metadata(const Context& ctx, const std::string& command) {
  Json meta;
  meta["tool"] = "mid";
  meta["version"] = std::string(kVersion);
  meta["command"] = command;
  meta["argv"] = ctx.args;
  return meta;
}

// Writes `content` to `path`, or to stdout when the path is empty.
void emit(const Context& ctx, const std::string& path, const std::string& content) {
  if (path.empty()) {
    ctx.out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot write '" + path + "'");
  file << content;
  if (!file) throw DataError("failed writing '" + path + "'");
}

std::string csv_header(const Json& meta) { return "# " + meta.dump() + "\n"; }

std::string csv_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += format_csv_field(fields[i]);
  }
  return line + "\n";
}

Json to_json(const Value& value) {
  if (const auto* real = std::get_if<double>(&value)) return *real;
  return std::get<std::string>(value);
}

double as_axis(const Value& value, std::size_t position) {
  if (const auto* real = std::get_if<double>(&value)) return *real;
  return static_cast<double>(position);
}

void check_format(const std::string& format) {
  if (format != "csv" && format != "json" && format != "svg") {
    throw UsageError("--format must be csv, json or svg; got '" + format + "'");
  }
}

// Loads query data, reading the model's categorical features as categorical.
LabeledData load_for_model(const MidModel& model, const std::string& path,
                           const std::string& pred_col) {
  CsvOptions options;
  if (!pred_col.empty()) options.prediction_column = pred_col;
  for (const auto& feature : model.features()) {
    if (feature.main.categorical()) options.type_hints[feature.name] = ColumnType::kCategorical;
  }
  return load_csv(path, options);
}

LabeledData load_plain(const std::string& path, const std::string& pred_col) {
  CsvOptions options;
  if (!pred_col.empty()) options.prediction_column = pred_col;
  return load_csv(path, options);
}

std::optional<std::uint64_t> sidecar_seed(const std::string& data_path) {
  std::ifstream in(data_path + ".json");
  if (!in) return std::nullopt;
  try {
    const Json sidecar = Json::parse(in);
    if (sidecar.contains("seed") && sidecar["seed"].is_number_unsigned()) {
      return sidecar["seed"].get<std::uint64_t>();
    }
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

std::string fixed(double value, int digits) {
  std::ostringstream out;
  out << std::setprecision(digits) << value;
  return out.str();
}

// ---------------------------------------------------------------------------
// fit

struct FitArgs {
  std::string data, test, pred_col = "yhat", out, k = "25,5", method = "nullspace_svd";
  std::string terms, numeric_kind;
  int order = 2;
  std::optional<double> kappa, rank_tol;
  std::optional<std::uint64_t> seed;
};

FitOptions fit_options(int order, const std::string& k_text, const std::string& method,
                       std::optional<double> kappa, std::optional<double> rank_tol,
                       const std::string& terms, const std::string& numeric_kind) {
  if (order != 1 && order != 2) {
    throw UsageError("--order " + std::to_string(order) +
                     " is not supported: only main effects (1) and pairwise interactions (2) "
                     "can be fitted");
  }
  FitOptions options;
  options.order = order;
  const auto k = parse_k(k_text);
  options.k_main = k.first;
  options.k_interaction = k.second;
  options.solver.method = parse_solve_method(method);
  options.solver.kappa = kappa;
  options.solver.rank_tol = rank_tol;
  options.solver.validate();
  options.terms = split(terms, ',');
  if (!numeric_kind.empty()) options.numeric_kind = parse_encoding_kind(numeric_kind);
  return options;
}

void print_summary(const Context& ctx, const MidModel& model) {
  const FitMeta& meta = model.meta();
  const SolveReport& report = meta.report;
  ctx.out << "MID surrogate model (order " << meta.order << ", k = (" << meta.k_main << ", "
          << meta.k_interaction << "), " << meta.numeric_kind << " encoding)\n";
  ctx.out << "Intercept: " << fixed(model.intercept(), 8) << "\n";
  ctx.out << "Main effects: " << model.count_terms(1) << " terms\n";
  ctx.out << "Interactions: " << model.count_terms(2) << " terms\n";
  ctx.out << "Uninterpreted Variation Ratio: "
          << (model.uvr_train() ? fixed(*model.uvr_train(), 8)
                                : std::string("undefined (constant predictions)"))
          << "\n";
  ctx.out << "Solver: " << solve_method_name(report.method) << ", rank "
          << (report.rank ? std::to_string(*report.rank) : std::string("not determined"))
          << ", residual SS " << fixed(report.residual_ss, 6) << ", max |M beta| "
          << fixed(report.constraint_violation, 3) << ", " << report.dead_columns
          << " dead columns" << (report.ridge_applied ? ", ridge applied" : "") << ", "
          << fixed(report.elapsed_seconds, 4) << " s\n";
}

int cmd_fit(const Context& ctx, const FitArgs& a) {
  const FitOptions options = fit_options(a.order, a.k, a.method, a.kappa, a.rank_tol, a.terms,
                                         a.numeric_kind);
  const LabeledData train = load_plain(a.data, a.pred_col);
  MidModel model = fit(train.dataset, train.predictions, options);
  model.mutable_meta().seed = a.seed ? a.seed : sidecar_seed(a.data);
  save(model, a.out);
  print_summary(ctx, model);
  if (!a.test.empty()) {
    const LabeledData test = load_for_model(model, a.test, a.pred_col);
    ctx.out << "Uninterpreted Variation Ratio (test): "
            << fixed(uvr(model, test.dataset, test.predictions), 8) << "\n";
  }
  ctx.out << "Model written to " << a.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// effects

struct EffectsArgs {
  std::string model, data, pred_col, terms, format = "csv", out;
  std::size_t grid = 101, grid2 = 31;
  bool with_mains = false;
};

int cmd_effects(const Context& ctx, const EffectsArgs& a) {
  check_format(a.format);
  if (a.grid < 2 || a.grid2 < 2) throw UsageError("grid sizes must be at least 2");
  const MidModel model = load(a.model);
  std::optional<LabeledData> data;
  if (!a.data.empty()) data = load_for_model(model, a.data, a.pred_col);
  const Dataset* rows = data ? &data->dataset : nullptr;

  std::vector<TermKey> keys;
  for (const auto& name : split(a.terms, ',')) keys.push_back(model.parse_term(name));
  if (keys.empty()) {
    for (const auto& t : model.terms()) keys.push_back(t.term);
  }
  for (const auto& key : keys) {
    if (!model.term_index(key)) throw UsageError("term '" + model.term_name(key) + "' is not in the model");
  }

  struct Table {
    TermKey key;
    std::vector<std::vector<Value>> grids;
    std::vector<std::vector<Value>> points;
    std::vector<double> values;
  };
  std::vector<Table> tables;
  for (const auto& key : keys) {
    Table table{key, {}, {}, {}};
    const std::size_t size = key.order() == 1 ? a.grid : a.grid2;
    for (int f : key.features()) {
      table.grids.push_back(
          feature_grid(model, rows, model.features()[static_cast<std::size_t>(f)].name, size));
    }
    if (key.order() == 1) {
      for (const auto& g : table.grids[0]) table.points.push_back({g});
    } else {
      for (const auto& g0 : table.grids[0]) {
        for (const auto& g1 : table.grids[1]) table.points.push_back({g0, g1});
      }
    }
    table.values = effect(model, key, table.points, a.with_mains);
    tables.push_back(std::move(table));
  }

  Json meta = metadata(ctx, "effects");
  meta["grid_size"] = a.grid;
  meta["interaction_grid_size"] = a.grid2;
  meta["with_main_effects"] = a.with_mains;
  meta["grid_rule"] = rows ? "observed range" : "encoder range";
  std::string content;
  if (a.format == "csv") {
    content = csv_header(meta);
    if (tables.size() == 1) {
      std::vector<std::string> header;
      for (int f : tables[0].key.features()) header.push_back(model.features()[static_cast<std::size_t>(f)].name);
      header.push_back("effect");
      content += csv_row(header);
      for (std::size_t p = 0; p < tables[0].points.size(); ++p) {
        std::vector<std::string> fields;
        for (const auto& v : tables[0].points[p]) fields.push_back(to_string(v));
        fields.push_back(format_real(tables[0].values[p]));
        content += csv_row(fields);
      }
    } else {
      content += csv_row({"term", "value1", "value2", "effect"});
      for (const auto& table : tables) {
        for (std::size_t p = 0; p < table.points.size(); ++p) {
          content += csv_row({model.term_name(table.key), to_string(table.points[p][0]),
                              table.points[p].size() > 1 ? to_string(table.points[p][1]) : "",
                              format_real(table.values[p])});
        }
      }
    }
  } else if (a.format == "json") {
    Json doc;
    doc["meta"] = meta;
    Json effects = Json::array();
    for (const auto& table : tables) {
      Json e;
      e["term"] = model.term_name(table.key);
      Json grids = Json::array();
      for (const auto& grid : table.grids) {
        Json g = Json::array();
        for (const auto& v : grid) g.push_back(to_json(v));
        grids.push_back(g);
      }
      e["grids"] = grids;
      e["values"] = table.values;
      effects.push_back(e);
    }
    doc["effects"] = effects;
    content = doc.dump(2) + "\n";
  } else {
    svg::Document doc(meta.dump());
    for (const auto& table : tables) {
      const std::string name = model.term_name(table.key);
      if (table.key.order() == 1) {
        svg::Series s;
        for (std::size_t p = 0; p < table.points.size(); ++p) {
          s.x.push_back(as_axis(table.points[p][0], p));
          s.y.push_back(table.values[p]);
        }
        doc.line_plot(name, "Main effect of " + name, name, "effect", {s});
      } else {
        std::vector<std::string> cols, rows_labels;
        for (const auto& v : table.grids[0]) cols.push_back(to_string(Value(v)).substr(0, 6));
        for (const auto& v : table.grids[1]) rows_labels.push_back(to_string(Value(v)).substr(0, 6));
        std::vector<std::vector<double>> values(table.grids[1].size(),
                                                std::vector<double>(table.grids[0].size()));
        for (std::size_t i = 0; i < table.grids[0].size(); ++i) {
          for (std::size_t j = 0; j < table.grids[1].size(); ++j) {
            values[j][i] = table.values[i * table.grids[1].size() + j];
          }
        }
        doc.heatmap(name, (a.with_mains ? "Interaction plus main effects " : "Interaction effect ") + name,
                    cols, rows_labels, values);
      }
    }
    content = doc.str();
  }
  emit(ctx, a.out, content);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// importance

struct QueryArgs {
  std::string model, data, pred_col, format = "csv", out;
};

int cmd_importance(const Context& ctx, const QueryArgs& a) {
  check_format(a.format);
  const MidModel model = load(a.model);
  const LabeledData data = load_for_model(model, a.data, a.pred_col);
  const auto table = importance(model, data.dataset);
  Json meta = metadata(ctx, "importance");
  meta["n_rows"] = data.dataset.n_rows();
  std::string content;
  if (a.format == "csv") {
    content = csv_header(meta) + csv_row({"rank", "term", "importance"});
    for (const auto& row : table) {
      content += csv_row({std::to_string(row.rank), row.name, format_real(row.importance)});
    }
  } else if (a.format == "json") {
    Json doc;
    doc["meta"] = meta;
    Json rows = Json::array();
    for (const auto& row : table) {
      rows.push_back({{"rank", row.rank}, {"term", row.name}, {"importance", row.importance}});
    }
    doc["importance"] = rows;
    content = doc.dump(2) + "\n";
  } else {
    svg::Document doc(meta.dump());
    std::vector<std::string> labels;
    std::vector<double> values;
    for (const auto& row : table) {
      labels.push_back(row.name);
      values.push_back(row.importance);
    }
    doc.bar_chart("importance", "Effect importance (mean |effect|)", labels, values);
    if (model.count_terms(2) > 0) {
      const std::size_t d = model.n_features();
      std::vector<std::string> names;
      for (const auto& f : model.features()) names.push_back(f.name);
      std::vector<std::vector<double>> grid(d, std::vector<double>(d, 0.0));
      for (const auto& row : table) {
        const auto& fs_ = row.term.features();
        const std::size_t p = static_cast<std::size_t>(fs_.front());
        const std::size_t q = static_cast<std::size_t>(fs_.back());
        grid[p][q] = grid[q][p] = row.importance;
      }
      doc.heatmap("importance-matrix", "Importance heatmap", names, names, grid);
    }
    content = doc.str();
  }
  emit(ctx, a.out, content);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// breakdown

struct BreakdownArgs : QueryArgs {
  std::size_t row = 1;
};

int cmd_breakdown(const Context& ctx, const BreakdownArgs& a) {
  check_format(a.format);
  if (a.row < 1) throw UsageError("--row is 1-based");
  const MidModel model = load(a.model);
  const LabeledData data = load_for_model(model, a.data, a.pred_col);
  const BreakdownResult result = breakdown(model, data.dataset, a.row - 1);
  const std::size_t one[] = {a.row - 1};
  const Dataset single = data.dataset.subset(one);
  const double prediction = predict(model, single)[0];

  auto describe = [&](const TermKey& key) {
    std::string text;
    for (int f : key.features()) {
      const std::string& name = model.features()[static_cast<std::size_t>(f)].name;
      if (!text.empty()) text += "; ";
      text += name + "=" + to_string(single.column(name).value(0));
    }
    return text;
  };

  Json meta = metadata(ctx, "breakdown");
  meta["row"] = a.row;
  meta["prediction"] = prediction;
  meta["intercept"] = result.intercept;
  meta["order"] = "|contribution| descending, ties by term";
  std::string content;
  if (a.format == "csv") {
    content = csv_header(meta) + csv_row({"step", "term", "value", "contribution", "cumulative"});
    content += csv_row({"0", "(intercept)", "", format_real(result.intercept),
                        format_real(result.intercept)});
    for (std::size_t i = 0; i < result.items.size(); ++i) {
      const auto& item = result.items[i];
      content += csv_row({std::to_string(i + 1), item.name, describe(item.term),
                          format_real(item.contribution), format_real(item.cumulative)});
    }
  } else if (a.format == "json") {
    Json doc;
    doc["meta"] = meta;
    Json items = Json::array();
    for (const auto& item : result.items) {
      items.push_back({{"term", item.name},
                       {"value", describe(item.term)},
                       {"contribution", item.contribution},
                       {"cumulative", item.cumulative}});
    }
    doc["intercept"] = result.intercept;
    doc["items"] = items;
    doc["total"] = result.total;
    content = doc.dump(2) + "\n";
  } else {
    svg::Document doc(meta.dump());
    std::vector<svg::WaterfallStep> steps;
    double previous = result.intercept;
    for (const auto& item : result.items) {
      steps.push_back({item.name, previous, item.cumulative});
      previous = item.cumulative;
    }
    doc.waterfall("breakdown", "Breakdown of row " + std::to_string(a.row), steps);
    content = doc.str();
  }
  emit(ctx, a.out, content);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// ice

struct IceArgs : QueryArgs {
  std::string variable, term;
  std::size_t grid = 51, max_rows = 0;
  bool centered = false;
};

int cmd_ice(const Context& ctx, const IceArgs& a) {
  check_format(a.format);
  const MidModel model = load(a.model);
  LabeledData data = load_for_model(model, a.data, a.pred_col);
  Dataset rows = data.dataset;
  if (a.max_rows > 0 && a.max_rows < rows.n_rows()) rows = rows.head(a.max_rows);
  std::optional<TermKey> term;
  if (!a.term.empty()) term = model.parse_term(a.term);
  const IceCurves curves = ice(model, rows, a.variable, a.grid, a.centered, term);

  Json meta = metadata(ctx, "ice");
  meta["variable"] = a.variable;
  meta["grid_size"] = curves.grid.size();
  meta["centered"] = a.centered;
  meta["reference"] = "grid minimum";
  if (term) meta["term"] = model.term_name(*term);
  std::string content;
  if (a.format == "csv") {
    content = csv_header(meta) + csv_row({"row", a.variable, "value"});
    for (Eigen::Index i = 0; i < curves.curves.rows(); ++i) {
      for (std::size_t g = 0; g < curves.grid.size(); ++g) {
        content += csv_row({std::to_string(i + 1), to_string(curves.grid[g]),
                            format_real(curves.curves(i, static_cast<Eigen::Index>(g)))});
      }
    }
  } else if (a.format == "json") {
    Json doc;
    doc["meta"] = meta;
    Json grid = Json::array();
    for (const auto& v : curves.grid) grid.push_back(to_json(v));
    doc["grid"] = grid;
    Json rows_json = Json::array();
    for (Eigen::Index i = 0; i < curves.curves.rows(); ++i) {
      std::vector<double> values(curves.curves.cols());
      for (Eigen::Index g = 0; g < curves.curves.cols(); ++g) values[static_cast<std::size_t>(g)] = curves.curves(i, g);
      rows_json.push_back(values);
    }
    doc["curves"] = rows_json;
    content = doc.dump(2) + "\n";
  } else {
    svg::Document doc(meta.dump());
    std::vector<svg::Series> series;
    for (Eigen::Index i = 0; i < curves.curves.rows(); ++i) {
      svg::Series s;
      for (std::size_t g = 0; g < curves.grid.size(); ++g) {
        s.x.push_back(as_axis(curves.grid[g], g));
        s.y.push_back(curves.curves(i, static_cast<Eigen::Index>(g)));
      }
      series.push_back(std::move(s));
    }
    doc.line_plot(term ? model.term_name(*term) : a.variable,
                  std::string(a.centered ? "Centered ICE" : "ICE") + " curves for " + a.variable,
                  a.variable, "prediction", series);
    content = doc.str();
  }
  emit(ctx, a.out, content);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// shap

int cmd_shap(const Context& ctx, const QueryArgs& a) {
  check_format(a.format);
  const MidModel model = load(a.model);
  const LabeledData data = load_for_model(model, a.data, a.pred_col);
  const ShapMatrix shap = mid_shapley(model, data.dataset);
  const PredictionVector predictions = predict(model, data.dataset);
  Json meta = metadata(ctx, "shap");
  meta["intercept"] = shap.intercept;
  meta["n_rows"] = data.dataset.n_rows();
  std::string content;
  if (a.format == "csv") {
    std::vector<std::string> header = {"row"};
    header.insert(header.end(), shap.features.begin(), shap.features.end());
    header.push_back("prediction");
    content = csv_header(meta) + csv_row(header);
    for (Eigen::Index i = 0; i < shap.values.rows(); ++i) {
      std::vector<std::string> fields = {std::to_string(i + 1)};
      for (Eigen::Index j = 0; j < shap.values.cols(); ++j) fields.push_back(format_real(shap.values(i, j)));
      fields.push_back(format_real(predictions[static_cast<std::size_t>(i)]));
      content += csv_row(fields);
    }
  } else if (a.format == "json") {
    Json doc;
    doc["meta"] = meta;
    doc["features"] = shap.features;
    Json values = Json::array();
    for (Eigen::Index i = 0; i < shap.values.rows(); ++i) {
      std::vector<double> row(static_cast<std::size_t>(shap.values.cols()));
      for (Eigen::Index j = 0; j < shap.values.cols(); ++j) row[static_cast<std::size_t>(j)] = shap.values(i, j);
      values.push_back(row);
    }
    doc["values"] = values;
    doc["predictions"] = predictions;
    Json imp = Json::array();
    for (const auto& f : shap_importance(shap)) imp.push_back({{"feature", f.feature}, {"importance", f.importance}});
    doc["importance"] = imp;
    content = doc.dump(2) + "\n";
  } else {
    svg::Document doc(meta.dump());
    std::vector<std::string> labels;
    std::vector<double> values;
    for (const auto& f : shap_importance(shap)) {
      labels.push_back(f.feature);
      values.push_back(f.importance);
    }
    doc.bar_chart("shap-importance", "SHAP importance (mean |phi|)", labels, values);
    content = doc.str();
  }
  emit(ctx, a.out, content);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// pd / hstat

struct PdArgs {
  std::string model, builtin, data, pred_col, features, pairs, format = "csv", out;
  std::size_t grid = kDefaultPdGridSize, max_rows = 0;
};

struct PredictorSource {
  std::optional<MidModel> model;
  std::optional<BuiltinPredictor> builtin;
  std::unique_ptr<Predictor> adapter;
  const Predictor& get() const {
    if (adapter) return *adapter;
    return *builtin;
  }
  std::string name;
};

PredictorSource predictor_source(const PdArgs& a) {
  if (a.model.empty() == a.builtin.empty()) {
    throw UsageError("give exactly one of --model or --builtin");
  }
  PredictorSource source;
  if (!a.model.empty()) {
    source.model = load(a.model);
    source.adapter = std::make_unique<ModelPredictor>(*source.model);
    source.name = a.model;
  } else {
    source.builtin.emplace(parse_builtin(a.builtin));
    source.name = a.builtin;
  }
  return source;
}

Dataset pd_rows(const PredictorSource& source, const PdArgs& a) {
  LabeledData data = source.model ? load_for_model(*source.model, a.data, a.pred_col)
                                  : load_plain(a.data, a.pred_col);
  if (a.max_rows > 0 && a.max_rows < data.dataset.n_rows()) return data.dataset.head(a.max_rows);
  return data.dataset;
}

int cmd_pd(const Context& ctx, const PdArgs& a) {
  check_format(a.format);
  const PredictorSource source = predictor_source(a);
  const Dataset rows = pd_rows(source, a);
  const std::vector<std::string> features = split(a.features, ',');
  PdOptions options;
  options.grid_size = a.grid;
  options.interaction_surface = features.size() == 2;
  const PdDecomposition parts = pd_decompose(source.get(), rows, features, options);

  Json meta = metadata(ctx, "pd");
  meta["predictor"] = source.name;
  meta["features"] = features;
  meta["grid_size"] = a.grid;
  meta["grid_rule"] = "equispaced over the observed range (levels for categorical)";
  meta["n_rows"] = rows.n_rows();
  std::string content;
  if (features.size() == 1) {
    std::vector<std::vector<Value>> points;
    for (const auto& g : parts.grids[0]) points.push_back({g});
    const std::vector<double> raw = pd(source.get(), rows, features, points);
    if (a.format == "csv") {
      content = csv_header(meta) + csv_row({features[0], "pd", "effect"});
      for (std::size_t g = 0; g < raw.size(); ++g) {
        content += csv_row({to_string(parts.grids[0][g]), format_real(raw[g]),
                            format_real(parts.main_on_grid[0][g])});
      }
    } else if (a.format == "json") {
      Json doc;
      doc["meta"] = meta;
      Json grid = Json::array();
      for (const auto& v : parts.grids[0]) grid.push_back(to_json(v));
      doc["grid"] = grid;
      doc["pd"] = raw;
      doc["effect"] = parts.main_on_grid[0];
      content = doc.dump(2) + "\n";
    } else {
      svg::Document doc(meta.dump());
      svg::Series s;
      for (std::size_t g = 0; g < raw.size(); ++g) {
        s.x.push_back(as_axis(parts.grids[0][g], g));
        s.y.push_back(parts.main_on_grid[0][g]);
      }
      doc.line_plot(features[0], "Centered partial dependence of " + features[0], features[0],
                    "effect", {s});
      content = doc.str();
    }
  } else {
    const Eigen::MatrixXd& surface = *parts.interaction_on_grid;
    if (a.format == "csv") {
      content = csv_header(meta) + csv_row({features[0], features[1], "interaction"});
      for (std::size_t i = 0; i < parts.grids[0].size(); ++i) {
        for (std::size_t j = 0; j < parts.grids[1].size(); ++j) {
          content += csv_row({to_string(parts.grids[0][i]), to_string(parts.grids[1][j]),
                              format_real(surface(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))});
        }
      }
    } else if (a.format == "json") {
      Json doc;
      doc["meta"] = meta;
      Json grids = Json::array();
      for (const auto& grid : parts.grids) {
        Json g = Json::array();
        for (const auto& v : grid) g.push_back(to_json(v));
        grids.push_back(g);
      }
      doc["grids"] = grids;
      Json values = Json::array();
      for (Eigen::Index i = 0; i < surface.rows(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(surface.cols()));
        for (Eigen::Index j = 0; j < surface.cols(); ++j) row[static_cast<std::size_t>(j)] = surface(i, j);
        values.push_back(row);
      }
      doc["interaction"] = values;
      content = doc.dump(2) + "\n";
    } else {
      svg::Document doc(meta.dump());
      std::vector<std::string> cols, row_labels;
      for (const auto& v : parts.grids[0]) cols.push_back(to_string(v).substr(0, 6));
      for (const auto& v : parts.grids[1]) row_labels.push_back(to_string(v).substr(0, 6));
      std::vector<std::vector<double>> values(parts.grids[1].size(),
                                              std::vector<double>(parts.grids[0].size()));
      for (std::size_t i = 0; i < parts.grids[0].size(); ++i) {
        for (std::size_t j = 0; j < parts.grids[1].size(); ++j) {
          values[j][i] = surface(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
      }
      const std::string name = features[0] + ":" + features[1];
      doc.heatmap(name, "PD interaction " + name, cols, row_labels, values);
      content = doc.str();
    }
  }
  emit(ctx, a.out, content);
  return kExitOk;
}

int cmd_hstat(const Context& ctx, const PdArgs& a) {
  check_format(a.format);
  if (a.format == "svg") throw UsageError("hstat writes csv or json");
  const PredictorSource source = predictor_source(a);
  const Dataset rows = pd_rows(source, a);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& text : split(a.pairs, ',')) {
    const auto names = split(text, ':');
    if (names.size() != 2) throw UsageError("--pairs expects entries like x1:x2; got '" + text + "'");
    pairs.emplace_back(names[0], names[1]);
  }
  if (pairs.empty()) {
    std::vector<std::string> names;
    if (source.model) {
      for (const auto& f : source.model->features()) names.push_back(f.name);
    } else {
      names = rows.names();
    }
    for (std::size_t p = 0; p < names.size(); ++p) {
      for (std::size_t q = p + 1; q < names.size(); ++q) pairs.emplace_back(names[p], names[q]);
    }
  }
  Json meta = metadata(ctx, "hstat");
  meta["predictor"] = source.name;
  meta["n_rows"] = rows.n_rows();
  std::vector<std::optional<double>> values;
  for (const auto& [p, q] : pairs) values.push_back(h_statistic(source.get(), rows, p, q));
  std::string content;
  if (a.format == "csv") {
    content = csv_header(meta) + csv_row({"pair", "h2"});
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      content += csv_row({pairs[i].first + ":" + pairs[i].second,
                          values[i] ? format_real(*values[i]) : "NA"});
    }
  } else {
    Json doc;
    doc["meta"] = meta;
    Json rows_json = Json::array();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      rows_json.push_back({{"pair", pairs[i].first + ":" + pairs[i].second},
                           {"h2", values[i] ? Json(*values[i]) : Json(nullptr)}});
    }
    doc["h_statistic"] = rows_json;
    content = doc.dump(2) + "\n";
  }
  emit(ctx, a.out, content);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  std::string dataset, out, label, pred_name = "yhat";
  std::size_t n = 2000, d = 2;
  std::uint64_t seed = 1;
  double noise = 0.0;
};

int cmd_generate(const Context& ctx, const GenerateArgs& a) {
  if (a.n == 0) throw UsageError("--n must be positive");
  Json meta = metadata(ctx, "generate");
  meta["generator"] = a.dataset;
  meta["n"] = a.n;
  meta["seed"] = a.seed;
  meta["rng"] = std::string(kRngAlgorithm);
  LabeledData data;
  if (a.dataset == "friedman1") {
    if (!(a.noise >= 0.0)) throw UsageError("--noise must be non-negative");
    data = gen_friedman1(a.n, a.seed, a.noise);
    meta["noise_sd"] = a.noise;
  } else if (a.dataset == "correlated_pair") {
    data.dataset = gen_correlated_pair(a.n, a.seed);
    if (!a.label.empty()) {
      data.predictions = eval_builtin(parse_builtin(a.label), data.dataset);
      meta["label"] = a.label;
    }
  } else if (a.dataset == "circle") {
    if (a.d < 1) throw UsageError("--d must be positive");
    data = gen_circle(a.n, a.d, a.seed);
    meta["d"] = a.d;
  } else {
    throw UsageError("unknown dataset '" + a.dataset +
                     "' (valid: friedman1, correlated_pair, circle)");
  }
  const bool labelled = !data.predictions.empty();
  if (labelled) meta["prediction_column"] = a.pred_name;
  write_csv(a.out, data.dataset, labelled ? &data.predictions : nullptr, a.pred_name,
            meta.dump());
  Json sidecar = meta;
  sidecar["columns"] = data.dataset.names();
  emit(ctx, a.out + ".json", sidecar.dump(2) + "\n");
  ctx.out << "Wrote " << a.n << " rows to " << a.out << " (metadata in " << a.out << ".json)\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string scenario, out, k = "25,5", method = "nullspace_svd";
  std::optional<std::size_t> n;
  std::uint64_t seed = 1;
  std::optional<int> order;  // friedman: 2, stability: 1 (main effects are compared)
};

int simulate_friedman(const Context& ctx, const SimulateArgs& a, const fs::path& dir,
                      Json meta) {
  const std::size_t n = a.n.value_or(2000);
  const LabeledData train = gen_friedman1(n, a.seed);
  const LabeledData test = gen_friedman1(n, a.seed + 1);
  meta["n"] = n;
  meta["train_seed"] = a.seed;
  meta["test_seed"] = a.seed + 1;
  write_csv(dir / "train.csv", train.dataset, &train.predictions, "yhat", meta.dump());
  write_csv(dir / "test.csv", test.dataset, &test.predictions, "yhat", meta.dump());
  const FitOptions options =
      fit_options(a.order.value_or(2), a.k, a.method, std::nullopt, std::nullopt, "", "");
  const auto start = std::chrono::steady_clock::now();
  MidModel model = fit(train.dataset, train.predictions, options);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  model.mutable_meta().seed = a.seed;
  save(model, dir / "model.json");
  const double uvr_test = uvr(model, test.dataset, test.predictions);
  print_summary(ctx, model);
  ctx.out << "Uninterpreted Variation Ratio (test): " << fixed(uvr_test, 8) << "\n";
  Json report = meta;
  report["main_effects"] = model.count_terms(1);
  report["interactions"] = model.count_terms(2);
  report["intercept"] = model.intercept();
  report["uvr_train"] = model.uvr_train() ? Json(*model.uvr_train()) : Json(nullptr);
  report["uvr_test"] = uvr_test;
  report["fit_seconds"] = seconds;
  emit(ctx, (dir / "report.json").string(), report.dump(2) + "\n");
  return kExitOk;
}

// Sup-norm difference of two MID main effects over an equispaced grid of
// the observed range, and PD main-effect differences at the grid extremes.
struct StabilityRow {
  std::string feature;
  double mid_sup = 0.0;
  double pd_at_min = 0.0;
  double pd_at_max = 0.0;
};

int simulate_stability(const Context& ctx, const SimulateArgs& a, const fs::path& dir,
                       Json meta) {
  const std::size_t n = a.n.value_or(200);
  const Dataset data = gen_correlated_pair(n, a.seed);
  const PredictionVector ya = eval_builtin(BuiltinFunction::kStabilityA, data);
  const PredictionVector yb = eval_builtin(BuiltinFunction::kStabilityB, data);
  meta["n"] = n;
  meta["seed"] = a.seed;
  const int order = a.order.value_or(1);
  meta["order"] = order;
  write_csv(dir / "data_a.csv", data, &ya, "yhat", meta.dump());
  write_csv(dir / "data_b.csv", data, &yb, "yhat", meta.dump());

  const FitOptions options =
      fit_options(order, a.k, a.method, std::nullopt, std::nullopt, "", "");
  const MidModel model_a = fit(data, ya, options);
  const MidModel model_b = fit(data, yb, options);
  save(model_a, dir / "model_a.json");
  save(model_b, dir / "model_b.json");
  const BuiltinPredictor fa(BuiltinFunction::kStabilityA);
  const BuiltinPredictor fb(BuiltinFunction::kStabilityB);

  std::vector<StabilityRow> table;
  for (const auto& name : data.names()) {
    StabilityRow row{name};
    const std::vector<Value> grid = pd_grid(data.column(name), 101);
    std::vector<std::vector<Value>> points;
    for (const auto& g : grid) points.push_back({g});
    const auto ea = effect(model_a, model_a.parse_term(name), points);
    const auto eb = effect(model_b, model_b.parse_term(name), points);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      row.mid_sup = std::max(row.mid_sup, std::abs(ea[g] - eb[g]));
    }
    const std::string one[] = {name};
    PdOptions pd_options;
    pd_options.grids = {pd_grid(data.column(name), kDefaultPdGridSize)};
    const auto pa = pd_decompose(fa, data, one, pd_options);
    const auto pb = pd_decompose(fb, data, one, pd_options);
    row.pd_at_min = std::abs(pa.main_on_grid[0].front() - pb.main_on_grid[0].front());
    row.pd_at_max = std::abs(pa.main_on_grid[0].back() - pb.main_on_grid[0].back());
    table.push_back(row);
  }

  std::string csv = csv_header(meta) +
                    csv_row({"feature", "mid_sup_diff", "pd_diff_at_min", "pd_diff_at_max"});
  ctx.out << "Pragmatic stability: stability_a vs stability_b on " << n << " correlated rows\n";
  ctx.out << "feature  MID sup |diff|  PD |diff| at min  PD |diff| at max\n";
  Json rows_json = Json::array();
  for (const auto& row : table) {
    csv += csv_row({row.feature, format_real(row.mid_sup), format_real(row.pd_at_min),
                    format_real(row.pd_at_max)});
    ctx.out << std::left << std::setw(9) << row.feature << std::setw(16) << fixed(row.mid_sup, 4)
            << std::setw(18) << fixed(row.pd_at_min, 4) << fixed(row.pd_at_max, 4) << "\n";
    rows_json.push_back({{"feature", row.feature},
                         {"mid_sup_diff", row.mid_sup},
                         {"pd_diff_at_min", row.pd_at_min},
                         {"pd_diff_at_max", row.pd_at_max}});
  }
  emit(ctx, (dir / "stability.csv").string(), csv);
  Json report = meta;
  report["divergence"] = rows_json;
  report["uvr_train_a"] = model_a.uvr_train() ? Json(*model_a.uvr_train()) : Json(nullptr);
  report["uvr_train_b"] = model_b.uvr_train() ? Json(*model_b.uvr_train()) : Json(nullptr);
  emit(ctx, (dir / "report.json").string(), report.dump(2) + "\n");
  return kExitOk;
}

int cmd_simulate(const Context& ctx, const SimulateArgs& a) {
  if (a.scenario != "friedman" && a.scenario != "stability") {
    throw UsageError("unknown scenario '" + a.scenario + "' (valid: friedman, stability)");
  }
  if (a.n && *a.n < 2) throw UsageError("--n must be at least 2");
  const fs::path dir(a.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create directory '" + a.out + "': " + ec.message());
  Json meta = metadata(ctx, "simulate");
  meta["scenario"] = a.scenario;
  meta["rng"] = std::string(kRngAlgorithm);
  return a.scenario == "friedman" ? simulate_friedman(ctx, a, dir, meta)
                                  : simulate_stability(ctx, a, dir, meta);
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::size_t n = 10000, d = 8, reps = 3;
  std::string k = "25,5", methods = "nullspace_svd,normal_cholesky", out;
  std::uint64_t seed = 1;
  double tolerance = 1e-3;
};

int cmd_bench(const Context& ctx, const BenchArgs& a) {
  if (a.reps < 1) throw UsageError("--reps must be at least 1");
  if (a.n < 2) throw UsageError("--n must be at least 2");
  if (a.d < 1) throw UsageError("--d must be at least 1");
  if (!(a.tolerance > 0.0)) throw UsageError("--tolerance must be positive");
  const auto k = parse_k(a.k);
  const double d = static_cast<double>(a.d);
  const double m = k.first * d + static_cast<double>(k.second) * k.second * d * (d - 1.0) / 2.0;
  if (static_cast<double>(a.n) * m > 1e8) {
    std::ostringstream message;
    message << "n*m = " << a.n << "*" << static_cast<long long>(m) << " = "
            << static_cast<long long>(static_cast<double>(a.n) * m)
            << " exceeds the 1e8 memory guard";
    throw UsageError(message.str());
  }
  std::vector<SolveMethod> methods;
  for (const auto& name : split(a.methods, ',')) methods.push_back(parse_solve_method(name));
  if (methods.empty()) throw UsageError("--methods is empty");

  const LabeledData data = gen_circle(a.n, a.d, a.seed);
  const auto [lo, hi] = std::minmax_element(data.predictions.begin(), data.predictions.end());
  const double scale = std::max(*hi - *lo, 1.0);

  struct Timing {
    std::vector<double> total_ms, solve_ms;
    double max_diff = 0.0;
  };
  std::vector<Timing> timings(methods.size());
  std::optional<Eigen::MatrixXd> reference;
  for (std::size_t rep = 0; rep < a.reps; ++rep) {
    for (std::size_t i = 0; i < methods.size(); ++i) {
      FitOptions options;
      options.order = 2;
      options.k_main = k.first;
      options.k_interaction = k.second;
      options.solver.method = methods[i];
      const auto start = std::chrono::steady_clock::now();
      const MidModel model = fit(data.dataset, data.predictions, options);
      const double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      timings[i].total_ms.push_back(ms);
      timings[i].solve_ms.push_back(1e3 * model.meta().report.elapsed_seconds);
      if (rep == 0) {
        const Eigen::MatrixXd effects = model.term_contributions(data.dataset);
        if (!reference) reference = effects;
        timings[i].max_diff = (effects - *reference).cwiseAbs().maxCoeff();
        if (timings[i].max_diff > a.tolerance * scale) {
          throw NumericalError("method " + std::string(solve_method_name(methods[i])) +
                               " disagrees with " + std::string(solve_method_name(methods[0])) +
                               ": max effect difference " + fixed(timings[i].max_diff, 4) +
                               " exceeds " + fixed(a.tolerance * scale, 4));
        }
      }
    }
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  Json meta = metadata(ctx, "bench");
  meta["n"] = a.n;
  meta["d"] = a.d;
  meta["k"] = {k.first, k.second};
  meta["m"] = m;
  meta["reps"] = a.reps;
  meta["seed"] = a.seed;
  meta["tolerance"] = a.tolerance;
  meta["response_scale"] = scale;
  std::string csv = csv_header(meta) + csv_row({"method", "mean_ms", "min_ms", "solve_mean_ms",
                                                "max_effect_diff"});
  ctx.out << "Benchmark: n = " << a.n << ", d = " << a.d << ", m = " << m << ", " << a.reps
          << " reps (effects agree within " << a.tolerance << " of the response scale)\n";
  ctx.out << std::left << std::setw(18) << "method" << std::setw(14) << "mean ms"
          << std::setw(14) << "solve ms" << "max |diff|\n";
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const std::string name(solve_method_name(methods[i]));
    const double total = mean(timings[i].total_ms);
    const double solve_ms = mean(timings[i].solve_ms);
    const double best = *std::min_element(timings[i].total_ms.begin(), timings[i].total_ms.end());
    csv += csv_row({name, format_real(total), format_real(best), format_real(solve_ms),
                    format_real(timings[i].max_diff)});
    ctx.out << std::left << std::setw(18) << name << std::setw(14) << fixed(total, 6)
            << std::setw(14) << fixed(solve_ms, 6) << fixed(timings[i].max_diff, 3) << "\n";
  }
  if (!a.out.empty()) emit(ctx, a.out, csv);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{out, err, args};
  CLI::App app{"Maximum Interpretation Decomposition: additive surrogates of black-box models",
               "mid"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a MID surrogate to (features, predictions) data");
  fit_cmd->add_option("--data", fit_args.data, "Training CSV")->required();
  fit_cmd->add_option("--pred-col", fit_args.pred_col, "Prediction column")->capture_default_str();
  fit_cmd->add_option("--order", fit_args.order, "1 (main effects) or 2 (plus pairs)")->capture_default_str();
  fit_cmd->add_option("--k", fit_args.k, "Encoding sizes main,interaction")->capture_default_str();
  fit_cmd->add_option("--method", fit_args.method, "nullspace_svd | penalty | normal_cholesky")->capture_default_str();
  fit_cmd->add_option("--kappa", fit_args.kappa, "Penalty factor");
  fit_cmd->add_option("--rank-tol", fit_args.rank_tol, "Relative singular-value cutoff");
  fit_cmd->add_option("--terms", fit_args.terms, "Explicit terms, e.g. x1,x2,x1:x2");
  fit_cmd->add_option("--numeric-kind", fit_args.numeric_kind, "linear | step | indicator");
  fit_cmd->add_option("--seed", fit_args.seed, "Seed provenance to record");
  fit_cmd->add_option("--test", fit_args.test, "Held-out CSV for a test UVR");
  fit_cmd->add_option("--out", fit_args.out, "Model JSON path")->required();

  EffectsArgs effects_args;
  auto* effects_cmd = app.add_subcommand("effects", "Export effect values on grids");
  effects_cmd->add_option("--model", effects_args.model)->required();
  effects_cmd->add_option("--data", effects_args.data, "Data defining the grid range");
  effects_cmd->add_option("--pred-col", effects_args.pred_col);
  effects_cmd->add_option("--term", effects_args.terms, "Terms, e.g. x4 or x1:x2 (default all)");
  effects_cmd->add_option("--grid", effects_args.grid, "Main-effect grid size")->capture_default_str();
  effects_cmd->add_option("--grid2", effects_args.grid2, "Interaction grid size per axis")->capture_default_str();
  effects_cmd->add_flag("--with-mains", effects_args.with_mains, "Add main effects to interactions");
  effects_cmd->add_option("--format", effects_args.format)->capture_default_str();
  effects_cmd->add_option("--out", effects_args.out, "Output path (default stdout)");

  auto add_query = [&](CLI::App* cmd, QueryArgs& q) {
    cmd->add_option("--model", q.model)->required();
    cmd->add_option("--data", q.data)->required();
    cmd->add_option("--pred-col", q.pred_col, "Column to drop from the data");
    cmd->add_option("--format", q.format)->capture_default_str();
    cmd->add_option("--out", q.out, "Output path (default stdout)");
  };
  QueryArgs importance_args;
  auto* importance_cmd = app.add_subcommand("importance", "Effect importance table");
  add_query(importance_cmd, importance_args);

  BreakdownArgs breakdown_args;
  auto* breakdown_cmd = app.add_subcommand("breakdown", "Additive breakdown of one prediction");
  add_query(breakdown_cmd, breakdown_args);
  breakdown_cmd->add_option("--row", breakdown_args.row, "1-based row")->capture_default_str();

  IceArgs ice_args;
  auto* ice_cmd = app.add_subcommand("ice", "Ceteris-paribus (ICE) curves");
  add_query(ice_cmd, ice_args);
  ice_cmd->add_option("--variable", ice_args.variable)->required();
  ice_cmd->add_option("--grid", ice_args.grid)->capture_default_str();
  ice_cmd->add_flag("--centered", ice_args.centered);
  ice_cmd->add_option("--term", ice_args.term, "Trace only this interaction");
  ice_cmd->add_option("--max-rows", ice_args.max_rows, "Use the first N rows");

  QueryArgs shap_args;
  auto* shap_cmd = app.add_subcommand("shap", "MID-derived Shapley values");
  add_query(shap_cmd, shap_args);

  auto add_pd = [&](CLI::App* cmd, PdArgs& p) {
    cmd->add_option("--model", p.model, "MID model JSON");
    cmd->add_option("--builtin", p.builtin, "friedman1 | stability_a | stability_b");
    cmd->add_option("--data", p.data)->required();
    cmd->add_option("--pred-col", p.pred_col, "Column to drop from the data");
    cmd->add_option("--max-rows", p.max_rows, "Use the first N rows");
    cmd->add_option("--format", p.format)->capture_default_str();
    cmd->add_option("--out", p.out, "Output path (default stdout)");
  };
  PdArgs pd_args;
  auto* pd_cmd = app.add_subcommand("pd", "Partial dependence of one feature or a pair");
  add_pd(pd_cmd, pd_args);
  pd_cmd->add_option("--features", pd_args.features, "x1 or x1,x2")->required();
  pd_cmd->add_option("--grid", pd_args.grid)->capture_default_str();
  PdArgs hstat_args;
  auto* hstat_cmd = app.add_subcommand("hstat", "Friedman's H-statistic for feature pairs");
  add_pd(hstat_cmd, hstat_args);
  hstat_cmd->add_option("--pairs", hstat_args.pairs, "x1:x2,x1:x3 (default all pairs)");

  GenerateArgs generate_args;
  auto* generate_cmd = app.add_subcommand("generate", "Write a seeded synthetic dataset");
  generate_cmd->add_option("dataset", generate_args.dataset, "friedman1 | correlated_pair | circle")->required();
  generate_cmd->add_option("--n", generate_args.n)->capture_default_str();
  generate_cmd->add_option("--seed", generate_args.seed)->capture_default_str();
  generate_cmd->add_option("--d", generate_args.d, "Dimension (circle)")->capture_default_str();
  generate_cmd->add_option("--noise", generate_args.noise, "Noise sd (friedman1)")->capture_default_str();
  generate_cmd->add_option("--label", generate_args.label, "Builtin label for correlated_pair");
  generate_cmd->add_option("--pred-name", generate_args.pred_name)->capture_default_str();
  generate_cmd->add_option("--out", generate_args.out)->required();

  SimulateArgs simulate_args;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run a scenario end to end");
  simulate_cmd->add_option("scenario", simulate_args.scenario, "friedman | stability")->required();
  simulate_cmd->add_option("--n", simulate_args.n);
  simulate_cmd->add_option("--seed", simulate_args.seed)->capture_default_str();
  simulate_cmd->add_option("--order", simulate_args.order,
                           "Default 2 for friedman, 1 for stability");
  simulate_cmd->add_option("--k", simulate_args.k)->capture_default_str();
  simulate_cmd->add_option("--method", simulate_args.method)->capture_default_str();
  simulate_cmd->add_option("--out", simulate_args.out, "Output directory")->required();

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Time the solver methods on circle data");
  bench_cmd->add_option("--n", bench_args.n)->capture_default_str();
  bench_cmd->add_option("--d", bench_args.d)->capture_default_str();
  bench_cmd->add_option("--k", bench_args.k)->capture_default_str();
  bench_cmd->add_option("--methods", bench_args.methods)->capture_default_str();
  bench_cmd->add_option("--reps", bench_args.reps)->capture_default_str();
  bench_cmd->add_option("--seed", bench_args.seed)->capture_default_str();
  bench_cmd->add_option("--tolerance", bench_args.tolerance,
                        "Cross-method tolerance relative to the response range")->capture_default_str();
  bench_cmd->add_option("--out", bench_args.out, "Timing CSV path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*fit_cmd) return cmd_fit(ctx, fit_args);
    if (*effects_cmd) return cmd_effects(ctx, effects_args);
    if (*importance_cmd) return cmd_importance(ctx, importance_args);
    if (*breakdown_cmd) return cmd_breakdown(ctx, breakdown_args);
    if (*ice_cmd) return cmd_ice(ctx, ice_args);
    if (*shap_cmd) return cmd_shap(ctx, shap_args);
    if (*pd_cmd) return cmd_pd(ctx, pd_args);
    if (*hstat_cmd) return cmd_hstat(ctx, hstat_args);
    if (*generate_cmd) return cmd_generate(ctx, generate_args);
    if (*simulate_cmd) return cmd_simulate(ctx, simulate_args);
    if (*bench_cmd) return cmd_bench(ctx, bench_args);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace mid::cli
