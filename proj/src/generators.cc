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
#include <vector>

#include "mid/error.h"

namespace mid {
namespace {

std::string feature_name(std::size_t j) { return "x" + std::to_string(j + 1); }

const std::vector<double>& numeric_column(const Dataset& rows, std::size_t j,
                                          std::string_view fn) {
  const Column& column = rows.column(j);
  if (!column.is_numeric()) {
    throw DataError(std::string(fn) + ": column '" + column.name() +
                    "' must be numeric");
  }
  return column.values();
}

void require_arity(const Dataset& rows, std::size_t arity, std::string_view fn) {
  if (rows.n_cols() < arity) {
    throw DataError(std::string(fn) + " needs " + std::to_string(arity) +
                    " feature columns, got " + std::to_string(rows.n_cols()));
  }
}

}  // namespace

LabeledData gen_friedman1(std::size_t n, std::uint64_t seed, double noise_sd) {
  if (n < 1) throw UsageError("gen_friedman1: n must be at least 1");
  if (!(noise_sd >= 0.0)) throw UsageError("gen_friedman1: noise_sd must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  constexpr std::size_t kFeatures = 10;
  std::vector<std::vector<double>> x(kFeatures, std::vector<double>(n));
  // Row-major draws so that prefixes of a larger sample coincide.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < kFeatures; ++j) x[j][i] = unif(rng);
  }
  std::vector<Column> columns;
  for (std::size_t j = 0; j < kFeatures; ++j) {
    columns.push_back(Column::numeric(feature_name(j), std::move(x[j])));
  }
  LabeledData out{Dataset(std::move(columns)), {}};
  out.predictions = eval_builtin(BuiltinFunction::kFriedman1, out.dataset);
  if (noise_sd > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_sd);
    for (double& y : out.predictions) y += noise(rng);
  }
  return out;
}

Dataset gen_correlated_pair(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw UsageError("gen_correlated_pair: n must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> jitter(0.0, 0.05);
  std::vector<double> x1(n), x2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = unif(rng);
    x1[i] = u + jitter(rng);
    x2[i] = u + jitter(rng);
  }
  return Dataset({Column::numeric("x1", std::move(x1)),
                  Column::numeric("x2", std::move(x2))});
}

LabeledData gen_circle(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw UsageError("gen_circle: n and d must be at least 1");
  const double half = static_cast<double>(d) / 2.0;
  // Unit-ball volume pi^(d/2) / Gamma(d/2 + 1); the ball of radius r holds
  // half of the cube volume 2^d.
  const double log_unit_ball = half * std::log(std::numbers::pi) - std::lgamma(half + 1.0);
  const double log_radius =
      ((static_cast<double>(d) - 1.0) * std::log(2.0) - log_unit_ball) /
      static_cast<double>(d);
  const double radius2 = std::exp(2.0 * log_radius);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<std::vector<double>> x(d, std::vector<double>(n));
  PredictionVector labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    double norm2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      x[j][i] = unif(rng);
      norm2 += x[j][i] * x[j][i];
    }
    labels[i] = norm2 < radius2 ? 1.0 : 2.0;
  }
  std::vector<Column> columns;
  for (std::size_t j = 0; j < d; ++j) {
    columns.push_back(Column::numeric(feature_name(j), std::move(x[j])));
  }
  return {Dataset(std::move(columns)), std::move(labels)};
}

BuiltinFunction parse_builtin(std::string_view name) {
  if (name == "friedman1") return BuiltinFunction::kFriedman1;
  if (name == "stability_a") return BuiltinFunction::kStabilityA;
  if (name == "stability_b") return BuiltinFunction::kStabilityB;
  throw UsageError("unknown builtin function '" + std::string(name) +
                   "' (valid: friedman1, stability_a, stability_b)");
}

std::string_view builtin_name(BuiltinFunction fn) {
  switch (fn) {
    case BuiltinFunction::kFriedman1:
      return "friedman1";
    case BuiltinFunction::kStabilityA:
      return "stability_a";
    case BuiltinFunction::kStabilityB:
      return "stability_b";
  }
  return "unknown";
}

PredictionVector eval_builtin(BuiltinFunction fn, const Dataset& rows) {
  const std::string_view name = builtin_name(fn);
  PredictionVector out(rows.n_rows());
  switch (fn) {
    case BuiltinFunction::kFriedman1: {
      require_arity(rows, 5, name);
      const auto& x1 = numeric_column(rows, 0, name);
      const auto& x2 = numeric_column(rows, 1, name);
      const auto& x3 = numeric_column(rows, 2, name);
      const auto& x4 = numeric_column(rows, 3, name);
      const auto& x5 = numeric_column(rows, 4, name);
      for (std::size_t i = 0; i < out.size(); ++i) {
        const double c = x3[i] - 0.5;
        out[i] = 10.0 * std::sin(std::numbers::pi * x1[i] * x2[i]) + 20.0 * c * c +
                 10.0 * x4[i] + 5.0 * x5[i];
      }
      break;
    }
    case BuiltinFunction::kStabilityA:
    case BuiltinFunction::kStabilityB: {
      require_arity(rows, 2, name);
      const auto& x1 = numeric_column(rows, 0, name);
      const auto& x2 = numeric_column(rows, 1, name);
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = x1[i] + x2[i] * x2[i];
        if (fn == BuiltinFunction::kStabilityB) {
          const double gap = x1[i] - x2[i];
          out[i] += 10.0 * gap * gap * gap;
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace mid
