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

#include "mid/encoder.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "mid/error.h"

namespace mid {
namespace {

void require_strictly_increasing(const std::vector<double>& grid,
                                 std::string_view what) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) {
      throw UsageError(std::string(what) + " must be finite");
    }
    if (i > 0 && !(grid[i - 1] < grid[i])) {
      throw UsageError(std::string(what) + " must be strictly increasing");
    }
  }
}

Encoded one_hot(int index) {
  Encoded e;
  e.index[0] = index;
  e.weight[0] = 1.0;
  e.size = 1;
  return e;
}

std::vector<double> collapse(std::vector<double> points) {
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

}  // namespace

std::string_view encoding_kind_name(EncodingKind kind) {
  switch (kind) {
    case EncodingKind::kIndicator:
      return "indicator";
    case EncodingKind::kStep:
      return "step";
    case EncodingKind::kLinear:
      return "linear";
  }
  return "unknown";
}

EncodingKind parse_encoding_kind(std::string_view name) {
  if (name == "indicator") return EncodingKind::kIndicator;
  if (name == "step") return EncodingKind::kStep;
  if (name == "linear") return EncodingKind::kLinear;
  throw UsageError("unknown encoding kind '" + std::string(name) +
                   "' (valid: indicator, step, linear)");
}

double quantile_sorted(const std::vector<double>& sorted, double probability) {
  if (sorted.empty()) throw DataError("quantile of empty data");
  const double h = static_cast<double>(sorted.size() - 1) * probability;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

Encoder Encoder::numeric_indicator(std::vector<double> values) {
  if (values.empty()) throw UsageError("indicator encoder needs at least one value");
  require_strictly_increasing(values, "indicator values");
  Encoder e;
  e.kind_ = EncodingKind::kIndicator;
  e.grid_ = std::move(values);
  return e;
}

Encoder Encoder::level_indicator(std::vector<std::string> levels) {
  if (levels.empty()) throw UsageError("indicator encoder needs at least one level");
  std::vector<std::string> sorted = levels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw UsageError("indicator levels must be unique");
  }
  Encoder e;
  e.kind_ = EncodingKind::kIndicator;
  e.categorical_ = true;
  e.levels_ = std::move(levels);
  return e;
}

Encoder Encoder::step(std::vector<double> breakpoints) {
  if (breakpoints.empty()) throw UsageError("step encoder needs a breakpoint");
  require_strictly_increasing(breakpoints, "step breakpoints");
  Encoder e;
  e.kind_ = EncodingKind::kStep;
  e.grid_ = std::move(breakpoints);
  return e;
}

Encoder Encoder::linear(std::vector<double> knots) {
  if (knots.size() < 2) throw UsageError("linear encoder needs at least two knots");
  require_strictly_increasing(knots, "linear knots");
  Encoder e;
  e.kind_ = EncodingKind::kLinear;
  e.grid_ = std::move(knots);
  return e;
}

Encoder Encoder::build(const Column& column, int k_max,
                       std::optional<EncodingKind> kind) {
  if (k_max < 2) throw UsageError("k_max must be at least 2");
  if (column.size() == 0) {
    throw DataError("cannot encode empty column '" + column.name() + "'");
  }
  if (!column.is_numeric()) {
    std::vector<bool> used(column.levels().size(), false);
    for (int code : column.codes()) used[static_cast<std::size_t>(code)] = true;
    std::vector<std::string> levels;
    for (std::size_t i = 0; i < used.size(); ++i) {
      if (used[i]) levels.push_back(column.levels()[i]);
    }
    return level_indicator(std::move(levels));
  }
  std::vector<double> sorted = column.values();
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> distinct = collapse(sorted);
  if (distinct.size() <= static_cast<std::size_t>(k_max) ||
      kind == EncodingKind::kIndicator) {
    return numeric_indicator(std::move(distinct));
  }
  const EncodingKind chosen = kind.value_or(EncodingKind::kLinear);
  if (chosen == EncodingKind::kLinear) {
    std::vector<double> knots;
    for (int s = 0; s < k_max; ++s) {
      knots.push_back(quantile_sorted(sorted, static_cast<double>(s) / (k_max - 1)));
    }
    knots.front() = sorted.front();
    knots.back() = sorted.back();
    return linear(collapse(std::move(knots)));
  }
  std::vector<double> breaks;
  for (int s = 1; s < k_max; ++s) {
    const double q = quantile_sorted(sorted, static_cast<double>(s) / k_max);
    if (q > sorted.front() && q < sorted.back()) breaks.push_back(q);
  }
  breaks = collapse(std::move(breaks));
  if (breaks.empty()) {
    breaks.push_back(distinct[distinct.size() / 2]);
  }
  return step(std::move(breaks));
}

int Encoder::size() const {
  switch (kind_) {
    case EncodingKind::kIndicator:
      return static_cast<int>(categorical_ ? levels_.size() : grid_.size());
    case EncodingKind::kStep:
      return static_cast<int>(grid_.size()) + 1;
    case EncodingKind::kLinear:
      return static_cast<int>(grid_.size());
  }
  return 0;
}

Encoded Encoder::encode(double value) const {
  if (categorical_) {
    throw DataError("categorical encoder given numeric value " + format_real(value));
  }
  if (!std::isfinite(value)) throw DataError("cannot encode non-finite value");
  switch (kind_) {
    case EncodingKind::kIndicator: {
      auto it = std::lower_bound(grid_.begin(), grid_.end(), value);
      if (it == grid_.end() || *it != value) {
        throw DataError("unknown value " + format_real(value) +
                        " for indicator encoder");
      }
      return one_hot(static_cast<int>(it - grid_.begin()));
    }
    case EncodingKind::kStep: {
      // Cell s covers [b(s-1), b(s)).
      auto it = std::upper_bound(grid_.begin(), grid_.end(), value);
      return one_hot(static_cast<int>(it - grid_.begin()));
    }
    case EncodingKind::kLinear: {
      const int last = static_cast<int>(grid_.size()) - 1;
      if (value <= grid_.front()) return one_hot(0);
      if (value >= grid_.back()) return one_hot(last);
      auto it = std::upper_bound(grid_.begin(), grid_.end(), value);
      const int right = static_cast<int>(it - grid_.begin());
      const int left = right - 1;
      const double t = (value - grid_[left]) / (grid_[right] - grid_[left]);
      if (t == 0.0) return one_hot(left);
      Encoded e;
      e.index = {left, right};
      e.weight = {1.0 - t, t};
      e.size = 2;
      return e;
    }
  }
  return {};
}

Encoded Encoder::encode(std::string_view level) const {
  if (!categorical_) {
    throw DataError("numeric encoder given level '" + std::string(level) + "'");
  }
  auto it = std::find(levels_.begin(), levels_.end(), level);
  if (it == levels_.end()) {
    throw DataError("unknown level '" + std::string(level) + "'");
  }
  return one_hot(static_cast<int>(it - levels_.begin()));
}

Encoded Encoder::encode(const Value& value) const {
  if (const auto* real = std::get_if<double>(&value)) return encode(*real);
  return encode(std::string_view(std::get<std::string>(value)));
}

std::vector<double> Encoder::dense(const Value& value) const {
  std::vector<double> out(static_cast<std::size_t>(size()), 0.0);
  const Encoded e = encode(value);
  for (int i = 0; i < e.size; ++i) out[static_cast<std::size_t>(e.index[i])] += e.weight[i];
  return out;
}

std::vector<Encoded> Encoder::encode_column(const Column& column) const {
  std::vector<Encoded> out;
  out.reserve(column.size());
  if (column.is_numeric()) {
    for (double v : column.values()) out.push_back(encode(v));
    return out;
  }
  if (!categorical_) {
    throw DataError("column '" + column.name() + "' is categorical but its encoder is numeric");
  }
  std::unordered_map<int, Encoded> cache;
  for (int code : column.codes()) {
    auto it = cache.find(code);
    if (it == cache.end()) {
      it = cache.emplace(code, encode(std::string_view(
                                   column.levels()[static_cast<std::size_t>(code)])))
               .first;
    }
    out.push_back(it->second);
  }
  return out;
}

std::vector<Value> Encoder::anchors() const {
  std::vector<Value> out;
  if (categorical_) {
    for (const auto& level : levels_) out.emplace_back(level);
    return out;
  }
  if (kind_ != EncodingKind::kStep) {
    for (double g : grid_) out.emplace_back(g);
    return out;
  }
  const std::size_t b = grid_.size();
  const double outer = b >= 2 ? (grid_[1] - grid_[0]) / 2.0 : 0.5;
  const double outer_right = b >= 2 ? (grid_[b - 1] - grid_[b - 2]) / 2.0 : 0.5;
  out.emplace_back(grid_.front() - outer);
  for (std::size_t s = 1; s < b; ++s) out.emplace_back((grid_[s - 1] + grid_[s]) / 2.0);
  out.emplace_back(grid_.back() + outer_right);
  return out;
}

}  // namespace mid
