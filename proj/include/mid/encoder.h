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

// Per-feature encoding functions. An Encoder maps a feature value to k
// nonnegative weights that sum to one; effects are linear in those weights.
//
//   indicator: one weight per observed value (or categorical level)
//   step:      k - 1 interior breakpoints, half-open cells [b(s-1), b(s))
//   linear:    k knots spanning [min, max], hat functions with constant
//              extrapolation outside the knot range

#ifndef MID_ENCODER_H_
#define MID_ENCODER_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mid/dataset.h"

namespace mid {

enum class EncodingKind { kIndicator, kStep, kLinear };

std::string_view encoding_kind_name(EncodingKind kind);
EncodingKind parse_encoding_kind(std::string_view name);

// Sparse weight vector with at most two nonzero entries.
struct Encoded {
  std::array<int, 2> index{0, 0};
  std::array<double, 2> weight{0.0, 0.0};
  int size = 0;
};

class Encoder {
 public:
  // Chooses the encoding for `column`: categorical columns and numeric
  // columns with at most `k_max` distinct values get an indicator encoder;
  // otherwise `kind` (linear when unset) with knots or breakpoints at
  // empirical quantiles, duplicates collapsed.
  static Encoder build(const Column& column, int k_max,
                       std::optional<EncodingKind> kind = std::nullopt);

  static Encoder numeric_indicator(std::vector<double> values);
  static Encoder level_indicator(std::vector<std::string> levels);
  static Encoder step(std::vector<double> breakpoints);
  static Encoder linear(std::vector<double> knots);

  EncodingKind kind() const { return kind_; }
  bool categorical() const { return categorical_; }
  // Number of encoding functions.
  int size() const;

  // Sorted knots (linear), breakpoints (step) or values (numeric indicator).
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<std::string>& levels() const { return levels_; }

  Encoded encode(double value) const;
  Encoded encode(std::string_view level) const;
  Encoded encode(const Value& value) const;
  std::vector<double> dense(const Value& value) const;

  // Encodes a whole column; categorical levels are matched by name.
  std::vector<Encoded> encode_column(const Column& column) const;

  // A representative input for each encoding function: the knot, the
  // indicator value/level, or the midpoint of a finite step cell.
  std::vector<Value> anchors() const;

  bool operator==(const Encoder&) const = default;

 private:
  Encoder() = default;

  EncodingKind kind_ = EncodingKind::kIndicator;
  bool categorical_ = false;
  std::vector<double> grid_;
  std::vector<std::string> levels_;
};

// Type-7 empirical quantile of sorted data.
double quantile_sorted(const std::vector<double>& sorted, double probability);

}  // namespace mid

#endif  // MID_ENCODER_H_
