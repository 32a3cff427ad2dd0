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

// Assembly of the centred least-squares system.
//
// For a main effect on feature j the design column of parameter s holds
// chi_j^s(x_ij); for an interaction (p, q) the column of parameter (s, t)
// holds chi_p^s(x_ip) * chi_q^t(x_iq), stored row-major within the term
// (local index s * k_q + t). Main effects use each feature's main encoder,
// interactions its interaction encoder.
//
// Every column's weight (the diagonal of Delta) is its column sum. A main
// effect adds one centring row whose entries are those weights; an
// interaction adds k_p rows (one per p-cell, summing over t) followed by k_q
// rows (one per q-cell, summing over s).

#ifndef MID_DESIGN_H_
#define MID_DESIGN_H_

#include <compare>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "mid/dataset.h"
#include "mid/encoder.h"

namespace mid {

// Sorted set of one or two feature indices.
class TermKey {
 public:
  TermKey() = default;
  explicit TermKey(int feature);
  TermKey(int first, int second);
  static TermKey from(std::span<const int> features);

  std::size_t order() const { return features_.size(); }
  int operator[](std::size_t i) const { return features_[i]; }
  const std::vector<int>& features() const { return features_; }
  bool contains(int feature) const;

  auto operator<=>(const TermKey&) const = default;
  bool operator==(const TermKey&) const = default;

 private:
  std::vector<int> features_;
};

// Encoders for one feature. `interaction` is used inside second-order terms.
struct FeatureEncoding {
  std::string name;
  Encoder main;
  Encoder interaction;
};

std::string term_name(const TermKey& key, std::span<const FeatureEncoding> features);

struct TermBlock {
  TermKey key;
  Eigen::Index col_begin = 0;
  Eigen::Index col_end = 0;
  Eigen::Index row_begin = 0;  // constraint rows
  Eigen::Index row_end = 0;
  // Encoder sizes of the term's features; shape {k} or {k_p, k_q}.
  std::vector<int> shape;

  Eigen::Index cols() const { return col_end - col_begin; }
  Eigen::Index rows() const { return row_end - row_begin; }
};

struct LinearSystem {
  Eigen::SparseMatrix<double> design;       // n x m, column-major
  Eigen::SparseMatrix<double> constraints;  // c x m
  Eigen::VectorXd delta;                    // column sums of design
  std::vector<bool> dead;                   // delta == 0
  std::vector<TermBlock> blocks;

  Eigen::Index n_rows() const { return design.rows(); }
  Eigen::Index n_params() const { return design.cols(); }
  Eigen::Index n_dead() const;
  // Block owning a design column.
  const TermBlock& owner(Eigen::Index col) const;
};

// Builds the system for `terms` over `dataset`; features are looked up by
// the names in `features`.
LinearSystem assemble(const Dataset& dataset, std::span<const FeatureEncoding> features,
                      std::span<const TermKey> terms);

}  // namespace mid

#endif  // MID_DESIGN_H_
