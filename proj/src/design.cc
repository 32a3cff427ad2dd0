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

#include "mid/design.h"

#include <algorithm>

#include "mid/error.h"

namespace mid {

TermKey::TermKey(int feature) : features_{feature} {
  if (feature < 0) throw UsageError("negative feature index");
}

TermKey::TermKey(int first, int second) : features_{first, second} {
  if (first < 0 || second < 0) throw UsageError("negative feature index");
  if (first == second) throw UsageError("interaction term repeats a feature");
  std::sort(features_.begin(), features_.end());
}

TermKey TermKey::from(std::span<const int> features) {
  if (features.size() == 1) return TermKey(features[0]);
  if (features.size() == 2) return TermKey(features[0], features[1]);
  throw UsageError("terms must have one or two features");
}

bool TermKey::contains(int feature) const {
  return std::find(features_.begin(), features_.end(), feature) != features_.end();
}

std::string term_name(const TermKey& key, std::span<const FeatureEncoding> features) {
  std::string out;
  for (std::size_t i = 0; i < key.order(); ++i) {
    if (i > 0) out += ':';
    out += features[static_cast<std::size_t>(key[i])].name;
  }
  return out;
}

Eigen::Index LinearSystem::n_dead() const {
  return static_cast<Eigen::Index>(std::count(dead.begin(), dead.end(), true));
}

const TermBlock& LinearSystem::owner(Eigen::Index col) const {
  for (const auto& block : blocks) {
    if (col >= block.col_begin && col < block.col_end) return block;
  }
  throw UsageError("design column out of range");
}

LinearSystem assemble(const Dataset& dataset, std::span<const FeatureEncoding> features,
                      std::span<const TermKey> terms) {
  if (terms.empty()) throw UsageError("assemble: no terms");
  const auto n = static_cast<Eigen::Index>(dataset.n_rows());

  // Encode each needed (feature, role) once.
  std::vector<std::vector<Encoded>> main_codes(features.size());
  std::vector<std::vector<Encoded>> inter_codes(features.size());
  for (const auto& term : terms) {
    for (int f : term.features()) {
      if (f >= static_cast<int>(features.size())) {
        throw UsageError("term references feature index " + std::to_string(f) +
                         " without an encoder");
      }
      const auto& fe = features[static_cast<std::size_t>(f)];
      auto& slot = term.order() == 1 ? main_codes[static_cast<std::size_t>(f)]
                                     : inter_codes[static_cast<std::size_t>(f)];
      if (slot.empty() && n > 0) {
        const Encoder& enc = term.order() == 1 ? fe.main : fe.interaction;
        slot = enc.encode_column(dataset.column(fe.name));
      }
    }
  }

  LinearSystem system;
  Eigen::Index col = 0;
  Eigen::Index row = 0;
  for (const auto& term : terms) {
    TermBlock block;
    block.key = term;
    block.col_begin = col;
    block.row_begin = row;
    if (term.order() == 1) {
      const int k = features[static_cast<std::size_t>(term[0])].main.size();
      block.shape = {k};
      col += k;
      row += 1;
    } else {
      const int kp = features[static_cast<std::size_t>(term[0])].interaction.size();
      const int kq = features[static_cast<std::size_t>(term[1])].interaction.size();
      block.shape = {kp, kq};
      col += static_cast<Eigen::Index>(kp) * kq;
      row += kp + kq;
    }
    block.col_end = col;
    block.row_end = row;
    system.blocks.push_back(std::move(block));
  }

  std::vector<Eigen::Triplet<double>> triplets;
  for (const auto& block : system.blocks) {
    if (block.key.order() == 1) {
      const auto& codes = main_codes[static_cast<std::size_t>(block.key[0])];
      for (Eigen::Index i = 0; i < n; ++i) {
        const Encoded& e = codes[static_cast<std::size_t>(i)];
        for (int a = 0; a < e.size; ++a) {
          triplets.emplace_back(i, block.col_begin + e.index[a], e.weight[a]);
        }
      }
    } else {
      const auto& cp = inter_codes[static_cast<std::size_t>(block.key[0])];
      const auto& cq = inter_codes[static_cast<std::size_t>(block.key[1])];
      const int kq = block.shape[1];
      for (Eigen::Index i = 0; i < n; ++i) {
        const Encoded& ep = cp[static_cast<std::size_t>(i)];
        const Encoded& eq = cq[static_cast<std::size_t>(i)];
        for (int a = 0; a < ep.size; ++a) {
          for (int b = 0; b < eq.size; ++b) {
            triplets.emplace_back(i, block.col_begin + ep.index[a] * kq + eq.index[b],
                                  ep.weight[a] * eq.weight[b]);
          }
        }
      }
    }
  }
  system.design.resize(n, col);
  system.design.setFromTriplets(triplets.begin(), triplets.end());
  system.design.makeCompressed();

  system.delta = Eigen::VectorXd::Zero(col);
  for (Eigen::Index j = 0; j < col; ++j) {
    double sum = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.design, j); it; ++it) {
      sum += it.value();
    }
    system.delta[j] = sum;
  }
  system.dead.resize(static_cast<std::size_t>(col));
  for (Eigen::Index j = 0; j < col; ++j) {
    system.dead[static_cast<std::size_t>(j)] = system.delta[j] == 0.0;
  }

  std::vector<Eigen::Triplet<double>> constraint_triplets;
  for (const auto& block : system.blocks) {
    if (block.key.order() == 1) {
      for (Eigen::Index j = block.col_begin; j < block.col_end; ++j) {
        if (system.delta[j] != 0.0) {
          constraint_triplets.emplace_back(block.row_begin, j, system.delta[j]);
        }
      }
      continue;
    }
    const int kp = block.shape[0];
    const int kq = block.shape[1];
    for (int s = 0; s < kp; ++s) {
      for (int t = 0; t < kq; ++t) {
        const Eigen::Index j = block.col_begin + static_cast<Eigen::Index>(s) * kq + t;
        if (system.delta[j] == 0.0) continue;
        constraint_triplets.emplace_back(block.row_begin + s, j, system.delta[j]);
        constraint_triplets.emplace_back(block.row_begin + kp + t, j, system.delta[j]);
      }
    }
  }
  system.constraints.resize(row, col);
  system.constraints.setFromTriplets(constraint_triplets.begin(),
                                     constraint_triplets.end());
  system.constraints.makeCompressed();
  return system;
}

}  // namespace mid
