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


// Oracles and fixtures shared by the unit tests and the acceptance suite.
// Everything here is deliberately independent of the library's numerical
// code paths: dense KKT solves, pseudoinverses from a different
// factorisation, numeric integration and exhaustive enumeration.

#ifndef MID_TESTS_TEST_UTIL_H_
#define MID_TESTS_TEST_UTIL_H_

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "mid/dataset.h"
#include "mid/design.h"
#include "mid/model.h"

namespace mid::testing {

// Midpoint rule over [0,1]^2 with `cells` cells per axis.
inline double integrate_unit_square(const std::function<double(double, double)>& f,
                                    int cells) {
  double sum = 0.0;
  const double h = 1.0 / cells;
  for (int i = 0; i < cells; ++i) {
    for (int j = 0; j < cells; ++j) sum += f((i + 0.5) * h, (j + 0.5) * h);
  }
  return sum * h * h;
}

inline double integrate_unit_interval(const std::function<double(double)>& f, int cells) {
  double sum = 0.0;
  const double h = 1.0 / cells;
  for (int i = 0; i < cells; ++i) sum += f((i + 0.5) * h);
  return sum * h;
}

// Builds a LinearSystem from dense matrices with a single block spanning
// every column and constraint row. Delta defaults to the column sums.
inline LinearSystem dense_system(const Eigen::MatrixXd& x, const Eigen::MatrixXd& m,
                                 const Eigen::VectorXd* delta = nullptr) {
  LinearSystem system;
  system.design = x.sparseView();
  system.constraints = m.sparseView();
  system.delta = delta ? *delta : Eigen::VectorXd(x.colwise().sum().transpose());
  system.dead.assign(static_cast<std::size_t>(x.cols()), false);
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    system.dead[static_cast<std::size_t>(j)] = system.delta[j] == 0.0;
  }
  TermBlock block;
  block.key = TermKey(0);
  block.col_begin = 0;
  block.col_end = x.cols();
  block.row_begin = 0;
  block.row_end = m.rows();
  block.shape = {static_cast<int>(x.cols())};
  system.blocks.push_back(block);
  return system;
}

// Live (non-dead) column indices of a dense system.
inline std::vector<Eigen::Index> live_columns(const Eigen::VectorXd& delta) {
  std::vector<Eigen::Index> live;
  for (Eigen::Index j = 0; j < delta.size(); ++j) {
    if (delta[j] != 0.0) live.push_back(j);
  }
  return live;
}

inline Eigen::MatrixXd select_columns(const Eigen::MatrixXd& a,
                                      const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXd out(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = a.col(cols[c]);
  return out;
}

// Equality-constrained least squares by the Lagrange (KKT) system
//   [X'X  M'] [beta]   [X'y]
//   [M    0 ] [lam ] = [ 0 ]
// solved with full-pivot LU. Valid when [X; M] has full column rank on the
// live columns. Dead columns get zero.
inline Eigen::VectorXd kkt_oracle(const Eigen::MatrixXd& x, const Eigen::MatrixXd& m,
                                  const Eigen::VectorXd& delta, const Eigen::VectorXd& y) {
  const auto live = live_columns(delta);
  const Eigen::MatrixXd xl = select_columns(x, live);
  const Eigen::MatrixXd ml = select_columns(m, live);
  const Eigen::Index p = xl.cols(), c = ml.rows();
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(p + c, p + c);
  kkt.topLeftCorner(p, p) = xl.transpose() * xl;
  kkt.topRightCorner(p, c) = ml.transpose();
  kkt.bottomLeftCorner(c, p) = ml;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p + c);
  rhs.head(p) = xl.transpose() * y;
  // Redundant constraint rows make the KKT matrix singular in the
  // multiplier block only; the complete orthogonal decomposition returns a
  // consistent solution whose beta part is unique.
  const Eigen::VectorXd solution = kkt.completeOrthogonalDecomposition().solve(rhs);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(x.cols());
  for (std::size_t c2 = 0; c2 < live.size(); ++c2) beta[live[c2]] = solution[static_cast<Eigen::Index>(c2)];
  return beta;
}

// Orthonormal basis of the null space of `a` via full-pivot LU kernel and
// Householder QR (a different route from the library's SVD).
inline Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& a, Eigen::Index cols) {
  if (a.rows() == 0 || a.cwiseAbs().maxCoeff() == 0.0) return Eigen::MatrixXd::Identity(cols, cols);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-10);
  const Eigen::MatrixXd k = lu.kernel();
  if (lu.dimensionOfKernel() == 0) return Eigen::MatrixXd::Zero(cols, 0);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(k);
  return qr.householderQ() * Eigen::MatrixXd::Identity(cols, k.cols());
}

// Weighted minimum-norm constrained least squares: among beta with M beta = 0
// minimising ||y - X beta||, the one minimising ||Delta^(1/2) beta||.
// Pseudoinverse from a complete orthogonal decomposition.
inline Eigen::VectorXd pinv_oracle(const Eigen::MatrixXd& x, const Eigen::MatrixXd& m,
                                   const Eigen::VectorXd& delta, const Eigen::VectorXd& y,
                                   double threshold = 1e-10) {
  const auto live = live_columns(delta);
  Eigen::VectorXd inv_sqrt(static_cast<Eigen::Index>(live.size()));
  for (std::size_t c = 0; c < live.size(); ++c) inv_sqrt[static_cast<Eigen::Index>(c)] = 1.0 / std::sqrt(delta[live[c]]);
  const Eigen::MatrixXd xt = select_columns(x, live) * inv_sqrt.asDiagonal();
  const Eigen::MatrixXd mt = select_columns(m, live) * inv_sqrt.asDiagonal();
  const Eigen::MatrixXd z = kernel_basis(mt, xt.cols());
  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(xt.cols());
  if (z.cols() > 0) {
    const Eigen::MatrixXd xz = xt * z;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
    cod.setThreshold(threshold);
    cod.compute(xz);
    gamma = z * (cod.pseudoInverse() * y);
  }
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(x.cols());
  for (std::size_t c = 0; c < live.size(); ++c) {
    beta[live[c]] = gamma[static_cast<Eigen::Index>(c)] * inv_sqrt[static_cast<Eigen::Index>(c)];
  }
  return beta;
}

// Largest violation of the empirical centring constraints of a fitted
// model, relative to max|coefficient| * max(delta) of each term.
inline double centering_violation(const MidModel& model) {
  double worst = 0.0;
  for (const auto& table : model.terms()) {
    double coef_scale = 0.0, delta_scale = 0.0;
    for (double b : table.coefficients) coef_scale = std::max(coef_scale, std::abs(b));
    for (double d : table.delta) delta_scale = std::max(delta_scale, d);
    const double scale = coef_scale * delta_scale;
    if (scale == 0.0) continue;
    std::vector<double> sums;
    if (table.shape.size() == 1) {
      double s = 0.0;
      for (std::size_t i = 0; i < table.coefficients.size(); ++i) {
        s += table.coefficients[i] * table.delta[i];
      }
      sums.push_back(s);
    } else {
      const auto kp = static_cast<std::size_t>(table.shape[0]);
      const auto kq = static_cast<std::size_t>(table.shape[1]);
      for (std::size_t a = 0; a < kp; ++a) {
        double s = 0.0;
        for (std::size_t t = 0; t < kq; ++t) s += table.coefficients[a * kq + t] * table.delta[a * kq + t];
        sums.push_back(s);
      }
      for (std::size_t b = 0; b < kq; ++b) {
        double s = 0.0;
        for (std::size_t a = 0; a < kp; ++a) s += table.coefficients[a * kq + b] * table.delta[a * kq + b];
        sums.push_back(s);
      }
    }
    for (double s : sums) worst = std::max(worst, std::abs(s) / scale);
  }
  return worst;
}

// Random dataset with `d` features: even-indexed numeric, odd-indexed
// categorical (three levels) when `mixed`.
inline Dataset random_dataset(std::size_t n, std::size_t d, std::uint64_t seed, bool mixed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Column> columns;
  for (std::size_t j = 0; j < d; ++j) {
    const std::string name = "f" + std::to_string(j + 1);
    if (mixed && j % 2 == 1) {
      std::vector<std::string> cells(n);
      for (auto& c : cells) c = std::string(1, static_cast<char>('a' + static_cast<int>(unit(rng) * 3.0)));
      columns.push_back(Column::categorical_from_strings(name, cells));
    } else {
      std::vector<double> values(n);
      for (auto& v : values) v = unit(rng);
      columns.push_back(Column::numeric(name, values));
    }
  }
  return Dataset(std::move(columns));
}

// Random nonlinear response over a random dataset.
inline PredictionVector random_response(const Dataset& data, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> weights(data.n_cols());
  for (auto& w : weights) w = normal(rng);
  PredictionVector y(data.n_rows(), 0.0);
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    double prev = 0.0;
    for (std::size_t j = 0; j < data.n_cols(); ++j) {
      const Column& c = data.column(j);
      const double v = c.is_numeric() ? c.values()[i] : static_cast<double>(c.codes()[i]);
      y[i] += weights[j] * std::sin(3.0 * v) + 0.5 * prev * v;
      prev = v;
    }
  }
  return y;
}

// A small randomized constrained system built from real encoders: two or
// three features (categorical ones with three levels), main effects and/or
// interactions, at most `max_params` columns. A duplicated feature makes
// the constrained problem rank-deficient; few rows with categorical
// features leave dead interaction cells.
struct TinySystem {
  LinearSystem system;
  Eigen::VectorXd y;
};

inline TinySystem random_tiny_system(std::uint64_t seed, Eigen::Index max_params = 12) {
  std::mt19937_64 rng(seed);
  for (int attempt = 0;; ++attempt) {
    const bool mixed = rng() % 2 == 0;
    // Categorical interactions on few rows leave some level pairs unseen.
    const std::size_t n = mixed ? 6 + static_cast<std::size_t>(rng() % 7)
                                : 6 + static_cast<std::size_t>(rng() % 25);
    const std::size_t d = 2 + static_cast<std::size_t>(rng() % 2);
    Dataset data = random_dataset(n, d, rng(), mixed);
    const bool duplicated = d == 3 && rng() % 2 == 0;
    if (duplicated) {
      // Third feature duplicates an earlier one: their main effects are
      // only identified through their sum, so the constrained problem is
      // rank-deficient. An interaction of a categorical feature with its
      // copy has dead off-diagonal cells.
      const Column& first = data.column(mixed ? 1 : 0);
      data = data.with_column(2, first.is_numeric()
                                     ? Column::numeric("f3", first.values())
                                     : Column::categorical("f3", first.codes(), first.levels()));
    }
    const int k_main = 2 + static_cast<int>(rng() % 3);
    std::vector<FeatureEncoding> features;
    for (const auto& c : data.columns()) {
      features.push_back({c.name(), Encoder::build(c, k_main), Encoder::build(c, 2)});
    }
    std::vector<TermKey> terms;
    const std::uint64_t pattern = rng() % 3;
    if (pattern != 2) {
      for (std::size_t j = 0; j < d; ++j) terms.emplace_back(static_cast<int>(j));
    }
    if (pattern != 0) terms.emplace_back(0, 1);
    if (duplicated && mixed) terms = {TermKey(0), TermKey(1, 2)};
    LinearSystem system = assemble(data, features, terms);
    if (system.n_params() > max_params && attempt < 1000) continue;
    const PredictionVector response = random_response(data, rng());
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(response.data(),
                                                          static_cast<Eigen::Index>(n));
    y.array() -= y.mean();
    return {std::move(system), std::move(y)};
  }
}

// Random model over a random dataset: random term subset of order one and
// two, small encoders.
struct RandomModel {
  Dataset data;
  MidModel model;
};

inline RandomModel random_model(std::uint64_t seed, std::size_t max_d = 6) {
  std::mt19937_64 rng(seed);
  const std::size_t d = 1 + static_cast<std::size_t>(rng() % max_d);
  Dataset data = random_dataset(40, d, rng(), rng() % 2 == 0);
  FitOptions options;
  options.k_main = 4;
  options.k_interaction = 2;
  for (std::size_t j = 0; j < d; ++j) {
    if (rng() % 3 != 0) options.terms.push_back(data.column(j).name());
    for (std::size_t k = j + 1; k < d; ++k) {
      if (rng() % 3 == 0) {
        options.terms.push_back(data.column(j).name() + ":" + data.column(k).name());
      }
    }
  }
  if (options.terms.empty()) options.terms.push_back(data.column(0).name());
  MidModel model = fit(data, random_response(data, rng()), options);
  return {std::move(data), std::move(model)};
}

}  // namespace mid::testing

#endif  // MID_TESTS_TEST_UTIL_H_
