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

#include "mid/solver.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <Eigen/SparseCore>

#include "mid/error.h"

namespace mid {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kRefinementTolerance = 16.0 * kEps;
constexpr int kMaxRefinementSteps = 50;

// Live (non-dead) columns and the 1/sqrt(delta) scaling for each of them.
struct LiveColumns {
  std::vector<Index> index;   // live position -> design column
  std::vector<Index> live_of; // design column -> live position or -1
  VectorXd inv_sqrt_delta;    // per live position
};

LiveColumns live_columns(const LinearSystem& system) {
  LiveColumns live;
  const Index m = system.n_params();
  live.live_of.assign(static_cast<std::size_t>(m), -1);
  for (Index j = 0; j < m; ++j) {
    if (!system.dead[static_cast<std::size_t>(j)]) {
      live.live_of[static_cast<std::size_t>(j)] = static_cast<Index>(live.index.size());
      live.index.push_back(j);
    }
  }
  live.inv_sqrt_delta.resize(static_cast<Index>(live.index.size()));
  for (std::size_t l = 0; l < live.index.size(); ++l) {
    live.inv_sqrt_delta[static_cast<Index>(l)] = 1.0 / std::sqrt(system.delta[live.index[l]]);
  }
  return live;
}

void check_inputs(const LinearSystem& system, const VectorXd& y_tilde,
                  const LiveColumns& live) {
  if (y_tilde.size() != system.n_rows()) {
    throw DataError("target length " + std::to_string(y_tilde.size()) +
                    " does not match design rows " + std::to_string(system.n_rows()));
  }
  if (!y_tilde.allFinite()) throw DataError("non-finite target values");
  if (live.index.empty()) throw NumericalError("all design columns are dead");
}

// X~ restricted to live columns, as a sparse matrix.
SpMat scaled_live_design(const LinearSystem& system, const LiveColumns& live) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(system.design.nonZeros()));
  for (std::size_t l = 0; l < live.index.size(); ++l) {
    const double s = live.inv_sqrt_delta[static_cast<Index>(l)];
    for (SpMat::InnerIterator it(system.design, live.index[l]); it; ++it) {
      triplets.emplace_back(it.row(), static_cast<Index>(l), it.value() * s);
    }
  }
  SpMat out(system.n_rows(), static_cast<Index>(live.index.size()));
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

// M~ restricted to live columns.
SpMat scaled_live_constraints(const LinearSystem& system, const LiveColumns& live) {
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t l = 0; l < live.index.size(); ++l) {
    const double s = live.inv_sqrt_delta[static_cast<Index>(l)];
    for (SpMat::InnerIterator it(system.constraints, live.index[l]); it; ++it) {
      triplets.emplace_back(it.row(), static_cast<Index>(l), it.value() * s);
    }
  }
  SpMat out(system.constraints.rows(), static_cast<Index>(live.index.size()));
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

void finish_report(const LinearSystem& system, const VectorXd& y_tilde,
                   const LiveColumns& live, const VectorXd& gamma, SolveReport& report) {
  report.coefficients = VectorXd::Zero(system.n_params());
  for (std::size_t l = 0; l < live.index.size(); ++l) {
    report.coefficients[live.index[l]] =
        gamma[static_cast<Index>(l)] * live.inv_sqrt_delta[static_cast<Index>(l)];
  }
  const VectorXd residual = y_tilde - system.design * report.coefficients;
  report.residual_ss = residual.squaredNorm();
  report.constraint_violation =
      system.constraints.rows() == 0
          ? 0.0
          : (system.constraints * report.coefficients).cwiseAbs().maxCoeff();
  report.dead_columns = system.n_dead();
}

double resolve_rank_tol(const LinearSystem& system, const SolverConfig& config) {
  return config.rank_tol.value_or(default_rank_tol(system));
}

double resolve_kappa(const LinearSystem& system, const SolverConfig& config) {
  return config.kappa.value_or(default_kappa(system));
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

std::string_view solve_method_name(SolveMethod method) {
  switch (method) {
    case SolveMethod::kNullspaceSvd:
      return "nullspace_svd";
    case SolveMethod::kPenalty:
      return "penalty";
    case SolveMethod::kNormalCholesky:
      return "normal_cholesky";
  }
  return "unknown";
}

SolveMethod parse_solve_method(std::string_view name) {
  if (name == "nullspace_svd") return SolveMethod::kNullspaceSvd;
  if (name == "penalty") return SolveMethod::kPenalty;
  if (name == "normal_cholesky") return SolveMethod::kNormalCholesky;
  throw UsageError("unknown solver method '" + std::string(name) +
                   "' (valid: nullspace_svd, penalty, normal_cholesky)");
}

void SolverConfig::validate() const {
  if (kappa && !(*kappa > 1.0 && std::isfinite(*kappa))) {
    throw UsageError("kappa must be a finite number greater than 1");
  }
  if (rank_tol && !(*rank_tol > 0.0 && *rank_tol < 1.0)) {
    throw UsageError("rank_tol must lie in (0, 1)");
  }
}

double default_kappa(const LinearSystem& system) {
  const double max_delta = system.delta.size() == 0 ? 1.0 : system.delta.maxCoeff();
  return 1e4 * std::sqrt(std::max(max_delta, 1.0));
}

double cholesky_kappa(const VectorXd& gram_diagonal, const VectorXd& penalty_diagonal) {
  const double data = gram_diagonal.size() == 0 ? 0.0 : gram_diagonal.maxCoeff();
  const double penalty = penalty_diagonal.size() == 0 ? 0.0 : penalty_diagonal.maxCoeff();
  if (!(data > 0.0) || !(penalty > 0.0)) return 1.0;
  return std::sqrt(kCholeskyPenaltyDominance * data / penalty);
}

double default_rank_tol(const LinearSystem& system) {
  return static_cast<double>(std::max(system.n_rows(), system.n_params())) * kEps;
}

MinNormSolution min_norm_lstsq(const MatrixXd& a, const VectorXd& b, double rank_tol) {
  MinNormSolution out;
  out.x = VectorXd::Zero(a.cols());
  if (a.cols() == 0) return out;
  // For tall matrices A = QR with orthonormal Q gives A^+ = R^+ Q^T, so the
  // SVD only has to be taken of the square factor R.
  MatrixXd core;
  VectorXd rhs;
  if (a.rows() > a.cols()) {
    Eigen::HouseholderQR<MatrixXd> qr(a);
    VectorXd qtb = b;
    qtb.applyOnTheLeft(qr.householderQ().adjoint());
    rhs = qtb.head(a.cols());
    core = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
  } else {
    core = a;
    rhs = b;
  }
  Eigen::BDCSVD<MatrixXd> svd(core, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorXd& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma[0] == 0.0) return out;
  const double cutoff = rank_tol * sigma[0];
  VectorXd utb = svd.matrixU().transpose() * rhs;
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] > cutoff) {
      utb[i] /= sigma[i];
      ++out.rank;
    } else {
      utb[i] = 0.0;
    }
  }
  out.x = svd.matrixV() * utb;
  return out;
}

SolveReport solve_nullspace(const LinearSystem& system, const VectorXd& y_tilde,
                            const SolverConfig& config) {
  config.validate();
  Stopwatch clock;
  const LiveColumns live = live_columns(system);
  check_inputs(system, y_tilde, live);
  const SpMat m_tilde = scaled_live_constraints(system, live);
  const MatrixXd m_dense(m_tilde);

  // The constraint matrix is block diagonal over terms, so the null-space
  // basis Z is too. Each block's basis comes from the trailing right
  // singular vectors of that block of M~.
  struct BlockBasis {
    std::vector<Index> live_cols;
    MatrixXd z;
    Index offset = 0;  // first reduced coordinate
  };
  std::vector<BlockBasis> bases;
  Index reduced = 0;
  for (const auto& block : system.blocks) {
    BlockBasis basis;
    for (Index j = block.col_begin; j < block.col_end; ++j) {
      const Index l = live.live_of[static_cast<std::size_t>(j)];
      if (l >= 0) basis.live_cols.push_back(l);
    }
    const auto k = static_cast<Index>(basis.live_cols.size());
    if (k == 0) continue;
    MatrixXd local(block.rows(), k);
    for (Index c = 0; c < k; ++c) {
      local.col(c) = m_dense.block(block.row_begin, basis.live_cols[static_cast<std::size_t>(c)],
                                   block.rows(), 1);
    }
    if (local.rows() == 0 || local.cwiseAbs().maxCoeff() == 0.0) {
      basis.z = MatrixXd::Identity(k, k);
    } else {
      Eigen::JacobiSVD<MatrixXd> svd(local, Eigen::ComputeFullV);
      const VectorXd& sigma = svd.singularValues();
      const double cutoff =
          static_cast<double>(std::max(local.rows(), k)) * kEps * sigma[0];
      Index rank = 0;
      while (rank < sigma.size() && sigma[rank] > cutoff) ++rank;
      basis.z = svd.matrixV().rightCols(k - rank);
    }
    basis.offset = reduced;
    reduced += basis.z.cols();
    bases.push_back(std::move(basis));
  }

  // Reduced design X~ Z, assembled block by block from the sparse design.
  const Index n = system.n_rows();
  MatrixXd xz = MatrixXd::Zero(n, reduced);
  for (const auto& basis : bases) {
    const Index width = basis.z.cols();
    if (width == 0) continue;
    for (std::size_t c = 0; c < basis.live_cols.size(); ++c) {
      const Index l = basis.live_cols[c];
      const double s = live.inv_sqrt_delta[l];
      const auto zrow = basis.z.row(static_cast<Index>(c));
      for (SpMat::InnerIterator it(system.design, live.index[static_cast<std::size_t>(l)]);
           it; ++it) {
        xz.block(it.row(), basis.offset, 1, width).noalias() += (it.value() * s) * zrow;
      }
    }
  }

  SolveReport report;
  report.method = SolveMethod::kNullspaceSvd;
  report.rank_tol = resolve_rank_tol(system, config);
  const MinNormSolution eta = min_norm_lstsq(xz, y_tilde, report.rank_tol);
  report.rank = eta.rank;

  VectorXd gamma = VectorXd::Zero(static_cast<Index>(live.index.size()));
  for (const auto& basis : bases) {
    if (basis.z.cols() == 0) continue;
    const VectorXd local = basis.z * eta.x.segment(basis.offset, basis.z.cols());
    for (std::size_t c = 0; c < basis.live_cols.size(); ++c) {
      gamma[basis.live_cols[c]] = local[static_cast<Index>(c)];
    }
  }
  finish_report(system, y_tilde, live, gamma, report);
  report.elapsed_seconds = clock.seconds();
  return report;
}

SolveReport solve_penalty(const LinearSystem& system, const VectorXd& y_tilde,
                          const SolverConfig& config) {
  config.validate();
  Stopwatch clock;
  const LiveColumns live = live_columns(system);
  check_inputs(system, y_tilde, live);
  const double kappa = resolve_kappa(system, config);
  const SpMat x_tilde = scaled_live_design(system, live);
  const SpMat m_tilde = scaled_live_constraints(system, live);

  const Index n = system.n_rows();
  const Index c = m_tilde.rows();
  MatrixXd stacked(n + c, x_tilde.cols());
  stacked.topRows(n) = MatrixXd(x_tilde);
  stacked.bottomRows(c) = kappa * MatrixXd(m_tilde);
  VectorXd rhs = VectorXd::Zero(n + c);
  rhs.head(n) = y_tilde;

  SolveReport report;
  report.method = SolveMethod::kPenalty;
  report.kappa = kappa;
  report.rank_tol = resolve_rank_tol(system, config);
  const MinNormSolution gamma = min_norm_lstsq(stacked, rhs, report.rank_tol);
  report.rank = gamma.rank;
  finish_report(system, y_tilde, live, gamma.x, report);
  report.elapsed_seconds = clock.seconds();
  return report;
}

SolveReport solve_normal_cholesky(const LinearSystem& system, const VectorXd& y_tilde,
                                  const SolverConfig& config) {
  config.validate();
  Stopwatch clock;
  const LiveColumns live = live_columns(system);
  check_inputs(system, y_tilde, live);
  const SpMat x_tilde = scaled_live_design(system, live);
  const SpMat m_tilde = scaled_live_constraints(system, live);

  const SpMat gram_sparse = SpMat(x_tilde.transpose()) * x_tilde;
  const SpMat penalty_sparse = SpMat(m_tilde.transpose()) * m_tilde;
  const double kappa =
      config.kappa.value_or(cholesky_kappa(gram_sparse.diagonal(), penalty_sparse.diagonal()));
  MatrixXd gram = MatrixXd(gram_sparse) + (kappa * kappa) * MatrixXd(penalty_sparse);
  const VectorXd rhs = x_tilde.transpose() * y_tilde;

  SolveReport report;
  report.method = SolveMethod::kNormalCholesky;
  report.kappa = kappa;
  report.rank_tol = resolve_rank_tol(system, config);

  // A pivot that keeps only rounding-error size of its column's own diagonal
  // means the matrix is numerically singular. The floor is a fixed multiple of
  // machine epsilon rather than rank_tol: the penalty term makes the Gram
  // matrix legitimately ill-conditioned at the default kappa.
  constexpr double kPivotFloor = 64.0 * std::numeric_limits<double>::epsilon();
  auto factor_ok = [&](const Eigen::LLT<MatrixXd>& llt, const MatrixXd& g) {
    if (llt.info() != Eigen::Success) return false;
    const auto& l = llt.matrixLLT();
    for (Index i = 0; i < g.rows(); ++i) {
      const double pivot = l(i, i) * l(i, i);
      if (!std::isfinite(pivot) || pivot <= kPivotFloor * g(i, i)) return false;
    }
    return true;
  };

  Eigen::LLT<MatrixXd> llt(gram);
  if (!factor_ok(llt, gram)) {
    const double ridge = report.rank_tol * gram.trace();
    gram.diagonal().array() += ridge;
    report.ridge_applied = true;
    llt.compute(gram);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("Cholesky factorisation failed after ridge retry");
    }
  }
  VectorXd gamma = llt.solve(rhs);
  if (!gamma.allFinite()) throw NumericalError("Cholesky solve produced non-finite values");

  // Multiplier updates (augmented Lagrangian) on the same factor: each step
  // solves (G + kappa^2 M'M) gamma = X'y - M'lambda and moves lambda by
  // kappa^2 M gamma. A fixed point satisfies the constraints exactly, so
  // a moderate kappa loses nothing when the constraints bind.
  if (m_tilde.rows() > 0) {
    VectorXd lambda = VectorXd::Zero(m_tilde.rows());
    VectorXd violation = m_tilde * gamma;
    double worst = violation.cwiseAbs().maxCoeff();
    const double floor = kRefinementTolerance * std::max(1.0, gamma.cwiseAbs().maxCoeff());
    while (worst > floor && report.refinement_steps < kMaxRefinementSteps) {
      lambda += (kappa * kappa) * violation;
      VectorXd next = llt.solve(rhs - m_tilde.transpose() * lambda);
      const VectorXd next_violation = m_tilde * next;
      const double next_worst = next_violation.cwiseAbs().maxCoeff();
      if (!next.allFinite() || !(next_worst < worst)) break;
      gamma = std::move(next);
      violation = next_violation;
      worst = next_worst;
      ++report.refinement_steps;
    }
  }
  finish_report(system, y_tilde, live, gamma, report);
  report.elapsed_seconds = clock.seconds();
  return report;
}

SolveReport solve(const LinearSystem& system, const VectorXd& y_tilde,
                  const SolverConfig& config) {
  switch (config.method) {
    case SolveMethod::kNullspaceSvd:
      return solve_nullspace(system, y_tilde, config);
    case SolveMethod::kPenalty:
      return solve_penalty(system, y_tilde, config);
    case SolveMethod::kNormalCholesky:
      return solve_normal_cholesky(system, y_tilde, config);
  }
  throw UsageError("unknown solver method");
}

}  // namespace mid
