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

// Weighted minimum-norm least squares under the centring constraints:
//
//   minimise ||y - X beta||^2  subject to  M beta = 0,
//
// choosing, among all minimisers, the one with the smallest
// ||Delta^(1/2) beta||. All methods work in gamma = Delta^(1/2) beta with
// X~ = X Delta^(-1/2) and M~ = M Delta^(-1/2); dead columns (Delta = 0) are
// removed before the solve and get coefficient 0.

#ifndef MID_SOLVER_H_
#define MID_SOLVER_H_

#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "mid/design.h"

namespace mid {

enum class SolveMethod {
  // Exact constraint elimination through an orthonormal null-space basis of
  // M~, then a pseudoinverse solve of the reduced problem. Rank-revealing.
  kNullspaceSvd,
  // Stacked system [X~; kappa M~] gamma ~ [y; 0], solved by pseudoinverse.
  kPenalty,
  // Normal equations of the penalty system factorised by LL^T Cholesky,
  // followed by multiplier updates that reuse the factor until the
  // constraints hold to rounding. Fast, but cannot determine rank.
  kNormalCholesky,
};

std::string_view solve_method_name(SolveMethod method);
SolveMethod parse_solve_method(std::string_view name);

struct SolverConfig {
  SolveMethod method = SolveMethod::kNullspaceSvd;
  // Penalty factor; defaults to 1e4 * sqrt(max delta).
  std::optional<double> kappa;
  // Relative singular value cutoff; defaults to max(n, m) * machine epsilon.
  std::optional<double> rank_tol;

  void validate() const;
};

struct SolveReport {
  Eigen::VectorXd coefficients;          // beta, dead columns 0
  std::optional<Eigen::Index> rank;      // unset when not determined
  double residual_ss = 0.0;
  double constraint_violation = 0.0;     // max |M beta|
  SolveMethod method = SolveMethod::kNullspaceSvd;
  double elapsed_seconds = 0.0;
  std::optional<double> kappa;
  double rank_tol = 0.0;
  bool ridge_applied = false;
  int refinement_steps = 0;              // Cholesky multiplier updates
  Eigen::Index dead_columns = 0;
};

SolveReport solve(const LinearSystem& system, const Eigen::VectorXd& y_tilde,
                  const SolverConfig& config = {});
SolveReport solve_nullspace(const LinearSystem& system, const Eigen::VectorXd& y_tilde,
                            const SolverConfig& config = {});
SolveReport solve_penalty(const LinearSystem& system, const Eigen::VectorXd& y_tilde,
                          const SolverConfig& config = {});
SolveReport solve_normal_cholesky(const LinearSystem& system,
                                  const Eigen::VectorXd& y_tilde,
                                  const SolverConfig& config = {});

double default_kappa(const LinearSystem& system);

// The normal equations square the condition number of the stacked penalty
// system, so the Cholesky method defaults to a much smaller kappa: the
// largest diagonal entry of the penalty block kappa^2 M~'M~ is made
// kCholeskyPenaltyDominance times the largest diagonal entry of X~'X~.
// Centring constraints of nested encoders never conflict with the data, so
// this loses no accuracy there while keeping the factorisation well
// conditioned.
inline constexpr double kCholeskyPenaltyDominance = 1e4;
double cholesky_kappa(const Eigen::VectorXd& gram_diagonal,
                      const Eigen::VectorXd& penalty_diagonal);
double default_rank_tol(const LinearSystem& system);

// Minimum-norm least-squares solution of A x ~ b via QR and SVD, with
// singular values below rank_tol * sigma_max treated as zero.
struct MinNormSolution {
  Eigen::VectorXd x;
  Eigen::Index rank = 0;
};
MinNormSolution min_norm_lstsq(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                               double rank_tol);

}  // namespace mid

#endif  // MID_SOLVER_H_
