/*
 Copyright 2026 The nslqr Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <Eigen/Dense>

#include "nslqr/domain.hpp"

namespace nslqr {

/// One round of covariates (rows a_i of A) and targets b, together with the
/// bounds the learner was configured for.
struct CovariateBatch {
  MatrixXd A;
  VectorXd b;
  double alpha_row = 0.0;  // bound on max_i ||a_i||_1
  double sigma_b = 0.0;    // bound on ||b||_1

  /// Throws DimensionMismatch / InvalidBounds when the batch breaks its
  /// declared bounds (relative slack `tol`).
  void validate(double tol = 1e-9) const;
};

struct SolverConfig {
  double tol = 1e-10;
  int max_iter = 200000;
};

/// Solution of min_{x in D} max_i |a_i^T (x - w)|.
struct MinimaxSolution {
  VectorXd x;        // feasible minimiser
  double value = 0;  // objective at x
  VectorXd dual;     // maximiser over the l1 ball of the dual problem
  double gap = 0;    // certified value - lower bound
  int iterations = 0;
};

/// Solves the min-max problem to `cfg.tol`; throws SolverNonConvergent when
/// the duality gap cannot be closed within the budget.
MinimaxSolution solve_minimax(const MatrixXd& A, const VectorXd& w,
                              const DecisionDomain& D,
                              const SolverConfig& cfg = {});

/// S(w) = min_{x in D} max_i |a_i^T (x - w)|.
double eval_barrier(const MatrixXd& A, const VectorXd& w,
                    const DecisionDomain& D, const SolverConfig& cfg = {});

/// A subgradient of S at w. When a single row certifies the value this is
/// exactly +a_i, -a_i or 0 by the sign rule; otherwise it is -A^T mu for the
/// optimal dual mu.
VectorXd barrier_subgradient(const MatrixXd& A, const VectorXd& w,
                             const DecisionDomain& D,
                             const SolverConfig& cfg = {});

/// Same as barrier_subgradient, reusing an already computed solution at w.
VectorXd subgradient_from_solution(const MatrixXd& A, const VectorXd& w,
                                   const DecisionDomain& D,
                                   const MinimaxSolution& sol,
                                   const SolverConfig& cfg = {});

/// A point of D attaining S(w); w itself when w lies in D.
VectorXd minimax_project(const MatrixXd& A, const VectorXd& w,
                         const DecisionDomain& D, const SolverConfig& cfg = {});

/// max_i min_{x in D} |a_i^T (x - w)|: a lower bound on S(w), attained
/// whenever a single row is binding.
double rowwise_barrier(const MatrixXd& A, const VectorXd& w,
                       const DecisionDomain& D);

/// Sign-rule subgradient of the row-wise bound (smallest index among ties).
VectorXd rowwise_subgradient(const MatrixXd& A, const VectorXd& w,
                             const DecisionDomain& D);

struct SurrogateValue {
  double value = 0.0;
  VectorXd gradient;
  double fit = 0.0;      // ||A w - b||^2
  double barrier = 0.0;  // S(w)
};

/// l(w) = ||A w - b||^2 + G S(w) and its subgradient.
SurrogateValue surrogate_loss(const MatrixXd& A, const VectorXd& b,
                              const VectorXd& w, const DecisionDomain& D,
                              double G, const SolverConfig& cfg = {});

/// Upper bound on sup ||A (w1 + w2) - 2 b||_1 over the enclosing box; any G
/// at least this large makes the surrogate dominate the fit loss.
double barrier_weight_bound(const MatrixXd& A, const VectorXd& b,
                            const DecisionDomain& D);

}  // namespace nslqr
