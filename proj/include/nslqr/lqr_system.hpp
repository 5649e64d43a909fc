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

#include <span>

#include <Eigen/Dense>

namespace nslqr {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Known linear system x_{t+1} = A x_t + B u_t + w_t with stage cost
/// x^T R_x x + u^T R_u u.
struct SystemSpec {
  MatrixXd A;
  MatrixXd B;
  MatrixXd R_x;
  MatrixXd R_u;
  long horizon = 1;

  int state_dim() const { return static_cast<int>(A.rows()); }
  int input_dim() const { return static_cast<int>(B.cols()); }

  /// Shape, symmetry and PSD checks (eigenvalues >= -psd_tol).
  void validate(double psd_tol = 1e-9) const;

  double stage_cost(const VectorXd& x, const VectorXd& u) const {
    return x.dot(R_x * x) + u.dot(R_u * u);
  }
};

struct DareOptions {
  double tol = 1e-10;
  long max_iter = 100000;
  double rank_tol = 1e-9;
};

/// Eigendecomposition Sigma = U^T diag(lambda) U with eigenvalues sorted in
/// descending order. Eigenvalues below rank_tol are stored as exactly zero and
/// fall outside the effective range.
struct SpectralFactors {
  MatrixXd U;        // rows are eigenvectors
  VectorXd lambda;   // descending, clamped at zero
  int effective_rank = 0;

  /// Lambda^{1/2} U restricted to the effective range (rank x d_u).
  MatrixXd sqrt_lambda_u() const;
  /// Lambda^{-1/2} U restricted to the effective range (rank x d_u).
  MatrixXd inv_sqrt_lambda_u() const;
  /// Moore-Penrose inverse U^T Lambda^+ U.
  MatrixXd pseudo_inverse() const;
  MatrixXd reconstruct() const;
};

struct StabilityConstants {
  double gamma = 0.0;  // contraction factor, must lie in [0, 1)
  double kappa = 1.0;
  double beta = 1.0;
  double psi = 1.0;
  double Gamma = 1.0;
};

struct ControllerGains {
  MatrixXd K;      // d_u x d_x
  MatrixXd Sigma;  // R_u + B^T P B
  MatrixXd A_cl;   // A - B K
};

struct LqrConstants {
  MatrixXd B;
  MatrixXd P;
  MatrixXd K;
  MatrixXd Sigma;
  MatrixXd A_cl;
  SpectralFactors sigma_factors;
  StabilityConstants stability;
  int h = 1;
};

/// Right-hand side of the Riccati recursion,
/// A^T P A + R_x - A^T P B (R_u + B^T P B)^+ B^T P A.
MatrixXd riccati_map(const SystemSpec& spec, const MatrixXd& P,
                     double rank_tol = 1e-9);

/// Operator-norm residual ||P - riccati_map(P)||.
double dare_residual(const SystemSpec& spec, const MatrixXd& P,
                     double rank_tol = 1e-9);

/// Fixed-point iteration of the Riccati recursion from P_0 = R_x.
///
/// The inner matrix R_u + B^T P B is inverted on its range; SingularInnerMatrix
/// is thrown when B^T P A has a component outside that range, since the
/// recursion is then undefined. Throws NonConvergent when the residual is
/// still above tol * max(1, ||P||_F) after max_iter sweeps.
MatrixXd solve_dare(const SystemSpec& spec, const DareOptions& opts = {});

ControllerGains compute_controller(const SystemSpec& spec, const MatrixXd& P,
                                   double rank_tol = 1e-9);

SpectralFactors spectral_sigma(const MatrixXd& Sigma, double rank_tol = 1e-9);

/// Largest eigenvalue modulus.
double spectral_radius(const MatrixXd& M);

StabilityConstants stability_constants(const SystemSpec& spec,
                                       const MatrixXd& P,
                                       double rank_tol = 1e-9);

/// h = ceil(2 (1 - gamma)^{-1} log(kappa^2 beta^2 Psi Gamma^2 n^2)), at least 1.
int compute_delay_h(const StabilityConstants& c, long n);
int compute_delay_h(const LqrConstants& consts, long n);

/// Solves the Riccati equation and derives every constant. Throws
/// UnstableSystem when A - B K is not Schur stable.
LqrConstants compute_constants(const SystemSpec& spec,
                               const DareOptions& opts = {});

/// Truncated disturbance feed-forward target
///   q = Sigma^+ sum_j B^T (A_cl^T)^j P window[j],   j = 0 .. h-1,
/// where window[0] is the disturbance entering in the same step as the control.
VectorXd compute_q_inf(const LqrConstants& consts,
                       std::span<const VectorXd> window);

}  // namespace nslqr
