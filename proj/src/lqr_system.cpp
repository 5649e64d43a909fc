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

#include "nslqr/lqr_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nslqr/errors.hpp"
#include "nslqr/linalg.hpp"

namespace nslqr {

namespace {

void require_psd(const MatrixXd& M, const char* name, double psd_tol) {
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > psd_tol) {
    throw InvalidBounds(std::string(name) + " is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(M, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -psd_tol) {
    throw InvalidBounds(std::string(name) + " is not positive semidefinite");
  }
}

// Smallest eigenvalue above rank_tol, or 0 when there is none.
double min_positive_eigenvalue(const MatrixXd& M, double rank_tol) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (M + M.transpose()),
                                             Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) >= rank_tol) return es.eigenvalues()(i);
  }
  return 0.0;
}

// Inverse of the inner matrix on its range, after checking that the
// cross term lives in that range.
MatrixXd inner_inverse(const MatrixXd& S, const MatrixXd& cross,
                       double rank_tol) {
  Eigen::LLT<MatrixXd> llt(S);
  if (llt.info() == Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(S, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) >= rank_tol) {
      return llt.solve(MatrixXd::Identity(S.rows(), S.cols()));
    }
  }
  MatrixXd pinv = linalg::symmetric_pinv(S, rank_tol);
  const MatrixXd off_range = cross - S * (pinv * cross);
  const double scale = std::max(1.0, cross.cwiseAbs().maxCoeff());
  if (off_range.cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw SingularInnerMatrix(
        "R_u + B^T P B is singular and B^T P A leaves its range");
  }
  return pinv;
}

// Keeps iterating a converged fixed point while the step still shrinks, so
// that well-conditioned problems come back accurate to rounding error rather
// than merely to the requested tolerance.
MatrixXd polish_dare(const SystemSpec& spec, MatrixXd P, double step,
                     const DareOptions& opts) {
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, P.norm());
  for (int k = 0; k < 10000 && step > floor; ++k) {
    MatrixXd next = riccati_map(spec, P, opts.rank_tol);
    const double s = (next - P).norm();
    if (!(s < step)) break;
    step = s;
    P = std::move(next);
  }
  return P;
}

}  // namespace

void SystemSpec::validate(double psd_tol) const {
  const auto dx = A.rows();
  if (A.cols() != dx || B.rows() != dx || R_x.rows() != dx ||
      R_x.cols() != dx || R_u.rows() != B.cols() || R_u.cols() != B.cols()) {
    throw DimensionMismatch("system matrices have inconsistent shapes");
  }
  if (dx == 0 || B.cols() == 0) {
    throw DimensionMismatch("system must have at least one state and input");
  }
  if (horizon < 1) throw InvalidBounds("horizon must be positive");
  require_psd(R_x, "R_x", psd_tol);
  require_psd(R_u, "R_u", psd_tol);
}

MatrixXd SpectralFactors::sqrt_lambda_u() const {
  const int r = effective_rank;
  return lambda.head(r).cwiseSqrt().asDiagonal() * U.topRows(r);
}

MatrixXd SpectralFactors::inv_sqrt_lambda_u() const {
  const int r = effective_rank;
  return lambda.head(r).cwiseSqrt().cwiseInverse().asDiagonal() * U.topRows(r);
}

MatrixXd SpectralFactors::pseudo_inverse() const {
  const int r = effective_rank;
  return U.topRows(r).transpose() * lambda.head(r).cwiseInverse().asDiagonal() *
         U.topRows(r);
}

MatrixXd SpectralFactors::reconstruct() const {
  return U.transpose() * lambda.asDiagonal() * U;
}

MatrixXd riccati_map(const SystemSpec& spec, const MatrixXd& P,
                     double rank_tol) {
  const MatrixXd& A = spec.A;
  const MatrixXd& B = spec.B;
  const MatrixXd PB = P * B;
  const MatrixXd S = spec.R_u + B.transpose() * PB;
  const MatrixXd cross = PB.transpose() * A;  // B^T P A
  const MatrixXd Sinv = inner_inverse(0.5 * (S + S.transpose()), cross, rank_tol);
  MatrixXd next = A.transpose() * P * A + spec.R_x - cross.transpose() * Sinv * cross;
  return 0.5 * (next + next.transpose());
}

double dare_residual(const SystemSpec& spec, const MatrixXd& P,
                     double rank_tol) {
  return linalg::op_norm(P - riccati_map(spec, P, rank_tol));
}

MatrixXd solve_dare(const SystemSpec& spec, const DareOptions& opts) {
  spec.validate();
  if (!(opts.tol > 0.0)) throw InvalidBounds("DARE tolerance must be positive");
  MatrixXd P = 0.5 * (spec.R_x + spec.R_x.transpose());
  const double sqrt_dim = std::sqrt(static_cast<double>(P.rows()));
  double residual = 0.0;
  for (long it = 0; it < opts.max_iter; ++it) {
    MatrixXd next = riccati_map(spec, P, opts.rank_tol);
    const MatrixXd diff = next - P;
    // ||.||_F bounds ||.||_op from above and from below up to sqrt(dim).
    const double fro = diff.norm();
    if (!std::isfinite(fro)) break;
    residual = fro;
    // Relative to the iterate: absolute steps below eps ||P|| are rounding.
    const double tol = opts.tol * std::max(1.0, next.norm());
    bool converged = fro <= tol;
    if (!converged && fro <= tol * sqrt_dim) {
      residual = linalg::op_norm(diff);
      converged = residual <= tol;
    }
    if (converged) return polish_dare(spec, std::move(next), fro, opts);
    P = std::move(next);
  }
  throw NonConvergent("Riccati fixed-point iteration did not converge", residual);
}

ControllerGains compute_controller(const SystemSpec& spec, const MatrixXd& P,
                                   double rank_tol) {
  const MatrixXd PB = P * spec.B;
  ControllerGains g;
  g.Sigma = spec.R_u + spec.B.transpose() * PB;
  g.Sigma = 0.5 * (g.Sigma + g.Sigma.transpose());
  const MatrixXd cross = PB.transpose() * spec.A;
  g.K = inner_inverse(g.Sigma, cross, rank_tol) * cross;
  g.A_cl = spec.A - spec.B * g.K;
  return g;
}

SpectralFactors spectral_sigma(const MatrixXd& Sigma, double rank_tol) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (Sigma + Sigma.transpose()));
  const auto n = Sigma.rows();
  SpectralFactors f;
  f.U.resize(n, n);
  f.lambda.resize(n);
  f.effective_rank = 0;
  // Eigen returns ascending order.
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = n - 1 - k;
    double l = es.eigenvalues()(src);
    if (l < rank_tol) {
      l = 0.0;
    } else {
      ++f.effective_rank;
    }
    f.lambda(k) = l;
    f.U.row(k) = es.eigenvectors().col(src).transpose();
  }
  return f;
}

double spectral_radius(const MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  Eigen::EigenSolver<MatrixXd> es(M, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

StabilityConstants stability_constants(const SystemSpec& spec,
                                       const MatrixXd& P, double rank_tol) {
  StabilityConstants c;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (P + P.transpose()));
  const auto& ev = es.eigenvalues();
  const auto& V = es.eigenvectors();
  const auto n = P.rows();

  // Range-restricted P^{+1/2} and the projector onto range(P).
  VectorXd inv_sqrt = VectorXd::Zero(n);
  VectorXd on_range = VectorXd::Zero(n);
  double pmax = 0.0;
  double pmin_pos = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (ev(i) >= rank_tol) {
      inv_sqrt(i) = 1.0 / std::sqrt(ev(i));
      on_range(i) = 1.0;
      if (pmin_pos == 0.0) pmin_pos = ev(i);
      pmax = std::max(pmax, ev(i));
    }
  }
  const MatrixXd P_inv_half = V * inv_sqrt.asDiagonal() * V.transpose();
  const MatrixXd proj = V * on_range.asDiagonal() * V.transpose();
  const MatrixXd inner = proj - P_inv_half * spec.R_x * P_inv_half;
  c.gamma = std::sqrt(linalg::op_norm(0.5 * (inner + inner.transpose())));
  c.kappa = pmin_pos > 0.0 ? std::sqrt(pmax / pmin_pos) : 1.0;

  c.beta = 1.0;
  for (const MatrixXd* R : {&spec.R_u, &spec.R_x}) {
    const double lmin = min_positive_eigenvalue(*R, rank_tol);
    if (lmin > 0.0) c.beta = std::max(c.beta, 1.0 / lmin);
  }
  c.psi = std::max({1.0, linalg::op_norm(spec.A), linalg::op_norm(spec.B),
                    linalg::op_norm(spec.R_x), linalg::op_norm(spec.R_u)});
  c.Gamma = std::max(1.0, pmax);
  return c;
}

int compute_delay_h(const StabilityConstants& c, long n) {
  if (!(c.gamma < 1.0) || c.gamma < 0.0) {
    throw UnstableSystem("delay horizon requires gamma in [0, 1)");
  }
  if (n < 1) throw InvalidBounds("horizon n must be positive");
  const double nn = static_cast<double>(n);
  const double arg = c.kappa * c.kappa * c.beta * c.beta * c.psi * c.Gamma *
                     c.Gamma * nn * nn;
  const double raw = 2.0 / (1.0 - c.gamma) * std::log(arg);
  if (!(raw > 1.0)) return 1;
  return static_cast<int>(std::ceil(raw));
}

int compute_delay_h(const LqrConstants& consts, long n) {
  return compute_delay_h(consts.stability, n);
}

LqrConstants compute_constants(const SystemSpec& spec, const DareOptions& opts) {
  LqrConstants c;
  c.B = spec.B;
  c.P = solve_dare(spec, opts);
  auto gains = compute_controller(spec, c.P, opts.rank_tol);
  c.K = std::move(gains.K);
  c.Sigma = std::move(gains.Sigma);
  c.A_cl = std::move(gains.A_cl);
  if (spectral_radius(c.A_cl) >= 1.0 - 1e-9) {
    throw UnstableSystem("closed loop A - B K is not Schur stable");
  }
  c.sigma_factors = spectral_sigma(c.Sigma, opts.rank_tol);
  c.stability = stability_constants(spec, c.P, opts.rank_tol);
  c.h = compute_delay_h(c.stability, spec.horizon);
  return c;
}

VectorXd compute_q_inf(const LqrConstants& consts,
                       std::span<const VectorXd> window) {
  const auto dx = consts.A_cl.rows();
  VectorXd acc = VectorXd::Zero(dx);
  // Horner form of sum_j (A_cl^T)^j P w_j.
  const MatrixXd AclT = consts.A_cl.transpose();
  for (auto it = window.rbegin(); it != window.rend(); ++it) {
    if (it->size() != dx) throw DimensionMismatch("disturbance has wrong size");
    acc = AclT * acc + consts.P * (*it);
  }
  return consts.sigma_factors.pseudo_inverse() * (consts.B.transpose() * acc);
}

}  // namespace nslqr
