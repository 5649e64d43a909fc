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

#include "nslqr/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "nslqr/errors.hpp"
#include "nslqr/linalg.hpp"

namespace nslqr {

namespace {

// Points this close to D (relative to its radius) count as members, so that
// the output of DecisionDomain::project, which may overshoot a spectral ball
// by a rounding error, has a barrier of exactly zero.
bool in_domain(const VectorXd& w, const DecisionDomain& D) {
  return D.contains(w, 1e-12 * (1.0 + D.r_tilde()));
}

void check_shapes(const MatrixXd& A, const VectorXd& w, const DecisionDomain& D) {
  if (A.rows() == 0) throw DimensionMismatch("covariate matrix has no rows");
  if (A.cols() != D.dim() || w.size() != D.dim()) {
    throw DimensionMismatch("covariates, point and domain disagree in dimension");
  }
}

/// Euclidean projection onto the unit l1 ball.
VectorXd project_l1_ball(const VectorXd& v) {
  if (v.lpNorm<1>() <= 1.0) return v;
  std::vector<double> u(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) u[i] = std::abs(v[i]);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0, theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / double(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[i] = std::copysign(std::max(std::abs(v[i]) - theta, 0.0), v[i]);
  }
  return out;
}

struct RowScan {
  int best = 0;
  double value = 0.0;     // max_i max(0, |c_i| - s_i)
  double center = 0.0;    // c_{best}
  double support = 0.0;   // s_{best}
};

RowScan scan_rows(const MatrixXd& A, const VectorXd& w, const DecisionDomain& D) {
  RowScan r;
  r.value = -1.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const VectorXd a = A.row(i).transpose();
    const double c = a.dot(w);
    const double s = D.support(a);
    const double h = std::max(0.0, std::abs(c) - s);
    if (h > r.value) {
      r = RowScan{int(i), h, c, s};
    }
  }
  return r;
}

/// A point of D, close to w, with a^T x = target, where target lies in the
/// range [-support(a), support(a)]. Traces x(lam) = Pi_D(w - lam a), along
/// which a^T x is monotone in lam.
VectorXd face_point(const VectorXd& a, const VectorXd& w, double target,
                    const DecisionDomain& D, double tol) {
  auto phi = [&](double lam, VectorXd& x) {
    x = D.project(w - lam * a);
    return a.dot(x);
  };
  VectorXd x0;
  const double phi0 = phi(0.0, x0);
  if (std::abs(phi0 - target) <= tol) return x0;
  const double a2 = a.squaredNorm();
  if (a2 == 0.0) return x0;
  const double dir = phi0 > target ? 1.0 : -1.0;
  double lo = 0.0, hi = dir * std::abs(phi0 - target) / a2;
  VectorXd x_lo = x0, x_hi;
  double phi_hi = phi(hi, x_hi);
  for (int k = 0; k < 200 && (phi_hi - target) * dir > tol; ++k) {
    lo = hi;
    x_lo = x_hi;
    hi *= 2.0;
    phi_hi = phi(hi, x_hi);
  }
  double phi_lo = a.dot(x_lo);
  for (int k = 0; k < 200; ++k) {
    if (std::abs(phi_hi - target) <= tol) break;
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    VectorXd x_mid;
    const double phi_mid = phi(mid, x_mid);
    if ((phi_mid - target) * dir > 0.0) {
      lo = mid;
      x_lo = x_mid;
      phi_lo = phi_mid;
    } else {
      hi = mid;
      x_hi = x_mid;
      phi_hi = phi_mid;
    }
  }
  return std::abs(phi_lo - target) < std::abs(phi_hi - target) ? x_lo : x_hi;
}

double objective(const MatrixXd& A, const VectorXd& x, const VectorXd& w) {
  return (A * (x - w)).cwiseAbs().maxCoeff();
}

}  // namespace

void CovariateBatch::validate(double tol) const {
  if (A.rows() != b.size()) {
    throw DimensionMismatch("covariate rows and targets disagree");
  }
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    if (A.row(i).lpNorm<1>() > alpha_row * (1.0 + tol) + tol) {
      throw InvalidBounds("covariate row exceeds its l1 bound");
    }
  }
  if (b.lpNorm<1>() > sigma_b * (1.0 + tol) + tol) {
    throw InvalidBounds("target exceeds its l1 bound");
  }
}

MinimaxSolution solve_minimax(const MatrixXd& A, const VectorXd& w,
                              const DecisionDomain& D, const SolverConfig& cfg) {
  check_shapes(A, w, D);
  const int p = int(A.rows());
  MinimaxSolution sol;
  sol.dual = VectorXd::Zero(p);
  if (in_domain(w, D)) {
    sol.x = w;
    return sol;
  }

  const double scale = 1.0 + (A * w).cwiseAbs().maxCoeff();
  const double tol = cfg.tol * scale;

  // A single binding row: the row-wise bound is attained on its face.
  const RowScan rs = scan_rows(A, w, D);
  const double target = std::clamp(rs.center, -rs.support, rs.support);
  const VectorXd a_best = A.row(rs.best).transpose();
  VectorXd x1 = face_point(a_best, w, target, D, 0.1 * tol);
  const double v1 = objective(A, x1, w);
  if (v1 <= rs.value + tol) {
    sol.x = std::move(x1);
    sol.value = v1;
    if (rs.value > 0.0) sol.dual[rs.best] = rs.center > rs.support ? -1.0 : 1.0;
    sol.gap = v1 - rs.value;
    return sol;
  }

  // Several rows bind: restarted primal-dual iteration on
  //   min_{x in D} max_{||mu||_1 <= 1} mu^T (A x - A w)
  // in normalised units, certified by the dual bound
  //   -mu^T A w - support(A^T mu).
  const double nA = linalg::op_norm(A);
  const MatrixXd At = A / nA;
  const VectorXd c = At * w;
  const double omega = std::max(D.r_tilde() * std::sqrt(double(D.dim())), 1e-12);
  const double tau = 0.99 * omega, sigma = 0.99 / omega;

  auto primal = [&](const VectorXd& x) { return (At * x - c).cwiseAbs().maxCoeff(); };
  auto dual = [&](const VectorXd& mu) {
    return -mu.dot(c) - D.support(At.transpose() * mu);
  };

  VectorXd x = x1, x_bar = x1, mu = VectorXd::Zero(p);
  mu[rs.best] = rs.center > 0 ? -1.0 : 1.0;
  VectorXd sum_x = VectorXd::Zero(x.size()), sum_mu = VectorXd::Zero(p);
  int count = 0;

  // The signed unit vector of the best row certifies the row-wise bound.
  VectorXd best_x = x1, best_mu = mu;
  double best_p = primal(x1), best_d = dual(mu);
  double restart_gap = best_p - best_d;
  const double target_gap = tol / nA;

  int k = 0;
  for (; k < cfg.max_iter; ++k) {
    const VectorXd mu_new = project_l1_ball(mu + sigma * (At * x_bar - c));
    const VectorXd x_new = D.project(x - tau * (At.transpose() * mu_new));
    x_bar = 2.0 * x_new - x;
    x = x_new;
    mu = mu_new;
    sum_x += x;
    sum_mu += mu;
    ++count;

    if (k % 10 != 9) continue;
    const VectorXd x_avg = sum_x / count, mu_avg = sum_mu / count;
    const double pc = primal(x), pa = primal(x_avg);
    const double dc = dual(mu), da = dual(mu_avg);
    if (pc < best_p) { best_p = pc; best_x = x; }
    if (pa < best_p) { best_p = pa; best_x = x_avg; }
    if (dc > best_d) { best_d = dc; best_mu = mu; }
    if (da > best_d) { best_d = da; best_mu = mu_avg; }
    if (best_p - best_d <= target_gap) break;

    const double gc = pc - dc, ga = pa - da;
    const double g = std::min(gc, ga);
    if (g <= 0.2 * restart_gap) {
      if (ga < gc) {
        x = x_avg;
        mu = mu_avg;
      }
      x_bar = x;
      sum_x.setZero();
      sum_mu.setZero();
      count = 0;
      restart_gap = g;
    }
  }
  sol.iterations = k;
  sol.x = best_x;
  sol.value = objective(A, best_x, w);
  sol.dual = best_mu;
  sol.gap = (best_p - best_d) * nA;
  if (sol.gap > tol) {
    throw SolverNonConvergent("min-max solver did not close the duality gap",
                              sol.value, sol.gap);
  }
  return sol;
}

double eval_barrier(const MatrixXd& A, const VectorXd& w, const DecisionDomain& D,
                    const SolverConfig& cfg) {
  return solve_minimax(A, w, D, cfg).value;
}

VectorXd subgradient_from_solution(const MatrixXd& A, const VectorXd& w,
                          const DecisionDomain& D, const MinimaxSolution& sol,
                          const SolverConfig& cfg) {
  const double tol = cfg.tol * (1.0 + (A * w).cwiseAbs().maxCoeff());
  if (sol.value <= tol) return VectorXd::Zero(w.size());
  // Prefer a single certifying row: it is an exact subgradient and keeps the
  // gradient in the covariate row space as an individual row.
  if (rowwise_barrier(A, w, D) >= sol.value - tol) {
    return rowwise_subgradient(A, w, D);
  }
  return -(A.transpose() * sol.dual);
}

VectorXd barrier_subgradient(const MatrixXd& A, const VectorXd& w,
                             const DecisionDomain& D, const SolverConfig& cfg) {
  return subgradient_from_solution(A, w, D, solve_minimax(A, w, D, cfg), cfg);
}

VectorXd minimax_project(const MatrixXd& A, const VectorXd& w,
                         const DecisionDomain& D, const SolverConfig& cfg) {
  return solve_minimax(A, w, D, cfg).x;
}

double rowwise_barrier(const MatrixXd& A, const VectorXd& w,
                       const DecisionDomain& D) {
  check_shapes(A, w, D);
  return scan_rows(A, w, D).value;
}

VectorXd rowwise_subgradient(const MatrixXd& A, const VectorXd& w,
                             const DecisionDomain& D) {
  check_shapes(A, w, D);
  const RowScan rs = scan_rows(A, w, D);
  // a^T (Pi(w) - w) < 0 exactly when a^T w exceeds the support value.
  const double margin = 1e-9 * (1.0 + std::abs(rs.center));
  if (rs.value <= margin) return VectorXd::Zero(w.size());
  const VectorXd a = A.row(rs.best).transpose();
  return rs.center > 0.0 ? a : VectorXd(-a);
}

SurrogateValue surrogate_loss(const MatrixXd& A, const VectorXd& b,
                              const VectorXd& w, const DecisionDomain& D, double G,
                              const SolverConfig& cfg) {
  check_shapes(A, w, D);
  if (b.size() != A.rows()) throw DimensionMismatch("targets have wrong length");
  SurrogateValue out;
  const VectorXd r = A * w - b;
  out.fit = r.squaredNorm();
  out.gradient = 2.0 * (A.transpose() * r);
  if (!in_domain(w, D)) {
    const MinimaxSolution sol = solve_minimax(A, w, D, cfg);
    out.barrier = sol.value;
    if (out.barrier > 0.0) out.gradient += G * subgradient_from_solution(A, w, D, sol, cfg);
  }
  out.value = out.fit + G * out.barrier;
  return out;
}

double barrier_weight_bound(const MatrixXd& A, const VectorXd& b,
                            const DecisionDomain& D) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    s += 2.0 * D.r_tilde() * A.row(i).lpNorm<1>() + 2.0 * std::abs(b[i]);
  }
  return s;
}

}  // namespace nslqr
