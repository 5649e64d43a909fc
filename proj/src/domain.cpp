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

#include "nslqr/domain.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nslqr/errors.hpp"
#include "nslqr/linalg.hpp"

namespace nslqr {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Eigen::Map<const MatrixXd> block_view(const VectorXd& z,
                                      const DapSpectralDomain& d, int i) {
  return Eigen::Map<const MatrixXd>(z.data() + std::ptrdiff_t(i) * d.block_size(),
                                    d.d_u, d.d_x);
}

}  // namespace

double DapSpectralDomain::block_radius(int i) const {
  return R * std::pow(gamma, i);
}

DecisionDomain DecisionDomain::box(int dim, double radius) {
  if (dim <= 0) throw DimensionMismatch("box domain needs positive dimension");
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw InvalidBounds("box radius must be finite and nonnegative");
  }
  return DecisionDomain(BoxDomain{dim, radius});
}

DecisionDomain DecisionDomain::dap_spectral(int m, int d_u, int d_x, double R,
                                            double gamma) {
  if (m <= 0 || d_u <= 0 || d_x <= 0) {
    throw DimensionMismatch("DAP domain needs positive dimensions");
  }
  if (!(R >= 0.0) || !std::isfinite(R) || !(gamma > 0.0) || gamma > 1.0) {
    throw InvalidBounds("DAP domain needs R >= 0 and gamma in (0, 1]");
  }
  return DecisionDomain(DapSpectralDomain{m, d_u, d_x, R, gamma});
}

int DecisionDomain::dim() const {
  return std::visit(Overloaded{[](const BoxDomain& b) { return b.dim; },
                               [](const DapSpectralDomain& d) {
                                 return d.m * d.block_size();
                               }},
                    v_);
}

double DecisionDomain::chi() const {
  return std::visit(
      Overloaded{[](const BoxDomain& b) { return b.dim * b.radius; },
                 [](const DapSpectralDomain& d) {
                   const double per = std::sqrt(double(d.d_u) * d.d_x *
                                                std::min(d.d_u, d.d_x));
                   double s = 0.0;
                   for (int i = 0; i < d.m; ++i) s += d.block_radius(i) * per;
                   return s;
                 }},
      v_);
}

double DecisionDomain::r_tilde() const {
  // The enclosing box used by the regret analysis has half-width
  // R sqrt(min(d_u, d_x)); it dominates the Frobenius norm, hence every entry,
  // of each block. The first block has radius R, so the factor gamma is not
  // applied.
  return std::visit(Overloaded{[](const BoxDomain& b) { return b.radius; },
                               [](const DapSpectralDomain& d) {
                                 return d.block_radius(0) *
                                        std::sqrt(double(std::min(d.d_u, d.d_x)));
                               }},
                    v_);
}

bool DecisionDomain::contains(const VectorXd& x, double tol) const {
  if (x.size() != dim()) throw DimensionMismatch("point has wrong dimension");
  return std::visit(
      Overloaded{[&](const BoxDomain& b) {
                   return x.cwiseAbs().maxCoeff() <= b.radius + tol;
                 },
                 [&](const DapSpectralDomain& d) {
                   for (int i = 0; i < d.m; ++i) {
                     if (linalg::op_norm(block_view(x, d, i)) >
                         d.block_radius(i) + tol) {
                       return false;
                     }
                   }
                   return true;
                 }},
      v_);
}

VectorXd DecisionDomain::project(const VectorXd& x) const {
  if (x.size() != dim()) throw DimensionMismatch("point has wrong dimension");
  return std::visit(
      Overloaded{[&](const BoxDomain& b) -> VectorXd {
                   return x.cwiseMax(-b.radius).cwiseMin(b.radius);
                 },
                 [&](const DapSpectralDomain& d) -> VectorXd {
                   VectorXd out(x.size());
                   for (int i = 0; i < d.m; ++i) {
                     MatrixXd c = linalg::clip_singular_values(
                         block_view(x, d, i), d.block_radius(i));
                     out.segment(std::ptrdiff_t(i) * d.block_size(),
                                 d.block_size()) =
                         Eigen::Map<const VectorXd>(c.data(), c.size());
                   }
                   return out;
                 }},
      v_);
}

double DecisionDomain::support(const VectorXd& a) const {
  if (a.size() != dim()) throw DimensionMismatch("direction has wrong dimension");
  return std::visit(
      Overloaded{[&](const BoxDomain& b) { return b.radius * a.lpNorm<1>(); },
                 [&](const DapSpectralDomain& d) {
                   double s = 0.0;
                   for (int i = 0; i < d.m; ++i) {
                     s += d.block_radius(i) *
                          linalg::nuclear_norm(block_view(a, d, i));
                   }
                   return s;
                 }},
      v_);
}

VectorXd box_mahalanobis_project(const VectorXd& y, const MatrixXd& H,
                                 double radius, const QpOptions& opts) {
  const int n = int(y.size());
  if (H.rows() != n || H.cols() != n) {
    throw DimensionMismatch("metric has wrong shape");
  }
  if (y.cwiseAbs().maxCoeff() <= radius) return y;

  // state: 0 free, +1 at upper bound, -1 at lower bound.
  std::vector<int> state(n, 0);
  VectorXd x = y.cwiseMax(-radius).cwiseMin(radius);
  for (int i = 0; i < n; ++i) {
    if (x[i] >= radius) state[i] = 1;
    else if (x[i] <= -radius) state[i] = -1;
  }
  const double step_tol = opts.tol * (1.0 + radius);

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    const VectorXd g = H * (x - y);
    std::vector<int> free_idx;
    for (int i = 0; i < n; ++i)
      if (state[i] == 0) free_idx.push_back(i);

    VectorXd p = VectorXd::Zero(n);
    if (!free_idx.empty()) {
      const int k = int(free_idx.size());
      MatrixXd Hff(k, k);
      VectorXd gf(k);
      for (int a = 0; a < k; ++a) {
        gf[a] = g[free_idx[a]];
        for (int b = 0; b < k; ++b) Hff(a, b) = H(free_idx[a], free_idx[b]);
      }
      const VectorXd pf = Hff.ldlt().solve(-gf);
      for (int a = 0; a < k; ++a) p[free_idx[a]] = pf[a];
    }

    if (p.cwiseAbs().maxCoeff() <= step_tol) {
      // Stationary on the current face: release the bound with the most
      // negative multiplier, if any.
      const double mult_tol = opts.tol * (1.0 + g.cwiseAbs().maxCoeff());
      int worst = -1;
      double worst_val = mult_tol;
      for (int i = 0; i < n; ++i) {
        if (state[i] == 0) continue;
        // At the upper bound the multiplier is -g_i, at the lower bound g_i.
        const double violation = state[i] > 0 ? g[i] : -g[i];
        if (violation > worst_val) {
          worst_val = violation;
          worst = i;
        }
      }
      if (worst < 0) return x;
      state[worst] = 0;
      continue;
    }

    double alpha = 1.0;
    int blocking = -1;
    for (int i : free_idx) {
      double lim = 1.0;
      if (p[i] > 0.0) lim = (radius - x[i]) / p[i];
      else if (p[i] < 0.0) lim = (-radius - x[i]) / p[i];
      else continue;
      if (lim < alpha) {
        alpha = std::max(lim, 0.0);
        blocking = i;
      }
    }
    x += alpha * p;
    if (blocking >= 0) {
      state[blocking] = p[blocking] > 0.0 ? 1 : -1;
      x[blocking] = state[blocking] * radius;
    }
    x = x.cwiseMax(-radius).cwiseMin(radius);
  }
  throw ProjectionNonConvergent("box projection exceeded iteration budget");
}

VectorXd constrained_quadratic_min(const MatrixXd& H, const VectorXd& c,
                                   const DecisionDomain& D, int max_iter,
                                   double tol) {
  const int n = D.dim();
  if (H.rows() != n || H.cols() != n || c.size() != n) {
    throw DimensionMismatch("quadratic has wrong shape");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (H + H.transpose()));
  const double lmax = std::max(es.eigenvalues().maxCoeff(), 0.0);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmax == 0.0) {
    // Linear objective: the maximiser of c^T x.
    if (c.norm() == 0.0) return VectorXd::Zero(n);
    if (const auto* b = std::get_if<BoxDomain>(&D.variant())) {
      return b->radius * c.array().sign().matrix();
    }
  }
  if (D.is_box() && lmin > 1e-10 * lmax) {
    // min 0.5 (x - y)^T H (x - y) with y = H^{-1} c.
    const VectorXd y = es.eigenvectors() *
                       (es.eigenvalues().cwiseInverse().asDiagonal() *
                        (es.eigenvectors().transpose() * c));
    QpOptions o;
    o.tol = 1e-12;
    o.max_iter = 50 * n + 500;
    return box_mahalanobis_project(y, H, std::get<BoxDomain>(D.variant()).radius,
                                   o);
  }
  // Accelerated projected gradient.
  const double L = std::max(lmax, 1e-300);
  VectorXd x = VectorXd::Zero(n), x_prev = x, z = x;
  double t = 1.0;
  for (int k = 0; k < max_iter; ++k) {
    x_prev = x;
    x = D.project(z - (H * z - c) / L);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    z = x + ((t - 1.0) / t_next) * (x - x_prev);
    t = t_next;
    if ((x - x_prev).norm() <= tol * (1.0 + x.norm())) break;
  }
  return x;
}

}  // namespace nslqr
