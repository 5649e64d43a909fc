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

#include <variant>

#include <Eigen/Dense>

namespace nslqr {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// {x : ||x||_inf <= radius}.
struct BoxDomain {
  int dim = 1;
  double radius = 1.0;
};

/// Flattened DAP matrices with ||M^[i]||_op <= R gamma^{i-1}; the layout is the
/// one produced by flatten().
struct DapSpectralDomain {
  int m = 1;
  int d_u = 1;
  int d_x = 1;
  double R = 1.0;
  double gamma = 1.0;

  double block_radius(int i) const;
  int block_size() const { return d_u * d_x; }
};

/// Compact convex symmetric feasible set of the regression learner.
class DecisionDomain {
 public:
  using Variant = std::variant<BoxDomain, DapSpectralDomain>;

  static DecisionDomain box(int dim, double radius);
  static DecisionDomain dap_spectral(int m, int d_u, int d_x, double R,
                                     double gamma);

  int dim() const;
  /// Bound on ||x||_1 over the domain.
  double chi() const;
  /// Radius of the smallest certified enclosing box D_inf(R~).
  double r_tilde() const;

  bool contains(const VectorXd& x, double tol = 1e-9) const;
  /// Euclidean projection.
  VectorXd project(const VectorXd& x) const;
  /// Support function max_{x in D} a^T x.
  double support(const VectorXd& a) const;

  bool is_box() const { return std::holds_alternative<BoxDomain>(v_); }
  const Variant& variant() const { return v_; }

 private:
  explicit DecisionDomain(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

struct QpOptions {
  double tol = 1e-8;
  int max_iter = 500;
};

/// argmin_{||x||_inf <= radius} (x - y)^T H (x - y) for symmetric positive
/// definite H, by a primal active-set method. Throws ProjectionNonConvergent
/// when the iteration budget runs out.
VectorXd box_mahalanobis_project(const VectorXd& y, const MatrixXd& H,
                                 double radius, const QpOptions& opts = {});

/// argmin_{x in D} 0.5 x^T H x - c^T x for symmetric positive semidefinite H.
/// Active-set on boxes when H is well conditioned, accelerated projected
/// gradient otherwise.
VectorXd constrained_quadratic_min(const MatrixXd& H, const VectorXd& c,
                                   const DecisionDomain& D, int max_iter = 20000,
                                   double tol = 1e-12);

}  // namespace nslqr
