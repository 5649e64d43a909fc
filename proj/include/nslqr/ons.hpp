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

struct OnsOptions {
  QpOptions projection;
  int refactor_every = 256;
  /// Initial metric A_0 = initial_metric * I; zero selects zeta.
  double initial_metric = 0.0;
};

/// Online Newton Step over a box: w <- argmin_{x in box} ||y - x||_{A},
/// y = w - (1/zeta) A^{-1} grad, A = A_0 + sum grad grad^T with A_0 = zeta I
/// unless OnsOptions::initial_metric says otherwise.
class OnsLearner {
 public:
  /// `domain` must be a box (it always contains the round-one prediction 0).
  OnsLearner(const DecisionDomain& domain, double zeta, int start_time = 1,
             const OnsOptions& opts = {});

  const VectorXd& predict() const { return w_; }
  void update(const VectorXd& grad);

  const MatrixXd& metric() const { return A_; }
  const MatrixXd& metric_inverse() const { return A_inv_; }
  double zeta() const { return zeta_; }
  double radius() const { return radius_; }
  int start_time() const { return start_time_; }
  int dim() const { return int(w_.size()); }

 private:
  VectorXd w_;
  MatrixXd A_;
  MatrixXd A_inv_;
  double zeta_;
  double radius_;
  int start_time_;
  int updates_since_refactor_ = 0;
  OnsOptions opts_;
};

/// f(x) = (sqrt(alpha/2) g^T (x - anchor) + 1/sqrt(2 alpha))^2: the quadratic
/// surrogate of an alpha-exp-concave loss with gradient g at `anchor`.
class ExpConcaveSurrogate {
 public:
  ExpConcaveSurrogate(VectorXd grad, VectorXd anchor, double alpha);

  double value(const VectorXd& x) const;
  VectorXd gradient(const VectorXd& x) const;

  const VectorXd& grad() const { return g_; }
  const VectorXd& anchor() const { return anchor_; }
  double alpha() const { return alpha_; }

 private:
  VectorXd g_;
  VectorXd anchor_;
  double alpha_;
};

ExpConcaveSurrogate build_expconcave_surrogate(const VectorXd& grad,
                                               const VectorXd& anchor,
                                               double alpha);

}  // namespace nslqr
