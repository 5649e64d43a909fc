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

#include "nslqr/ons.hpp"

#include <cmath>

#include "nslqr/errors.hpp"

namespace nslqr {

OnsLearner::OnsLearner(const DecisionDomain& domain, double zeta, int start_time,
                       const OnsOptions& opts)
    : zeta_(zeta), start_time_(start_time), opts_(opts) {
  const auto* box = std::get_if<BoxDomain>(&domain.variant());
  if (box == nullptr) throw InvalidBounds("ONS runs over a box domain");
  if (!(zeta > 0.0) || !std::isfinite(zeta)) {
    throw InvalidBounds("ONS zeta must be positive and finite");
  }
  radius_ = box->radius;
  const int d = box->dim;
  w_ = VectorXd::Zero(d);
  if (!(opts.initial_metric >= 0.0) || !std::isfinite(opts.initial_metric)) {
    throw InvalidBounds("initial ONS metric must be nonnegative and finite");
  }
  const double a0 = opts.initial_metric > 0.0 ? opts.initial_metric : zeta;
  A_ = a0 * MatrixXd::Identity(d, d);
  A_inv_ = MatrixXd::Identity(d, d) / a0;
}

void OnsLearner::update(const VectorXd& grad) {
  if (grad.size() != w_.size()) throw DimensionMismatch("gradient has wrong size");
  if (!grad.allFinite()) throw NumericalOverflow("non-finite ONS gradient");
  if (grad.squaredNorm() == 0.0) return;

  A_.noalias() += grad * grad.transpose();
  if (++updates_since_refactor_ >= opts_.refactor_every) {
    A_inv_ = A_.llt().solve(MatrixXd::Identity(A_.rows(), A_.cols()));
    updates_since_refactor_ = 0;
  } else {
    const VectorXd Ag = A_inv_ * grad;
    A_inv_.noalias() -= (Ag * Ag.transpose()) / (1.0 + grad.dot(Ag));
  }
  A_inv_ = 0.5 * (A_inv_ + A_inv_.transpose()).eval();

  const VectorXd y = w_ - (A_inv_ * grad) / zeta_;
  w_ = box_mahalanobis_project(y, A_, radius_, opts_.projection);
}

ExpConcaveSurrogate::ExpConcaveSurrogate(VectorXd grad, VectorXd anchor,
                                         double alpha)
    : g_(std::move(grad)), anchor_(std::move(anchor)), alpha_(alpha) {
  if (!(alpha > 0.0)) throw InvalidBounds("exp-concavity parameter must be positive");
  if (g_.size() != anchor_.size()) throw DimensionMismatch("surrogate shape mismatch");
}

double ExpConcaveSurrogate::value(const VectorXd& x) const {
  const double s = std::sqrt(alpha_ / 2.0) * g_.dot(x - anchor_) +
                   1.0 / std::sqrt(2.0 * alpha_);
  return s * s;
}

VectorXd ExpConcaveSurrogate::gradient(const VectorXd& x) const {
  return (alpha_ * g_.dot(x - anchor_) + 1.0) * g_;
}

ExpConcaveSurrogate build_expconcave_surrogate(const VectorXd& grad,
                                               const VectorXd& anchor,
                                               double alpha) {
  return ExpConcaveSurrogate(grad, anchor, alpha);
}

}  // namespace nslqr
