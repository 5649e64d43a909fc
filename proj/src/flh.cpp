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

#include "nslqr/flh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nslqr/errors.hpp"

namespace nslqr {

FlhWeights::FlhWeights(double eta) : eta_(eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw InvalidBounds("FLH learning rate must be positive and finite");
  }
}

VectorXd FlhWeights::predict(const std::vector<VectorXd>& predictions) const {
  if (predictions.size() != v_.size()) {
    throw DimensionMismatch("one prediction per active learner required");
  }
  VectorXd out = VectorXd::Zero(predictions.front().size());
  for (std::size_t j = 0; j < v_.size(); ++j) out += v_[j] * predictions[j];
  return out;
}

void FlhWeights::multiplicative_step(const std::vector<double>& losses) {
  if (losses.size() != v_.size()) {
    throw DimensionMismatch("one loss per active learner required");
  }
  double fmin = std::numeric_limits<double>::infinity();
  for (double f : losses) {
    if (!std::isfinite(f)) throw NumericalOverflow("non-finite FLH loss");
    fmin = std::min(fmin, f);
  }
  std::vector<double> logv(v_.size());
  double lmax = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < v_.size(); ++j) {
    logv[j] = std::log(v_[j]) - eta_ * (losses[j] - fmin);
    lmax = std::max(lmax, logv[j]);
  }
  double z = 0.0;
  for (double l : logv) z += std::exp(l - lmax);
  const double lse = lmax + std::log(z);
  for (std::size_t j = 0; j < v_.size(); ++j) v_[j] = std::exp(logv[j] - lse);
}

void FlhWeights::addition_step() {
  const double newborn = 1.0 / double(t_ + 1);
  for (double& v : v_) v *= 1.0 - newborn;
  v_.push_back(newborn);
  start_.push_back(t_ + 1);
  ++t_;
}

void FlhWeights::update(const std::vector<double>& losses) {
  multiplicative_step(losses);
  addition_step();
}

void FlhWeights::remove(std::size_t j) {
  if (j >= v_.size() || v_.size() == 1) {
    throw DimensionMismatch("cannot remove this learner");
  }
  double before = 0.0;
  for (double v : v_) before += v;
  v_.erase(v_.begin() + std::ptrdiff_t(j));
  start_.erase(start_.begin() + std::ptrdiff_t(j));
  double after = 0.0;
  for (double v : v_) after += v;
  if (after > 0.0) {
    for (double& v : v_) v *= before / after;
  } else {
    for (double& v : v_) v = before / double(v_.size());
  }
}

double FlhWeights::entropy() const {
  double h = 0.0;
  for (double v : v_)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

bool geometric_alive(int start_time, int round) {
  int k = 0;
  while (((start_time >> k) & 1) == 0 && k < 30) ++k;
  return round - start_time < 4 * (1 << k);
}

FlhOns::FlhOns(const DecisionDomain& box, double zeta, double eta,
               double alpha_exp, const FlhOnsOptions& opts)
    : box_(box), zeta_(zeta), alpha_exp_(alpha_exp), opts_(opts), weights_(eta) {
  if (!(alpha_exp > 0.0)) throw InvalidBounds("exp-concavity parameter must be positive");
  learners_.emplace_back(box_, zeta_, 1, opts_.ons);
}

VectorXd FlhOns::predict() const {
  VectorXd out = VectorXd::Zero(box_.dim());
  const auto& v = weights_.weights();
  for (std::size_t j = 0; j < learners_.size(); ++j) {
    out += v[j] * learners_[j].predict();
  }
  return out;
}

void FlhOns::update(const VectorXd& grad, const VectorXd& anchor) {
  const ExpConcaveSurrogate f(grad, anchor, alpha_exp_);
  std::vector<double> losses(learners_.size());
  for (std::size_t j = 0; j < learners_.size(); ++j) {
    const VectorXd& x = learners_[j].predict();
    losses[j] = f.value(x);
    learners_[j].update(f.gradient(x));
  }
  weights_.update(losses);
  learners_.emplace_back(box_, zeta_, weights_.round(), opts_.ons);

  if (opts_.prune_geometric) {
    const int t = weights_.round();
    for (std::size_t j = learners_.size(); j-- > 0;) {
      if (!geometric_alive(learners_[j].start_time(), t)) {
        weights_.remove(j);
        learners_.erase(learners_.begin() + std::ptrdiff_t(j));
      }
    }
  }
}

}  // namespace nslqr
