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

#include <vector>

#include <Eigen/Dense>

#include "nslqr/ons.hpp"

namespace nslqr {

/// Exponential weights over base learners started at rounds 1..t, with the
/// Follow-the-Leading-History addition step.
class FlhWeights {
 public:
  explicit FlhWeights(double eta);

  /// Convex combination of the per-learner predictions (one per learner).
  VectorXd predict(const std::vector<VectorXd>& predictions) const;

  /// v_j <- v_j exp(-eta f_j) / Z. The losses are shifted by their minimum
  /// first, so adding a constant to all losses leaves the result unchanged.
  void multiplicative_step(const std::vector<double>& losses);
  /// The newborn learner of round t+1 gets weight 1/(t+1); the others are
  /// scaled by 1 - 1/(t+1). Advances the round counter.
  void addition_step();
  /// multiplicative_step followed by addition_step.
  void update(const std::vector<double>& losses);

  /// Drops learner j and renormalises the remaining weights to their
  /// previous total.
  void remove(std::size_t j);

  const std::vector<double>& weights() const { return v_; }
  const std::vector<int>& start_times() const { return start_; }
  /// Current round (number of learners ever created).
  int round() const { return t_; }
  double eta() const { return eta_; }
  std::size_t size() const { return v_.size(); }
  double entropy() const;

 private:
  double eta_;
  int t_ = 1;
  std::vector<double> v_{1.0};
  std::vector<int> start_{1};
};

/// A learner started at round s = r 2^k (r odd) survives for 4 * 2^k rounds
/// under geometric pruning.
bool geometric_alive(int start_time, int round);

struct FlhOnsOptions {
  bool prune_geometric = false;
  OnsOptions ons;
};

/// FLH over ONS base learners on a box, driven by the quadratic surrogate of
/// the incoming loss anchored at the aggregate prediction.
class FlhOns {
 public:
  FlhOns(const DecisionDomain& box, double zeta, double eta, double alpha_exp,
         const FlhOnsOptions& opts = {});

  /// Aggregate prediction for the current round.
  VectorXd predict() const;
  /// Feeds the loss with (sub)gradient `grad` at the aggregate `anchor`.
  void update(const VectorXd& grad, const VectorXd& anchor);

  const FlhWeights& weights() const { return weights_; }
  const std::vector<OnsLearner>& learners() const { return learners_; }
  std::size_t active() const { return learners_.size(); }
  double alpha_exp() const { return alpha_exp_; }

 private:
  DecisionDomain box_;
  double zeta_;
  double alpha_exp_;
  FlhOnsOptions opts_;
  FlhWeights weights_;
  std::vector<OnsLearner> learners_;
};

}  // namespace nslqr
