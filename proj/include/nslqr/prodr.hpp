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

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nslqr/barrier.hpp"
#include "nslqr/domain.hpp"
#include "nslqr/flh.hpp"

namespace nslqr {

/// Tuning of the proper regression learner.
struct ProdrConfig {
  double G = 0.0;            // barrier weight / Lipschitz bound
  double L = 0.0;            // exp-concavity scale; the loss is 1/(4L)-exp-concave
  double alpha_row = 0.0;    // covariate row bound
  double sigma_b = 0.0;      // target bound
  double chi = 0.0;          // l1 bound of the domain
  double R_tilde = 0.0;      // enclosing box radius
  double gamma_param = 0.0;  // gradient-scale constant of the surrogate
  double zeta = 0.0;         // ONS regulariser
  double eta = 0.0;          // FLH learning rate
  int d = 0;
  int p = 0;
  int tau = 1;

  double alpha_exp() const { return 1.0 / (4.0 * L); }
  /// Throws InvalidBounds unless all constants are positive and finite.
  void validate() const;
};

/// Fills gamma_param, zeta and eta from G, L, alpha_row, R_tilde and d.
void finalize_config(ProdrConfig& cfg);

/// G = 2 p chi + 2 sigma, L = 6 (p chi + sigma)^2 and the derived rates.
ProdrConfig derive_config(int p, int d, double chi, double sigma_b,
                          double alpha_row, double R_tilde, int tau = 1);

/// Initial ONS metric: zeta I, or the textbook 1/(zeta^2 D^2) I with D the
/// Euclidean diameter of the enclosing box.
enum class OnsInit { Zeta, Textbook };

struct ProdrOptions {
  SolverConfig solver;
  FlhOnsOptions flh;
  OnsInit ons_init = OnsInit::Zeta;
};

/// Per-round record of the learner's intermediate quantities.
struct RoundDiagnostics {
  int round = 0;          // round the prediction was made for
  int instance = 0;       // delayed instance that made it
  VectorXd w;             // surrogate-algorithm prediction
  VectorXd w_hat;         // played point
  double barrier = 0.0;   // S(w)
  double fit = 0.0;       // ||A w - b||^2 (after feedback)
  double loss = 0.0;      // fit + G S(w) (after feedback)
  std::size_t active = 0; // base learners alive when predicting
  double entropy = 0.0;   // entropy of the FLH weights when predicting
};

/// One proper regression learner: FLH-ONS on the enclosing box, min-max
/// projection onto D, barrier-augmented loss as feedback.
class ProdrLearner {
 public:
  ProdrLearner(const ProdrConfig& cfg, const DecisionDomain& D,
               const ProdrOptions& opts = {});

  /// Plays for the next round given its covariates.
  VectorXd predict(const MatrixXd& A);
  /// Feedback for the outstanding prediction; returns its completed record.
  RoundDiagnostics update(const VectorXd& b);
  /// predict followed by update.
  VectorXd round(const MatrixXd& A, const VectorXd& b);

  bool has_pending() const { return pending_.has_value(); }
  /// Record of the most recent prediction.
  const RoundDiagnostics& last() const { return last_; }
  int rounds_predicted() const { return rounds_; }
  const ProdrConfig& config() const { return cfg_; }
  const DecisionDomain& domain() const { return D_; }
  const FlhOns& surrogate_algorithm() const { return flh_; }

 private:
  struct Pending {
    MatrixXd A;
    VectorXd w;
    MinimaxSolution sol;
  };

  ProdrConfig cfg_;
  DecisionDomain D_;
  ProdrOptions opts_;
  FlhOns flh_;
  std::optional<Pending> pending_;
  RoundDiagnostics last_;
  int rounds_ = 0;
};

/// Round-robin reduction for feedback delayed by tau rounds: instance
/// (t-1) mod tau first absorbs the loss of round t-tau, then plays round t.
class DelayedProdr {
 public:
  struct ScheduleEntry {
    int round = 0;
    int instance = 0;
    int loss_round = 0;  // 0 when no loss was consumed
  };

  DelayedProdr(const ProdrConfig& cfg, const DecisionDomain& D,
               const ProdrOptions& opts = {});

  /// Advances to the next round t. `b_delayed` is the target of round t-tau
  /// and must be present exactly when t > tau.
  VectorXd step(const MatrixXd& A_t, const std::optional<VectorXd>& b_delayed);

  int tau() const { return int(instances_.size()); }
  int round() const { return t_; }
  const ProdrLearner& instance(int k) const { return instances_.at(k); }
  const std::vector<ScheduleEntry>& schedule() const { return schedule_; }
  /// Record of the prediction just made.
  const RoundDiagnostics& last() const { return last_; }
  /// Completed record of the loss consumed in the latest step, if any.
  const std::optional<RoundDiagnostics>& last_feedback() const { return feedback_; }

 private:
  std::vector<ProdrLearner> instances_;
  std::vector<ScheduleEntry> schedule_;
  RoundDiagnostics last_;
  std::optional<RoundDiagnostics> feedback_;
  int t_ = 0;
};

}  // namespace nslqr
