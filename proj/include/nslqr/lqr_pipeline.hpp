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

#include <deque>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nslqr/dap_policy.hpp"
#include "nslqr/lqr_system.hpp"
#include "nslqr/prodr.hpp"

namespace nslqr {

/// Parameters of the DAP class M(m, R, gamma).
struct DapConfig {
  int m = 1;
  double R = 1.0;
  double gamma = 1.0;
};

/// Regression covariate of the current round:
///   [w_{t-1}^T (x) S, ..., w_{t-m}^T (x) S],  S = Lambda^{1/2} U
/// on the effective range of Sigma, so that A_t flatten(M) = S q^M.
/// history[0] = w_{t-1}; missing entries are zero.
MatrixXd build_covariate(std::span<const VectorXd> history, int m,
                         const SpectralFactors& sigma);

/// Regression target S q_inf(window), window[0] being the disturbance that
/// enters together with the round's control.
VectorXd build_bias(std::span<const VectorXd> window, const LqrConstants& consts);

/// w_t = x_{t+1} - A x_t - B u_t; throws DisturbanceBoundViolated when
/// ||w_t||_2 > 1 + tol.
VectorXd recover_disturbance(const VectorXd& x_t, const VectorXd& u_t,
                             const VectorXd& x_next, const MatrixXd& A,
                             const MatrixXd& B, double tol = 1e-9);

/// Bound on ||b_t||_2 via the truncated closed-loop power sum.
double bias_norm_bound(const LqrConstants& consts, int h);

/// Learner constants for the LQR instantiation: alpha = sqrt(m ||Sigma||),
/// L = 4 G^2, tau = h, and G bounding ||A_t (z1 + z2) - 2 b_t||_1 on the
/// enclosing box.
ProdrConfig derive_lqr_config(const LqrConstants& consts, const DapConfig& dap,
                              int h);

/// Default cap on the delay: 10 d_x + 50.
int default_h_cap(int state_dim);

/// A state-feedback controller driven round by round by the simulator.
class Controller {
 public:
  virtual ~Controller() = default;
  /// Control for the current round given the observed state.
  virtual VectorXd control(const VectorXd& x) = 0;
  /// DAP parameters applied in the latest round, when the controller is a
  /// DAP policy.
  virtual std::optional<DapParams> last_policy() const { return std::nullopt; }
  /// Learner diagnostics of the latest round (zero for fixed policies).
  virtual double last_barrier() const { return 0.0; }
  virtual double last_entropy() const { return 0.0; }
};

/// u_t = -K x_t - q^M(w) for a fixed M (M = 0 gives u = -K x).
class FixedDapController : public Controller {
 public:
  FixedDapController(const SystemSpec& spec, const LqrConstants& consts,
                     DapParams M);
  VectorXd control(const VectorXd& x) override;
  std::optional<DapParams> last_policy() const override { return M_; }

 private:
  MatrixXd A_, B_, K_;
  DapParams M_;
  std::deque<VectorXd> history_;
  std::optional<VectorXd> x_prev_, u_prev_;
};

struct PipelineOptions {
  int h_cap = 0;                      // 0: default_h_cap(d_x)
  std::optional<int> h_override;      // fixes h instead of the formula
  std::optional<ProdrConfig> config;  // replaces derive_lqr_config
  ProdrOptions prodr;
  double disturbance_tol = 1e-9;
};

/// Nonstochastic LQR controller: proper delayed regression over the DAP
/// class with delay tau = h.
class LqrController : public Controller {
 public:
  LqrController(const SystemSpec& spec, const DapConfig& dap, long n,
                const PipelineOptions& opts = {});

  VectorXd control(const VectorXd& x) override { return control_step(x); }
  std::optional<DapParams> last_policy() const override { return M_; }
  double last_barrier() const override { return learner_->last().barrier; }
  double last_entropy() const override { return learner_->last().entropy; }

  /// Observes x_t (recovering w_{t-1}), updates the learner with the target
  /// of round t-h when available, and plays u_t.
  VectorXd control_step(const VectorXd& x_t);

  const LqrConstants& constants() const { return consts_; }
  const ProdrConfig& config() const { return cfg_; }
  int h() const { return h_; }
  int h_formula() const { return h_formula_; }
  bool h_capped() const { return h_ < h_formula_; }
  int round() const { return t_; }
  const DelayedProdr& learner() const { return *learner_; }
  const MatrixXd& last_covariate() const { return A_last_; }
  /// Target of the round whose loss was consumed in the latest step.
  const std::optional<VectorXd>& last_bias() const { return b_last_; }

 private:
  SystemSpec spec_;
  DapConfig dap_;
  LqrConstants consts_;
  int h_ = 1;
  int h_formula_ = 1;
  ProdrConfig cfg_;
  double disturbance_tol_;
  std::optional<DelayedProdr> learner_;
  std::deque<VectorXd> history_;  // history_[0] = w_{t-1}
  std::optional<VectorXd> x_prev_, u_prev_;
  std::optional<DapParams> M_;
  MatrixXd A_last_;
  std::optional<VectorXd> b_last_;
  int t_ = 0;
};

}  // namespace nslqr
