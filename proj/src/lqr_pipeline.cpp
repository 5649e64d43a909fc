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

#include "nslqr/lqr_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nslqr/domain.hpp"
#include "nslqr/errors.hpp"
#include "nslqr/linalg.hpp"

namespace nslqr {

MatrixXd build_covariate(std::span<const VectorXd> history, int m,
                         const SpectralFactors& sigma) {
  const MatrixXd S = sigma.sqrt_lambda_u();
  const int r = int(S.rows()), d_u = int(S.cols());
  int d_x = -1;
  for (const VectorXd& w : history) {
    if (d_x < 0) d_x = int(w.size());
    else if (w.size() != d_x) throw DimensionMismatch("disturbances differ in size");
  }
  if (d_x < 0) throw DimensionMismatch("state dimension unknown: empty history");
  MatrixXd A = MatrixXd::Zero(r, std::ptrdiff_t(m) * d_u * d_x);
  for (int i = 0; i < m && i < int(history.size()); ++i) {
    const VectorXd& w = history[i];
    for (int j = 0; j < d_x; ++j) {
      A.middleCols((std::ptrdiff_t(i) * d_x + j) * d_u, d_u) = w[j] * S;
    }
  }
  return A;
}

VectorXd build_bias(std::span<const VectorXd> window, const LqrConstants& consts) {
  return consts.sigma_factors.sqrt_lambda_u() * compute_q_inf(consts, window);
}

VectorXd recover_disturbance(const VectorXd& x_t, const VectorXd& u_t,
                             const VectorXd& x_next, const MatrixXd& A,
                             const MatrixXd& B, double tol) {
  if (x_t.size() != A.cols() || x_next.size() != A.rows() || u_t.size() != B.cols()) {
    throw DimensionMismatch("state or control has wrong size");
  }
  VectorXd w = x_next - A * x_t - B * u_t;
  const double nrm = w.norm();
  if (nrm > 1.0 + tol) {
    throw DisturbanceBoundViolated("disturbance norm exceeds 1", nrm);
  }
  return w;
}

double bias_norm_bound(const LqrConstants& consts, int h) {
  const MatrixXd left = consts.sigma_factors.inv_sqrt_lambda_u() * consts.B.transpose();
  double power_sum = 0.0;
  MatrixXd Ak = MatrixXd::Identity(consts.A_cl.rows(), consts.A_cl.cols());
  for (int j = 0; j < h; ++j) {
    power_sum += linalg::op_norm(Ak);
    Ak = consts.A_cl * Ak;
  }
  return linalg::op_norm(left) * linalg::op_norm(consts.P) * power_sum;
}

ProdrConfig derive_lqr_config(const LqrConstants& consts, const DapConfig& dap,
                              int h) {
  const int r = consts.sigma_factors.effective_rank;
  if (r <= 0) throw InvalidBounds("Sigma has no effective range: nothing to learn");
  const int d_u = int(consts.K.rows()), d_x = int(consts.K.cols());
  const DecisionDomain D =
      DecisionDomain::dap_spectral(dap.m, d_u, d_x, dap.R, dap.gamma);
  const MatrixXd S = consts.sigma_factors.sqrt_lambda_u();

  ProdrConfig c;
  c.p = r;
  c.d = D.dim();
  c.chi = D.chi();
  c.R_tilde = D.r_tilde();
  c.tau = h;
  const double sigma_b = std::sqrt(double(d_u)) * bias_norm_bound(consts, h);
  c.sigma_b = std::max(sigma_b, 1e-12);
  c.G = 2.0 * double(c.d) * c.R_tilde * linalg::induced_one_norm(S) + 2.0 * sigma_b;
  c.L = 4.0 * c.G * c.G;
  c.alpha_row = std::sqrt(dap.m * linalg::op_norm(consts.Sigma));
  finalize_config(c);
  return c;
}

int default_h_cap(int state_dim) { return 10 * state_dim + 50; }

FixedDapController::FixedDapController(const SystemSpec& spec,
                                       const LqrConstants& consts, DapParams M)
    : A_(spec.A), B_(spec.B), K_(consts.K), M_(std::move(M)) {
  if (M_.input_dim() != K_.rows() || M_.state_dim() != K_.cols()) {
    throw DimensionMismatch("policy shape does not match the system");
  }
}

VectorXd FixedDapController::control(const VectorXd& x) {
  if (x_prev_) {
    history_.push_front(recover_disturbance(*x_prev_, *u_prev_, x, A_, B_));
    if (int(history_.size()) > M_.memory()) history_.pop_back();
  }
  const std::vector<VectorXd> hist(history_.begin(), history_.end());
  VectorXd u = dap_control(M_, K_, x, hist);
  x_prev_ = x;
  u_prev_ = u;
  return u;
}

LqrController::LqrController(const SystemSpec& spec, const DapConfig& dap, long n,
                             const PipelineOptions& opts)
    : spec_(spec), dap_(dap), consts_(compute_constants(spec)),
      disturbance_tol_(opts.disturbance_tol) {
  if (dap.m < 1) throw InvalidBounds("DAP memory must be at least 1");
  h_formula_ = opts.h_override ? *opts.h_override : compute_delay_h(consts_, n);
  const int cap = opts.h_cap > 0 ? opts.h_cap : default_h_cap(spec.state_dim());
  h_ = std::max(1, std::min(h_formula_, cap));
  if (opts.config) {
    cfg_ = *opts.config;
    cfg_.tau = h_;
  } else {
    cfg_ = derive_lqr_config(consts_, dap_, h_);
  }
  const DecisionDomain D = DecisionDomain::dap_spectral(
      dap.m, spec.input_dim(), spec.state_dim(), dap.R, dap.gamma);
  learner_.emplace(cfg_, D, opts.prodr);
}

VectorXd LqrController::control_step(const VectorXd& x_t) {
  if (x_t.size() != spec_.state_dim()) throw DimensionMismatch("state has wrong size");
  const int t = t_ + 1;
  if (x_prev_) {
    history_.push_front(recover_disturbance(*x_prev_, *u_prev_, x_t, spec_.A,
                                            spec_.B, disturbance_tol_));
    if (int(history_.size()) > std::max(dap_.m, h_)) history_.pop_back();
  }
  const std::vector<VectorXd> hist(history_.begin(), history_.end());

  std::vector<VectorXd> padded = hist;
  padded.resize(std::max<std::size_t>(hist.size(), dap_.m),
                VectorXd::Zero(spec_.state_dim()));
  A_last_ = build_covariate(std::span<const VectorXd>(padded).first(dap_.m),
                            dap_.m, consts_.sigma_factors);

  b_last_.reset();
  if (t > h_) {
    // Target of round t-h: disturbances w_{t-h}, ..., w_{t-1}, oldest first.
    std::vector<VectorXd> window(hist.begin(), hist.begin() + h_);
    std::reverse(window.begin(), window.end());
    b_last_ = build_bias(window, consts_);
  }
  const VectorXd z = learner_->step(A_last_, b_last_);
  M_ = deflatten(z, dap_.m, spec_.input_dim(), spec_.state_dim(), dap_.R, dap_.gamma);

  VectorXd u = dap_control(*M_, consts_.K, x_t, hist);
  x_prev_ = x_t;
  u_prev_ = u;
  t_ = t;
  return u;
}

}  // namespace nslqr
