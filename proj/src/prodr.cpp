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

#include "nslqr/prodr.hpp"

#include <cmath>
#include <string>

#include "nslqr/errors.hpp"

namespace nslqr {

void ProdrConfig::validate() const {
  for (double v : {G, L, alpha_row, R_tilde, gamma_param, zeta, eta}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidBounds("learner constants must be positive and finite");
    }
  }
  if (!(sigma_b >= 0.0) || !(chi >= 0.0)) throw InvalidBounds("negative bound");
  if (d <= 0 || p <= 0 || tau < 1) throw InvalidBounds("invalid learner dimensions");
}

void finalize_config(ProdrConfig& c) {
  if (!(c.G > 0.0) || !(c.L > 0.0) || !(c.alpha_row > 0.0) || !(c.R_tilde > 0.0) ||
      c.d <= 0) {
    throw InvalidBounds("G, L, alpha, R and d must be positive");
  }
  const double sd = std::sqrt(double(c.d));
  c.gamma_param = 2.0 * c.G * c.alpha_row * c.R_tilde * std::sqrt(c.d / (8.0 * c.L)) +
                  std::sqrt(2.0 * c.L);
  c.zeta = std::min(1.0 / (16.0 * c.G * c.alpha_row * c.R_tilde * sd),
                    1.0 / (4.0 * c.gamma_param * c.gamma_param));
  c.eta = 1.0 / (2.0 * c.gamma_param * c.gamma_param);
}

ProdrConfig derive_config(int p, int d, double chi, double sigma_b,
                          double alpha_row, double R_tilde, int tau) {
  if (p <= 0 || d <= 0 || tau < 1 || !(chi > 0.0) || !(sigma_b > 0.0) ||
      !(alpha_row > 0.0) || !(R_tilde > 0.0)) {
    throw InvalidBounds("derive_config needs positive inputs");
  }
  ProdrConfig c;
  c.p = p;
  c.d = d;
  c.chi = chi;
  c.sigma_b = sigma_b;
  c.alpha_row = alpha_row;
  c.R_tilde = R_tilde;
  c.tau = tau;
  c.G = 2.0 * p * chi + 2.0 * sigma_b;
  c.L = 6.0 * (p * chi + sigma_b) * (p * chi + sigma_b);
  finalize_config(c);
  return c;
}

namespace {

FlhOnsOptions flh_options(const ProdrConfig& cfg, const ProdrOptions& opts) {
  FlhOnsOptions o = opts.flh;
  if (opts.ons_init == OnsInit::Textbook) {
    const double diam = 2.0 * cfg.R_tilde * std::sqrt(double(cfg.d));
    o.ons.initial_metric = 1.0 / (cfg.zeta * cfg.zeta * diam * diam);
  }
  return o;
}

}  // namespace

ProdrLearner::ProdrLearner(const ProdrConfig& cfg, const DecisionDomain& D,
                           const ProdrOptions& opts)
    : cfg_(cfg),
      D_(D),
      opts_(opts),
      flh_(DecisionDomain::box(D.dim(), cfg.R_tilde), cfg.zeta, cfg.eta,
           cfg.alpha_exp(), flh_options(cfg, opts)) {
  cfg_.validate();
  if (cfg.d != D.dim()) throw DimensionMismatch("config and domain dimensions differ");
}

VectorXd ProdrLearner::predict(const MatrixXd& A) {
  if (pending_) throw Error("previous prediction still awaits feedback");
  if (A.cols() != D_.dim()) throw DimensionMismatch("covariates have wrong width");
  ++rounds_;
  Pending pend{A, flh_.predict(), {}};
  try {
    pend.sol = solve_minimax(A, pend.w, D_, opts_.solver);
  } catch (const SolverNonConvergent& e) {
    throw SolverNonConvergent(std::string(e.what()) + " (round " +
                                  std::to_string(rounds_) + ")",
                              e.best_value(), e.gap());
  }
  last_ = RoundDiagnostics{};
  last_.round = rounds_;
  last_.w = pend.w;
  last_.w_hat = pend.sol.x;
  last_.barrier = pend.sol.value;
  last_.active = flh_.active();
  last_.entropy = flh_.weights().entropy();
  pending_ = std::move(pend);
  return last_.w_hat;
}

RoundDiagnostics ProdrLearner::update(const VectorXd& b) {
  if (!pending_) throw Error("no outstanding prediction");
  const Pending& pend = *pending_;
  if (b.size() != pend.A.rows()) throw DimensionMismatch("target has wrong length");
  const VectorXd r = pend.A * pend.w - b;
  VectorXd grad = 2.0 * (pend.A.transpose() * r);
  if (pend.sol.value > 0.0) {
    grad += cfg_.G * subgradient_from_solution(pend.A, pend.w, D_, pend.sol,
                                               opts_.solver);
  }
  RoundDiagnostics out = last_;
  if (out.round != rounds_) {
    throw Error("diagnostics out of sync with the outstanding prediction");
  }
  out.fit = r.squaredNorm();
  out.loss = out.fit + cfg_.G * pend.sol.value;
  flh_.update(grad, pend.w);
  pending_.reset();
  last_ = out;
  return out;
}

VectorXd ProdrLearner::round(const MatrixXd& A, const VectorXd& b) {
  VectorXd w_hat = predict(A);
  update(b);
  return w_hat;
}

DelayedProdr::DelayedProdr(const ProdrConfig& cfg, const DecisionDomain& D,
                           const ProdrOptions& opts) {
  if (cfg.tau < 1) throw InvalidBounds("delay must be at least 1");
  instances_.reserve(cfg.tau);
  for (int k = 0; k < cfg.tau; ++k) instances_.emplace_back(cfg, D, opts);
}

VectorXd DelayedProdr::step(const MatrixXd& A_t,
                            const std::optional<VectorXd>& b_delayed) {
  const int t = t_ + 1;
  const int tau_ = tau();
  const int k = (t - 1) % tau_;
  ProdrLearner& inst = instances_[k];
  ScheduleEntry entry{t, k, 0};
  feedback_.reset();
  if (t > tau_) {
    if (!b_delayed) throw Error("delayed target missing for round " +
                                std::to_string(t - tau_));
    feedback_ = inst.update(*b_delayed);
    feedback_->instance = k;
    feedback_->round = t - tau_;
    entry.loss_round = t - tau_;
  } else if (b_delayed) {
    throw Error("no round to attribute the delayed target to");
  }
  VectorXd w_hat = inst.predict(A_t);
  t_ = t;
  last_ = inst.last();
  last_.round = t;
  last_.instance = k;
  schedule_.push_back(entry);
  return w_hat;
}

}  // namespace nslqr
