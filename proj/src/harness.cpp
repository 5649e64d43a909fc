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

#include "nslqr/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "nslqr/domain.hpp"
#include "nslqr/errors.hpp"

namespace nslqr {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

/// Uniform double in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

constexpr double kNormSlack = 1e-12;

void check_norm(const VectorXd& w, long t) {
  const double nrm = w.norm();
  if (nrm > 1.0 + kNormSlack) {
    throw DisturbanceBoundViolated(
        "disturbance of round " + std::to_string(t) + " exceeds unit norm", nrm);
  }
}

}  // namespace

std::vector<VectorXd> generate_disturbances(const DisturbanceAdversary& adv,
                                            long n, int state_dim) {
  if (n < 0) throw InvalidBounds("negative horizon");
  std::vector<VectorXd> w;
  w.reserve(std::size_t(n));
  std::visit(
      Overloaded{
          [&](const LowerBoundAdversary& a) {
            if (state_dim != 2) {
              throw DimensionMismatch("the lower-bound adversary acts in two dimensions");
            }
            if (!(a.C_n > 0.0)) throw InvalidBudget("C_n must be positive");
            std::mt19937_64 rng(a.seed);
            const double s = 1.0 / std::numbers::sqrt2;
            for (long t = 0; t < n; ++t) {
              const double y = (rng() >> 63) ? 1.0 : -1.0;
              w.push_back(VectorXd::Constant(2, s));
              w.back()[0] = y * s;
            }
          },
          [&](const PiecewiseConstantAdversary& a) {
            if (a.segments.empty()) throw InvalidBounds("no segments");
            std::size_t seg = 0;
            int left = a.segments[0].length;
            for (long t = 0; t < n; ++t) {
              while (left <= 0) {
                seg = (seg + 1) % a.segments.size();
                left = a.segments[seg].length;
              }
              if (a.segments[seg].w.size() != state_dim) {
                throw DimensionMismatch("segment disturbance has wrong size");
              }
              w.push_back(a.segments[seg].w);
              --left;
            }
          },
          [&](const SinusoidalDriftAdversary& a) {
            if (!(a.period > 0.0)) throw InvalidBounds("period must be positive");
            if (!(std::abs(a.amplitude) <= 1.0)) {
              throw InvalidBounds("amplitude must lie in [-1, 1]");
            }
            std::mt19937_64 rng(a.seed);
            std::vector<double> phase(static_cast<std::size_t>(state_dim));
            for (double& ph : phase) ph = 2.0 * std::numbers::pi * uniform01(rng);
            const double c = a.amplitude / std::sqrt(double(state_dim));
            for (long t = 1; t <= n; ++t) {
              VectorXd v(state_dim);
              for (int j = 0; j < state_dim; ++j) {
                v[j] = c * std::sin(2.0 * std::numbers::pi * double(t) / a.period +
                                    phase[std::size_t(j)]);
              }
              w.push_back(std::move(v));
            }
          },
          [&](const ReplayAdversary& a) {
            for (long t = 0; t < n; ++t) {
              if (t < long(a.record.size())) {
                if (a.record[std::size_t(t)].size() != state_dim) {
                  throw DimensionMismatch("replayed disturbance has wrong size");
                }
                w.push_back(a.record[std::size_t(t)]);
              } else {
                w.push_back(VectorXd::Zero(state_dim));
              }
            }
          }},
      adv);
  for (long t = 0; t < n; ++t) check_norm(w[std::size_t(t)], t + 1);
  return w;
}

Trajectory simulate(const SystemSpec& spec, const std::vector<VectorXd>& w,
                    Controller& controller, const SimulateOptions& opts) {
  spec.validate();
  const int dx = spec.state_dim();
  Trajectory tr;
  tr.w = w;
  VectorXd x = opts.x1 ? *opts.x1 : VectorXd::Zero(dx);
  if (x.size() != dx) throw DimensionMismatch("initial state has wrong size");
  const std::size_t n = w.size();
  tr.x.reserve(n + 1);
  tr.u.reserve(n);
  tr.loss.reserve(n);
  tr.x.push_back(x);
  for (std::size_t t = 0; t < n; ++t) {
    check_norm(w[t], long(t) + 1);
    const VectorXd u = controller.control(x);
    if (u.size() != spec.input_dim()) throw DimensionMismatch("control has wrong size");
    tr.u.push_back(u);
    tr.loss.push_back(spec.stage_cost(x, u));
    tr.barrier.push_back(controller.last_barrier());
    tr.entropy.push_back(controller.last_entropy());
    if (opts.record_policies) {
      if (auto M = controller.last_policy()) tr.policies.push_back(*M);
    }
    x = spec.A * x + spec.B * u + w[t];
    if (!x.allFinite() || x.norm() > opts.overflow_norm) {
      throw NumericalOverflow("state norm exceeded " + std::to_string(opts.overflow_norm) +
                              " at round " + std::to_string(t + 2));
    }
    tr.x.push_back(x);
  }
  return tr;
}

Trajectory simulate(const SystemSpec& spec, const DisturbanceAdversary& adv,
                    Controller& controller, long n, const SimulateOptions& opts) {
  return simulate(spec, generate_disturbances(adv, n, spec.state_dim()), controller,
                  opts);
}

std::vector<double> rollout_comparator(const SystemSpec& spec, const MatrixXd& K,
                                       const std::vector<VectorXd>& w,
                                       const DapSequence& comparator,
                                       const std::optional<VectorXd>& x1) {
  if (comparator.size() != w.size()) {
    throw DimensionMismatch("comparator length differs from the horizon");
  }
  const int dx = spec.state_dim();
  VectorXd x = x1 ? *x1 : VectorXd::Zero(dx);
  std::vector<VectorXd> history;  // history[0] = w_{t-1}
  std::vector<double> loss;
  loss.reserve(w.size());
  for (std::size_t t = 0; t < w.size(); ++t) {
    const VectorXd u = dap_control(comparator[t], K, x, history);
    loss.push_back(spec.stage_cost(x, u));
    x = spec.A * x + spec.B * u + w[t];
    if (!x.allFinite()) throw NumericalOverflow("comparator state diverged");
    history.insert(history.begin(), w[t]);
    if (history.size() > std::size_t(comparator[t].memory()) + 1) history.pop_back();
  }
  return loss;
}

DapSequence fixed_comparator(const DapParams& M, long n) {
  return DapSequence(std::size_t(std::max(n, 0L)), M);
}

DapSequence binned_comparator(const std::vector<VectorXd>& w, int W) {
  if (W < 1) throw InvalidBounds("bin width must be positive");
  const std::size_t n = w.size();
  DapSequence seq;
  seq.reserve(n);
  for (std::size_t s = 0; s < n; s += std::size_t(W)) {
    const std::size_t e = std::min(n, s + std::size_t(W));
    double sum = 0.0;
    for (std::size_t t = s; t < e; ++t) {
      if (w[t].size() != 2) throw DimensionMismatch("binned comparator needs d_x = 2");
      sum += std::numbers::sqrt2 * w[t][0];
    }
    const double a = sum / double(e - s);
    DapParams M = DapParams::zeros(1, 2, 2, 1.0, 1.0);
    M.blocks[0](0, 1) = -a;
    for (std::size_t t = s; t < e; ++t) seq.push_back(M);
  }
  return seq;
}

int lower_bound_bin_width(long n, double C_n) {
  if (!(C_n > 0.0)) throw InvalidBudget("C_n must be positive");
  if (n < 1) throw InvalidBounds("horizon must be positive");
  const double raw = std::pow(double(n), 2.0 / 3.0) *
                     std::cbrt(8.0 * std::log(double(n))) /
                     std::pow(C_n, 2.0 / 3.0);
  const double W = std::round(raw);
  return int(std::clamp(W, 1.0, double(n)));
}

LowerBoundSetup lower_bound_adversary(long n, double C_n, std::uint64_t seed) {
  LowerBoundSetup s;
  s.W = lower_bound_bin_width(n, C_n);
  s.adversary = LowerBoundAdversary{C_n, seed};
  return s;
}

SystemSpec lower_bound_system(long horizon) {
  SystemSpec s;
  s.A = MatrixXd::Zero(2, 2);
  s.B = -MatrixXd::Identity(2, 2);
  s.R_x = MatrixXd::Zero(2, 2);
  s.R_x(0, 0) = 1.0;
  s.R_u = MatrixXd::Zero(2, 2);
  s.horizon = horizon;
  return s;
}

std::vector<RegretWindow> dyadic_windows(long n) {
  std::vector<RegretWindow> out;
  for (long len = 1; len <= n; len *= 2) {
    for (long s = 1; s + len - 1 <= n; s += len) out.push_back({s, len, 0.0});
  }
  return out;
}

RegretTrace compute_regret(const std::vector<double>& learner,
                           const std::vector<double>& comparator) {
  if (learner.size() != comparator.size()) {
    throw DimensionMismatch("loss sequences differ in length");
  }
  RegretTrace tr;
  tr.learner = learner;
  tr.comparator = comparator;
  const std::size_t n = learner.size();
  tr.difference.resize(n);
  tr.cumulative.resize(n);
  double acc = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    tr.difference[t] = learner[t] - comparator[t];
    acc += tr.difference[t];
    tr.cumulative[t] = acc;
  }
  tr.total = acc;
  tr.windows = dyadic_windows(long(n));
  for (RegretWindow& win : tr.windows) {
    const std::size_t e = std::size_t(win.start + win.length - 1);
    const double before = win.start > 1 ? tr.cumulative[std::size_t(win.start) - 2] : 0.0;
    win.regret = tr.cumulative[e - 1] - before;
  }
  return tr;
}

LowerBoundResult run_lower_bound(long n, double C_n, std::uint64_t seed,
                                 ControllerKind kind, const ExperimentOptions& opts) {
  const SystemSpec spec = lower_bound_system(n);
  const LowerBoundSetup setup = lower_bound_adversary(n, C_n, seed);
  const std::vector<VectorXd> w = generate_disturbances(setup.adversary, n, 2);

  LowerBoundResult res;
  res.n = n;
  res.C_n = C_n;
  res.seed = seed;
  res.W = setup.W;

  Trajectory traj;
  MatrixXd K;
  if (kind == ControllerKind::Prodr) {
    LqrController ctrl(spec, opts.dap, n, opts.pipeline);
    K = ctrl.constants().K;
    res.h = ctrl.h();
    traj = simulate(spec, w, ctrl);
  } else {
    const LqrConstants consts = compute_constants(spec);
    K = consts.K;
    FixedDapController ctrl(spec, consts,
                            DapParams::zeros(opts.dap.m, 2, 2, opts.dap.R, opts.dap.gamma));
    traj = simulate(spec, w, ctrl);
  }
  const DapSequence comp = binned_comparator(w, setup.W);
  const std::vector<double> comp_loss = rollout_comparator(spec, K, w, comp);
  RegretTrace tr = compute_regret(traj.loss, comp_loss);
  tr.comparator_tv = tv_of_sequence(comp);
  res.regret = tr.total;
  for (double v : traj.loss) res.learner_loss += v;
  for (double v : comp_loss) res.comparator_loss += v;
  res.comparator_tv = tr.comparator_tv;
  if (opts.keep_trace) {
    res.trace = std::move(tr);
    res.trajectory = std::move(traj);
  }
  return res;
}

std::vector<CovariateBatch> synthetic_regression_stream(
    long n, const RegressionStreamOptions& o) {
  if (o.p < 1 || o.d < 1 || !(o.radius > 0.0) || !(o.noise >= 0.0) ||
      !(o.period > 0.0)) {
    throw InvalidBounds("invalid regression stream options");
  }
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<CovariateBatch> out;
  out.reserve(std::size_t(n));
  for (long t = 1; t <= n; ++t) {
    CovariateBatch cb;
    cb.A.resize(o.p, o.d);
    for (int i = 0; i < o.p; ++i) {
      for (int j = 0; j < o.d; ++j) cb.A(i, j) = normal(rng);
      const double l1 = cb.A.row(i).lpNorm<1>();
      if (l1 > 0.0) cb.A.row(i) /= l1;
    }
    VectorXd u(o.d);
    for (int j = 0; j < o.d; ++j) {
      u[j] = 0.8 * o.radius *
             std::cos(2.0 * std::numbers::pi * (double(t) / o.period + double(j) / o.d));
    }
    cb.b = cb.A * u;
    for (int i = 0; i < o.p; ++i) {
      cb.b[i] += o.noise * std::clamp(normal(rng), -4.0, 4.0);
    }
    cb.alpha_row = 1.0;
    cb.sigma_b = o.p * (o.radius + 4.0 * o.noise);
    out.push_back(std::move(cb));
  }
  return out;
}

RegressionTrace run_regression(const std::vector<CovariateBatch>& stream,
                               const ProdrConfig& cfg, const DecisionDomain& D,
                               const ProdrOptions& opts) {
  DelayedProdr learner(cfg, D, opts);
  RegressionTrace tr;
  const long tau = cfg.tau;
  for (std::size_t t = 0; t < stream.size(); ++t) {
    const CovariateBatch& cb = stream[t];
    std::optional<VectorXd> b;
    if (long(t) >= tau) b = stream[t - std::size_t(tau)].b;
    VectorXd w_hat = learner.step(cb.A, b);
    tr.loss.push_back((cb.A * w_hat - cb.b).squaredNorm());
    tr.barrier.push_back(learner.last().barrier);
    tr.entropy.push_back(learner.last().entropy);
    tr.played.push_back(std::move(w_hat));
  }
  return tr;
}

std::vector<RegretWindow> windowed_static_regret(
    const std::vector<CovariateBatch>& stream, const std::vector<VectorXd>& played,
    const DecisionDomain& D, const std::vector<RegretWindow>& windows) {
  if (stream.size() != played.size()) {
    throw DimensionMismatch("one played point per round required");
  }
  const int d = D.dim();
  const std::size_t n = stream.size();
  // Prefix sums of A^T A, A^T b, ||b||^2 and the learner's losses.
  std::vector<MatrixXd> H(n + 1, MatrixXd::Zero(d, d));
  std::vector<VectorXd> c(n + 1, VectorXd::Zero(d));
  std::vector<double> bb(n + 1, 0.0), ll(n + 1, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    const CovariateBatch& cb = stream[t];
    H[t + 1] = H[t] + cb.A.transpose() * cb.A;
    c[t + 1] = c[t] + cb.A.transpose() * cb.b;
    bb[t + 1] = bb[t] + cb.b.squaredNorm();
    ll[t + 1] = ll[t] + (cb.A * played[t] - cb.b).squaredNorm();
  }
  std::vector<RegretWindow> out = windows;
  for (RegretWindow& win : out) {
    if (win.start < 1 || win.length < 1 ||
        std::size_t(win.start + win.length - 1) > n) {
      throw InvalidBounds("window outside the stream");
    }
    const std::size_t s = std::size_t(win.start - 1), e = s + std::size_t(win.length);
    const MatrixXd Hw = H[e] - H[s];
    const VectorXd cw = c[e] - c[s];
    const VectorXd u = constrained_quadratic_min(2.0 * Hw, 2.0 * cw, D);
    const double best = u.dot(Hw * u) - 2.0 * cw.dot(u) + (bb[e] - bb[s]);
    win.regret = (ll[e] - ll[s]) - best;
  }
  return out;
}

}  // namespace nslqr
