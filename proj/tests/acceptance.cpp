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

// Acceptance checks: one PASS/FAIL line per criterion, INFO lines for
// supplementary measurements. Exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nslqr/barrier.hpp"
#include "nslqr/dap_policy.hpp"
#include "nslqr/flh.hpp"
#include "nslqr/harness.hpp"
#include "nslqr/io.hpp"
#include "nslqr/lqr_pipeline.hpp"
#include "nslqr/lqr_system.hpp"
#include "nslqr/prodr.hpp"
#include "test_util.hpp"

using namespace nslqr;
using nslqr::testing::gaussian;
using nslqr::testing::gaussian_vec;
using nslqr::testing::random_system;
using nslqr::testing::uniform;
using nslqr::testing::uniform_int;
using nslqr::testing::unit_ball_vec;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

void info(const std::string& s) { std::printf("INFO  %s\n", s.c_str()); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

VectorXd box_point(std::mt19937_64& rng, int d, double r) {
  VectorXd x(d);
  for (int i = 0; i < d; ++i) x[i] = uniform(rng, -r, r);
  return x;
}

/// Random feasible set of dimension at most 6.
DecisionDomain random_domain(std::mt19937_64& rng) {
  if (uniform_int(rng, 0, 1) == 0) {
    return DecisionDomain::box(uniform_int(rng, 1, 6), uniform(rng, 0.3, 1.5));
  }
  static const int shapes[][3] = {{1, 1, 2}, {1, 2, 2}, {1, 2, 3}, {1, 3, 2},
                                  {2, 1, 2}, {2, 1, 3}, {2, 3, 1}, {3, 1, 2}};
  const auto& s = shapes[uniform_int(rng, 0, 7)];
  return DecisionDomain::dap_spectral(s[0], s[1], s[2], uniform(rng, 0.3, 1.5),
                                      uniform(rng, 0.4, 1.0));
}

/// One regression round satisfying the bounds of derive_config: rows with
/// ||a_i||_1 R~ <= chi and ||b||_1 <= sigma.
struct Instance {
  DecisionDomain D;
  MatrixXd A;
  VectorXd b;
  ProdrConfig cfg;
};

Instance random_instance(std::mt19937_64& rng) {
  Instance in{random_domain(rng), {}, {}, {}};
  const int d = in.D.dim(), p = uniform_int(rng, 1, 4);
  const double chi = in.D.chi(), Rt = in.D.r_tilde(), sigma = 1.0;
  in.A = gaussian(rng, p, d);
  for (int i = 0; i < p; ++i) in.A.row(i) *= uniform(rng, 0.1, 1.0) * chi / Rt / in.A.row(i).lpNorm<1>();
  in.b = gaussian_vec(rng, p);
  in.b *= uniform(rng, 0.0, sigma) / in.b.lpNorm<1>();
  in.cfg = derive_config(p, d, chi, sigma, chi / Rt, Rt);
  return in;
}

// ------------------------------------------------------------------ 1

Outcome riccati() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  double worst = 0.0, worst_rho = 0.0;
  for (int k = 0; k < 50; ++k) {
    const SystemSpec s = random_system(rng, uniform_int(rng, 1, 4), uniform_int(rng, 1, 4));
    const LqrConstants c = compute_constants(s);
    worst = std::max(worst, dare_residual(s, c.P));
    worst_rho = std::max(worst_rho, spectral_radius(c.A_cl));
  }
  SystemSpec z;
  z.A = MatrixXd::Zero(3, 3);
  z.B = gaussian(rng, 3, 2);
  z.R_x = nslqr::testing::random_pd(rng, 3);
  z.R_u = nslqr::testing::random_pd(rng, 2);
  const double e_zero = (solve_dare(z) - z.R_x).cwiseAbs().maxCoeff();
  SystemSpec g;
  g.A = MatrixXd::Constant(1, 1, 0.5);
  g.B = MatrixXd::Zero(1, 1);
  g.R_x = g.R_u = MatrixXd::Identity(1, 1);
  const double e_geo = std::abs(solve_dare(g)(0, 0) - 4.0 / 3.0);
  const double secs = seconds_since(t0);
  const bool ok = worst <= 1e-9 && worst_rho < 1.0 && e_zero <= 1e-12 && e_geo <= 1e-12 && secs < 5.0;
  return {ok, fmt("max residual %.2e, max rho(A_cl) %.4f, |P-R_x| %.1e, |P-4/3| %.1e, %.2fs",
                  worst, worst_rho, e_zero, e_geo, secs)};
}

// ------------------------------------------------------------------ 2

Outcome domination() {
  std::mt19937_64 rng(202);
  double worst = -std::numeric_limits<double>::infinity();
  int inexact = 0;
  for (int k = 0; k < 1000; ++k) {
    const Instance in = random_instance(rng);
    const VectorXd w = box_point(rng, in.D.dim(), in.D.r_tilde());
    const SurrogateValue l = surrogate_loss(in.A, in.b, w, in.D, in.cfg.G);
    const VectorXd wh = minimax_project(in.A, w, in.D);
    worst = std::max(worst, (in.A * wh - in.b).squaredNorm() - l.value);
    const VectorXd u = in.D.project(gaussian_vec(rng, in.D.dim(), 2.0));
    const SurrogateValue lu = surrogate_loss(in.A, in.b, u, in.D, in.cfg.G);
    inexact += lu.value != (in.A * u - in.b).squaredNorm();
  }
  return {worst <= 1e-6 && inexact == 0,
          fmt("max f(w_hat) - l(w) = %.2e over 1000 instances; l(u) != f(u) on %d", worst, inexact)};
}

// ------------------------------------------------------------------ 3

Outcome exp_concavity() {
  std::mt19937_64 rng(303);
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 1000; ++k) {
    const Instance in = random_instance(rng);
    const int d = in.D.dim();
    const VectorXd w1 = box_point(rng, d, in.D.r_tilde()), w2 = box_point(rng, d, in.D.r_tilde());
    const SurrogateValue s1 = surrogate_loss(in.A, in.b, w1, in.D, in.cfg.G);
    const SurrogateValue s2 = surrogate_loss(in.A, in.b, w2, in.D, in.cfg.G);
    const double lin = s1.gradient.dot(w2 - w1);
    worst = std::min(worst, s2.value - s1.value - lin - in.cfg.alpha_exp() * lin * lin);
  }
  return {worst >= -1e-8, fmt("min slack %.3e over 1000 pairs", worst)};
}

// ------------------------------------------------------------------ 4

Outcome subgradient() {
  std::mt19937_64 rng(404);
  int instances = 0, not_row = 0, single = 0, single_not_row = 0;
  int fd_points = 0, fd_bad = 0;
  double fd_worst = 0.0;
  while (fd_points < 500) {
    const DecisionDomain D = random_domain(rng);
    const int d = D.dim(), p = uniform_int(rng, 1, 4);
    const MatrixXd A = gaussian(rng, p, d);
    const VectorXd w = gaussian_vec(rng, d, 2.0);
    const MinimaxSolution sol = solve_minimax(A, w, D);
    if (sol.value == 0.0) continue;
    ++instances;
    const VectorXd g = subgradient_from_solution(A, w, D, sol);
    bool member = false;
    for (int i = 0; i < p && !member; ++i) {
      const VectorXd a = A.row(i).transpose();
      member = g == a || g == VectorXd(-a);
    }
    member = member || g.isZero(0.0);
    const bool row_binding = rowwise_barrier(A, w, D) >= sol.value - 1e-9;
    if (!member) ++not_row;
    if (row_binding) {
      ++single;
      if (!member) ++single_not_row;
    }
    // Central differences where both one-sided slopes agree.
    const double eps = 1e-6;
    VectorXd fd(d);
    bool smooth = true;
    for (int i = 0; i < d && smooth; ++i) {
      VectorXd e = VectorXd::Zero(d);
      e[i] = eps;
      const double f = (eval_barrier(A, w + e, D) - sol.value) / eps;
      const double b = (sol.value - eval_barrier(A, w - e, D)) / eps;
      smooth = std::abs(f - b) <= 1e-5;
      fd[i] = 0.5 * (f + b);
    }
    if (!smooth) continue;
    ++fd_points;
    const double err = (fd - g).lpNorm<Eigen::Infinity>();
    fd_worst = std::max(fd_worst, err);
    fd_bad += err > 1e-4;
  }
  info(fmt("#4 single binding row: %d of %d instances, subgradient outside {+-a_i, 0} on %d of them",
           single, instances, single_not_row));
  return {not_row == 0 && fd_bad == 0,
          fmt("subgradient outside {+-a_i, 0} on %d of %d instances; finite differences: "
              "max err %.2e, %d of %d points above 1e-4",
              not_row, instances, fd_worst, fd_bad, fd_points)};
}

// ------------------------------------------------------------------ 5

double grid_min(const MatrixXd& A, const VectorXd& w, double r) {
  const int d = int(A.cols());
  auto obj = [&](const VectorXd& x) { return (A * (x - w)).cwiseAbs().maxCoeff(); };
  // Dense grid over the box, then repeated zooms around the incumbent.
  const int n0 = d == 1 ? 100001 : 1001;
  VectorXd best = VectorXd::Zero(d), x(d);
  double fbest = std::numeric_limits<double>::infinity();
  double lo0 = -r, step = 2.0 * r / (n0 - 1);
  auto scan = [&](const VectorXd& centre, double half, int n, bool whole) {
    const VectorXd c = centre;
    const double h = whole ? step : 2.0 * half / (n - 1);
    for (int i = 0; i < n; ++i) {
      x[0] = whole ? lo0 + i * h : c[0] - half + i * h;
      if (d == 1) {
        if (std::abs(x[0]) > r) continue;
        const double f = obj(x);
        if (f < fbest) { fbest = f; best = x; }
        continue;
      }
      for (int j = 0; j < n; ++j) {
        x[1] = whole ? lo0 + j * h : c[1] - half + j * h;
        if (x.cwiseAbs().maxCoeff() > r) continue;
        const double f = obj(x);
        if (f < fbest) { fbest = f; best = x; }
      }
    }
    return h;
  };
  double h = scan(best, r, n0, true);
  for (int level = 0; level < 8; ++level) h = scan(VectorXd(best), 4.0 * h, 81, false);
  return fbest;
}

Outcome projection_grid() {
  std::mt19937_64 rng(505);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int d = uniform_int(rng, 1, 2), p = uniform_int(rng, 1, 3);
    const double r = uniform(rng, 0.3, 1.5);
    const DecisionDomain D = DecisionDomain::box(d, r);
    const MatrixXd A = gaussian(rng, p, d);
    const VectorXd w = gaussian_vec(rng, d, 2.0);
    const VectorXd x = minimax_project(A, w, D);
    const double fx = (A * (x - w)).cwiseAbs().maxCoeff();
    worst = std::max(worst, std::abs(fx - grid_min(A, w, r)));
  }
  return {worst <= 1e-4, fmt("max |objective - grid minimum| = %.2e over 100 instances", worst)};
}

// ------------------------------------------------------------------ 6

Outcome flh_invariants() {
  std::mt19937_64 rng(606);
  FlhWeights a(0.01), b(0.01);
  double drift = 0.0;
  int newborn_bad = 0, shift_bad = 0;
  const int rounds = 10000;
  for (int t = 1; t < rounds; ++t) {
    std::vector<double> la(a.size()), lb(a.size());
    const double shift = double(uniform_int(rng, -100, 100));
    for (std::size_t j = 0; j < la.size(); ++j) {
      la[j] = double(uniform_int(rng, 0, 4096)) / 64.0;
      lb[j] = la[j] + shift;
    }
    a.multiplicative_step(la);
    b.multiplicative_step(lb);
    shift_bad += a.weights() != b.weights();
    a.addition_step();
    b.addition_step();
    newborn_bad += a.weights().back() != 1.0 / double(t + 1);
    double s = 0.0;
    for (double v : a.weights()) s += v;
    drift = std::max(drift, std::abs(s - 1.0));
  }
  return {drift <= 1e-12 && newborn_bad == 0 && shift_bad == 0,
          fmt("%d rounds: max |sum v - 1| = %.2e, newborn mismatches %d, shift mismatches %d",
              rounds, drift, newborn_bad, shift_bad)};
}

// ------------------------------------------------------------------ 7

Outcome delayed() {
  std::mt19937_64 rng(707);
  const DecisionDomain D = DecisionDomain::box(3, 1.0);
  const ProdrConfig base = derive_config(2, 3, D.chi(), 1.0, 1.0, 1.0);
  // Unit delay against the plain learner.
  ProdrLearner plain(base, D);
  DelayedProdr unit(base, D);
  std::optional<VectorXd> prev;
  int mismatches = 0;
  for (int t = 1; t <= 300; ++t) {
    MatrixXd A = gaussian(rng, 2, 3);
    for (int i = 0; i < 2; ++i) A.row(i) /= A.row(i).lpNorm<1>();
    const VectorXd b = gaussian_vec(rng, 2, 0.4);
    const VectorXd w1 = plain.predict(A);
    const VectorXd w2 = unit.step(A, prev);
    mismatches += !(w1 == w2) || !(plain.last().w == unit.last().w) ||
                  plain.last().barrier != unit.last().barrier;
    const RoundDiagnostics r = plain.update(b);
    (void)r;
    prev = b;
  }
  // Tagged targets for longer delays.
  int audit_bad = 0, audited = 0;
  for (int tau : {2, 5}) {
    ProdrConfig cfg = base;
    cfg.tau = tau;
    DelayedProdr dp(cfg, D);
    std::vector<MatrixXd> As;
    std::vector<VectorXd> ws;
    std::vector<int> played_by;
    for (int t = 1; t <= 200; ++t) {
      MatrixXd A = gaussian(rng, 2, 3);
      for (int i = 0; i < 2; ++i) A.row(i) /= A.row(i).lpNorm<1>();
      As.push_back(A);
      std::optional<VectorXd> fb;
      // Tag: the target of round s alternates sign with s and carries its index.
      if (t > tau) {
        const int s = t - tau;
        fb = VectorXd::Constant(2, (s % 2 ? 1.0 : -1.0) * s);
      }
      dp.step(A, fb);
      played_by.push_back(dp.last().instance);
      ws.push_back(dp.last().w);
      if (t > tau) {
        ++audited;
        const int s = t - tau;
        const auto& f = dp.last_feedback();
        const VectorXd tag = VectorXd::Constant(2, (s % 2 ? 1.0 : -1.0) * s);
        const bool ok = f && f->round == s && f->instance == played_by[s - 1] &&
                        f->fit == (As[s - 1] * ws[s - 1] - tag).squaredNorm() &&
                        dp.last().instance == (t - 1) % tau;
        audit_bad += !ok;
      }
    }
  }
  return {mismatches == 0 && audit_bad == 0,
          fmt("tau=1: %d of 300 rounds differ from the undelayed learner; tau in {2,5}: "
              "%d of %d consumed losses misrouted",
              mismatches, audit_bad, audited)};
}

// ------------------------------------------------------------------ 8

Outcome covariate_faithfulness() {
  std::mt19937_64 rng(808);
  double worst_cov = 0.0, worst_loss = 0.0;
  for (int k = 0; k < 200; ++k) {
    const int dx = uniform_int(rng, 1, 4), du = uniform_int(rng, 1, 4), m = uniform_int(rng, 1, 3);
    const int h = uniform_int(rng, 1, 6);
    const SystemSpec s = random_system(rng, dx, du);
    const LqrConstants c = compute_constants(s);
    std::vector<VectorXd> past, future;
    for (int i = 0; i < m; ++i) past.push_back(unit_ball_vec(rng, dx));
    for (int i = 0; i < h; ++i) future.push_back(unit_ball_vec(rng, dx));
    DapParams M = DapParams::zeros(m, du, dx, 1.0, 1.0);
    for (auto& blk : M.blocks) blk = gaussian(rng, du, dx);
    const MatrixXd A = build_covariate(past, m, c.sigma_factors);
    const VectorXd qM = dap_feedforward(M, past);
    worst_cov = std::max(worst_cov, (A * flatten(M) - c.sigma_factors.sqrt_lambda_u() * qM).norm());
    const VectorXd gap = qM - compute_q_inf(c, future);
    const double lhs = (A * flatten(M) - build_bias(future, c)).squaredNorm();
    const double rhs = gap.dot(c.Sigma * gap);
    worst_loss = std::max(worst_loss, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  return {worst_cov <= 1e-10 && worst_loss <= 1e-8,
          fmt("max covariate error %.2e, max loss identity error %.2e", worst_cov, worst_loss)};
}

// ------------------------------------------------------------------ 9

std::vector<double> windowed_ratio(OnsInit init) {
  std::vector<double> out;
  for (long n : {256L, 512L, 1024L, 2048L}) {
    RegressionStreamOptions so;
    so.seed = 9;
    const auto stream = synthetic_regression_stream(n, so);
    const DecisionDomain D = DecisionDomain::box(so.d, so.radius);
    const ProdrConfig cfg = derive_config(so.p, so.d, D.chi(), stream[0].sigma_b, 1.0, D.r_tilde());
    ProdrOptions po;
    po.ons_init = init;
    const RegressionTrace tr = run_regression(stream, cfg, D, po);
    const auto win = windowed_static_regret(stream, tr.played, D, dyadic_windows(n));
    double worst = 0.0;
    for (const RegretWindow& w : win) worst = std::max(worst, w.regret);
    out.push_back(worst / std::log(double(n)));
  }
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ", ") + fmt("%.3g", x);
  return s;
}

Outcome adaptive_regret() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> r = windowed_ratio(OnsInit::Zeta);
  const double secs = seconds_since(t0);
  const double spread = *std::max_element(r.begin(), r.end()) / *std::min_element(r.begin(), r.end());
  const std::vector<double> tb = windowed_ratio(OnsInit::Textbook);
  info(fmt("#9 textbook ONS start: max windowed regret / log n = [%s], spread %.2fx", join(tb).c_str(),
           *std::max_element(tb.begin(), tb.end()) / *std::min_element(tb.begin(), tb.end())));
  return {spread < 2.0 && secs < 120.0,
          fmt("max windowed regret / log n over n=256..2048: [%s], spread %.2fx, %.1fs",
              join(r).c_str(), spread, secs)};
}

// ------------------------------------------------------------------ 10, 11

struct ScalingRun {
  SweepResult learner, zero;
  double seconds = 0.0;
};

SweepGrid scaling_grid(ControllerKind kind, OnsInit init) {
  SweepGrid g;
  g.n = {512, 1024, 2048, 4096};
  g.C_n = {4.0};
  for (std::uint64_t s = 1; s <= 10; ++s) g.seeds.push_back(s);
  g.controller = kind;
  g.experiment.pipeline.prodr.ons_init = init;
  return g;
}

double slope_vs_n(const SweepResult& r) {
  for (const SlopeFit& f : r.slopes)
    if (f.against == "n") return f.slope;
  return std::nan("");
}

std::vector<double> medians(const SweepResult& r) {
  std::vector<double> out;
  for (long n : {512L, 1024L, 2048L, 4096L}) {
    std::vector<double> v;
    for (const SweepRow& row : r.rows)
      if (row.n == n && row.error.empty()) v.push_back(row.regret);
    out.push_back(v.empty() ? std::nan("") : median(v));
  }
  return out;
}

Outcome scaling(ScalingRun& run) {
  const auto t0 = std::chrono::steady_clock::now();
  run.learner = sweep(scaling_grid(ControllerKind::Prodr, OnsInit::Zeta));
  run.zero = sweep(scaling_grid(ControllerKind::Zero, OnsInit::Zeta));
  run.seconds = seconds_since(t0);
  const double sl = slope_vs_n(run.learner), sz = slope_vs_n(run.zero);
  const SweepResult tb = sweep(scaling_grid(ControllerKind::Prodr, OnsInit::Textbook));
  info(fmt("#10 textbook ONS start: median regret [%s], slope %.3f", join(medians(tb)).c_str(),
           slope_vs_n(tb)));
  const bool ok = sl >= 0.20 && sl <= 0.50 && sz >= 0.90 && sz <= 1.10 && run.seconds < 900.0;
  return {ok, fmt("learner median regret [%s] slope %.3f (want [0.20, 0.50]); zero baseline [%s] "
                  "slope %.3f (want [0.90, 1.10]); %.1fs",
                  join(medians(run.learner)).c_str(), sl, join(medians(run.zero)).c_str(), sz,
                  run.seconds)};
}

Outcome lower_bound(const ScalingRun& run) {
  const double n = 4096.0, C = 4.0;
  const double floor = 0.05 * std::cbrt(n) * std::pow(C, 2.0 / 3.0);
  double lowest = std::numeric_limits<double>::infinity();
  int runs = 0, errors = 0;
  for (const SweepRow& r : run.learner.rows) {
    if (r.n != 4096) continue;
    if (!r.error.empty()) {
      ++errors;
      continue;
    }
    ++runs;
    lowest = std::min(lowest, r.regret);
  }
  return {runs > 0 && errors == 0 && lowest >= floor,
          fmt("lowest regret at n=4096 over %d seeds %.3f, floor 0.05 n^(1/3) C^(2/3) = %.3f",
              runs, lowest, floor)};
}

// ------------------------------------------------------------------ 12

Outcome determinism() {
  SweepGrid g;
  g.n = {256, 512};
  g.C_n = {2.0, 8.0};
  g.seeds = {3, 4, 5};
  auto csv = [&](int threads) {
    const SweepResult r = sweep(g, threads);
    std::ostringstream a, b;
    io::write_sweep_csv(a, r);
    io::write_slopes_csv(b, r);
    return a.str() + "\n--\n" + b.str();
  };
  const std::string first = csv(1), second = csv(1), third = csv(4);
  return {first == second && first == third,
          fmt("sweep CSVs (%zu bytes) identical across repeats and thread counts: %s",
              first.size(), first == second && first == third ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  ScalingRun scaling_run;
  const std::vector<Criterion> criteria{
      {1, "Riccati correctness", riccati},
      {2, "surrogate domination", domination},
      {3, "exp-concavity of the surrogate", exp_concavity},
      {4, "barrier subgradient", subgradient},
      {5, "min-max projection vs grid search", projection_grid},
      {6, "FLH invariants", flh_invariants},
      {7, "delayed reduction", delayed},
      {8, "covariate faithfulness", covariate_faithfulness},
      {9, "adaptive regret", adaptive_regret},
      {10, "dynamic-regret scaling", [&] { return scaling(scaling_run); }},
      {11, "lower-bound sanity", [&] { return lower_bound(scaling_run); }},
      {12, "sweep determinism", determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s  #%d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
