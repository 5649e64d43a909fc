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

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "nslqr/barrier.hpp"
#include "nslqr/dap_policy.hpp"
#include "nslqr/lqr_pipeline.hpp"
#include "nslqr/lqr_system.hpp"
#include "nslqr/prodr.hpp"

namespace nslqr {

// ---------------------------------------------------------------- adversaries

/// w_t = [y_t, 1]^T / sqrt(2) with y_t = +-1 equiprobable.
struct LowerBoundAdversary {
  double C_n = 1.0;
  std::uint64_t seed = 0;
};

/// Constant disturbance per segment; the segment list repeats.
struct PiecewiseConstantAdversary {
  struct Segment {
    int length = 1;
    VectorXd w;
  };
  std::vector<Segment> segments;
};

/// w_t[j] = amplitude / sqrt(d_x) * sin(2 pi t / period + phase_j), random
/// phases drawn from the seed.
struct SinusoidalDriftAdversary {
  double amplitude = 1.0;
  double period = 100.0;
  std::uint64_t seed = 0;
};

/// Disturbances read back from a record; rounds past its end are zero.
struct ReplayAdversary {
  std::vector<VectorXd> record;
};

using DisturbanceAdversary =
    std::variant<LowerBoundAdversary, PiecewiseConstantAdversary,
                 SinusoidalDriftAdversary, ReplayAdversary>;

/// Oblivious disturbance sequence w_1..w_n; every vector has norm at most 1
/// (DisturbanceBoundViolated otherwise).
std::vector<VectorXd> generate_disturbances(const DisturbanceAdversary& adv,
                                            long n, int state_dim);

// ---------------------------------------------------------------- simulation

struct Trajectory {
  std::vector<VectorXd> x;  // x_1 .. x_{n+1}
  std::vector<VectorXd> u;  // u_1 .. u_n
  std::vector<VectorXd> w;  // w_1 .. w_n
  std::vector<double> loss;     // stage cost of (x_t, u_t)
  std::vector<double> barrier;  // learner barrier S_t(w_t) at round t
  std::vector<double> entropy;  // learner FLH weight entropy at round t
  std::vector<DapParams> policies;  // played DAP parameters, when available
};

struct SimulateOptions {
  std::optional<VectorXd> x1;   // default 0
  bool record_policies = false;
  double overflow_norm = 1e12;
};

/// x_{t+1} = A x_t + B u_t + w_t with u_t = controller.control(x_t).
Trajectory simulate(const SystemSpec& spec, const std::vector<VectorXd>& w,
                    Controller& controller, const SimulateOptions& opts = {});
Trajectory simulate(const SystemSpec& spec, const DisturbanceAdversary& adv,
                    Controller& controller, long n,
                    const SimulateOptions& opts = {});

/// Counterfactual stage costs of the comparator DAP sequence under the same
/// disturbances: u_t = -K x_t - q^{M_t}(w_{t-1}, ..., w_{t-m}).
std::vector<double> rollout_comparator(const SystemSpec& spec,
                                       const MatrixXd& K,
                                       const std::vector<VectorXd>& w,
                                       const DapSequence& comparator,
                                       const std::optional<VectorXd>& x1 = {});

// ---------------------------------------------------------------- comparators

/// The fixed policy repeated n times.
DapSequence fixed_comparator(const DapParams& M, long n);

/// Bins of width W; in bin i the policy [[0, -a_i], [0, 0]] with a_i the bin
/// mean of y_t = sqrt(2) w_t[0]. The last bin may be shorter.
DapSequence binned_comparator(const std::vector<VectorXd>& w, int W);

struct LowerBoundSetup {
  LowerBoundAdversary adversary;
  int W = 1;
};

/// Bin width round(n^{2/3} (8 ln n)^{1/3} / C_n^{2/3}) clamped to [1, n].
int lower_bound_bin_width(long n, double C_n);
LowerBoundSetup lower_bound_adversary(long n, double C_n, std::uint64_t seed);

/// A = 0, B = -I, R_x = diag(1, 0), R_u = 0 in two dimensions.
SystemSpec lower_bound_system(long horizon);

// ---------------------------------------------------------------- regret

struct RegretWindow {
  long start = 1;   // first round (1-based)
  long length = 1;
  double regret = 0.0;
};

struct RegretTrace {
  std::vector<double> learner;
  std::vector<double> comparator;
  std::vector<double> difference;
  std::vector<double> cumulative;
  std::vector<RegretWindow> windows;  // aligned dyadic windows
  double total = 0.0;
  double comparator_tv = 0.0;
};

RegretTrace compute_regret(const std::vector<double>& learner,
                           const std::vector<double>& comparator);

/// Aligned dyadic windows [j 2^k + 1, (j + 1) 2^k] inside 1..n, all k.
std::vector<RegretWindow> dyadic_windows(long n);

// ---------------------------------------------------------------- experiments

enum class ControllerKind { Prodr, Zero };

struct ExperimentOptions {
  DapConfig dap;                  // m = 1, R = 1, gamma = 1 by default
  PipelineOptions pipeline;
  bool keep_trace = false;
};

struct LowerBoundResult {
  long n = 0;
  double C_n = 0.0;
  std::uint64_t seed = 0;
  int W = 1;
  int h = 1;
  double regret = 0.0;
  double learner_loss = 0.0;
  double comparator_loss = 0.0;
  double comparator_tv = 0.0;
  std::optional<RegretTrace> trace;
  std::optional<Trajectory> trajectory;
};

/// One run on the lower-bound environment against its binned comparator.
LowerBoundResult run_lower_bound(long n, double C_n, std::uint64_t seed,
                                 ControllerKind kind,
                                 const ExperimentOptions& opts = {});

// ---------------------------------------------------------------- regression

struct RegressionStreamOptions {
  int p = 2;
  int d = 3;
  double radius = 1.0;       // box radius of the feasible set
  double noise = 0.1;        // std of additive target noise
  double period = 200.0;     // rounds per revolution of the drifting optimum
  std::uint64_t seed = 0;
};

/// Covariates with i.i.d. Gaussian rows scaled to unit l1 norm; targets
/// b_t = A_t u_t + noise with u_t drifting inside 0.8 of the box.
std::vector<CovariateBatch> synthetic_regression_stream(
    long n, const RegressionStreamOptions& opts);

struct RegressionTrace {
  std::vector<VectorXd> played;
  std::vector<double> loss;     // ||A_t w_hat_t - b_t||^2
  std::vector<double> barrier;  // S_t(w_t)
  std::vector<double> entropy;
};

/// Runs the proper learner on the stream (delayed by cfg.tau rounds).
RegressionTrace run_regression(const std::vector<CovariateBatch>& stream,
                               const ProdrConfig& cfg, const DecisionDomain& D,
                               const ProdrOptions& opts = {});

/// For each window, sum of losses of the played points minus the loss of the
/// best fixed point of D over the window.
std::vector<RegretWindow> windowed_static_regret(
    const std::vector<CovariateBatch>& stream,
    const std::vector<VectorXd>& played, const DecisionDomain& D,
    const std::vector<RegretWindow>& windows);

// ---------------------------------------------------------------- sweeps

struct SweepGrid {
  std::vector<long> n;
  std::vector<double> C_n;
  std::vector<std::uint64_t> seeds;
  ControllerKind controller = ControllerKind::Prodr;
  ExperimentOptions experiment;
};

struct SweepRow {
  long n = 0;
  double C_n = 0.0;
  std::uint64_t seed = 0;
  double regret = 0.0;
  std::string error;  // non-empty when the cell failed
};

struct SlopeFit {
  std::string against;  // "n" or "C_n"
  double fixed = 0.0;   // value of the other coordinate
  double slope = 0.0;
  double intercept = 0.0;
  int points = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ordered by (n, C_n, seed)
  std::vector<SlopeFit> slopes;
};

/// Number of worker threads: NONSTAT_LQR_THREADS if set, else the hardware
/// concurrency.
int sweep_threads();

/// Runs every (n, C_n, seed) cell of the lower-bound environment in parallel;
/// results do not depend on the thread count.
SweepResult sweep(const SweepGrid& grid, int threads = 0);

/// Least-squares slope of log y against log x.
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

double median(std::vector<double> v);

}  // namespace nslqr
