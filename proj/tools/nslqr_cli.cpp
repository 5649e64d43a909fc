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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nslqr/domain.hpp"
#include "nslqr/errors.hpp"
#include "nslqr/harness.hpp"
#include "nslqr/io.hpp"
#include "nslqr/lqr_pipeline.hpp"
#include "nslqr/prodr.hpp"

namespace {

using namespace nslqr;

struct LearnerFlags {
  std::string prune = "none";
  int h_cap = 0;
  std::string ons_init = "zeta";
};

void add_learner_flags(CLI::App* app, LearnerFlags& f) {
  app->add_option("--prune", f.prune, "FLH learner retention: none or geometric")
      ->check(CLI::IsMember({"none", "geometric"}));
  app->add_option("--h-cap", f.h_cap, "Cap on the feedback delay h (default 10 d_x + 50)")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--ons-init", f.ons_init,
                  "Initial ONS metric: zeta (zeta I) or textbook (I / (zeta D)^2)")
      ->check(CLI::IsMember({"zeta", "textbook"}));
}

void apply_learner_flags(const LearnerFlags& f, PipelineOptions& p) {
  p.h_cap = f.h_cap;
  p.prodr.flh.prune_geometric = f.prune == "geometric";
  p.prodr.ons_init = f.ons_init == "textbook" ? OnsInit::Textbook : OnsInit::Zeta;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  return out;
}

// ------------------------------------------------------------------ simulate

struct SimulateArgs {
  std::string system = "lower_bound";
  std::string adversary = "lower_bound";
  std::string controller = "prodr";
  std::string comparator = "auto";
  long n = 1024;
  std::uint64_t seed = 1;
  double C_n = 4.0;
  double amplitude = 0.9;
  double period = 100.0;
  int segment = 64;
  std::string replay;
  std::string out;
  std::string save_disturbances;
  LearnerFlags learner;
};

int run_simulate(const SimulateArgs& a) {
  SystemSpec spec;
  DapConfig dap;
  if (a.system == "lower_bound") {
    spec = lower_bound_system(a.n);
  } else {
    const io::SystemFile f = io::load_system_file(a.system);
    spec = f.spec;
    dap = f.dap;
    spec.horizon = a.n;
  }
  const int dx = spec.state_dim();

  DisturbanceAdversary adv;
  if (a.adversary == "lower_bound") {
    adv = LowerBoundAdversary{a.C_n, a.seed};
  } else if (a.adversary == "sinusoidal") {
    adv = SinusoidalDriftAdversary{a.amplitude, a.period, a.seed};
  } else if (a.adversary == "piecewise") {
    // Alternating +-amplitude along a seed-dependent coordinate pattern.
    PiecewiseConstantAdversary p;
    for (int k = 0; k < 2; ++k) {
      VectorXd w = VectorXd::Zero(dx);
      w[int((a.seed + std::uint64_t(k)) % std::uint64_t(dx))] = k ? -a.amplitude : a.amplitude;
      p.segments.push_back({a.segment, w});
    }
    adv = p;
  } else if (a.adversary == "replay") {
    if (a.replay.empty()) throw Error("--replay <csv> is required for the replay adversary");
    adv = ReplayAdversary{io::read_vectors_csv(a.replay)};
  } else {
    adv = ReplayAdversary{};
  }
  const std::vector<VectorXd> w = generate_disturbances(adv, a.n, dx);

  const LqrConstants consts = compute_constants(spec);
  std::unique_ptr<Controller> ctrl;
  if (a.controller == "prodr") {
    PipelineOptions p;
    apply_learner_flags(a.learner, p);
    auto lqr = std::make_unique<LqrController>(spec, dap, a.n, p);
    if (lqr->h_capped()) {
      std::fprintf(stderr, "warning: delay h = %d from the stability constants capped to %d\n",
                   lqr->h_formula(), lqr->h());
    }
    ctrl = std::move(lqr);
  } else {
    ctrl = std::make_unique<FixedDapController>(
        spec, consts,
        DapParams::zeros(dap.m, spec.input_dim(), dx, dap.R, dap.gamma));
  }
  const Trajectory traj = simulate(spec, w, *ctrl);

  std::string comp = a.comparator;
  if (comp == "auto") comp = a.adversary == "lower_bound" ? "binned" : "zero";
  DapSequence seq;
  if (comp == "binned") {
    seq = binned_comparator(w, lower_bound_bin_width(a.n, a.C_n));
  } else {
    seq = fixed_comparator(DapParams::zeros(dap.m, spec.input_dim(), dx, dap.R, dap.gamma),
                           a.n);
  }
  RegretTrace tr = compute_regret(traj.loss, rollout_comparator(spec, consts.K, w, seq));
  tr.comparator_tv = tv_of_sequence(seq);

  if (!a.out.empty()) {
    std::ofstream out = open_out(a.out);
    io::write_trace_csv(out, tr, traj.barrier, traj.entropy);
  } else {
    io::write_trace_csv(std::cout, tr, traj.barrier, traj.entropy);
  }
  if (!a.save_disturbances.empty()) {
    std::ofstream out = open_out(a.save_disturbances);
    io::write_vectors_csv(out, w);
  }
  std::fprintf(stderr, "regret %s  comparator TV %s\n", io::format_double(tr.total).c_str(),
               io::format_double(tr.comparator_tv).c_str());
  return 0;
}

// ------------------------------------------------------------------ regress

struct RegressArgs {
  std::string stream = "synthetic";
  long n = 1024;
  int p = 2;
  int d = 3;
  double radius = 1.0;
  double noise = 0.1;
  double period = 200.0;
  int tau = 1;
  std::uint64_t seed = 1;
  std::string out;
  LearnerFlags learner;
};

std::vector<CovariateBatch> load_stream(const std::string& path, double& radius) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  const nlohmann::json j = nlohmann::json::parse(in);
  radius = j.value("radius", radius);
  std::vector<CovariateBatch> s;
  for (const auto& r : j.at("rounds")) {
    CovariateBatch cb;
    cb.A = io::matrix_from_json(r.at("A"));
    cb.b = io::vector_from_json(r.at("b"));
    s.push_back(std::move(cb));
  }
  if (s.empty()) throw Error("stream has no rounds");
  double alpha = 0.0, sigma = 0.0;
  for (const auto& cb : s) {
    for (Eigen::Index i = 0; i < cb.A.rows(); ++i) alpha = std::max(alpha, cb.A.row(i).lpNorm<1>());
    sigma = std::max(sigma, cb.b.lpNorm<1>());
  }
  for (auto& cb : s) {
    cb.alpha_row = alpha;
    cb.sigma_b = sigma;
    cb.validate();
  }
  return s;
}

int run_regress(const RegressArgs& a) {
  double radius = a.radius;
  std::vector<CovariateBatch> stream;
  if (a.stream == "synthetic") {
    RegressionStreamOptions o;
    o.p = a.p;
    o.d = a.d;
    o.radius = a.radius;
    o.noise = a.noise;
    o.period = a.period;
    o.seed = a.seed;
    stream = synthetic_regression_stream(a.n, o);
  } else {
    stream = load_stream(a.stream, radius);
  }
  const int p = int(stream.front().A.rows()), d = int(stream.front().A.cols());
  const DecisionDomain D = DecisionDomain::box(d, radius);
  const ProdrConfig cfg = derive_config(p, d, D.chi(), std::max(stream.front().sigma_b, 1e-12),
                                        std::max(stream.front().alpha_row, 1e-12),
                                        D.r_tilde(), a.tau);
  PipelineOptions popt;
  apply_learner_flags(a.learner, popt);
  const RegressionTrace tr = run_regression(stream, cfg, D, popt.prodr);
  const auto windows = windowed_static_regret(stream, tr.played, D,
                                              dyadic_windows(long(stream.size())));
  double worst = 0.0;
  for (const auto& w : windows) worst = std::max(worst, w.regret);

  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!a.out.empty()) {
    file = open_out(a.out);
    os = &file;
  }
  *os << "round,loss,barrier,weight_entropy\n";
  for (std::size_t t = 0; t < tr.loss.size(); ++t) {
    *os << (t + 1) << ',' << io::format_double(tr.loss[t]) << ','
        << io::format_double(tr.barrier[t]) << ',' << io::format_double(tr.entropy[t]) << '\n';
  }
  std::fprintf(stderr, "max windowed static regret %s over %zu windows\n",
               io::format_double(worst).c_str(), windows.size());
  return 0;
}

// ------------------------------------------------------------------ sweep

struct SweepArgs {
  std::string grid;
  std::string out = "sweep_out";
  int threads = 0;
  LearnerFlags learner;
};

int run_sweep(const SweepArgs& a, const CLI::App* cmd) {
  SweepGrid g = io::load_grid_file(a.grid);
  if (cmd->count("--prune")) g.experiment.pipeline.prodr.flh.prune_geometric = a.learner.prune == "geometric";
  if (cmd->count("--h-cap")) g.experiment.pipeline.h_cap = a.learner.h_cap;
  if (cmd->count("--ons-init")) {
    g.experiment.pipeline.prodr.ons_init =
        a.learner.ons_init == "textbook" ? OnsInit::Textbook : OnsInit::Zeta;
  }
  const SweepResult res = sweep(g, a.threads);
  std::filesystem::create_directories(a.out);
  {
    std::ofstream out = open_out((std::filesystem::path(a.out) / "sweep.csv").string());
    io::write_sweep_csv(out, res);
  }
  {
    std::ofstream out = open_out((std::filesystem::path(a.out) / "slopes.csv").string());
    io::write_slopes_csv(out, res);
  }
  int failed = 0;
  for (const SweepRow& r : res.rows) {
    if (!r.error.empty()) {
      ++failed;
      std::fprintf(stderr, "cell n=%ld C_n=%g seed=%llu failed: %s\n", r.n, r.C_n,
                   static_cast<unsigned long long>(r.seed), r.error.c_str());
    }
  }
  return failed ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonstochastic LQR with proper dynamic-regret learning"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Run one controlled trajectory and report regret");
  s->add_option("--system", sim.system, "System JSON file, or lower_bound");
  s->add_option("--adversary", sim.adversary, "lower_bound, piecewise, sinusoidal, replay or zero")
      ->check(CLI::IsMember({"lower_bound", "piecewise", "sinusoidal", "replay", "zero"}));
  s->add_option("--controller", sim.controller, "prodr or zero")
      ->check(CLI::IsMember({"prodr", "zero"}));
  s->add_option("--comparator", sim.comparator, "auto, binned or zero")
      ->check(CLI::IsMember({"auto", "binned", "zero"}));
  s->add_option("--n", sim.n, "Number of rounds")->check(CLI::PositiveNumber);
  s->add_option("--seed", sim.seed, "Random seed");
  s->add_option("--C-n", sim.C_n, "Path-variation budget of the lower-bound environment")
      ->check(CLI::PositiveNumber);
  s->add_option("--amplitude", sim.amplitude, "Disturbance amplitude (sinusoidal, piecewise)");
  s->add_option("--period", sim.period, "Period of the sinusoidal adversary");
  s->add_option("--segment", sim.segment, "Segment length of the piecewise adversary")
      ->check(CLI::PositiveNumber);
  s->add_option("--replay", sim.replay, "CSV of disturbances for the replay adversary");
  s->add_option("--out", sim.out, "Trace CSV (stdout when omitted)");
  s->add_option("--save-disturbances", sim.save_disturbances, "Write the disturbances as CSV");
  add_learner_flags(s, sim.learner);

  RegressArgs reg;
  auto* r = app.add_subcommand("regress", "Run the proper regression learner on a stream");
  r->add_option("--stream", reg.stream, "synthetic, or a JSON stream file");
  r->add_option("--n", reg.n, "Rounds of the synthetic stream")->check(CLI::PositiveNumber);
  r->add_option("--p", reg.p, "Rows per round")->check(CLI::PositiveNumber);
  r->add_option("--d", reg.d, "Dimension")->check(CLI::PositiveNumber);
  r->add_option("--radius", reg.radius, "Box radius of the feasible set")->check(CLI::PositiveNumber);
  r->add_option("--noise", reg.noise, "Target noise level")->check(CLI::NonNegativeNumber);
  r->add_option("--period", reg.period, "Drift period of the synthetic optimum")->check(CLI::PositiveNumber);
  r->add_option("--tau", reg.tau, "Feedback delay")->check(CLI::PositiveNumber);
  r->add_option("--seed", reg.seed, "Random seed");
  r->add_option("--out", reg.out, "Trace CSV (stdout when omitted)");
  add_learner_flags(r, reg.learner);

  SweepArgs sw;
  auto* g = app.add_subcommand("sweep", "Regret over a grid of (n, C_n, seed)");
  g->add_option("--grid", sw.grid, "Grid JSON file")->required()->check(CLI::ExistingFile);
  g->add_option("--out", sw.out, "Output directory");
  g->add_option("--threads", sw.threads, "Worker threads (default NONSTAT_LQR_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
  add_learner_flags(g, sw.learner);

  CLI11_PARSE(app, argc, argv);
  try {
    if (s->parsed()) return run_simulate(sim);
    if (r->parsed()) return run_regress(reg);
    if (g->parsed()) return run_sweep(sw, g);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
