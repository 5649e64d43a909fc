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

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "nslqr/errors.hpp"
#include "nslqr/lqr_system.hpp"
#include "test_util.hpp"

using namespace nslqr;
using nslqr::testing::gaussian;
using nslqr::testing::gaussian_vec;
using nslqr::testing::random_pd;
using nslqr::testing::random_system;

namespace {

SystemSpec scalar(double a, double b, double rx, double ru) {
  SystemSpec s;
  s.A = MatrixXd::Constant(1, 1, a);
  s.B = MatrixXd::Constant(1, 1, b);
  s.R_x = MatrixXd::Constant(1, 1, rx);
  s.R_u = MatrixXd::Constant(1, 1, ru);
  s.horizon = 10;
  return s;
}

SystemSpec lower_bound_like() {
  SystemSpec s;
  s.A = MatrixXd::Zero(2, 2);
  s.B = -MatrixXd::Identity(2, 2);
  s.R_x = MatrixXd::Zero(2, 2);
  s.R_x(0, 0) = 1.0;
  s.R_u = MatrixXd::Zero(2, 2);
  s.horizon = 4096;
  return s;
}

/// Optimal first control of the finite-horizon problem with known
/// disturbances w_1..w_T and terminal cost x^T P x, found by solving the
/// stacked least-squares problem over all controls at once.
VectorXd brute_force_first_control(const SystemSpec& s, const MatrixXd& P,
                                   const VectorXd& x1, const std::vector<VectorXd>& w) {
  const int dx = s.state_dim(), du = s.input_dim(), T = int(w.size());
  // x_{t} = F_t x1 + sum_s G_{t,s} u_s + c_t  for t = 1..T+1.
  std::vector<MatrixXd> Fu(T + 1, MatrixXd::Zero(dx, du * T));
  std::vector<VectorXd> c(T + 1, VectorXd::Zero(dx));
  c[0] = x1;
  for (int t = 0; t < T; ++t) {
    Fu[t + 1] = s.A * Fu[t];
    Fu[t + 1].middleCols(t * du, du) += s.B;
    c[t + 1] = s.A * c[t] + w[t];
  }
  MatrixXd H = MatrixXd::Zero(du * T, du * T);
  VectorXd g = VectorXd::Zero(du * T);
  for (int t = 0; t <= T; ++t) {
    const MatrixXd& Q = t < T ? s.R_x : P;
    H += Fu[t].transpose() * Q * Fu[t];
    g += Fu[t].transpose() * Q * c[t];
  }
  for (int t = 0; t < T; ++t) H.block(t * du, t * du, du, du) += s.R_u;
  const VectorXd u = H.ldlt().solve(-g);
  return u.head(du);
}

}  // namespace

TEST_CASE("Riccati fixed point with A = 0 is R_x") {
  std::mt19937_64 rng(11);
  SystemSpec s;
  s.A = MatrixXd::Zero(3, 3);
  s.B = gaussian(rng, 3, 2);
  s.R_x = random_pd(rng, 3);
  s.R_u = random_pd(rng, 2);
  const MatrixXd P = solve_dare(s);
  CHECK((P - s.R_x).norm() <= 1e-12);
  CHECK(compute_controller(s, P).K.norm() == doctest::Approx(0.0));
}

TEST_CASE("Uncontrolled scalar system sums the geometric series") {
  const MatrixXd P = solve_dare(scalar(0.5, 0.0, 1.0, 1.0));
  CHECK(std::abs(P(0, 0) - 4.0 / 3.0) <= 1e-12);
}

TEST_CASE("Controlled scalar system matches a bisection root of the Riccati equation") {
  const SystemSpec s = scalar(0.5, 1.0, 1.0, 1.0);
  // f(P) = 1 + 0.25 P - 0.25 P^2 / (1 + P) - P, decreasing on [1, 10].
  auto f = [](double p) { return 1.0 + 0.25 * p - 0.25 * p * p / (1.0 + p) - p; };
  double lo = 1.0, hi = 10.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  const double root = 0.5 * (lo + hi);
  const MatrixXd P = solve_dare(s);
  CHECK(P(0, 0) == doctest::Approx(root).epsilon(1e-10));
  CHECK(dare_residual(s, P) <= 1e-10);
  const ControllerGains g = compute_controller(s, P);
  CHECK(g.K(0, 0) == doctest::Approx(0.5 * root / (1.0 + root)).epsilon(1e-12));
  CHECK(g.Sigma(0, 0) == doctest::Approx(1.0 + root));
  CHECK(g.A_cl(0, 0) == doctest::Approx(0.5 - g.K(0, 0)));
}

TEST_CASE("Random stabilisable systems give small residuals and stable closed loops") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 30; ++k) {
    const int dx = nslqr::testing::uniform_int(rng, 1, 4);
    const int du = nslqr::testing::uniform_int(rng, 1, 4);
    const SystemSpec s = random_system(rng, dx, du);
    const LqrConstants c = compute_constants(s);
    CHECK(dare_residual(s, c.P) <= 1e-9);
    CHECK(spectral_radius(c.A_cl) < 1.0);
    CHECK((c.P - c.P.transpose()).norm() == 0.0);
    CHECK((c.Sigma - (s.R_u + s.B.transpose() * c.P * s.B)).norm() <= 1e-9 * (1 + c.Sigma.norm()));
    CHECK(c.stability.gamma >= 0.0);
    CHECK(c.stability.gamma < 1.0);
    CHECK(c.h >= 1);
  }
}

TEST_CASE("Lower-bound system constants") {
  const LqrConstants c = compute_constants(lower_bound_like());
  CHECK(c.K.norm() == 0.0);
  MatrixXd expected = MatrixXd::Zero(2, 2);
  expected(0, 0) = 1.0;
  CHECK((c.Sigma - expected).norm() <= 1e-12);
  CHECK(c.sigma_factors.effective_rank == 1);
  CHECK(c.stability.gamma == doctest::Approx(0.0));
  CHECK(c.h == int(std::ceil(4.0 * std::log(4096.0))));
}

TEST_CASE("Spectral factors of Sigma") {
  SpectralFactors f = spectral_sigma(MatrixXd::Identity(3, 3));
  CHECK(f.effective_rank == 3);
  CHECK((f.lambda - VectorXd::Ones(3)).norm() == 0.0);

  MatrixXd d = MatrixXd::Zero(2, 2);
  d(0, 0) = 1.0;
  f = spectral_sigma(d);
  CHECK(f.effective_rank == 1);
  CHECK(f.sqrt_lambda_u().rows() == 1);
  CHECK((f.pseudo_inverse() - d).norm() <= 1e-15);

  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const MatrixXd S = random_pd(rng, 3, 0.0);
    f = spectral_sigma(S);
    CHECK((f.reconstruct() - S).norm() <= 1e-10);
    CHECK((f.U * f.U.transpose() - MatrixXd::Identity(3, 3)).norm() <= 1e-10);
    for (int i = 1; i < 3; ++i) CHECK(f.lambda[i] <= f.lambda[i - 1]);
  }
}

TEST_CASE("Delay horizon arithmetic") {
  StabilityConstants c;
  c.gamma = 0.5;
  CHECK(compute_delay_h(c, 1) == 1);
  CHECK(compute_delay_h(c, 10) == int(std::ceil(4.0 * std::log(100.0))));
  int prev = 0;
  for (long n = 1; n <= 1L << 20; n *= 3) {
    const int h = compute_delay_h(c, n);
    CHECK(h >= prev);
    prev = h;
  }
  c.gamma = 1.0;
  CHECK_THROWS_AS(compute_delay_h(c, 10), UnstableSystem);
}

TEST_CASE("Feed-forward target: closed-form cases and naive sum") {
  const LqrConstants lb = compute_constants(lower_bound_like());
  const std::vector<VectorXd> w{VectorXd::Constant(2, 0.5), VectorXd::Constant(2, -0.3)};
  // A_cl = 0: only the first disturbance survives.
  const VectorXd q = compute_q_inf(lb, w);
  const VectorXd direct =
      lb.sigma_factors.pseudo_inverse() * lb.B.transpose() * lb.P * w[0];
  CHECK((q - direct).norm() <= 1e-15);
  CHECK(compute_q_inf(lb, std::vector<VectorXd>(3, VectorXd::Zero(2))).norm() == 0.0);

  std::mt19937_64 rng(17);
  const SystemSpec s = random_system(rng, 2, 2, 0.9);
  const LqrConstants c = compute_constants(s);
  std::vector<VectorXd> win;
  for (int j = 0; j < 3; ++j) win.push_back(nslqr::testing::unit_ball_vec(rng, 2));
  VectorXd naive = VectorXd::Zero(2);
  MatrixXd power = MatrixXd::Identity(2, 2);
  for (int j = 0; j < 3; ++j) {
    naive += s.B.transpose() * power * c.P * win[j];
    power = c.A_cl.transpose() * power;
  }
  naive = c.sigma_factors.pseudo_inverse() * naive;
  CHECK((compute_q_inf(c, win) - naive).norm() <= 1e-12);

  // Superposition.
  std::vector<VectorXd> a, b, sum;
  for (int j = 0; j < 4; ++j) {
    a.push_back(gaussian_vec(rng, 2, 0.3));
    b.push_back(gaussian_vec(rng, 2, 0.3));
    sum.push_back(2.0 * a.back() - 0.5 * b.back());
  }
  CHECK((compute_q_inf(c, sum) - (2.0 * compute_q_inf(c, a) - 0.5 * compute_q_inf(c, b)))
            .norm() <= 1e-12);
}

TEST_CASE("Feed-forward target reproduces the optimal control with known disturbances") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 10; ++k) {
    const int dx = nslqr::testing::uniform_int(rng, 1, 3);
    const int du = nslqr::testing::uniform_int(rng, 1, 3);
    const SystemSpec s = random_system(rng, dx, du, 0.95);
    const LqrConstants c = compute_constants(s);
    std::vector<VectorXd> w;
    for (int t = 0; t < 6; ++t) w.push_back(nslqr::testing::unit_ball_vec(rng, dx));
    const VectorXd x1 = gaussian_vec(rng, dx);
    const VectorXd u_opt = brute_force_first_control(s, c.P, x1, w);
    const VectorXd u = -c.K * x1 - compute_q_inf(c, w);
    CHECK((u - u_opt).norm() <= 1e-8 * (1.0 + u_opt.norm()));
  }
}

TEST_CASE("Riccati solver error paths") {
  DareOptions o;
  o.max_iter = 2;
  CHECK_THROWS_AS(solve_dare(scalar(0.9, 1.0, 1.0, 1.0), o), NonConvergent);
  CHECK_THROWS_AS(compute_constants(scalar(1.5, 0.0, 1.0, 1.0)), Error);
  SystemSpec bad = scalar(0.5, 1.0, -1.0, 1.0);
  CHECK_THROWS_AS(bad.validate(), Error);
}
