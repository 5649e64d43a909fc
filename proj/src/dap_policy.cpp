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

#include "nslqr/dap_policy.hpp"

#include <algorithm>
#include <cmath>

#include "nslqr/errors.hpp"
#include "nslqr/linalg.hpp"

namespace nslqr {

DapParams DapParams::zeros(int m, int d_u, int d_x, double R, double gamma) {
  DapParams M;
  M.blocks.assign(m, MatrixXd::Zero(d_u, d_x));
  M.R = R;
  M.gamma = gamma;
  return M;
}

double DapParams::block_radius(int i) const { return R * std::pow(gamma, i); }

bool DapParams::feasible(double tol) const {
  for (int i = 0; i < memory(); ++i) {
    if (linalg::op_norm(blocks[i]) > block_radius(i) + tol) return false;
  }
  return true;
}

VectorXd dap_feedforward(const DapParams& M, std::span<const VectorXd> history) {
  VectorXd q = VectorXd::Zero(M.input_dim());
  const auto used = std::min<std::size_t>(history.size(), M.blocks.size());
  for (std::size_t i = 0; i < used; ++i) {
    if (history[i].size() != M.state_dim()) {
      throw DimensionMismatch("disturbance size does not match DAP blocks");
    }
    q.noalias() += M.blocks[i] * history[i];
  }
  return q;
}

VectorXd dap_control(const DapParams& M, const MatrixXd& K, const VectorXd& x,
                     std::span<const VectorXd> history) {
  if (K.cols() != x.size() || (M.memory() > 0 && K.rows() != M.input_dim())) {
    throw DimensionMismatch("controller gain does not match state or input");
  }
  return -K * x - dap_feedforward(M, history);
}

VectorXd flatten(const DapParams& M) {
  const int du = M.input_dim();
  const int dx = M.state_dim();
  const Eigen::Index block = Eigen::Index(du) * dx;
  VectorXd z(block * M.memory());
  for (int i = 0; i < M.memory(); ++i) {
    // Eigen storage is column-major, so this is the column stack.
    z.segment(i * block, block) =
        Eigen::Map<const VectorXd>(M.blocks[i].data(), block);
  }
  return z;
}

DapParams deflatten(const VectorXd& z, int m, int d_u, int d_x, double R,
                    double gamma) {
  const Eigen::Index block = Eigen::Index(d_u) * d_x;
  if (m < 0 || z.size() != block * m) {
    throw DimensionMismatch("flattened DAP vector has the wrong length");
  }
  DapParams M;
  M.R = R;
  M.gamma = gamma;
  M.blocks.reserve(m);
  for (int i = 0; i < m; ++i) {
    M.blocks.emplace_back(
        Eigen::Map<const MatrixXd>(z.data() + i * block, d_u, d_x));
  }
  return M;
}

DapParams project_dap(const DapParams& M) {
  DapParams out = M;
  for (int i = 0; i < M.memory(); ++i) {
    out.blocks[i] = linalg::clip_singular_values(M.blocks[i], M.block_radius(i));
  }
  return out;
}

double tv_of_sequence(std::span<const DapParams> seq) {
  double tv = 0.0;
  for (std::size_t t = 1; t < seq.size(); ++t) {
    const auto& prev = seq[t - 1].blocks;
    const auto& cur = seq[t].blocks;
    if (prev.size() != cur.size()) {
      throw DimensionMismatch("DAP sequence has inconsistent memory");
    }
    for (std::size_t i = 0; i < cur.size(); ++i) {
      tv += (cur[i] - prev[i]).cwiseAbs().sum();
    }
  }
  return tv;
}

}  // namespace nslqr
