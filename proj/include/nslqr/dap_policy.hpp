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

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace nslqr {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Disturbance-action policy parameters M = (M^[1], ..., M^[m]), each block
/// d_u x d_x, drawn from the class ||M^[i]||_op <= R gamma^{i-1}.
struct DapParams {
  std::vector<MatrixXd> blocks;
  double R = 1.0;
  double gamma = 1.0;

  static DapParams zeros(int m, int d_u, int d_x, double R, double gamma);

  int memory() const { return static_cast<int>(blocks.size()); }
  int input_dim() const { return blocks.empty() ? 0 : int(blocks[0].rows()); }
  int state_dim() const { return blocks.empty() ? 0 : int(blocks[0].cols()); }
  /// Radius of block i (zero based): R gamma^i.
  double block_radius(int i) const;
  bool feasible(double tol = 1e-9) const;
};

using DapSequence = std::vector<DapParams>;

/// q^M = sum_i M^[i] w_{t-i}. history[0] is w_{t-1}; entries past the end of
/// history are zero.
VectorXd dap_feedforward(const DapParams& M, std::span<const VectorXd> history);

/// u_t = -K x_t - q^M(w_{t-1}, ..., w_{t-m}).
VectorXd dap_control(const DapParams& M, const MatrixXd& K, const VectorXd& x,
                     std::span<const VectorXd> history);

/// Column-major stack of each block, blocks in order 1..m.
VectorXd flatten(const DapParams& M);

DapParams deflatten(const VectorXd& z, int m, int d_u, int d_x, double R = 1.0,
                    double gamma = 1.0);

/// Clips the singular values of each block to its radius.
DapParams project_dap(const DapParams& M);

/// sum_{t>=2} sum_i ||M_t^[i] - M_{t-1}^[i]||_1 with the entrywise 1-norm.
double tv_of_sequence(std::span<const DapParams> seq);

}  // namespace nslqr
