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

#include "nslqr/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace nslqr::linalg {

double op_norm(const Eigen::MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  if (M.rows() == 1 || M.cols() == 1) return M.norm();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  return svd.singularValues()(0);
}

double induced_one_norm(const Eigen::MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  return M.cwiseAbs().colwise().sum().maxCoeff();
}

double nuclear_norm(const Eigen::MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  if (M.rows() == 1 || M.cols() == 1) return M.norm();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  return svd.singularValues().sum();
}

Eigen::MatrixXd symmetric_pinv(const Eigen::MatrixXd& S, double rank_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()));
  Eigen::VectorXd inv = es.eigenvalues();
  for (Eigen::Index i = 0; i < inv.size(); ++i) {
    inv(i) = std::abs(inv(i)) < rank_tol ? 0.0 : 1.0 / inv(i);
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd clip_singular_values(const Eigen::MatrixXd& M, double radius) {
  if (M.size() == 0) return M;
  if (M.rows() == 1 || M.cols() == 1) {
    const double n = M.norm();
    return n > radius ? Eigen::MatrixXd(M * (radius / n)) : M;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (s(0) <= radius) return M;
  Eigen::VectorXd clipped = s.cwiseMin(radius);
  return svd.matrixU() * clipped.asDiagonal() * svd.matrixV().transpose();
}

}  // namespace nslqr::linalg
