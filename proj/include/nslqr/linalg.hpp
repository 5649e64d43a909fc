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

#include <Eigen/Dense>

namespace nslqr::linalg {

/// Largest singular value.
double op_norm(const Eigen::MatrixXd& M);

/// Maximum absolute column sum.
double induced_one_norm(const Eigen::MatrixXd& M);

/// Sum of singular values.
double nuclear_norm(const Eigen::MatrixXd& M);

/// Pseudo-inverse of a symmetric matrix; eigenvalues with modulus below
/// rank_tol are treated as zero.
Eigen::MatrixXd symmetric_pinv(const Eigen::MatrixXd& S, double rank_tol);

/// Frobenius-closest matrix with operator norm at most radius.
Eigen::MatrixXd clip_singular_values(const Eigen::MatrixXd& M, double radius);

}  // namespace nslqr::linalg
