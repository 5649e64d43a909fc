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

#include <stdexcept>
#include <string>

namespace nslqr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergent : public Error {
 public:
  NonConvergent(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class SingularInnerMatrix : public Error {
 public:
  using Error::Error;
};

class UnstableSystem : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidBounds : public Error {
 public:
  using Error::Error;
};

class InvalidBudget : public Error {
 public:
  using Error::Error;
};

/// Iterative solver ran out of budget; carries the best objective seen and
/// the remaining duality gap.
class SolverNonConvergent : public Error {
 public:
  SolverNonConvergent(const std::string& what, double best_value, double gap)
      : Error(what), best_value_(best_value), gap_(gap) {}
  double best_value() const { return best_value_; }
  double gap() const { return gap_; }

 private:
  double best_value_;
  double gap_;
};

class ProjectionNonConvergent : public Error {
 public:
  using Error::Error;
};

class DisturbanceBoundViolated : public Error {
 public:
  DisturbanceBoundViolated(const std::string& what, double norm)
      : Error(what), norm_(norm) {}
  double norm() const { return norm_; }

 private:
  double norm_;
};

class NumericalOverflow : public Error {
 public:
  using Error::Error;
};

}  // namespace nslqr
