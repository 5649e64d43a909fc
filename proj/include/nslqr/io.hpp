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

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "nslqr/harness.hpp"
#include "nslqr/lqr_pipeline.hpp"
#include "nslqr/lqr_system.hpp"

namespace nslqr::io {

/// Matrix from row-major nested arrays; throws DimensionMismatch on ragged
/// input.
MatrixXd matrix_from_json(const nlohmann::json& j);
VectorXd vector_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const MatrixXd& M);

/// A system file: {"A", "B", "R_x", "R_u", "horizon"?, "dap"?: {"m", "R",
/// "gamma"}}.
struct SystemFile {
  SystemSpec spec;
  DapConfig dap;
};
SystemFile system_from_json(const nlohmann::json& j);
nlohmann::json system_to_json(const SystemSpec& spec, const DapConfig& dap);
SystemFile load_system_file(const std::string& path);

/// Sweep grid: {"n": [...], "C_n": [...], "seeds": [...] | "num_seeds": k,
/// "controller": "prodr" | "zero", "dap"?: {...}, "h_cap"?: int,
/// "prune": "geometric"?, "ons_init": "zeta" | "textbook"?}.
SweepGrid grid_from_json(const nlohmann::json& j);
SweepGrid load_grid_file(const std::string& path);

/// One disturbance per line, comma separated.
std::vector<VectorXd> read_vectors_csv(const std::string& path);
void write_vectors_csv(std::ostream& os, const std::vector<VectorXd>& rows);

/// Shortest round-trip representation ("%.17g").
std::string format_double(double v);

/// round,learner_loss,comparator_loss,cum_regret,barrier,weight_entropy
void write_trace_csv(std::ostream& os, const RegretTrace& regret,
                     const std::vector<double>& barrier,
                     const std::vector<double>& entropy);

/// n,C_n,seed,regret (failed cells are reported on stderr by the caller).
void write_sweep_csv(std::ostream& os, const SweepResult& res);
/// against,fixed,slope,intercept,points
void write_slopes_csv(std::ostream& os, const SweepResult& res);

}  // namespace nslqr::io
