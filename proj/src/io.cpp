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

#include "nslqr/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "nslqr/errors.hpp"

namespace nslqr::io {

using nlohmann::json;

MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw DimensionMismatch("matrix must be a nonempty array");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw DimensionMismatch("matrix rows must be nonempty arrays");
  MatrixXd M(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw DimensionMismatch("ragged matrix");
    }
    for (std::size_t c = 0; c < cols; ++c) M(Eigen::Index(r), Eigen::Index(c)) = j[r][c].get<double>();
  }
  return M;
}

VectorXd vector_from_json(const json& j) {
  if (!j.is_array()) throw DimensionMismatch("vector must be an array");
  VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[Eigen::Index(i)] = j[i].get<double>();
  return v;
}

json matrix_to_json(const MatrixXd& M) {
  json out = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    out.push_back(row);
  }
  return out;
}

namespace {

DapConfig dap_from_json(const json& j) {
  DapConfig d;
  d.m = j.value("m", 1);
  d.R = j.value("R", 1.0);
  d.gamma = j.value("gamma", 1.0);
  return d;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error("invalid JSON in " + path + ": " + e.what());
  }
}

}  // namespace

SystemFile system_from_json(const json& j) {
  SystemFile f;
  try {
    f.spec.A = matrix_from_json(j.at("A"));
    f.spec.B = matrix_from_json(j.at("B"));
    f.spec.R_x = matrix_from_json(j.at("R_x"));
    f.spec.R_u = matrix_from_json(j.at("R_u"));
    f.spec.horizon = j.value("horizon", 1L);
    if (j.contains("dap")) f.dap = dap_from_json(j.at("dap"));
  } catch (const json::exception& e) {
    throw Error(std::string("malformed system description: ") + e.what());
  }
  f.spec.validate();
  return f;
}

json system_to_json(const SystemSpec& spec, const DapConfig& dap) {
  return json{{"A", matrix_to_json(spec.A)},
              {"B", matrix_to_json(spec.B)},
              {"R_x", matrix_to_json(spec.R_x)},
              {"R_u", matrix_to_json(spec.R_u)},
              {"horizon", spec.horizon},
              {"dap", {{"m", dap.m}, {"R", dap.R}, {"gamma", dap.gamma}}}};
}

SystemFile load_system_file(const std::string& path) {
  return system_from_json(read_json_file(path));
}

SweepGrid grid_from_json(const json& j) {
  SweepGrid g;
  try {
    for (const auto& v : j.at("n")) g.n.push_back(v.get<long>());
    for (const auto& v : j.at("C_n")) g.C_n.push_back(v.get<double>());
    if (j.contains("seeds")) {
      for (const auto& v : j.at("seeds")) g.seeds.push_back(v.get<std::uint64_t>());
    } else {
      const int k = j.value("num_seeds", 10);
      for (int s = 1; s <= k; ++s) g.seeds.push_back(std::uint64_t(s));
    }
    const std::string ctrl = j.value("controller", std::string("prodr"));
    if (ctrl == "prodr") g.controller = ControllerKind::Prodr;
    else if (ctrl == "zero") g.controller = ControllerKind::Zero;
    else throw Error("unknown controller '" + ctrl + "'");
    if (j.contains("dap")) g.experiment.dap = dap_from_json(j.at("dap"));
    g.experiment.pipeline.h_cap = j.value("h_cap", 0);
    const std::string prune = j.value("prune", std::string("none"));
    if (prune == "geometric") g.experiment.pipeline.prodr.flh.prune_geometric = true;
    else if (prune != "none") throw Error("unknown prune mode '" + prune + "'");
    const std::string init = j.value("ons_init", std::string("zeta"));
    if (init == "textbook") g.experiment.pipeline.prodr.ons_init = OnsInit::Textbook;
    else if (init != "zeta") throw Error("unknown ONS initialisation '" + init + "'");
  } catch (const json::exception& e) {
    throw Error(std::string("malformed sweep grid: ") + e.what());
  }
  return g;
}

SweepGrid load_grid_file(const std::string& path) {
  return grid_from_json(read_json_file(path));
}

std::vector<VectorXd> read_vectors_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<VectorXd> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(path + ":" + std::to_string(lineno) + ": not a number: '" + cell + "'");
      }
    }
    if (!rows.empty() && Eigen::Index(vals.size()) != rows.front().size()) {
      throw DimensionMismatch(path + ":" + std::to_string(lineno) + ": row length changes");
    }
    rows.push_back(Eigen::Map<const VectorXd>(vals.data(), Eigen::Index(vals.size())));
  }
  return rows;
}

void write_vectors_csv(std::ostream& os, const std::vector<VectorXd>& rows) {
  for (const VectorXd& v : rows) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (i) os << ',';
      os << format_double(v[i]);
    }
    os << '\n';
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& os, const RegretTrace& regret,
                     const std::vector<double>& barrier,
                     const std::vector<double>& entropy) {
  os << "round,learner_loss,comparator_loss,cum_regret,barrier,weight_entropy\n";
  for (std::size_t t = 0; t < regret.learner.size(); ++t) {
    os << (t + 1) << ',' << format_double(regret.learner[t]) << ','
       << format_double(regret.comparator[t]) << ','
       << format_double(regret.cumulative[t]) << ','
       << format_double(t < barrier.size() ? barrier[t] : 0.0) << ','
       << format_double(t < entropy.size() ? entropy[t] : 0.0) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const SweepResult& res) {
  os << "n,C_n,seed,regret\n";
  for (const SweepRow& r : res.rows) {
    if (!r.error.empty()) continue;
    os << r.n << ',' << format_double(r.C_n) << ',' << r.seed << ','
       << format_double(r.regret) << '\n';
  }
}

void write_slopes_csv(std::ostream& os, const SweepResult& res) {
  os << "against,fixed,slope,intercept,points\n";
  for (const SlopeFit& f : res.slopes) {
    os << f.against << ',' << format_double(f.fixed) << ',' << format_double(f.slope)
       << ',' << format_double(f.intercept) << ',' << f.points << '\n';
  }
}

}  // namespace nslqr::io
