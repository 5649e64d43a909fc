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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "nslqr/errors.hpp"
#include "nslqr/harness.hpp"

namespace nslqr {

int sweep_threads() {
  if (const char* env = std::getenv("NONSTAT_LQR_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

double median(std::vector<double> v) {
  if (v.empty()) throw InvalidBounds("median of an empty set");
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DimensionMismatch("slope fit needs paired data");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  SlopeFit f;
  f.points = int(lx.size());
  if (lx.size() < 2) {
    f.slope = std::nan("");
    f.intercept = std::nan("");
    return f;
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= double(lx.size());
  my /= double(lx.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  f.slope = sxx > 0.0 ? sxy / sxx : std::nan("");
  f.intercept = my - f.slope * mx;
  return f;
}

SweepResult sweep(const SweepGrid& grid, int threads) {
  if (grid.n.empty() || grid.C_n.empty() || grid.seeds.empty()) {
    throw InvalidBounds("sweep grid is empty");
  }
  std::vector<long> ns = grid.n;
  std::vector<double> cs = grid.C_n;
  std::vector<std::uint64_t> seeds = grid.seeds;
  std::sort(ns.begin(), ns.end());
  std::sort(cs.begin(), cs.end());
  std::sort(seeds.begin(), seeds.end());

  SweepResult res;
  for (long n : ns)
    for (double c : cs)
      for (std::uint64_t s : seeds) res.rows.push_back(SweepRow{n, c, s, 0.0, {}});

  const int workers = std::max(1, std::min<int>(threads > 0 ? threads : sweep_threads(),
                                                int(res.rows.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < res.rows.size(); i = next++) {
      SweepRow& row = res.rows[i];
      try {
        row.regret = run_lower_bound(row.n, row.C_n, row.seed, grid.controller,
                                     grid.experiment)
                         .regret;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < workers; ++k) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  // Medians over seeds per (n, C_n) cell.
  std::map<std::pair<long, double>, std::vector<double>> cells;
  for (const SweepRow& r : res.rows)
    if (r.error.empty()) cells[{r.n, r.C_n}].push_back(r.regret);
  auto cell_median = [&](long n, double c, double& out) {
    auto it = cells.find({n, c});
    if (it == cells.end() || it->second.empty()) return false;
    out = median(it->second);
    return true;
  };
  if (ns.size() >= 2) {
    for (double c : cs) {
      std::vector<double> x, y;
      for (long n : ns) {
        double m;
        if (cell_median(n, c, m)) {
          x.push_back(double(n));
          y.push_back(m);
        }
      }
      SlopeFit f = fit_loglog(x, y);
      f.against = "n";
      f.fixed = c;
      res.slopes.push_back(f);
    }
  }
  if (cs.size() >= 2) {
    for (long n : ns) {
      std::vector<double> x, y;
      for (double c : cs) {
        double m;
        if (cell_median(n, c, m)) {
          x.push_back(c);
          y.push_back(m);
        }
      }
      SlopeFit f = fit_loglog(x, y);
      f.against = "C_n";
      f.fixed = double(n);
      res.slopes.push_back(f);
    }
  }
  return res;
}

}  // namespace nslqr
