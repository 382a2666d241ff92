// Copyright 2026 The qcorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Derivative-free minimization: Nelder-Mead with restart-from-best polishing
// and a seeded multi-start driver.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <numeric>
#include <vector>

#include "qcorr/errors.hpp"
#include "qcorr/rng.hpp"

namespace qcorr {

struct NelderMeadOptions {
  std::size_t max_iterations = 5000;
  double tolerance = 1e-8;    // stop when max f - min f over the simplex is below this
  double initial_step = 0.5;
  std::size_t max_rounds = 6;  // fresh simplices built around the incumbent
};

struct NelderMeadResult {
  std::vector<double> x;
  double value;
  std::size_t iterations;
  std::size_t evaluations;
  bool converged;
};

namespace detail {

template <class F>
struct Simplex {
  F& f;
  std::vector<std::vector<double>> x;
  std::vector<double> fx;
  std::size_t evaluations = 0;

  double eval(const std::vector<double>& p) {
    ++evaluations;
    return f(p);
  }

  void build(const std::vector<double>& x0, double f0, double step) {
    const std::size_t n = x0.size();
    x.assign(n + 1, x0);
    fx.assign(n + 1, f0);
    for (std::size_t i = 0; i < n; ++i) {
      x[i + 1][i] += step;
      fx[i + 1] = eval(x[i + 1]);
    }
  }

  void sort() {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    std::vector<std::vector<double>> nx;
    std::vector<double> nf;
    for (std::size_t i : order) {
      nx.push_back(std::move(x[i]));
      nf.push_back(fx[i]);
    }
    x = std::move(nx);
    fx = std::move(nf);
  }

  double spread() const { return fx.back() - fx.front(); }

  // One Nelder-Mead iteration on a sorted simplex (standard coefficients).
  void step() {
    const std::size_t n = x.size() - 1;
    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) c[j] += x[i][j] / static_cast<double>(n);
    auto along = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j) p[j] = c[j] + t * (x[n][j] - c[j]);
      return p;
    };
    auto xr = along(-1.0);
    const double fr = eval(xr);
    if (fr < fx[0]) {
      auto xe = along(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        x[n] = std::move(xe);
        fx[n] = fe;
      } else {
        x[n] = std::move(xr);
        fx[n] = fr;
      }
    } else if (fr < fx[n - 1]) {
      x[n] = std::move(xr);
      fx[n] = fr;
    } else {
      const bool outside = fr < fx[n];
      auto xc = along(outside ? -0.5 : 0.5);
      const double fc = eval(xc);
      if (fc < (outside ? fr : fx[n])) {
        x[n] = std::move(xc);
        fx[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = 0; j < n; ++j) x[i][j] = x[0][j] + 0.5 * (x[i][j] - x[0][j]);
          fx[i] = eval(x[i]);
        }
      }
    }
    sort();
  }
};

}  // namespace detail

// Runs Nelder-Mead to the tolerance, then rebuilds a smaller simplex around
// the incumbent until a round no longer improves it by more than the
// tolerance. `converged` is false when the iteration budget ran out first.
template <class F>
NelderMeadResult nelder_mead(F&& f, std::vector<double> x0, const NelderMeadOptions& opt = {}) {
  if (x0.empty()) throw ArgumentError("nelder_mead: empty parameter vector");
  if (!(opt.tolerance > 0.0)) throw ArgumentError("nelder_mead: tolerance must be positive");
  detail::Simplex<std::remove_reference_t<F>> s{f, {}, {}, 0};
  std::vector<double> best = std::move(x0);
  double fbest = s.eval(best);
  std::size_t iterations = 0;
  bool converged = false;
  double step = opt.initial_step;
  for (std::size_t round = 0; round < opt.max_rounds && iterations < opt.max_iterations; ++round) {
    s.build(best, fbest, step);
    s.sort();
    while (s.spread() > opt.tolerance && iterations < opt.max_iterations) {
      s.step();
      ++iterations;
    }
    const bool round_converged = s.spread() <= opt.tolerance;
    const bool improved = s.fx.front() < fbest - opt.tolerance;
    if (s.fx.front() < fbest) {
      fbest = s.fx.front();
      best = s.x.front();
    }
    if (!round_converged) break;
    if (round > 0 && !improved) {
      converged = true;
      break;
    }
    step = 0.1 * opt.initial_step;
    converged = round + 1 == opt.max_rounds;
  }
  return {std::move(best), fbest, iterations, s.evaluations, converged};
}

struct OptimizerConfig {
  std::size_t restarts = 24;
  std::size_t max_iterations = 5000;  // per restart
  double tolerance = 1e-8;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;  // restarts evaluated concurrently

  void validate() const {
    if (restarts < 1) throw ArgumentError("OptimizerConfig: restarts must be >= 1");
    if (!(tolerance > 0.0)) throw ArgumentError("OptimizerConfig: tolerance must be positive");
    if (max_iterations < 1) throw ArgumentError("OptimizerConfig: max_iterations must be >= 1");
  }
};

struct MultiStartResult {
  std::vector<double> x;
  double value;
  std::size_t best_restart;
  std::vector<double> restart_values;
  std::vector<bool> restart_converged;
};

// Restart 0 starts at the origin; restart r > 0 at N(0, 1) parameters drawn
// from SplitMix64(derive_seed(seed, r)). Lowest value wins, ties by index.
template <class F>
MultiStartResult multistart_minimize(const F& f, std::size_t nparams, const OptimizerConfig& cfg) {
  cfg.validate();
  const NelderMeadOptions opt{cfg.max_iterations, cfg.tolerance, 0.5, 6};
  auto run = [&](std::size_t r) {
    std::vector<double> x0(nparams, 0.0);
    if (r > 0) {
      SplitMix64 rng(derive_seed(cfg.seed, r));
      for (auto& v : x0) v = rng.normal();
    }
    auto obj = [&f](const std::vector<double>& p) { return f(p); };
    return nelder_mead(obj, std::move(x0), opt);
  };

  std::vector<NelderMeadResult> results(cfg.restarts);
  if (cfg.jobs <= 1) {
    for (std::size_t r = 0; r < cfg.restarts; ++r) results[r] = run(r);
  } else {
    std::vector<std::future<void>> tasks;
    const std::size_t jobs = std::min(cfg.jobs, cfg.restarts);
    for (std::size_t j = 0; j < jobs; ++j)
      tasks.push_back(std::async(std::launch::async, [&, j] {
        for (std::size_t r = j; r < cfg.restarts; r += jobs) results[r] = run(r);
      }));
    for (auto& t : tasks) t.get();
  }

  MultiStartResult out{{}, INFINITY, 0, {}, {}};
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    out.restart_values.push_back(results[r].value);
    out.restart_converged.push_back(results[r].converged);
    if (results[r].value < out.value) {
      out.value = results[r].value;
      out.best_restart = r;
    }
  }
  out.x = results[out.best_restart].x;
  return out;
}

}  // namespace qcorr
