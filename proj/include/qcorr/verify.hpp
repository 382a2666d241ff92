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

// Seeded property suites. Every trial draws its inputs from
// derive_seed(seed, trial) and reports named checks; a check passes when
// margin >= -tolerance. Trials may run concurrently; rows are always
// returned in trial order.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <string>
#include <vector>

#include "qcorr/chain.hpp"
#include "qcorr/entanglement.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/locc.hpp"
#include "qcorr/premeasure.hpp"
#include "qcorr/quantumness.hpp"
#include "qcorr/rng.hpp"
#include "qcorr/states.hpp"

namespace qcorr::verify {

struct Check {
  std::string name;
  double margin;
  double tolerance;
  bool passed() const { return margin >= -tolerance; }
};

struct TrialRow {
  std::size_t trial;
  std::string family;
  std::vector<Check> checks;
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
  }
  // Minimum margin over the checks, the first check wins ties.
  double margin() const {
    double m = INFINITY;
    for (const auto& c : checks) m = std::min(m, c.margin);
    return m;
  }
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed;
  std::vector<TrialRow> rows;

  std::size_t trials() const { return rows.size(); }
  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const TrialRow& r) { return !r.passed(); }));
  }
  double worst_margin() const {
    double m = INFINITY;
    for (const auto& r : rows) m = std::min(m, r.margin());
    return m;
  }
  // Worst margin of one named check across trials (INFINITY if absent).
  double worst(const std::string& check) const {
    double m = INFINITY;
    for (const auto& r : rows)
      for (const auto& c : r.checks)
        if (c.name == check) m = std::min(m, c.margin);
    return m;
  }
};

struct SuiteOptions {
  std::size_t samples = 0;  // 0 selects the suite default
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  OptimizerConfig optimizer{};
};

namespace detail {

inline OptimizerConfig trial_optimizer(const SuiteOptions& opt, std::uint64_t trial_seed) {
  OptimizerConfig c = opt.optimizer;
  c.seed = trial_seed;
  c.jobs = 1;
  return c;
}

inline LocalBasis random_local_basis(const std::string& label, std::size_t d, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return random_basis(label, d, rng);
}

inline const BipartitionCut& ab_cut() {
  static const BipartitionCut cut({0}, {1}, 2);
  return cut;
}

// Random two-qubit state with negativity above `floor`, by rejection.
inline LabeledState entangled_two_qubit(std::uint64_t seed, double floor) {
  const Register reg = Register::lettered({2, 2});
  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::uint64_t s = derive_seed(seed, attempt);
    const std::size_t rank = 1 + s % 2;
    LabeledState st = random_mixed(reg, rank, s);
    if (negativity(st, ab_cut()) > floor) return st;
  }
}

inline LabeledState cc_two_qubit(std::uint64_t seed) {
  SplitMix64 rng(seed);
  const LocalBasis b = random_basis("A", 2, rng);
  const double p = rng.uniform();
  std::vector<DensityOperator> cond;
  for (int i = 0; i < 2; ++i) {
    const auto c = random_mixed(Register::lettered({2}), 1 + rng.next() % 2, rng.next());
    cond.push_back(c.rho);
  }
  return classical_quantum_state({p, 1.0 - p}, b, cond);
}

inline TrialRow theorem1(std::size_t trial, std::size_t samples, std::uint64_t s, const SuiteOptions& opt) {
  const bool cc_family = trial < (samples + 1) / 2;
  const LabeledState st = cc_family ? cc_two_qubit(s) : entangled_two_qubit(s, 0.05);
  const auto c = classify_cc(st, {"A"}, 1e-7, trial_optimizer(opt, s));
  const bool oracle = cc_commutation_oracle(st, "A");
  TrialRow row{trial, cc_family ? "cc" : "entangled", {}};
  if (cc_family)
    row.checks.push_back({"cc_residual", 1e-7 - c.residual, 0.0});
  else
    row.checks.push_back({"not_cc", c.cc ? -1.0 : c.residual, 0.0});
  row.checks.push_back({"classified", c.cc == cc_family ? 0.0 : -1.0, 0.0});
  row.checks.push_back({"oracle_agrees", oracle == c.cc ? 0.0 : -1.0, 0.0});
  return row;
}

inline TrialRow theorem2(std::size_t trial, std::size_t, std::uint64_t s, const SuiteOptions& opt) {
  const LabeledState st = random_mixed(Register::lettered({2, 2}), 1 + trial % 4, s);
  const OptimizerConfig cfg = trial_optimizer(opt, s);
  const double e = negativity(st, ab_cut());
  const double qa = q_negativity(st, {"A"}, cfg).value;
  const double qb = q_negativity(st, {"B"}, cfg).value;
  const double qab = q_negativity(st, {"A", "B"}, cfg).value;
  return {trial,
          "rank" + std::to_string(1 + trial % 4),
          {{"qa_ge_e", qa - e, 1e-9},
           {"qb_ge_e", qb - e, 1e-9},
           {"qab_ge_e", qab - e, 1e-9},
           {"qab_ge_max_single", qab - std::max(qa, qb), 1e-5}}};
}

inline TrialRow theorem3(std::size_t trial, std::size_t, std::uint64_t s, const SuiteOptions&) {
  static const char* names[] = {"ghz3", "w3", "bell-x-0"};
  const std::size_t fam = trial % 3;
  LabeledState initial = fam == 0 ? ghz_state(3) : w_state(3);
  if (fam == 2) {
    const double h = 1.0 / std::sqrt(2.0);
    initial = pure_state({h, 0, 0, 0, 0, 0, h, 0}, Register::lettered({2, 2, 2}));
  }
  const GmePropagation g = chain_gme_propagation(initial, 2, s);
  TrialRow row{trial, names[fam], {}};
  for (std::size_t j = 0; j < g.gme.size(); ++j) {
    const std::string step = "link" + std::to_string(j + 1);
    const auto& d = g.details[j];
    if (fam < 2) {
      row.checks.push_back({step + "_purity_deficit", d.min_purity_deficit - 1e-6, 0.0});
      row.checks.push_back({step + "_gme", d.gme ? 0.0 : -1.0, 0.0});
    } else {
      row.checks.push_back({step + "_product_witness", d.witness ? 0.0 : -1.0, 0.0});
      row.checks.push_back({step + "_not_gme", d.gme ? -1.0 : 0.0, 0.0});
    }
  }
  return row;
}

inline TrialRow locc_undo_trial(std::size_t trial, std::size_t, std::uint64_t s, const SuiteOptions&) {
  const std::size_t da = 2 + trial % 2;
  const Register reg(std::vector<std::string>{"A", "B"}, Dims{da, 2});
  const LabeledState st = random_mixed(reg, 1 + (s >> 7) % (2 * da), s);
  const MeasurementPlan plan({"A"}, {random_local_basis("A", da, derive_seed(s, 100))});
  const LabeledState pm = premeasure(st, plan);
  const LoccTranscript t = locc_undo(pm, plan, "A");
  const LabeledState ref = transfer_to_apparatus(st, {"A"});
  // Register order differs (B kept, M:A appended); compare after aligning.
  const IndexSet order = t.output.reg.label(0) == ref.reg.label(0) ? IndexSet{0, 1} : IndexSet{1, 0};
  const double dist = trace_distance(permute_subsystems(t.output, order).rho, ref.rho);
  double spread = 0.0;
  for (std::size_t i = 0; i < t.conditional_outputs.size(); ++i)
    for (std::size_t j = i + 1; j < t.conditional_outputs.size(); ++j)
      spread = std::max(spread, trace_distance(t.conditional_outputs[i], t.conditional_outputs[j]));
  double prob_dev = 0.0;
  for (double p : t.outcome_probabilities) prob_dev = std::max(prob_dev, std::abs(p - 1.0 / static_cast<double>(da)));
  TrialRow row{trial, "d" + std::to_string(da), {}};
  row.checks.push_back({"trace_distance", -dist, 1e-11});
  row.checks.push_back({"outcome_spread", -spread, 1e-11});
  row.checks.push_back({"uniform_outcomes", -prob_dev, 1e-10});
  for (std::uint64_t b = 0; b < 5; ++b) {
    const MeasurementPlan p({"A"}, {random_local_basis("A", da, derive_seed(s, 200 + b))});
    const MonotonicityStep m = verify_monotonicity_step(st, p);
    row.checks.push_back({"monotone_basis" + std::to_string(b), m.lhs - m.rhs, kMonotonicitySlack});
  }
  return row;
}

inline TrialRow chain_monotone(std::size_t trial, std::size_t, std::uint64_t s, const SuiteOptions&) {
  const LabeledState initial = random_mixed(Register({"S"}, {2}), 1 + trial % 2, s);
  ChainConfig random_cfg{initial, {}, false, {}};
  ChainConfig flag_cfg{initial, {}, false, {}};
  for (std::uint64_t j = 0; j < 4; ++j) {
    const ComplexMatrix b = random_local_basis("", 2, derive_seed(s, 10 + j)).vectors();
    LinkSpec l{j == 0 ? std::optional<std::string>("S") : std::nullopt, BasisPolicy::explicit_basis, b};
    random_cfg.links.push_back(l);
    flag_cfg.links.push_back(j == 0 ? l : LinkSpec{std::nullopt, BasisPolicy::flag_copy, std::nullopt});
  }
  const ChainReport r = run_chain(random_cfg);
  const ChainReport f = run_chain(flag_cfg);
  TrialRow row{trial, "qubit-4-links", {}};
  double step = INFINITY, flat = 0.0, drift = 0.0;
  for (std::size_t j = 1; j < r.rows.size(); ++j)
    step = std::min(step, r.rows[j].entanglement - r.rows[j - 1].entanglement);
  for (const auto& fr : f.rows) flat = std::max(flat, std::abs(fr.entanglement - f.rows.front().entanglement));
  for (std::size_t j = 0; j + 1 < r.rows.size(); ++j)
    drift = std::max(drift, std::abs(*r.rows[j].break_negativity - r.rows[j + 1].entanglement));
  row.checks.push_back({"non_decreasing", step, kChainSlack});
  row.checks.push_back({"flag_copy_constant", -flat, 1e-10});
  row.checks.push_back({"fixed_break", -drift, 1e-10});
  return row;
}

inline TrialRow pure_saturation(std::size_t trial, std::size_t, std::uint64_t s, const SuiteOptions& opt) {
  const LabeledState st = random_pure(Register::lettered({2, 2}), s);
  const OptimizerConfig cfg = trial_optimizer(opt, s);
  const double e = negativity(st, ab_cut());
  const double se = entropy_of_entanglement(st, ab_cut());
  const double q = q_negativity(st, {"A"}, cfg).value;
  const double dq = deficit(st, {"A"}, cfg).value;
  return {trial, "haar", {{"negativity_gap", -std::abs(q - e), 1e-5}, {"deficit_gap", -std::abs(dq - se), 1e-5}}};
}

using TrialFn = TrialRow (*)(std::size_t, std::size_t, std::uint64_t, const SuiteOptions&);

struct SuiteEntry {
  const char* name;
  TrialFn fn;
  std::size_t default_samples;
};

inline const std::vector<SuiteEntry>& registry() {
  static const std::vector<SuiteEntry> r{
      {"theorem1", theorem1, 100},          {"theorem2", theorem2, 200},
      {"theorem3", theorem3, 30},           {"locc-undo", locc_undo_trial, 100},
      {"chain-monotone", chain_monotone, 50}, {"pure-saturation", pure_saturation, 100}};
  return r;
}

}  // namespace detail

inline std::vector<std::string> suite_names() {
  std::vector<std::string> n;
  for (const auto& e : detail::registry()) n.emplace_back(e.name);
  return n;
}

// Throws ArgumentError for an unknown suite name.
inline SuiteReport run_suite(const std::string& name, const SuiteOptions& opt = {}) {
  const auto& reg = detail::registry();
  const auto it = std::find_if(reg.begin(), reg.end(), [&](const auto& e) { return name == e.name; });
  if (it == reg.end()) throw ArgumentError("unknown suite '" + name + "'");
  const std::size_t n = opt.samples ? opt.samples : it->default_samples;
  SuiteReport out{name, opt.seed, std::vector<TrialRow>(n)};
  auto one = [&](std::size_t i) { out.rows[i] = it->fn(i, n, derive_seed(opt.seed, i), opt); };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(opt.jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) one(i);
  } else {
    std::vector<std::future<void>> workers;
    for (std::size_t w = 0; w < jobs; ++w)
      workers.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < n; i += jobs) one(i);
      }));
    for (auto& f : workers) f.get();
  }
  return out;
}

}  // namespace qcorr::verify
