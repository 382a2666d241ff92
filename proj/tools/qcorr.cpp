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

// qcorr: command-line front end.
//
//   measure      entanglement or quantumness value of a state file
//   quantumness  full quantumness report (argmin bases, restart trace)
//   classify     classical-correlation test on a measured set
//   chain        von Neumann chain from a config file
//   verify       seeded property suites
//   gen          state and fixture generator
//
// Exit codes: 0 ok, 1 verification failure, 2 parse error, 3 invariant
// violation, 64 usage.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcorr/qcorr.hpp"

namespace {

using namespace qcorr;
using io::json;

struct OptimizerFlags {
  std::size_t restarts = 24;
  std::size_t max_iter = 5000;
  double tol = 1e-8;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
};

void add_optimizer_flags(CLI::App* cmd, OptimizerFlags& f) {
  cmd->add_option("--restarts", f.restarts, "optimizer restarts")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", f.max_iter, "iterations per restart")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", f.tol, "simplex tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "seed (falls back to QCORR_SEED, then 1)");
  cmd->add_option("--jobs", f.jobs, "worker threads")->check(CLI::PositiveNumber);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("QCORR_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      return v;
    } catch (const std::exception&) {
      throw ArgumentError(std::string("QCORR_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  return 1;
}

OptimizerConfig optimizer(const OptimizerFlags& f) {
  return OptimizerConfig{f.restarts, f.max_iter, f.tol, resolve_seed(f.seed), f.jobs};
}

json optimizer_json(const OptimizerConfig& c) {
  return {{"restarts", c.restarts}, {"max_iter", c.max_iterations}, {"tol", c.tolerance}, {"seed", c.seed}};
}

std::vector<std::string> split_labels(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  if (out.empty()) throw ArgumentError("empty label list");
  return out;
}

using Clock = std::chrono::steady_clock;

void emit(json payload, const std::string& command, json config, std::uint64_t seed, Clock::time_point start,
          const std::string& out) {
  const double wall = std::chrono::duration<double>(Clock::now() - start).count();
  payload["manifest"] = io::RunManifest{command, std::move(config), seed, QCORR_VERSION, wall}.to_json();
  const std::string text = payload.dump(2) + "\n";
  if (out.empty())
    std::cout << text;
  else
    io::write_file(out, text);
}

// measure -------------------------------------------------------------------

struct MeasureArgs {
  std::string state, measure, cut, measured, out;
  OptimizerFlags opt;
};

int run_measure(const MeasureArgs& a) {
  const auto start = Clock::now();
  const LabeledState s = io::state_from_json(io::read_file(a.state));
  json config = {{"state", a.state}, {"measure", a.measure}};
  json result = {{"measure", a.measure}};
  std::uint64_t seed = 0;

  std::optional<EntanglementMeasure> em;
  if (a.measure == "negativity") em = EntanglementMeasure::negativity;
  else if (a.measure == "log-negativity") em = EntanglementMeasure::log_negativity;
  else if (a.measure == "entropy" || a.measure == "entropy-of-entanglement")
    em = EntanglementMeasure::entropy_of_entanglement;

  if (em) {
    if (a.cut.empty()) throw ArgumentError("measure '" + a.measure + "' needs --cut");
    const BipartitionCut cut = BipartitionCut::parse(a.cut, s.reg);
    config["cut"] = a.cut;
    result["cut"] = cut.describe(s.reg);
    result["value"] = evaluate(*em, s, cut);
  } else if (a.measure == "q-negativity" || a.measure == "deficit") {
    if (a.measured.empty()) throw ArgumentError("measure '" + a.measure + "' needs --measured");
    const OptimizerConfig cfg = optimizer(a.opt);
    seed = cfg.seed;
    config["measured"] = a.measured;
    config["optimizer"] = optimizer_json(cfg);
    const auto labels = split_labels(a.measured);
    const QuantumnessReport q = a.measure == "q-negativity" ? q_negativity(s, labels, cfg) : deficit(s, labels, cfg);
    result = io::quantumness_to_json(q);
  } else {
    throw ArgumentError("unknown measure '" + a.measure +
                        "' (negativity, log-negativity, entropy, q-negativity, deficit)");
  }
  emit(std::move(result), "measure", std::move(config), seed, start, a.out);
  return 0;
}

// quantumness / classify ------------------------------------------------------

struct QuantumnessArgs {
  std::string state, measured, measure = "q-negativity", out;
  double threshold = 1e-7;
  OptimizerFlags opt;
};

int run_quantumness(const QuantumnessArgs& a) {
  const auto start = Clock::now();
  const LabeledState s = io::state_from_json(io::read_file(a.state));
  const OptimizerConfig cfg = optimizer(a.opt);
  const auto labels = split_labels(a.measured);
  QuantumnessReport q = [&] {
    if (a.measure == "q-negativity") return q_negativity(s, labels, cfg);
    if (a.measure == "deficit") return deficit(s, labels, cfg);
    throw ArgumentError("unknown quantumness measure '" + a.measure + "' (q-negativity, deficit)");
  }();
  json config = {{"state", a.state}, {"measured", a.measured}, {"measure", a.measure}, {"optimizer", optimizer_json(cfg)}};
  emit(io::quantumness_to_json(q), "quantumness", std::move(config), cfg.seed, start, a.out);
  return 0;
}

int run_classify(const QuantumnessArgs& a) {
  const auto start = Clock::now();
  const LabeledState s = io::state_from_json(io::read_file(a.state));
  const OptimizerConfig cfg = optimizer(a.opt);
  const auto labels = split_labels(a.measured);
  const CcClassification c = classify_cc(s, labels, a.threshold, cfg);
  json result = {{"cc", c.cc},
                 {"residual", c.residual},
                 {"deficit_residual", c.deficit_residual},
                 {"threshold", a.threshold},
                 {"negativity_report", io::quantumness_to_json(c.negativity_report)},
                 {"deficit_report", io::quantumness_to_json(c.deficit_report)}};
  json witness = nullptr;
  if (c.witness_bases) {
    witness = json::array();
    for (const auto& b : *c.witness_bases) witness.push_back(io::basis_to_json(b));
  }
  result["witness_bases"] = std::move(witness);
  if (s.reg.size() == 2 && labels.size() == 1) result["commutation_oracle"] = cc_commutation_oracle(s, labels.front());
  json config = {{"state", a.state}, {"measured", a.measured}, {"threshold", a.threshold}, {"optimizer", optimizer_json(cfg)}};
  emit(std::move(result), "classify", std::move(config), cfg.seed, start, a.out);
  return 0;
}

// chain ---------------------------------------------------------------------

struct ChainArgs {
  std::string config, csv, out;
  OptimizerFlags opt;
  CLI::App* cmd = nullptr;
};

int run_chain_cmd(const ChainArgs& a) {
  const auto start = Clock::now();
  const std::string base = std::filesystem::path(a.config).parent_path().string();
  ChainConfig cfg = io::chain_config_from_json(io::read_file(a.config), base.empty() ? "." : base);
  if (a.cmd->count("--restarts")) cfg.optimizer.restarts = a.opt.restarts;
  if (a.cmd->count("--max-iter")) cfg.optimizer.max_iterations = a.opt.max_iter;
  if (a.cmd->count("--tol")) cfg.optimizer.tolerance = a.opt.tol;
  if (a.opt.seed || std::getenv("QCORR_SEED")) cfg.optimizer.seed = resolve_seed(a.opt.seed);
  cfg.optimizer.jobs = a.opt.jobs;
  const ChainReport r = run_chain(cfg);
  if (!a.csv.empty()) io::write_file(a.csv, io::chain_report_to_csv(r));
  json config = {{"config", a.config}, {"optimizer", optimizer_json(cfg.optimizer)}};
  emit(io::chain_report_to_json(r), "chain", std::move(config), cfg.optimizer.seed, start, a.out);
  return r.monotone() ? 0 : 1;
}

// verify --------------------------------------------------------------------

struct VerifyArgs {
  std::string suite, csv, out;
  std::size_t samples = 0;
  OptimizerFlags opt;
};

int run_verify(const VerifyArgs& a) {
  const auto start = Clock::now();
  verify::SuiteOptions o;
  o.samples = a.samples;
  o.optimizer = optimizer(a.opt);
  o.seed = o.optimizer.seed;
  o.jobs = a.opt.jobs;
  const verify::SuiteReport r = verify::run_suite(a.suite, o);
  if (!a.csv.empty()) io::write_file(a.csv, io::suite_to_csv(r));
  json config = {{"suite", a.suite}, {"samples", r.trials()}, {"optimizer", optimizer_json(o.optimizer)}};
  emit(io::suite_summary(r), "verify", std::move(config), o.seed, start, a.out);
  return r.failures() == 0 ? 0 : 1;
}

// gen -----------------------------------------------------------------------

struct GenArgs {
  std::string kind, dims = "2,2", out;
  double p = 0.5;
  std::size_t n = 3, rank = 1;
  std::optional<std::uint64_t> seed;
};

Dims parse_dims(const std::string& s) {
  Dims d;
  for (const auto& t : split_labels(s)) {
    try {
      d.push_back(std::stoul(t));
    } catch (const std::exception&) {
      throw ArgumentError("bad dimension '" + t + "'");
    }
  }
  return d;
}

LabeledState bell_state() {
  const double h = 1.0 / std::sqrt(2.0);
  return pure_state({h, 0, 0, h}, Register::lettered({2, 2}));
}

// 1/2 (|00><00| + |1><1| (x) |+><+|)
LabeledState canonical_cc_state() {
  ComplexMatrix zero(2, 2), plus(2, 2);
  zero(0, 0) = 1.0;
  plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
  return classical_quantum_state({0.5, 0.5}, LocalBasis::computational("A", 2),
                                 {single_system(zero), single_system(plus)});
}

json chain_fixture(const std::string& initial_file, const json& links) {
  return {{"initial_file", initial_file}, {"links", links}, {"track", {"entanglement", "quantumness"}}, {"restarts", 8},
          {"seed", 1}};
}

void write_json(const std::string& path, const json& j) { io::write_file(path, j.dump(2) + "\n"); }

int run_gen(const GenArgs& a) {
  const std::uint64_t seed = resolve_seed(a.seed);
  if (a.kind == "fixtures") {
    const std::string dir = a.out.empty() ? "fixtures" : a.out;
    std::filesystem::create_directories(dir);
    write_json(dir + "/bell.json", io::state_to_json(bell_state()));
    write_json(dir + "/werner-p0.5.json", io::state_to_json(werner_state(0.5)));
    write_json(dir + "/cc.json", io::state_to_json(canonical_cc_state()));
    write_json(dir + "/ghz3.json", io::state_to_json(ghz_state(3)));
    const ComplexMatrix eye = ComplexMatrix::identity(2);
    json explicit_eye = io::matrix_to_json(eye);
    explicit_eye["basis"] = "explicit";
    json link1 = explicit_eye;
    link1["target"] = "B";
    write_json(dir + "/bell-chain.json",
               chain_fixture("bell.json", {link1, {{"basis", "flag-copy"}}, {{"basis", "flag-copy"}}}));
    ComplexMatrix mixed(2, 2);
    mixed(0, 0) = 0.75;
    mixed(1, 1) = 0.25;
    write_json(dir + "/diag-3-1.json", io::state_to_json(LabeledState(Register({"S"}, {2}), single_system(mixed))));
    json eig = explicit_eye;
    eig["target"] = "S";
    write_json(dir + "/eigenbasis-chain.json", chain_fixture("diag-3-1.json", {eig, {{"basis", "flag-copy"}}}));
    std::cout << "wrote fixtures to " << dir << "\n";
    return 0;
  }
  LabeledState s = [&]() -> LabeledState {
    if (a.kind == "bell") return bell_state();
    if (a.kind == "werner") return werner_state(a.p);
    if (a.kind == "cc") return canonical_cc_state();
    if (a.kind == "ghz") return ghz_state(a.n);
    if (a.kind == "w") return w_state(a.n);
    if (a.kind == "random-pure") return random_pure(Register::lettered(parse_dims(a.dims)), seed);
    if (a.kind == "random-mixed") return random_mixed(Register::lettered(parse_dims(a.dims)), a.rank, seed);
    throw ArgumentError("unknown kind '" + a.kind + "' (bell, werner, cc, ghz, w, random-pure, random-mixed, fixtures)");
  }();
  const std::string text = io::state_to_json(s).dump(2) + "\n";
  if (a.out.empty())
    std::cout << text;
  else
    io::write_file(a.out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcorr: quantum correlations, pre-measurements and von Neumann chains"};
  app.set_version_flag("--version", QCORR_VERSION);
  app.require_subcommand(1);

  MeasureArgs ma;
  auto* measure = app.add_subcommand("measure", "compute one measure on a state file");
  measure->add_option("--state", ma.state, "state JSON")->required();
  measure->add_option("--measure", ma.measure, "negativity|log-negativity|entropy|q-negativity|deficit")->required();
  measure->add_option("--cut", ma.cut, "bipartition, e.g. A:B or A,B:C");
  measure->add_option("--measured", ma.measured, "measured labels, e.g. A or A,B");
  measure->add_option("--out", ma.out, "report path (default stdout)");
  add_optimizer_flags(measure, ma.opt);

  QuantumnessArgs qa;
  auto* quant = app.add_subcommand("quantumness", "quantumness report with restart trace");
  quant->add_option("--state", qa.state, "state JSON")->required();
  quant->add_option("--measured", qa.measured, "measured labels")->required();
  quant->add_option("--measure", qa.measure, "q-negativity|deficit");
  quant->add_option("--out", qa.out, "report path (default stdout)");
  add_optimizer_flags(quant, qa.opt);

  QuantumnessArgs ca;
  auto* classify = app.add_subcommand("classify", "classical-correlation test");
  classify->add_option("--state", ca.state, "state JSON")->required();
  classify->add_option("--measured", ca.measured, "measured labels")->required();
  classify->add_option("--threshold", ca.threshold, "residual threshold")->check(CLI::PositiveNumber);
  classify->add_option("--out", ca.out, "report path (default stdout)");
  add_optimizer_flags(classify, ca.opt);

  ChainArgs cha;
  auto* chain = app.add_subcommand("chain", "run a von Neumann chain");
  chain->add_option("--config", cha.config, "chain config JSON")->required();
  chain->add_option("--csv", cha.csv, "per-link CSV path");
  chain->add_option("--out", cha.out, "JSON report path (default stdout)");
  add_optimizer_flags(chain, cha.opt);
  cha.cmd = chain;

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "run a property suite");
  ver->add_option("--suite", va.suite, "theorem1|theorem2|theorem3|locc-undo|chain-monotone|pure-saturation")->required();
  ver->add_option("--samples", va.samples, "trial count (default per suite)");
  ver->add_option("--csv", va.csv, "per-trial CSV path");
  ver->add_option("--out", va.out, "summary JSON path (default stdout)");
  add_optimizer_flags(ver, va.opt);

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "generate states and the shipped fixtures");
  gen->add_option("--kind", ga.kind, "bell|werner|cc|ghz|w|random-pure|random-mixed|fixtures")->required();
  gen->add_option("--p", ga.p, "Werner weight");
  gen->add_option("--n", ga.n, "subsystem count for ghz/w");
  gen->add_option("--dims", ga.dims, "dimensions for random kinds, e.g. 2,2");
  gen->add_option("--rank", ga.rank, "rank for random-mixed");
  gen->add_option("--seed", ga.seed, "seed (falls back to QCORR_SEED, then 1)");
  gen->add_option("--out", ga.out, "output file (directory for fixtures)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::usage);
  }

  try {
    if (*measure) return run_measure(ma);
    if (*quant) return run_quantumness(qa);
    if (*classify) return run_classify(ca);
    if (*chain) return run_chain_cmd(cha);
    if (*ver) return run_verify(va);
    if (*gen) return run_gen(ga);
  } catch (const Error& e) {
    std::cerr << "qcorr: " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "qcorr: " << e.what() << "\n";
    return static_cast<int>(ExitCode::failed);
  }
  return static_cast<int>(ExitCode::usage);
}
