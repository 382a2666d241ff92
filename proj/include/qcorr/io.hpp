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

// JSON documents shared by the library and the command-line tool.
//
// State:  {"labels": [...], "dims": [...], "kinds": [...]?, "re": [[...]], "im": [[...]]}
//         row-major matrix rows, subsystem 0 slowest-varying. "kinds" is
//         optional ("system" | "apparatus", default system).
// Basis:  {"subsystem": "A", "re": [[...]], "im": [[...]]}; the columns of
//         the matrix are the basis vectors.
// Plan:   {"measured": ["A"], "bases": [<basis>, ...]}
// Chain:  {"initial": <state> | "initial_file": "path",
//          "links": [{"target": "B"?, "basis": "explicit" | "optimized" | "flag-copy",
//                     "re": [[...]]?, "im": [[...]]?}, ...],
//          "track": ["entanglement", "quantumness"]?,
//          "restarts": 8?, "max_iter": 5000?, "tol": 1e-8?, "seed": 1?}

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcorr/chain.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/premeasure.hpp"
#include "qcorr/states.hpp"
#include "qcorr/verify.hpp"

namespace qcorr::io {

using nlohmann::json;

inline json parse_text(const std::string& text, const std::string& source = "input") {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": malformed JSON: " + e.what());
  }
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write '" + path + "'");
  out << text;
}

namespace detail {

inline const json& field(const json& j, const std::string& name, const std::string& ctx) {
  if (!j.is_object()) throw ParseError(ctx + ": expected an object");
  const auto it = j.find(name);
  if (it == j.end()) throw ParseError(ctx + ": missing field '" + name + "'");
  return *it;
}

inline std::vector<std::vector<double>> real_rows(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty()) throw ParseError("field '" + name + "' must be a nonempty array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : j) {
    if (!row.is_array() || row.empty()) throw ParseError("field '" + name + "' must contain nonempty row arrays");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw ParseError("field '" + name + "' contains a non-numeric entry");
      r.push_back(v.get<double>());
    }
    if (!rows.empty() && r.size() != rows.front().size())
      throw ParseError("field '" + name + "' has rows of different lengths");
    rows.push_back(std::move(r));
  }
  return rows;
}

inline ComplexMatrix complex_matrix(const json& j, const std::string& ctx) {
  const auto re = real_rows(field(j, "re", ctx), "re");
  std::vector<std::vector<double>> im;
  if (j.contains("im")) {
    im = real_rows(j.at("im"), "im");
  } else {
    im.assign(re.size(), std::vector<double>(re.front().size(), 0.0));
  }
  if (im.size() != re.size() || im.front().size() != re.front().size())
    throw ParseError(ctx + ": fields 're' and 'im' differ in shape");
  ComplexMatrix m(re.size(), re.front().size());
  for (std::size_t r = 0; r < re.size(); ++r)
    for (std::size_t c = 0; c < re[r].size(); ++c) m(r, c) = cplx(re[r][c], im[r][c]);
  return m;
}

}  // namespace detail

inline json matrix_to_json(const ComplexMatrix& m) {
  json re = json::array(), im = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json rr = json::array(), ii = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  return {{"re", std::move(re)}, {"im", std::move(im)}};
}

inline json state_to_json(const LabeledState& s) {
  json j = matrix_to_json(s.rho.matrix());
  j["labels"] = s.reg.labels();
  j["dims"] = s.reg.dims();
  json kinds = json::array();
  for (auto k : s.reg.kinds()) kinds.push_back(k == SubsystemKind::system ? "system" : "apparatus");
  j["kinds"] = std::move(kinds);
  return j;
}

// Throws ParseError for structural problems and InvariantError if the
// operator is not a valid state.
inline LabeledState state_from_json(const json& j) {
  const std::string ctx = "state";
  const json& labels = detail::field(j, "labels", ctx);
  const json& dims = detail::field(j, "dims", ctx);
  if (!labels.is_array() || labels.empty()) throw ParseError("state: field 'labels' must be a nonempty array");
  if (!dims.is_array() || dims.size() != labels.size())
    throw ParseError("state: field 'dims' must be an array as long as 'labels'");
  std::vector<std::string> l;
  for (const auto& v : labels) {
    if (!v.is_string()) throw ParseError("state: field 'labels' must contain strings");
    l.push_back(v.get<std::string>());
  }
  Dims d;
  for (const auto& v : dims) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 2)
      throw ParseError("state: field 'dims' must contain integers >= 2");
    d.push_back(v.get<std::size_t>());
  }
  std::vector<SubsystemKind> kinds;
  if (j.contains("kinds")) {
    if (!j["kinds"].is_array() || j["kinds"].size() != l.size())
      throw ParseError("state: field 'kinds' must be an array as long as 'labels'");
    for (const auto& v : j["kinds"]) {
      if (v == "system") kinds.push_back(SubsystemKind::system);
      else if (v == "apparatus") kinds.push_back(SubsystemKind::apparatus);
      else throw ParseError("state: field 'kinds' entries must be \"system\" or \"apparatus\"");
    }
  }
  ComplexMatrix m = detail::complex_matrix(j, ctx);
  std::size_t total = 1;
  for (auto x : d) total *= x;
  if (total > kMaxTotalDim) throw InvariantError("state: total dimension exceeds 256");
  if (!m.is_square() || m.rows() != total)
    throw ParseError("state: fields 're'/'im' must be a square matrix of size prod(dims)");
  Register reg = [&] {
    try {
      return Register(l, d, kinds);
    } catch (const ArgumentError& e) {
      throw ParseError(std::string("state: ") + e.what());
    }
  }();
  return LabeledState(std::move(reg), DensityOperator::validated(std::move(m), d));
}

inline json basis_to_json(const LocalBasis& b) {
  json j = matrix_to_json(b.vectors());
  j["subsystem"] = b.subsystem();
  return j;
}

inline LocalBasis basis_from_json(const json& j) {
  const json& sub = detail::field(j, "subsystem", "basis");
  if (!sub.is_string()) throw ParseError("basis: field 'subsystem' must be a string");
  ComplexMatrix m = detail::complex_matrix(j, "basis");
  if (!m.is_square()) throw ParseError("basis: fields 're'/'im' must be square");
  try {
    return LocalBasis(sub.get<std::string>(), std::move(m));
  } catch (const ArgumentError& e) {
    throw InvariantError(std::string("basis: ") + e.what());
  }
}

inline json plan_to_json(const MeasurementPlan& p) {
  json bases = json::array();
  for (const auto& b : p.bases) bases.push_back(basis_to_json(b));
  return {{"measured", p.measured}, {"bases", std::move(bases)}};
}

inline MeasurementPlan plan_from_json(const json& j) {
  const json& measured = detail::field(j, "measured", "plan");
  const json& bases = detail::field(j, "bases", "plan");
  if (!measured.is_array() || !bases.is_array()) throw ParseError("plan: 'measured' and 'bases' must be arrays");
  std::vector<std::string> labels;
  for (const auto& v : measured) {
    if (!v.is_string()) throw ParseError("plan: field 'measured' must contain strings");
    labels.push_back(v.get<std::string>());
  }
  std::vector<LocalBasis> b;
  for (const auto& v : bases) b.push_back(basis_from_json(v));
  try {
    return MeasurementPlan(std::move(labels), std::move(b));
  } catch (const ArgumentError& e) {
    throw ParseError(std::string("plan: ") + e.what());
  }
}

inline ChainConfig chain_config_from_json(const json& j, const std::string& base_dir = ".") {
  if (!j.is_object()) throw ParseError("chain: expected an object");
  std::optional<LabeledState> initial;
  if (j.contains("initial")) {
    initial.emplace(state_from_json(j["initial"]));
  } else if (j.contains("initial_file")) {
    if (!j["initial_file"].is_string()) throw ParseError("chain: field 'initial_file' must be a string");
    std::string path = j["initial_file"].get<std::string>();
    if (!path.empty() && path.front() != '/') path = base_dir + "/" + path;
    initial.emplace(state_from_json(read_file(path)));
  } else {
    throw ParseError("chain: missing field 'initial' (or 'initial_file')");
  }
  ChainConfig cfg{*initial, {}, false, OptimizerConfig{8, 5000, 1e-8, 1, 1}};
  const json& links = detail::field(j, "links", "chain");
  if (!links.is_array() || links.empty()) throw ParseError("chain: field 'links' must be a nonempty array");
  for (const auto& l : links) {
    LinkSpec spec;
    if (l.contains("target")) {
      if (!l["target"].is_string()) throw ParseError("chain: link field 'target' must be a string");
      spec.target = l["target"].get<std::string>();
    }
    const json& policy = detail::field(l, "basis", "chain link");
    if (policy == "explicit") {
      spec.policy = BasisPolicy::explicit_basis;
      spec.basis = detail::complex_matrix(l, "chain link");
    } else if (policy == "optimized") {
      spec.policy = BasisPolicy::optimized;
    } else if (policy == "flag-copy") {
      spec.policy = BasisPolicy::flag_copy;
    } else {
      throw ParseError("chain: link field 'basis' must be \"explicit\", \"optimized\" or \"flag-copy\"");
    }
    cfg.links.push_back(std::move(spec));
  }
  if (j.contains("track")) {
    if (!j["track"].is_array()) throw ParseError("chain: field 'track' must be an array");
    for (const auto& t : j["track"]) {
      if (t == "quantumness") cfg.track_quantumness = true;
      else if (t != "entanglement") throw ParseError("chain: unknown entry in field 'track'");
    }
  }
  auto number = [&](const char* name, auto& dst) {
    if (!j.contains(name)) return;
    if (!j[name].is_number()) throw ParseError(std::string("chain: field '") + name + "' must be a number");
    dst = j[name].get<std::remove_reference_t<decltype(dst)>>();
  };
  number("restarts", cfg.optimizer.restarts);
  number("max_iter", cfg.optimizer.max_iterations);
  number("tol", cfg.optimizer.tolerance);
  number("seed", cfg.optimizer.seed);
  return cfg;
}

inline std::string policy_name(BasisPolicy p) {
  switch (p) {
    case BasisPolicy::explicit_basis: return "explicit";
    case BasisPolicy::optimized: return "optimized";
    case BasisPolicy::flag_copy: return "flag-copy";
  }
  return "?";
}

inline json quantumness_to_json(const QuantumnessReport& q) {
  json bases = json::array();
  for (const auto& b : q.argmin_bases) bases.push_back(basis_to_json(b));
  return {{"value", q.value},
          {"measure", to_string(q.measure)},
          {"measured", q.measured_set},
          {"upper_bound", true},
          {"argmin_bases", std::move(bases)},
          {"restart_values", q.restart_values},
          {"argmin_restart", q.argmin_restart},
          {"converged", q.converged}};
}

// %.17g, the CSV number format.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json chain_report_to_json(const ChainReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json jr = {{"link", row.link},
               {"target", row.target},
               {"apparatus", row.apparatus},
               {"entanglement", row.entanglement},
               {"basis", basis_to_json(row.basis)}};
    jr["quantumness_upper_bound"] = row.quantumness ? json(*row.quantumness) : json(nullptr);
    jr["break_negativity"] = row.break_negativity ? json(*row.break_negativity) : json(nullptr);
    rows.push_back(std::move(jr));
  }
  return {{"rows", std::move(rows)}, {"monotone", r.monotone()}};
}

// Columns: link,target,apparatus,entanglement,quantumness_upper_bound,break_negativity
inline std::string chain_report_to_csv(const ChainReport& r) {
  std::string out = "link,target,apparatus,entanglement,quantumness_upper_bound,break_negativity\n";
  for (const auto& row : r.rows) {
    out += std::to_string(row.link) + "," + row.target + "," + row.apparatus + "," + fmt17(row.entanglement) + "," +
           (row.quantumness ? fmt17(*row.quantumness) : "") + "," +
           (row.break_negativity ? fmt17(*row.break_negativity) : "") + "\n";
  }
  return out;
}

// Columns: trial,family,passed,margin,<check>... (check margins in row order)
inline std::string suite_to_csv(const verify::SuiteReport& r) {
  std::string out = "trial,family,passed,margin";
  if (!r.rows.empty())
    for (const auto& c : r.rows.front().checks) out += "," + c.name;
  out += "\n";
  for (const auto& row : r.rows) {
    out += std::to_string(row.trial) + "," + row.family + "," + (row.passed() ? "1" : "0") + "," + fmt17(row.margin());
    for (const auto& c : row.checks) out += "," + fmt17(c.margin);
    out += "\n";
  }
  return out;
}

inline json suite_summary(const verify::SuiteReport& r) {
  json checks = json::object();
  if (!r.rows.empty())
    for (const auto& c : r.rows.front().checks) checks[c.name] = {{"worst_margin", r.worst(c.name)}, {"tolerance", c.tolerance}};
  json failed = json::array();
  for (const auto& row : r.rows)
    if (!row.passed()) failed.push_back(row.trial);
  return {{"suite", r.suite},
          {"trials", r.trials()},
          {"failures", r.failures()},
          {"worst_margin", r.worst_margin()},
          {"checks", std::move(checks)},
          {"failed_trials", std::move(failed)}};
}

// Embedded in every report. Reruns with the same manifest reproduce the
// payload bit for bit; only wall_time differs.
struct RunManifest {
  std::string command;
  json config;
  std::uint64_t seed;
  std::string version;
  double wall_time;  // seconds

  json to_json() const {
    return {{"command", command}, {"config", config}, {"seed", seed}, {"version", version}, {"wall_time", wall_time}};
  }
};

}  // namespace qcorr::io
