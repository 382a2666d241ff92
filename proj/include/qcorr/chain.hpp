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

// Von Neumann chains: S is measured by M_1, M_1 by M_2, and so on. Each link
// appends one apparatus through a pre-measurement interaction.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcorr/entanglement.hpp"
#include "qcorr/premeasure.hpp"
#include "qcorr/quantumness.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

enum class BasisPolicy {
  explicit_basis,  // basis given in the link spec
  optimized,       // argmin of q_negativity on the state before the link
  flag_copy,       // computational basis of the target (the previous record)
};

struct LinkSpec {
  std::optional<std::string> target;  // defaults to the previous apparatus
  BasisPolicy policy = BasisPolicy::flag_copy;
  std::optional<ComplexMatrix> basis;  // explicit_basis only
};

struct ChainConfig {
  LabeledState initial;
  std::vector<LinkSpec> links;
  bool track_quantumness = false;
  OptimizerConfig optimizer{8, 5000, 1e-8, 1, 1};
};

struct ChainRow {
  std::size_t link;  // 1-based
  std::string target;
  std::string apparatus;
  LocalBasis basis;
  double entanglement;                     // everything before : M_j, after link j
  std::optional<double> quantumness;       // Q^{(M_j)} upper bound, after link j
  std::optional<double> break_negativity;  // (S M_1..M_j) : (M_{j+1}..M_n) on the final state
};

inline constexpr double kChainSlack = 1e-9;

struct ChainReport {
  std::vector<ChainRow> rows;
  std::vector<LabeledState> states;  // states[0] initial, states[j] after link j

  const LabeledState& final_state() const { return states.back(); }

  // Entanglement column non-decreasing within 1e-9.
  bool monotone() const {
    for (std::size_t j = 1; j < rows.size(); ++j)
      if (rows[j].entanglement < rows[j - 1].entanglement - kChainSlack) return false;
    return true;
  }
};

// Negativity of `s` across (first `left` subsystems) : (the rest).
inline double prefix_negativity(const LabeledState& s, std::size_t left) {
  IndexSet p0, p1;
  for (std::size_t i = 0; i < s.reg.size(); ++i) (i < left ? p0 : p1).push_back(i);
  return negativity(s, BipartitionCut(p0, p1, s.reg.size()));
}

inline ChainReport run_chain(const ChainConfig& cfg) {
  if (cfg.links.empty()) throw ArgumentError("run_chain: no links");
  const std::size_t n0 = cfg.initial.reg.size();

  // resolve targets and check the dimension budget before doing any work
  std::vector<std::string> targets;
  std::size_t total = cfg.initial.reg.total_dim();
  Register reg = cfg.initial.reg;
  for (std::size_t j = 0; j < cfg.links.size(); ++j) {
    std::string t;
    if (j == 0) {
      if (!cfg.links[0].target) throw ArgumentError("run_chain: first link needs a target");
      t = *cfg.links[0].target;
      const auto k = reg.find(t);
      if (!k) throw ArgumentError("run_chain: unresolved label '" + t + "'");
      if (reg.kind(*k) != SubsystemKind::system)
        throw ArgumentError("run_chain: first link must target a system subsystem");
    } else {
      t = apparatus_label(targets.back());
      if (cfg.links[j].target && *cfg.links[j].target != t)
        throw ArgumentError("run_chain: link " + std::to_string(j + 1) + " must target the previous apparatus '" + t +
                            "', got '" + *cfg.links[j].target + "'");
    }
    const std::size_t d = reg.dim(reg.index_of(t));
    total *= d;
    if (total > kMaxTotalDim)
      throw InvariantError("run_chain: total dimension after link " + std::to_string(j + 1) + " exceeds 256");
    reg = reg.appended(apparatus_label(t), d, SubsystemKind::apparatus);
    targets.push_back(t);
  }

  ChainReport report;
  report.states.push_back(cfg.initial);
  for (std::size_t j = 0; j < cfg.links.size(); ++j) {
    const LabeledState& cur = report.states.back();
    const LinkSpec& link = cfg.links[j];
    const std::string& t = targets[j];
    const std::size_t d = cur.reg.dim(cur.reg.index_of(t));
    std::optional<LocalBasis> basis;
    switch (link.policy) {
      case BasisPolicy::explicit_basis:
        if (!link.basis) throw ArgumentError("run_chain: explicit link " + std::to_string(j + 1) + " has no basis");
        if (link.basis->rows() != d)
          throw ArgumentError("run_chain: basis dimension mismatch on link " + std::to_string(j + 1));
        basis.emplace(t, *link.basis);
        break;
      case BasisPolicy::optimized:
        basis.emplace(q_negativity(cur, {t}, cfg.optimizer).argmin_bases.front());
        break;
      case BasisPolicy::flag_copy:
        basis.emplace(LocalBasis::computational(t, d));
        break;
    }
    const MeasurementPlan plan({t}, {*basis});
    LabeledState next = premeasure(cur, plan);
    ChainRow row{j + 1, t, apparatus_label(t), *basis, prefix_negativity(next, next.reg.size() - 1), std::nullopt,
                 std::nullopt};
    if (cfg.track_quantumness) row.quantumness = q_negativity(next, {row.apparatus}, cfg.optimizer).value;
    report.rows.push_back(std::move(row));
    report.states.push_back(std::move(next));
  }
  const LabeledState& fin = report.final_state();
  for (std::size_t j = 0; j + 1 < report.rows.size(); ++j)
    report.rows[j].break_negativity = prefix_negativity(fin, n0 + j + 1);
  return report;
}

struct EigenbasisCriterion {
  bool entangling;
  double negativity;          // S : M_1 in the pre-measurement state
  double off_diagonal_mass;   // sum_{i<j} |<b_i|rho|b_j>|
};

inline constexpr double kEntanglingThreshold = 1e-9;

// The pre-measurement state of a single system is entangled iff the
// measurement basis does not diagonalize rho_S.
inline EigenbasisCriterion eigenbasis_criterion(const LabeledState& rho_s, const LocalBasis& basis) {
  if (rho_s.reg.size() != 1) throw ArgumentError("eigenbasis_criterion: single-subsystem state required");
  const MeasurementPlan plan({rho_s.reg.label(0)}, {LocalBasis(rho_s.reg.label(0), basis.vectors())});
  const double n = premeasured_negativity(rho_s, plan);
  const ComplexMatrix in_basis = basis.vectors().adjoint() * rho_s.rho.matrix() * basis.vectors();
  double off = 0.0;
  for (std::size_t i = 0; i < in_basis.rows(); ++i)
    for (std::size_t j = i + 1; j < in_basis.cols(); ++j) off += std::abs(in_basis(i, j));
  return {n > kEntanglingThreshold, n, off};
}

// min over basis vectors of (1 - max_j |<e_j|b_i>|^2), e the eigenbasis of
// `rho`; zero iff some basis vector is an eigenvector.
inline double eigenbasis_proximity(const ComplexMatrix& rho, const ComplexMatrix& basis) {
  const ComplexMatrix overlaps = hermitian_eig(rho).vectors.adjoint() * basis;
  double prox = INFINITY;
  for (std::size_t i = 0; i < basis.cols(); ++i) {
    double best = 0.0;
    for (std::size_t j = 0; j < basis.rows(); ++j) best = std::max(best, std::norm(overlaps(j, i)));
    prox = std::min(prox, 1.0 - best);
  }
  return prox;
}

inline constexpr double kGenericBasisProximity = 1e-3;

// Seeded Haar basis for `target`, resampled while it lies within 1e-3 of the
// eigenbasis of the target's reduced state.
inline LocalBasis generic_basis(const LabeledState& s, const std::string& target, std::uint64_t seed) {
  const std::size_t k = s.reg.index_of(target);
  const ComplexMatrix reduced = partial_trace(s.rho, {k}).matrix();
  SplitMix64 rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    ComplexMatrix u = random_unitary(s.reg.dim(k), rng);
    if (eigenbasis_proximity(reduced, u) >= kGenericBasisProximity) return LocalBasis(target, std::move(u));
  }
  throw InvariantError("generic_basis: no admissible basis found");
}

struct GmePropagation {
  bool initial_gme;
  std::vector<bool> gme;               // after each link
  std::vector<GmeResult> details;      // after each link
  std::vector<LabeledState> states;    // after each link
};

// Runs `links` generic links (first on `first_target`, default the last
// initial subsystem, then on successive apparatuses) and tests the full
// pure state for genuine multipartite entanglement after every link.
inline GmePropagation chain_gme_propagation(const LabeledState& initial, std::size_t links, std::uint64_t seed = 1,
                                            std::optional<std::string> first_target = std::nullopt) {
  if (initial.rho.purity() < 1.0 - detail::purity_tolerance)
    throw ArgumentError("chain_gme_propagation: mixed initial state (mixed-state GME is not supported)");
  if (initial.reg.size() + links > kMaxCutSubsystems)
    throw ArgumentError("chain_gme_propagation: at most 8 subsystems after all links");
  GmePropagation out{pure_gme_test(initial).gme, {}, {}, {}};
  LabeledState cur = initial;
  std::string target = first_target.value_or(initial.reg.label(initial.reg.size() - 1));
  for (std::size_t j = 0; j < links; ++j) {
    const LocalBasis b = generic_basis(cur, target, derive_seed(seed, j));
    cur = premeasure(cur, MeasurementPlan({target}, {b}));
    GmeResult g = pure_gme_test(cur);
    out.gme.push_back(g.gme);
    out.details.push_back(std::move(g));
    out.states.push_back(cur);
    target = apparatus_label(target);
  }
  return out;
}

}  // namespace qcorr
