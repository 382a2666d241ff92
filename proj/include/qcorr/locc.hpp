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

// The LOCC channel (with respect to the S_U : M_I cut) that turns a
// pre-measurement state back into the original state, with the measured
// subsystem's content moved onto its apparatus:
//   1. rotate the plan basis onto the computational basis of A and apply
//      the Fourier transform |i> -> d^{-1/2} sum_k e^{2 pi i ik/d} |k>;
//   2. measure A in {|k>} (all d branches are kept and weighted);
//   3. on outcome k apply U_k = sum_i e^{-2 pi i ik/d} |i><i| to M;
//   4. rotate M by the plan basis, so M holds exactly what A held.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qcorr/entanglement.hpp"
#include "qcorr/linalg.hpp"
#include "qcorr/premeasure.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

// F[k][i] = e^{2 pi i ik/d} / sqrt(d).
inline ComplexMatrix fourier_unitary(std::size_t d) {
  if (d < 2) throw ArgumentError("fourier_unitary: need d >= 2");
  ComplexMatrix f(d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < d; ++i)
      f(k, i) = std::polar(norm, 2.0 * std::numbers::pi * static_cast<double>((i * k) % d) / static_cast<double>(d));
  return f;
}

// U_k = sum_i e^{-2 pi i ik/d} |i><i|.
inline ComplexMatrix correction_unitary(std::size_t k, std::size_t d) {
  if (d < 2) throw ArgumentError("correction_unitary: need d >= 2");
  if (k >= d) throw ArgumentError("correction_unitary: outcome k out of range");
  ComplexMatrix u(d, d);
  for (std::size_t i = 0; i < d; ++i)
    u(i, i) = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>((i * k) % d) / static_cast<double>(d));
  return u;
}

enum class CutSide { system, apparatus };

// One operation applied by the protocol; each acts on a single subsystem and
// so factorizes across the S_U : M_I cut. `conditioned` marks operations
// chosen by the classical outcome record.
struct LoccOperation {
  std::string name;
  std::string subsystem;
  CutSide side;
  bool conditioned;
};

struct LoccTranscript {
  std::string subsystem;
  std::string apparatus;
  std::vector<double> outcome_probabilities;
  std::vector<ComplexMatrix> corrections;
  std::vector<DensityOperator> conditional_outputs;  // normalized, per outcome
  std::vector<LoccOperation> operations;
  LabeledState output;
};

namespace detail {

// <k|_A rho |k>_A on subsystem `k_index`, which is removed.
inline ComplexMatrix project_digit(const ComplexMatrix& m, const Dims& dims, std::size_t k_index, std::size_t outcome) {
  const std::size_t d = dims[k_index];
  const std::size_t st = strides(dims)[k_index];
  const std::size_t n = m.rows() / d;
  std::vector<std::size_t> full(n);
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t lo = x % st, hi = x / st;
    full[x] = hi * d * st + outcome * st + lo;
  }
  ComplexMatrix out(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out(r, c) = m(full[r], full[c]);
  return out;
}

}  // namespace detail

// Runs the protocol on one (subsystem, apparatus) pair of a pre-measurement
// state produced with `plan`. Throws InvariantError if the input is not in
// the image of the plan's measurement isometry for that pair.
inline LoccTranscript locc_undo(const LabeledState& premeasured, const MeasurementPlan& plan,
                                const std::string& subsystem) {
  const LocalBasis& basis = plan.basis_for(subsystem);
  detail::undo_one(premeasured, subsystem, basis);  // image check

  const std::string app = apparatus_label(subsystem);
  const std::size_t k = premeasured.reg.index_of(subsystem);
  const std::size_t a = premeasured.reg.index_of(app);
  const std::size_t d = premeasured.reg.dim(k);
  const Dims& dims = premeasured.reg.dims();
  const ComplexMatrix& b = basis.vectors();

  LoccTranscript t{subsystem, app, {}, {}, {}, {}, premeasured};
  t.operations.push_back({"basis rotation then Fourier transform", subsystem, CutSide::system, false});
  t.operations.push_back({"computational-basis measurement", subsystem, CutSide::system, false});
  t.operations.push_back({"phase correction U_k", app, CutSide::apparatus, true});
  t.operations.push_back({"plan-basis rotation", app, CutSide::apparatus, false});

  const ComplexMatrix rotated = detail::apply_local(premeasured.rho.matrix(), dims, k, fourier_unitary(d) * b.adjoint());
  const Register rest = premeasured.reg.without(k);
  const std::size_t a_rest = a > k ? a - 1 : a;

  ComplexMatrix total(rest.total_dim(), rest.total_dim());
  for (std::size_t outcome = 0; outcome < d; ++outcome) {
    ComplexMatrix branch = detail::project_digit(rotated, dims, k, outcome);
    const double p = branch.trace().real();
    const ComplexMatrix u = correction_unitary(outcome, d);
    t.outcome_probabilities.push_back(p);
    t.corrections.push_back(u);
    branch = detail::apply_local(branch, rest.dims(), a_rest, u);
    branch = detail::apply_local(branch, rest.dims(), a_rest, b);
    total += branch;
    if (p > 0.0) branch *= cplx(1.0 / p);
    t.conditional_outputs.emplace_back(std::move(branch), rest.dims());
  }
  t.output = LabeledState(rest, DensityOperator(std::move(total), rest.dims()));
  return t;
}

// The original state with each subsystem in `labels` moved to the end (in
// the given order) and renamed to its apparatus label.
inline LabeledState transfer_to_apparatus(const LabeledState& original, const std::vector<std::string>& labels) {
  IndexSet moved;
  for (const auto& l : labels) moved.push_back(original.reg.index_of(l));
  IndexSet order;
  for (std::size_t i = 0; i < original.reg.size(); ++i)
    if (std::find(moved.begin(), moved.end(), i) == moved.end()) order.push_back(i);
  order.insert(order.end(), moved.begin(), moved.end());
  LabeledState p = permute_subsystems(original, order);
  std::vector<std::string> names = p.reg.labels();
  std::vector<SubsystemKind> kinds = p.reg.kinds();
  for (std::size_t j = 0; j < labels.size(); ++j) {
    const std::size_t pos = order.size() - labels.size() + j;
    names[pos] = apparatus_label(labels[j]);
    kinds[pos] = SubsystemKind::apparatus;
  }
  return LabeledState(Register(std::move(names), p.reg.dims(), std::move(kinds)), p.rho);
}

// From a pre-measurement state on S_U M_I to the original state with S_K
// shared on the apparatus side, K a subset of I: pairs in K go through
// locc_undo, pairs in I \ K are undone by the inverse interaction. `order`
// fixes the sequence in which pairs are processed (plan order if empty).
inline LabeledState locc_transfer(const LabeledState& premeasured, const MeasurementPlan& plan,
                                  const std::vector<std::string>& transferred,
                                  std::vector<std::string> order = {}) {
  for (const auto& l : transferred) plan.basis_for(l);
  if (order.empty()) order = plan.measured;
  if (order.size() != plan.measured.size()) throw ArgumentError("locc_transfer: order must list every measured label");
  LabeledState s = premeasured;
  for (const auto& l : order) {
    const bool transfer = std::find(transferred.begin(), transferred.end(), l) != transferred.end();
    s = transfer ? locc_undo(s, plan, l).output : detail::undo_one(s, l, plan.basis_for(l));
  }
  return s;
}

struct MonotonicityStep {
  double lhs;  // negativity of the pre-measurement state across AB : M
  double rhs;  // negativity of the channel output across M : B
  bool holds;  // lhs >= rhs - 1e-9
};

inline constexpr double kMonotonicitySlack = 1e-9;

// Per-basis form of Q >= E on a bipartite state with one measured subsystem.
inline MonotonicityStep verify_monotonicity_step(const LabeledState& state, const MeasurementPlan& plan) {
  if (state.reg.size() != 2) throw ArgumentError("verify_monotonicity_step: bipartite state required");
  if (plan.measured.size() != 1) throw ArgumentError("verify_monotonicity_step: exactly one measured subsystem");
  const LabeledState pm = premeasure(state, plan);
  const double lhs = negativity(pm, BipartitionCut({0, 1}, {2}, 3));
  const LoccTranscript t = locc_undo(pm, plan, plan.measured.front());
  const double rhs = negativity(t.output, BipartitionCut({0}, {1}, 2));
  return {lhs, rhs, lhs >= rhs - kMonotonicitySlack};
}

}  // namespace qcorr
