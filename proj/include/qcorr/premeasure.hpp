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

// Measurement interactions and pre-measurement states.
//
// Measuring subsystem S_k in the basis {|b_i>} couples a fresh apparatus
// M_k (dimension d_k, initial state |0>) through the isometry
//   V |b_i>_{S_k} = |b_i>_{S_k} |i>_{M_k}.
// The full interaction unitary is never formed. Internally V is applied as
// B * C * B^dagger, where B rotates the plan basis onto the computational
// basis and C is the computational-basis copy |x> -> |x>|x_k>.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qcorr/linalg.hpp"
#include "qcorr/local_basis.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

struct MeasurementPlan {
  MeasurementPlan() = default;
  MeasurementPlan(std::vector<std::string> labels, std::vector<LocalBasis> basis_list)
      : measured(std::move(labels)), bases(std::move(basis_list)) {
    if (measured.size() != bases.size()) throw ArgumentError("MeasurementPlan: need one basis per measured label");
    for (std::size_t i = 0; i < measured.size(); ++i) {
      if (bases[i].subsystem() != measured[i])
        throw ArgumentError("MeasurementPlan: basis for '" + bases[i].subsystem() + "' listed under '" +
                            measured[i] + "'");
      for (std::size_t j = 0; j < i; ++j)
        if (measured[j] == measured[i]) throw ArgumentError("MeasurementPlan: '" + measured[i] + "' measured twice");
    }
  }

  explicit MeasurementPlan(std::vector<LocalBasis> basis_list) {
    for (auto& b : basis_list) measured.push_back(b.subsystem());
    *this = MeasurementPlan(std::move(measured), std::move(basis_list));
  }

  static MeasurementPlan computational(const Register& reg, const std::vector<std::string>& labels) {
    std::vector<LocalBasis> b;
    for (const auto& l : labels) b.push_back(LocalBasis::computational(l, reg.dim(reg.index_of(l))));
    return MeasurementPlan(labels, std::move(b));
  }

  const LocalBasis& basis_for(const std::string& label) const {
    for (std::size_t i = 0; i < measured.size(); ++i)
      if (measured[i] == label) return bases[i];
    throw ArgumentError("MeasurementPlan: no basis for '" + label + "'");
  }

  // Register indices of the measured subsystems; throws on mismatch.
  IndexSet resolve(const Register& reg) const {
    IndexSet idx;
    for (std::size_t i = 0; i < measured.size(); ++i) {
      const auto k = reg.find(measured[i]);
      if (!k) throw ArgumentError("plan/register mismatch: no subsystem '" + measured[i] + "'");
      if (reg.dim(*k) != bases[i].dim())
        throw ArgumentError("plan/register mismatch: basis dimension differs for '" + measured[i] + "'");
      idx.push_back(*k);
    }
    return idx;
  }

  std::vector<std::string> measured;
  std::vector<LocalBasis> bases;
};

// d^2 x d isometry with V|b_i> = |b_i>|i>; row index is j * d + m for
// system digit j and apparatus digit m.
inline ComplexMatrix measurement_isometry(const LocalBasis& basis) {
  const std::size_t d = basis.dim();
  const ComplexMatrix& b = basis.vectors();
  ComplexMatrix v(d * d, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t m = 0; m < d; ++m)
      for (std::size_t i = 0; i < d; ++i) v(j * d + m, i) = b(j, m) * std::conj(b(i, m));
  return v;
}

namespace detail {

// C rho C^dagger for the copy isometry |x> -> |x>|x_k>, apparatus appended.
inline ComplexMatrix copy_digit(const ComplexMatrix& m, const Dims& dims, std::size_t k) {
  const std::size_t n = m.rows();
  const std::size_t d = dims[k];
  const std::size_t st = strides(dims)[k];
  ComplexMatrix out(n * d, n * d);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t rr = r * d + (r / st) % d;
    for (std::size_t c = 0; c < n; ++c) out(rr, c * d + (c / st) % d) = m(r, c);
  }
  return out;
}

// C^dagger rho C: inverse of copy_digit on its image; the apparatus is the
// last subsystem of `dims`.
inline ComplexMatrix uncopy_digit(const ComplexMatrix& m, const Dims& dims_without_apparatus, std::size_t k) {
  const std::size_t d = dims_without_apparatus[k];
  const std::size_t n = m.rows() / d;
  const std::size_t st = strides(dims_without_apparatus)[k];
  ComplexMatrix out(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t rr = r * d + (r / st) % d;
    for (std::size_t c = 0; c < n; ++c) out(r, c) = m(rr, c * d + (c / st) % d);
  }
  return out;
}

// V rho V^dagger on subsystem k with the apparatus appended last.
inline ComplexMatrix premeasure_one(const ComplexMatrix& m, const Dims& dims, std::size_t k, const ComplexMatrix& basis) {
  const ComplexMatrix rotated = apply_local(m, dims, k, basis.adjoint());
  Dims nd = dims;
  nd.push_back(dims[k]);
  return apply_local(copy_digit(rotated, dims, k), nd, k, basis);
}

// Pinching in `basis` on subsystem k, left in the rotated frame when
// `rotate_back` is false (entropy evaluations are frame independent).
inline ComplexMatrix dephase_one(const ComplexMatrix& m, const Dims& dims, std::size_t k, const ComplexMatrix& basis,
                                 bool rotate_back = true) {
  ComplexMatrix rotated = apply_local(m, dims, k, basis.adjoint());
  const std::size_t n = m.rows();
  const std::size_t d = dims[k];
  const std::size_t st = strides(dims)[k];
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if ((r / st) % d != (c / st) % d) rotated(r, c) = 0.0;
  return rotate_back ? apply_local(rotated, dims, k, basis) : rotated;
}

}  // namespace detail

// Pre-measurement state on S_U + M_I. Apparatus "M:<label>" is appended per
// measured label, in plan order.
inline LabeledState premeasure(const LabeledState& state, const MeasurementPlan& plan) {
  const IndexSet idx = plan.resolve(state.reg);
  std::size_t total = state.reg.total_dim();
  for (std::size_t k : idx) total *= state.reg.dim(k);
  if (total > kMaxTotalDim)
    throw InvariantError("premeasure: total dimension " + std::to_string(total) + " exceeds 256");
  Register reg = state.reg;
  ComplexMatrix m = state.rho.matrix();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const std::string al = apparatus_label(plan.measured[i]);
    if (reg.find(al)) throw ArgumentError("premeasure: apparatus '" + al + "' already present");
    m = detail::premeasure_one(m, reg.dims(), idx[i], plan.bases[i].vectors());
    reg = reg.appended(al, reg.dim(idx[i]), SubsystemKind::apparatus);
  }
  return LabeledState(reg, DensityOperator(std::move(m), reg.dims()));
}

// Pinching channel sum_i P_i rho P_i on every measured subsystem.
inline LabeledState dephase(const LabeledState& state, const MeasurementPlan& plan) {
  const IndexSet idx = plan.resolve(state.reg);
  ComplexMatrix m = state.rho.matrix();
  for (std::size_t i = 0; i < idx.size(); ++i)
    m = detail::dephase_one(m, state.reg.dims(), idx[i], plan.bases[i].vectors());
  return LabeledState(state.reg, DensityOperator(std::move(m), state.reg.dims()));
}

namespace detail {

inline constexpr double image_tolerance = 1e-8;

// V^dagger rho V for one (system, apparatus) pair, apparatus removed.
inline LabeledState undo_one(const LabeledState& s, const std::string& label, const LocalBasis& basis) {
  const std::size_t k = s.reg.index_of(label);
  const auto a = s.reg.find(apparatus_label(label));
  if (!a) throw ArgumentError("undo_interaction: no apparatus '" + apparatus_label(label) + "'");
  if (s.reg.dim(*a) != s.reg.dim(k) || basis.dim() != s.reg.dim(k))
    throw ArgumentError("undo_interaction: apparatus dimension differs from '" + label + "'");

  IndexSet order;
  for (std::size_t i = 0; i < s.reg.size(); ++i)
    if (i != *a) order.push_back(i);
  order.push_back(*a);
  const LabeledState moved = permute_subsystems(s, order);
  const Register rest = moved.reg.without(moved.reg.size() - 1);
  const std::size_t kk = rest.index_of(label);

  const ComplexMatrix rotated = apply_local(moved.rho.matrix(), moved.reg.dims(), kk, basis.vectors().adjoint());
  ComplexMatrix out = uncopy_digit(rotated, rest.dims(), kk);
  const double residual = s.rho.matrix().trace().real() - out.trace().real();
  if (residual > image_tolerance)
    throw InvariantError("undo_interaction: state is not in the image of the measurement isometry for '" + label +
                         "' (residual weight " + std::to_string(residual) + ")");
  out = apply_local(out, rest.dims(), kk, basis.vectors());
  return LabeledState(rest, DensityOperator(std::move(out), rest.dims()));
}

}  // namespace detail

// V^dagger rho~ V for every measured pair in reverse plan order; the
// apparatus subsystems are removed from the register.
inline LabeledState undo_interaction(const LabeledState& premeasured, const MeasurementPlan& plan) {
  LabeledState s = premeasured;
  for (std::size_t i = plan.measured.size(); i-- > 0;) s = detail::undo_one(s, plan.measured[i], plan.bases[i]);
  return s;
}

}  // namespace qcorr
