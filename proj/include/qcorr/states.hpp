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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcorr/linalg.hpp"
#include "qcorr/local_basis.hpp"
#include "qcorr/rng.hpp"

namespace qcorr {

inline constexpr std::size_t kMaxTotalDim = 256;

enum class SubsystemKind { system, apparatus };

// Ordered subsystem labels and dimensions. Apparatus subsystems are always
// appended after the systems they measure.
class Register {
 public:
  Register(std::vector<std::string> labels, Dims dims, std::vector<SubsystemKind> kinds = {})
      : labels_(std::move(labels)), dims_(std::move(dims)), kinds_(std::move(kinds)) {
    if (kinds_.empty()) kinds_.assign(labels_.size(), SubsystemKind::system);
    if (labels_.empty()) throw ArgumentError("Register: no subsystems");
    if (labels_.size() != dims_.size() || labels_.size() != kinds_.size())
      throw ArgumentError("Register: labels, dims and kinds differ in length");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i].empty()) throw ArgumentError("Register: empty label");
      if (dims_[i] < 2) throw ArgumentError("Register: subsystem '" + labels_[i] + "' has dimension < 2");
      for (std::size_t j = 0; j < i; ++j)
        if (labels_[j] == labels_[i]) throw ArgumentError("Register: duplicate label '" + labels_[i] + "'");
    }
  }

  // Labels "A", "B", ... with the given dimensions.
  static Register lettered(const Dims& dims) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < dims.size(); ++i) labels.push_back(std::string(1, static_cast<char>('A' + i)));
    return Register(std::move(labels), dims);
  }

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const Dims& dims() const noexcept { return dims_; }
  const std::vector<SubsystemKind>& kinds() const noexcept { return kinds_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  std::size_t dim(std::size_t i) const { return dims_.at(i); }
  SubsystemKind kind(std::size_t i) const { return kinds_.at(i); }
  std::size_t total_dim() const { return detail::product(dims_); }

  std::optional<std::size_t> find(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
  }

  std::size_t index_of(const std::string& label) const {
    if (auto i = find(label)) return *i;
    throw ArgumentError("unknown subsystem label '" + label + "'");
  }

  Register appended(std::string label, std::size_t dim, SubsystemKind kind) const {
    Register r = *this;
    r.labels_.push_back(std::move(label));
    r.dims_.push_back(dim);
    r.kinds_.push_back(kind);
    return Register(std::move(r.labels_), std::move(r.dims_), std::move(r.kinds_));
  }

  Register without(std::size_t index) const {
    if (size() < 2) throw ArgumentError("Register: cannot remove the only subsystem");
    Register r = *this;
    r.labels_.erase(r.labels_.begin() + static_cast<std::ptrdiff_t>(index));
    r.dims_.erase(r.dims_.begin() + static_cast<std::ptrdiff_t>(index));
    r.kinds_.erase(r.kinds_.begin() + static_cast<std::ptrdiff_t>(index));
    return r;
  }

  Register permuted(const IndexSet& order) const {
    std::vector<std::string> l;
    Dims d;
    std::vector<SubsystemKind> k;
    for (std::size_t i : order) {
      l.push_back(labels_.at(i));
      d.push_back(dims_.at(i));
      k.push_back(kinds_.at(i));
    }
    return Register(std::move(l), std::move(d), std::move(k));
  }

  friend bool operator==(const Register&, const Register&) = default;

 private:
  std::vector<std::string> labels_;
  Dims dims_;
  std::vector<SubsystemKind> kinds_;
};

struct LabeledState {
  LabeledState(Register reg, DensityOperator state) : reg(std::move(reg)), rho(std::move(state)) {
    if (this->reg.total_dim() != rho.dim())
      throw ArgumentError("LabeledState: register dimension does not match the operator");
    if (this->reg.dims() != rho.dims()) rho = DensityOperator(rho.matrix(), this->reg.dims());
  }

  // Full invariant check (Hermitian, unit trace, PSD).
  void validate() const { rho.validate(); }

  Register reg;
  DensityOperator rho;
};

inline constexpr const char* apparatus_prefix = "M:";

inline std::string apparatus_label(const std::string& measured) { return apparatus_prefix + measured; }

inline std::vector<cplx> normalized(std::vector<cplx> v) {
  double n2 = 0.0;
  for (const auto& z : v) n2 += std::norm(z);
  if (n2 == 0.0) throw ArgumentError("state vector is zero");
  const double n = std::sqrt(n2);
  for (auto& z : v) z /= n;
  return v;
}

// |psi><psi|. The norm must be 1 within 1e-6; vectors off by more than
// 1e-12 are renormalized.
inline LabeledState pure_state(std::vector<cplx> amplitudes, const Register& reg) {
  if (amplitudes.size() != reg.total_dim())
    throw ArgumentError("pure_state: amplitude count does not match register dimension");
  double n2 = 0.0;
  for (const auto& z : amplitudes) n2 += std::norm(z);
  if (n2 == 0.0) throw ArgumentError("pure_state: zero vector");
  const double n = std::sqrt(n2);
  if (std::abs(n - 1.0) > 1e-6) throw ArgumentError("pure_state: vector norm deviates from 1 by more than 1e-6");
  if (std::abs(n - 1.0) > tol::structural) amplitudes = normalized(std::move(amplitudes));
  return LabeledState(reg, DensityOperator(ComplexMatrix::outer(amplitudes, amplitudes), reg.dims()));
}

// rho = sum_i p_i |b_i><b_i| (x) rho_i, classical on the first subsystem in
// `basis`. The remaining subsystems take their dimensions from the
// conditionals (which must agree) and labels from `rest_labels`, or "B",
// "C", ... skipping the measured label when none are given.
inline LabeledState classical_quantum_state(const std::vector<double>& probs, const LocalBasis& basis,
                                            const std::vector<DensityOperator>& conditionals,
                                            std::vector<std::string> rest_labels = {}) {
  const std::size_t d = basis.dim();
  if (probs.size() != d) throw ArgumentError("classical_quantum_state: need one probability per basis vector");
  if (conditionals.size() != d)
    throw ArgumentError("classical_quantum_state: need one conditional state per basis vector");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw ArgumentError("classical_quantum_state: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > tol::structural)
    throw ArgumentError("classical_quantum_state: probabilities do not sum to 1");
  const Dims rest_dims = conditionals.front().dims();
  for (const auto& c : conditionals) {
    if (c.dims() != rest_dims) throw ArgumentError("classical_quantum_state: conditionals differ in dimensions");
    try {
      c.validate();
    } catch (const InvariantError& e) {
      throw ArgumentError(std::string("classical_quantum_state: invalid conditional: ") + e.what());
    }
  }
  if (rest_labels.empty()) {
    char next = 'A';
    while (rest_labels.size() < rest_dims.size()) {
      std::string l(1, next++);
      if (l != basis.subsystem()) rest_labels.push_back(l);
    }
  }
  std::vector<std::string> labels{basis.subsystem()};
  labels.insert(labels.end(), rest_labels.begin(), rest_labels.end());
  Dims dims{d};
  dims.insert(dims.end(), rest_dims.begin(), rest_dims.end());
  Register reg(std::move(labels), dims);

  ComplexMatrix m(reg.total_dim(), reg.total_dim());
  for (std::size_t i = 0; i < d; ++i) {
    if (probs[i] == 0.0) continue;
    const auto b = basis.vector(i);
    m += probs[i] * kron(ComplexMatrix::outer(b, b), conditionals[i].matrix());
  }
  return LabeledState(std::move(reg), DensityOperator(std::move(m), dims));
}

// p |Psi-><Psi-| + (1-p) I/4 on qubits A, B.
inline LabeledState werner_state(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("werner_state: p must lie in [0, 1]");
  const double h = 1.0 / std::sqrt(2.0);
  const std::vector<cplx> singlet{0.0, h, -h, 0.0};
  ComplexMatrix m = p * ComplexMatrix::outer(singlet, singlet);
  const ComplexMatrix mixed = ComplexMatrix::identity(4) * cplx((1.0 - p) / 4.0);
  m += mixed;
  return LabeledState(Register::lettered({2, 2}), DensityOperator(std::move(m), {2, 2}));
}

// sum_k |k...k> / sqrt(d) on n qudits; (|0...0> + |1...1>)/sqrt(2) for d=2.
inline LabeledState ghz_state(std::size_t n, std::size_t d = 2) {
  if (n < 2) throw ArgumentError("ghz_state: need n >= 2");
  if (d < 2) throw ArgumentError("ghz_state: need d >= 2");
  const Register reg = Register::lettered(Dims(n, d));
  if (reg.total_dim() > kMaxTotalDim) throw InvariantError("ghz_state: total dimension exceeds 256");
  std::vector<cplx> psi(reg.total_dim(), 0.0);
  std::size_t diag_step = 0;
  for (std::size_t k = 0; k < n; ++k) diag_step = diag_step * d + 1;
  for (std::size_t k = 0; k < d; ++k) psi[k * diag_step] = 1.0 / std::sqrt(static_cast<double>(d));
  return pure_state(std::move(psi), reg);
}

// Symmetric single-excitation state on n qubits.
inline LabeledState w_state(std::size_t n) {
  if (n < 2) throw ArgumentError("w_state: need n >= 2");
  const Register reg = Register::lettered(Dims(n, 2));
  if (reg.total_dim() > kMaxTotalDim) throw InvariantError("w_state: total dimension exceeds 256");
  std::vector<cplx> psi(reg.total_dim(), 0.0);
  for (std::size_t k = 0; k < n; ++k) psi[std::size_t{1} << (n - 1 - k)] = 1.0 / std::sqrt(static_cast<double>(n));
  return pure_state(std::move(psi), reg);
}

// Haar-distributed pure state, deterministic per seed.
inline LabeledState random_pure(const Register& reg, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<cplx> psi(reg.total_dim());
  for (auto& z : psi) z = rng.complex_normal();
  return pure_state(normalized(std::move(psi)), reg);
}

// G G^dagger / Tr(G G^dagger) with G a complex Ginibre D x rank matrix.
inline LabeledState random_mixed(const Register& reg, std::size_t rank, std::uint64_t seed) {
  const std::size_t d = reg.total_dim();
  if (rank < 1 || rank > d) throw ArgumentError("random_mixed: rank must lie in [1, total dimension]");
  SplitMix64 rng(seed);
  ComplexMatrix g(d, rank);
  for (auto& z : g.data()) z = rng.complex_normal();
  ComplexMatrix m = g * g.adjoint();
  const double tr = m.trace().real();
  m *= cplx(1.0 / tr);
  return LabeledState(reg, DensityOperator(detail::hermitized(m), reg.dims()));
}

inline LocalBasis random_basis(std::string subsystem, std::size_t d, SplitMix64& rng) {
  return LocalBasis(std::move(subsystem), random_unitary(d, rng));
}

inline LabeledState permute_subsystems(const LabeledState& s, const IndexSet& order) {
  return LabeledState(s.reg.permuted(order), permute_subsystems(s.rho, order));
}

// Reduced state with register bookkeeping; kept subsystems in ascending order.
inline LabeledState reduce(const LabeledState& s, IndexSet keep) {
  std::sort(keep.begin(), keep.end());
  std::vector<std::string> l;
  Dims d;
  std::vector<SubsystemKind> k;
  for (std::size_t i : keep) {
    l.push_back(s.reg.label(i));
    d.push_back(s.reg.dim(i));
    k.push_back(s.reg.kind(i));
  }
  return LabeledState(Register(std::move(l), std::move(d), std::move(k)), partial_trace(s.rho, keep));
}

inline LabeledState tensor(const LabeledState& a, const LabeledState& b) {
  std::vector<std::string> l = a.reg.labels();
  l.insert(l.end(), b.reg.labels().begin(), b.reg.labels().end());
  Dims d = a.reg.dims();
  d.insert(d.end(), b.reg.dims().begin(), b.reg.dims().end());
  std::vector<SubsystemKind> k = a.reg.kinds();
  k.insert(k.end(), b.reg.kinds().begin(), b.reg.kinds().end());
  Register reg(std::move(l), d, std::move(k));
  return LabeledState(std::move(reg), DensityOperator(kron(a.rho.matrix(), b.rho.matrix()), d));
}

}  // namespace qcorr
