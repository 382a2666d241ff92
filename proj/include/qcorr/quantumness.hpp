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

// Quantumness of correlations: the minimum, over local measurement bases on
// a subset I of subsystems, of the entanglement between the whole register
// and the apparatuses in the pre-measurement state. The entropic variant
// minimizes the entropy increase under local dephasing.
//
// All values are optimizer results and therefore upper bounds on the true
// minimum.

#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcorr/entanglement.hpp"
#include "qcorr/linalg.hpp"
#include "qcorr/local_basis.hpp"
#include "qcorr/optimize.hpp"
#include "qcorr/premeasure.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

// Hermitian operator basis of d x d matrices, d^2 elements with
// Tr(G_a G_b) = delta_ab / 2, in the order:
//   identity / sqrt(2d),
//   symmetric   (|j><k| + |k><j|) / 2       for j < k,
//   antisymmetric (-i|j><k| + i|k><j|) / 2  for j < k,
//   diagonal    generalized Gell-Mann / 2   for l = 1 .. d-1.
// For d = 2 this is (I/2, X/2, Y/2, Z/2).
inline std::vector<ComplexMatrix> hermitian_operator_basis(std::size_t d) {
  std::vector<ComplexMatrix> g;
  g.push_back(ComplexMatrix::identity(d) * cplx(1.0 / std::sqrt(2.0 * static_cast<double>(d))));
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j + 1; k < d; ++k) {
      ComplexMatrix s(d, d);
      s(j, k) = s(k, j) = 0.5;
      g.push_back(std::move(s));
    }
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j + 1; k < d; ++k) {
      ComplexMatrix a(d, d);
      a(j, k) = cplx(0.0, -0.5);
      a(k, j) = cplx(0.0, 0.5);
      g.push_back(std::move(a));
    }
  for (std::size_t l = 1; l < d; ++l) {
    ComplexMatrix z(d, d);
    const double c = 0.5 * std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    for (std::size_t i = 0; i < l; ++i) z(i, i) = c;
    z(l, l) = -c * static_cast<double>(l);
    g.push_back(std::move(z));
  }
  return g;
}

// U = exp(-i sum_m params[m] G_m); the columns of U are the basis vectors.
inline LocalBasis decode_basis(std::span<const double> params, std::size_t d, std::string subsystem = "") {
  if (d < 1) throw ArgumentError("decode_basis: dimension must be positive");
  if (params.size() != d * d) throw ArgumentError("decode_basis: expected d^2 parameters");
  const auto g = hermitian_operator_basis(d);
  ComplexMatrix h(d, d);
  for (std::size_t m = 0; m < g.size(); ++m)
    if (params[m] != 0.0) h += g[m] * cplx(params[m]);
  return LocalBasis(std::move(subsystem), unitary_exp(h));
}

enum class QuantumnessMeasure { negativity_of_quantumness, one_way_deficit, two_way_deficit };

inline std::string to_string(QuantumnessMeasure m) {
  switch (m) {
    case QuantumnessMeasure::negativity_of_quantumness: return "negativity_of_quantumness";
    case QuantumnessMeasure::one_way_deficit: return "one_way_deficit";
    case QuantumnessMeasure::two_way_deficit: return "two_way_deficit";
  }
  return "?";
}

struct QuantumnessReport {
  double value;  // upper bound on the minimum
  QuantumnessMeasure measure;
  std::vector<std::string> measured_set;
  std::vector<LocalBasis> argmin_bases;
  std::vector<double> restart_values;
  std::size_t argmin_restart;
  bool converged;
};

namespace detail {

struct MeasuredSet {
  IndexSet indices;
  std::vector<std::size_t> offsets;  // parameter offset per measured subsystem
  std::size_t nparams = 0;
};

inline MeasuredSet resolve_measured(const LabeledState& s, const std::vector<std::string>& labels) {
  if (labels.empty()) throw ArgumentError("measured set I must be nonempty");
  MeasuredSet m;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::size_t k = s.reg.index_of(labels[i]);
    for (std::size_t j = 0; j < i; ++j)
      if (labels[j] == labels[i]) throw ArgumentError("measured set lists '" + labels[i] + "' twice");
    m.indices.push_back(k);
    m.offsets.push_back(m.nparams);
    m.nparams += s.reg.dim(k) * s.reg.dim(k);
  }
  return m;
}

inline std::vector<LocalBasis> decode_all(std::span<const double> p, const LabeledState& s, const MeasuredSet& m) {
  std::vector<LocalBasis> b;
  for (std::size_t i = 0; i < m.indices.size(); ++i) {
    const std::size_t d = s.reg.dim(m.indices[i]);
    b.push_back(decode_basis(p.subspan(m.offsets[i], d * d), d, s.reg.label(m.indices[i])));
  }
  return b;
}

inline QuantumnessReport make_report(const MultiStartResult& r, QuantumnessMeasure measure,
                                     const std::vector<std::string>& labels, const LabeledState& s,
                                     const MeasuredSet& m) {
  QuantumnessReport q{r.value,
                      measure,
                      labels,
                      decode_all(r.x, s, m),
                      r.restart_values,
                      r.best_restart,
                      static_cast<bool>(r.restart_converged[r.best_restart])};
  if (q.value < 0.0 && q.value >= -tol::reconstruction) q.value = 0.0;
  return q;
}

}  // namespace detail

// Negativity across S_U : M_I of the pre-measurement state for one choice of
// bases (the objective minimized by q_negativity).
inline double premeasured_negativity(const LabeledState& s, const MeasurementPlan& plan) {
  const LabeledState pm = premeasure(s, plan);
  IndexSet apparatus;
  for (std::size_t i = s.reg.size(); i < pm.reg.size(); ++i) apparatus.push_back(i);
  IndexSet system;
  for (std::size_t i = 0; i < s.reg.size(); ++i) system.push_back(i);
  return negativity(pm, BipartitionCut(system, apparatus, pm.reg.size()));
}

// Negativity of quantumness Q_N^{(I)}: min over bases for the subsystems in
// `measured` (optimized jointly) of N_{S_U : M_I}(pre-measurement state).
inline QuantumnessReport q_negativity(const LabeledState& s, const std::vector<std::string>& measured,
                                      const OptimizerConfig& cfg = {}) {
  const auto m = detail::resolve_measured(s, measured);
  std::size_t total = s.reg.total_dim();
  for (std::size_t k : m.indices) total *= s.reg.dim(k);
  if (total > kMaxTotalDim) throw InvariantError("q_negativity: pre-measurement dimension exceeds 256");

  const std::size_t n = s.reg.size();
  IndexSet apparatus;
  for (std::size_t i = 0; i < m.indices.size(); ++i) apparatus.push_back(n + i);

  auto objective = [&](const std::vector<double>& p) {
    ComplexMatrix rho = s.rho.matrix();
    Dims dims = s.reg.dims();
    for (std::size_t i = 0; i < m.indices.size(); ++i) {
      const std::size_t k = m.indices[i];
      const std::size_t d = dims[k];
      const LocalBasis b = decode_basis(std::span<const double>(p).subspan(m.offsets[i], d * d), d);
      rho = detail::premeasure_one(rho, dims, k, b.vectors());
      dims.push_back(d);
    }
    return detail::negativity(rho, dims, apparatus);
  };
  const auto r = multistart_minimize(objective, m.nparams, cfg);
  return detail::make_report(r, QuantumnessMeasure::negativity_of_quantumness, measured, s, m);
}

// Entropic quantumness: min over bases of S(Pi(rho)) - S(rho), with Pi the
// product-basis dephasing on I. One-way deficit when I is a proper subset of
// the register, two-way deficit (relative entropy of quantumness) when I
// covers every subsystem.
inline QuantumnessReport deficit(const LabeledState& s, const std::vector<std::string>& measured,
                                 const OptimizerConfig& cfg = {}) {
  const auto m = detail::resolve_measured(s, measured);
  const double s0 = von_neumann_entropy(s.rho);
  auto objective = [&](const std::vector<double>& p) {
    ComplexMatrix rho = s.rho.matrix();
    for (std::size_t i = 0; i < m.indices.size(); ++i) {
      const std::size_t k = m.indices[i];
      const std::size_t d = s.reg.dim(k);
      const LocalBasis b = decode_basis(std::span<const double>(p).subspan(m.offsets[i], d * d), d);
      rho = detail::dephase_one(rho, s.reg.dims(), k, b.vectors(), false);
    }
    auto ev = detail::eigenvalues_unchecked(rho);
    for (double& l : ev)
      if (l < 0.0 && l >= -tol::spectral) l = 0.0;
    return spectral_entropy(ev) - s0;
  };
  const auto r = multistart_minimize(objective, m.nparams, cfg);
  const bool two_way = m.indices.size() == s.reg.size();
  return detail::make_report(r, two_way ? QuantumnessMeasure::two_way_deficit : QuantumnessMeasure::one_way_deficit,
                             measured, s, m);
}

struct CcClassification {
  bool cc;
  std::optional<std::vector<LocalBasis>> witness_bases;
  double residual;          // negativity of quantumness
  double deficit_residual;  // entropic quantumness
  QuantumnessReport negativity_report;
  QuantumnessReport deficit_report;
};

// I-CC iff some local bases leave the pre-measurement state unentangled
// across S_U : M_I; decided by both optimized residuals falling below the
// threshold. Witness bases come from the negativity argmin.
inline CcClassification classify_cc(const LabeledState& s, const std::vector<std::string>& measured,
                                    double threshold = 1e-7, const OptimizerConfig& cfg = {}) {
  if (!(threshold > 0.0)) throw ArgumentError("classify_cc: threshold must be positive");
  auto qn = q_negativity(s, measured, cfg);
  auto qd = deficit(s, measured, cfg);
  const bool cc = qn.value < threshold && qd.value < threshold;
  CcClassification out{cc, std::nullopt, qn.value, qd.value, qn, qd};
  if (cc) out.witness_bases = qn.argmin_bases;
  return out;
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

inline constexpr double kCommutatorTolerance = 1e-9;

// Bipartite test of classicality on `measured`: rho is classical on A iff
// the operators Tr_B[(I_A (x) X_m) rho] over a Hermitian basis {X_m} of B
// commute pairwise. Independent of the optimizers; used as a cross-check.
inline bool cc_commutation_oracle(const LabeledState& s, const std::string& measured) {
  if (s.reg.size() != 2) throw ArgumentError("cc_commutation_oracle: bipartite register required");
  const std::size_t a = s.reg.index_of(measured);
  const LabeledState st = a == 0 ? s : permute_subsystems(s, {1, 0});
  const std::size_t da = st.reg.dim(0), db = st.reg.dim(1);
  const ComplexMatrix& rho = st.rho.matrix();
  std::vector<ComplexMatrix> cond;
  for (const auto& x : hermitian_operator_basis(db)) {
    ComplexMatrix o(da, da);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < da; ++j) {
        cplx v = 0.0;
        for (std::size_t b = 0; b < db; ++b)
          for (std::size_t bp = 0; bp < db; ++bp) v += rho(i * db + b, j * db + bp) * x(bp, b);
        o(i, j) = v;
      }
    cond.push_back(std::move(o));
  }
  for (std::size_t i = 0; i < cond.size(); ++i)
    for (std::size_t j = i + 1; j < cond.size(); ++j)
      if (commutator(cond[i], cond[j]).max_abs() > kCommutatorTolerance) return false;
  return true;
}

}  // namespace qcorr
