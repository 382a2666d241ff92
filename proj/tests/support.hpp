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

#include <cmath>
#include <vector>

#include "qcorr/qcorr.hpp"

namespace support {

using namespace qcorr;

inline const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

inline LabeledState bell() { return pure_state({kInvSqrt2, 0, 0, kInvSqrt2}, Register::lettered({2, 2})); }

inline ComplexMatrix ket_projector(std::vector<cplx> v) { return ComplexMatrix::outer(v, v); }

inline ComplexMatrix pauli_x() { return ComplexMatrix(2, 2, {0, 1, 1, 0}); }
inline ComplexMatrix pauli_y() { return ComplexMatrix(2, 2, {0, cplx(0, -1), cplx(0, 1), 0}); }
inline ComplexMatrix pauli_z() { return ComplexMatrix(2, 2, {1, 0, 0, -1}); }

inline ComplexMatrix hadamard() { return ComplexMatrix(2, 2, {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2}); }

inline ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  ComplexMatrix g(n, n);
  for (auto& z : g.data()) z = rng.complex_normal();
  return (g + g.adjoint()) * cplx(0.5);
}

// 1/2 (|00><00| + |1><1| (x) |+><+|)
inline LabeledState canonical_discordant() {
  return classical_quantum_state({0.5, 0.5}, LocalBasis::computational("A", 2),
                                 {single_system(ket_projector({1, 0})),
                                  single_system(ket_projector({kInvSqrt2, kInvSqrt2}))});
}

inline LabeledState qubit(const ComplexMatrix& m, std::string label = "S") {
  return LabeledState(Register({std::move(label)}, {m.rows()}), single_system(m));
}

inline LabeledState bell_times_zero() {
  std::vector<cplx> psi(8, 0.0);
  psi[0] = kInvSqrt2;  // |000>
  psi[6] = kInvSqrt2;  // |110>
  return pure_state(psi, Register::lettered({2, 2, 2}));
}

}  // namespace support
