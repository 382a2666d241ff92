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

#include <string>
#include <utility>
#include <vector>

#include "qcorr/linalg.hpp"

namespace qcorr {

// Orthonormal basis of one subsystem; column i of `vectors` is |b_i>. A basis
// defines a complete von Neumann measurement on that subsystem.
class LocalBasis {
 public:
  LocalBasis(std::string subsystem, ComplexMatrix vectors)
      : subsystem_(std::move(subsystem)), vectors_(std::move(vectors)) {
    if (!vectors_.is_square()) throw ArgumentError("LocalBasis: vector matrix must be square");
    if (unitarity_defect(vectors_) > tol::spectral)
      throw ArgumentError("LocalBasis: vectors for '" + subsystem_ + "' are not orthonormal");
  }

  static LocalBasis computational(std::string subsystem, std::size_t d) {
    return LocalBasis(std::move(subsystem), ComplexMatrix::identity(d));
  }

  const std::string& subsystem() const noexcept { return subsystem_; }
  const ComplexMatrix& vectors() const noexcept { return vectors_; }
  std::size_t dim() const noexcept { return vectors_.rows(); }
  std::vector<cplx> vector(std::size_t i) const { return vectors_.column(i); }

 private:
  std::string subsystem_;
  ComplexMatrix vectors_;
};

}  // namespace qcorr
