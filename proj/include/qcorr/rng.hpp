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
#include <cstdint>
#include <numbers>
#include <utility>

#include "qcorr/linalg.hpp"

namespace qcorr {

// SplitMix64 (Steele, Lea, Flood 2014) in counter form: the n-th output is
// mix(seed + n * kGamma), so a stream is fully determined by its seed and
// position. Constants:
//   kGamma = 0x9E3779B97F4A7C15 (2^64 / golden ratio, odd)
//   mix:   z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//          z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31
// Uniform doubles take the top 53 bits. Gaussians use Box-Muller on two
// consecutive uniforms.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() noexcept {
    state_ += kGamma;
    return mix(state_);
  }

  // [0, 1)
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::pair<double, double> normal_pair() noexcept {
    const double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

  double normal() noexcept { return normal_pair().first; }

  // Circular complex Gaussian with E|z|^2 = 1.
  cplx complex_normal() noexcept {
    const auto [a, b] = normal_pair();
    return {a * std::numbers::sqrt2 / 2.0, b * std::numbers::sqrt2 / 2.0};
  }

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

// Per-task seed for parallel sampling: seed XOR mix(task + kGamma).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t task) noexcept {
  return seed ^ SplitMix64::mix(task + SplitMix64::kGamma);
}

// Haar-random d x d unitary: Gram-Schmidt on a complex Ginibre matrix.
inline ComplexMatrix random_unitary(std::size_t d, SplitMix64& rng) {
  ComplexMatrix u(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) u(r, c) = rng.complex_normal();
  for (std::size_t c = 0; c < d; ++c) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t p = 0; p < c; ++p) {
        cplx ov = 0.0;
        for (std::size_t r = 0; r < d; ++r) ov += std::conj(u(r, p)) * u(r, c);
        for (std::size_t r = 0; r < d; ++r) u(r, c) -= ov * u(r, p);
      }
    double nrm = 0.0;
    for (std::size_t r = 0; r < d; ++r) nrm += std::norm(u(r, c));
    nrm = std::sqrt(nrm);
    for (std::size_t r = 0; r < d; ++r) u(r, c) /= nrm;
  }
  return u;
}

}  // namespace qcorr
