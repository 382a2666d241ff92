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

// Entanglement monotones on bipartitions of a register, the multipartite
// min/max measures over all non-trivial cuts, and the pure-state genuine
// multipartite entanglement test.
//
// A zero negativity certifies separability only for 2x2 and 2x3 systems;
// beyond that, PPT entangled states exist and negativity is a witness only.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qcorr/linalg.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

inline constexpr std::size_t kMaxCutSubsystems = 8;

// Two-block partition {p0, p1} of register indices, both sorted ascending.
class BipartitionCut {
 public:
  BipartitionCut(IndexSet p0, IndexSet p1, std::size_t n) : p0_(std::move(p0)), p1_(std::move(p1)) {
    std::sort(p0_.begin(), p0_.end());
    std::sort(p1_.begin(), p1_.end());
    if (p0_.empty() || p1_.empty()) throw ArgumentError("BipartitionCut: both blocks must be nonempty");
    if (p0_.size() + p1_.size() != n) throw ArgumentError("BipartitionCut: blocks must cover the register");
    std::vector<bool> seen(n, false);
    for (const IndexSet* blk : {&p0_, &p1_})
      for (std::size_t i : *blk) {
        if (i >= n) throw ArgumentError("BipartitionCut: index out of range");
        if (seen[i]) throw ArgumentError("BipartitionCut: blocks overlap");
        seen[i] = true;
      }
  }

  // p1 is the complement of p0 in {0..n-1}.
  static BipartitionCut from_p0(const IndexSet& p0, std::size_t n) {
    IndexSet p1;
    for (std::size_t i = 0; i < n; ++i)
      if (std::find(p0.begin(), p0.end(), i) == p0.end()) p1.push_back(i);
    return BipartitionCut(p0, p1, n);
  }

  // "A,B:C" style, labels resolved against the register. A single side
  // ("A") takes the complement as the other block.
  static BipartitionCut parse(const std::string& spec, const Register& reg) {
    auto split = [](const std::string& s, char sep) {
      std::vector<std::string> out;
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
      return out;
    };
    const auto colon = spec.find(':');
    // apparatus labels contain ':' themselves ("M:A"); split on the first
    // ':' that is not part of a known label
    std::size_t pos = std::string::npos;
    for (std::size_t i = 0; i < spec.size(); ++i) {
      if (spec[i] != ':') continue;
      const auto left = split(spec.substr(0, i), ',');
      const auto right = split(spec.substr(i + 1), ',');
      bool ok = !left.empty() && !right.empty();
      for (const auto& l : left) ok = ok && reg.find(l).has_value();
      for (const auto& r : right) ok = ok && reg.find(r).has_value();
      if (ok) {
        pos = i;
        break;
      }
    }
    IndexSet p0, p1;
    if (pos == std::string::npos) {
      if (colon != std::string::npos && !reg.find(spec)) throw ArgumentError("cannot parse cut '" + spec + "'");
      for (const auto& l : split(spec, ',')) p0.push_back(reg.index_of(l));
      return from_p0(p0, reg.size());
    }
    for (const auto& l : split(spec.substr(0, pos), ',')) p0.push_back(reg.index_of(l));
    for (const auto& l : split(spec.substr(pos + 1), ',')) p1.push_back(reg.index_of(l));
    return BipartitionCut(p0, p1, reg.size());
  }

  const IndexSet& p0() const noexcept { return p0_; }
  const IndexSet& p1() const noexcept { return p1_; }
  std::size_t size() const noexcept { return p0_.size() + p1_.size(); }

  // Bit i set iff index i lies in p1.
  std::uint64_t p1_mask() const noexcept {
    std::uint64_t m = 0;
    for (std::size_t i : p1_) m |= std::uint64_t{1} << i;
    return m;
  }

  std::string describe(const Register& reg) const {
    std::string s;
    for (std::size_t i = 0; i < p0_.size(); ++i) s += (i ? "," : "") + reg.label(p0_[i]);
    s += ":";
    for (std::size_t i = 0; i < p1_.size(); ++i) s += (i ? "," : "") + reg.label(p1_[i]);
    return s;
  }

  friend bool operator==(const BipartitionCut&, const BipartitionCut&) = default;

 private:
  IndexSet p0_, p1_;
};

// All 2^{n-1} - 1 non-trivial cuts with index 0 in p0, ordered by p1 mask.
inline std::vector<BipartitionCut> enumerate_cuts(std::size_t n) {
  if (n < 2) throw ArgumentError("enumerate_cuts: need at least two subsystems");
  if (n > kMaxCutSubsystems) throw ArgumentError("enumerate_cuts: at most 8 subsystems");
  std::vector<BipartitionCut> cuts;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
    IndexSet p0{0}, p1;
    for (std::size_t i = 1; i < n; ++i) ((mask >> (i - 1)) & 1 ? p1 : p0).push_back(i);
    cuts.emplace_back(p0, p1, n);
  }
  return cuts;
}

enum class EntanglementMeasure { negativity, log_negativity, entropy_of_entanglement };

inline std::string to_string(EntanglementMeasure m) {
  switch (m) {
    case EntanglementMeasure::negativity: return "negativity";
    case EntanglementMeasure::log_negativity: return "log_negativity";
    case EntanglementMeasure::entropy_of_entanglement: return "entropy_of_entanglement";
  }
  return "?";
}

struct EntanglementValue {
  EntanglementMeasure measure;
  BipartitionCut cut;
  double value;
};

namespace detail {

inline double clamp_nonnegative(double v, double tolerance = tol::spectral) {
  return (v < 0.0 && v >= -tolerance) ? 0.0 : v;
}

// |sum of negative eigenvalues| of rho^{T_subset}.
inline double negativity(const ComplexMatrix& m, const Dims& dims, const IndexSet& transposed) {
  return negative_part(eigenvalues_unchecked(partial_transpose(m, dims, transposed)));
}

inline void require_cut(const BipartitionCut& cut, const LabeledState& s) {
  if (cut.size() != s.reg.size()) throw ArgumentError("cut does not match the register");
}

inline constexpr double purity_tolerance = 1e-8;

inline void require_pure(const LabeledState& s, const char* what) {
  if (s.rho.purity() < 1.0 - purity_tolerance)
    throw ArgumentError(std::string(what) + ": state is not pure");
}

}  // namespace detail

// (||rho^{T_p1}||_1 - 1) / 2.
inline double negativity(const LabeledState& s, const BipartitionCut& cut) {
  detail::require_cut(cut, s);
  return detail::negativity(s.rho.matrix(), s.rho.dims(), cut.p1());
}

// log2 ||rho^{T_p1}||_1.
inline double log_negativity(const LabeledState& s, const BipartitionCut& cut) {
  return std::log2(2.0 * negativity(s, cut) + 1.0);
}

// Entropy (bits) of the reduced state on p0; pure states only.
inline double entropy_of_entanglement(const LabeledState& s, const BipartitionCut& cut) {
  detail::require_cut(cut, s);
  detail::require_pure(s, "entropy_of_entanglement");
  return std::max(0.0, von_neumann_entropy(partial_trace(s.rho, cut.p0())));
}

inline double evaluate(EntanglementMeasure m, const LabeledState& s, const BipartitionCut& cut) {
  switch (m) {
    case EntanglementMeasure::negativity: return negativity(s, cut);
    case EntanglementMeasure::log_negativity: return log_negativity(s, cut);
    case EntanglementMeasure::entropy_of_entanglement: return entropy_of_entanglement(s, cut);
  }
  throw ArgumentError("unknown entanglement measure");
}

struct MinMaxEntanglement {
  double emin;
  double emax;
  BipartitionCut argmin;
  BipartitionCut argmax;
};

// Earliest cut in enumeration order wins ties.
inline MinMaxEntanglement e_min_max(const LabeledState& s, EntanglementMeasure m) {
  if (s.reg.size() > kMaxCutSubsystems) throw ArgumentError("e_min_max: at most 8 subsystems");
  const auto cuts = enumerate_cuts(s.reg.size());
  std::size_t imin = 0, imax = 0;
  std::vector<double> v(cuts.size());
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    v[i] = evaluate(m, s, cuts[i]);
    if (v[i] < v[imin]) imin = i;
    if (v[i] > v[imax]) imax = i;
  }
  return {v[imin], v[imax], cuts[imin], cuts[imax]};
}

struct GmeResult {
  bool gme;
  std::optional<BipartitionCut> witness;  // a product cut when !gme
  double min_purity_deficit;              // min over cuts of 1 - Tr(rho_p0^2)
};

// Pure state is GME iff every non-trivial cut has reduced purity below
// 1 - 1e-8.
inline GmeResult pure_gme_test(const LabeledState& s) {
  detail::require_pure(s, "pure_gme_test");
  if (s.reg.size() > kMaxCutSubsystems) throw ArgumentError("pure_gme_test: at most 8 subsystems");
  GmeResult r{true, std::nullopt, INFINITY};
  for (const auto& cut : enumerate_cuts(s.reg.size())) {
    const double deficit = 1.0 - partial_trace(s.rho, cut.p0()).purity();
    r.min_purity_deficit = std::min(r.min_purity_deficit, deficit);
    if (deficit <= detail::purity_tolerance && r.gme) {
      r.gme = false;
      r.witness = cut;
    }
  }
  return r;
}

}  // namespace qcorr
