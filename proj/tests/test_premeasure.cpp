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

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "support.hpp"

using namespace qcorr;
using namespace support;
using Catch::Matchers::WithinAbs;

namespace {

LocalBasis basis_from_seed(const std::string& label, std::size_t d, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return random_basis(label, d, rng);
}

// Sum_i <b_i|rho|b_i> |b_i><b_i| on one system.
ComplexMatrix pinched(const ComplexMatrix& rho, const LocalBasis& b) {
  ComplexMatrix out(rho.rows(), rho.cols());
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const auto v = b.vector(i);
    const auto p = ComplexMatrix::outer(v, v);
    out += p * rho * p;
  }
  return out;
}

}  // namespace

TEST_CASE("local basis validation") {
  CHECK_THROWS_AS(LocalBasis("A", ComplexMatrix(2, 2, {1, 1, 0, 1})), ArgumentError);
  CHECK_THROWS_AS(LocalBasis("A", ComplexMatrix(2, 3)), ArgumentError);
  CHECK_NOTHROW(LocalBasis("A", hadamard()));
}

TEST_CASE("measurement isometry") {
  const ComplexMatrix v = measurement_isometry(LocalBasis::computational("A", 2));
  REQUIRE(v.rows() == 4);
  REQUIRE(v.cols() == 2);
  CHECK(v(0, 0) == cplx(1.0));  // |0> -> |00>
  CHECK(v(3, 1) == cplx(1.0));  // |1> -> |11>
  CHECK(std::abs(v(1, 0)) + std::abs(v(2, 0)) + std::abs(v(3, 0)) == 0.0);

  for (std::uint64_t s = 0; s < 10; ++s) {
    const std::size_t d = 2 + s % 3;
    const LocalBasis b = basis_from_seed("A", d, s);
    const ComplexMatrix w = measurement_isometry(b);
    CHECK(max_abs_diff(w.adjoint() * w, ComplexMatrix::identity(d)) <= 1e-12);
    // V|b_i> = |b_i>|i>
    for (std::size_t i = 0; i < d; ++i) {
      const auto out = w * std::span<const cplx>(b.vector(i));
      for (std::size_t r = 0; r < d * d; ++r) {
        const cplx expect = (r % d == i) ? b.vector(i)[r / d] : cplx(0.0);
        CHECK(std::abs(out[r] - expect) <= 1e-12);
      }
    }
    const ComplexMatrix rho = random_mixed(Register::lettered({d}), d, s).rho.matrix();
    const ComplexMatrix big = w * rho * w.adjoint();
    CHECK(max_abs_diff(oracle::partial_trace(big, {d, d}, {0}), pinched(rho, b)) <= 1e-12);
  }
}

TEST_CASE("pre-measurement state") {
  SECTION("Bell state measured on A gives GHZ on A, B, M:A") {
    const auto pm = premeasure(bell(), MeasurementPlan::computational(bell().reg, {"A"}));
    CHECK(pm.reg.labels() == std::vector<std::string>{"A", "B", "M:A"});
    CHECK(pm.reg.kind(2) == SubsystemKind::apparatus);
    CHECK(max_abs_diff(pm.rho.matrix(), ghz_state(3).rho.matrix()) <= 1e-15);
    const auto back = undo_interaction(pm, MeasurementPlan::computational(bell().reg, {"A"}));
    CHECK(back.reg == bell().reg);
    CHECK(trace_distance(back.rho, bell().rho) <= 1e-12);
  }

  SECTION("classical qubit measured in its eigenbasis") {
    const double p[] = {0.3, 0.7};
    const auto s = qubit(ComplexMatrix::diagonal(p));
    const auto pm = premeasure(s, MeasurementPlan::computational(s.reg, {"S"}));
    const double expect[] = {0.3, 0, 0, 0.7};
    CHECK(max_abs_diff(pm.rho.matrix(), ComplexMatrix::diagonal(expect)) <= 1e-15);
    CHECK(negativity(pm, BipartitionCut({0}, {1}, 2)) <= 1e-12);
  }

  SECTION("agrees with the projector construction and dephasing") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const std::size_t da = 2 + s % 2;
      const Register reg({"A", "B"}, {da, 2});
      const auto st = random_mixed(reg, 1 + s % 4, s);
      const LocalBasis b = basis_from_seed("A", da, 1000 + s);
      const MeasurementPlan plan({"A"}, {b});
      const auto pm = premeasure(st, plan);
      CHECK(max_abs_diff(pm.rho.matrix(), oracle::premeasure_first(st.rho.matrix(), {da, 2}, b.vectors())) <= 1e-12);
      const auto traced = partial_trace(pm.rho, {0, 1});
      CHECK(trace_distance(traced, dephase(st, plan).rho) <= 1e-12);
    }
  }

  SECTION("pure inputs stay pure") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto st = random_pure(Register::lettered({2, 3}), s);
      const MeasurementPlan plan({"B", "A"}, {basis_from_seed("B", 3, s), basis_from_seed("A", 2, s + 50)});
      const auto pm = premeasure(st, plan);
      CHECK(pm.reg.labels() == std::vector<std::string>{"A", "B", "M:B", "M:A"});
      CHECK_THAT(pm.rho.purity(), WithinAbs(1.0, 1e-10));
    }
  }

  SECTION("plan validation") {
    CHECK_THROWS_AS(premeasure(bell(), MeasurementPlan::computational(Register::lettered({2, 2, 2}), {"C"})),
                    ArgumentError);
    CHECK_THROWS_AS(premeasure(bell(), MeasurementPlan({"A"}, {LocalBasis::computational("A", 3)})), ArgumentError);
    CHECK_THROWS_AS(MeasurementPlan({"A", "A"}, {LocalBasis::computational("A", 2), LocalBasis::computational("A", 2)}),
                    ArgumentError);
    CHECK_THROWS_AS(MeasurementPlan({"A"}, {LocalBasis::computational("B", 2)}), ArgumentError);
    CHECK_THROWS_AS(premeasure(ghz_state(8), MeasurementPlan::computational(ghz_state(8).reg, {"A"})), InvariantError);
    const auto pm = premeasure(bell(), MeasurementPlan::computational(bell().reg, {"A"}));
    CHECK_THROWS_AS(premeasure(pm, MeasurementPlan::computational(pm.reg, {"A"})), ArgumentError);
    // apparatuses can be measured
    CHECK_NOTHROW(premeasure(pm, MeasurementPlan::computational(pm.reg, {"M:A"})));
  }
}

TEST_CASE("theorem-one forward direction: CC states are not entangled with the apparatus") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    SplitMix64 rng(s);
    const LocalBasis b = random_basis("A", 2, rng);
    const auto c0 = random_mixed(Register::lettered({2}), 2, rng.next()).rho;
    const auto c1 = random_mixed(Register::lettered({2}), 1, rng.next()).rho;
    const double p = rng.uniform();
    const auto cq = classical_quantum_state({p, 1 - p}, b, {c0, c1});
    const auto pm = premeasure(cq, MeasurementPlan({"A"}, {b}));
    CHECK(negativity(pm, BipartitionCut({0, 1}, {2}, 3)) <= 1e-10);
  }
}

TEST_CASE("basis relabeling leaves the pre-measured negativity unchanged") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto st = random_mixed(Register::lettered({3, 2}), 2, s);
    const LocalBasis b = basis_from_seed("A", 3, s + 7);
    ComplexMatrix shuffled(3, 3);
    const std::size_t perm[] = {2, 0, 1};
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t r = 0; r < 3; ++r)
        shuffled(r, c) = b.vectors()(r, perm[c]) * std::polar(1.0, 0.7 * static_cast<double>(c + s));
    const double n1 = premeasured_negativity(st, MeasurementPlan({"A"}, {b}));
    const double n2 = premeasured_negativity(st, MeasurementPlan({"A"}, {LocalBasis("A", shuffled)}));
    CHECK_THAT(n1, WithinAbs(n2, 1e-10));
  }
}

TEST_CASE("pre-measurement commutes with unitaries on unmeasured subsystems") {
  SplitMix64 rng(99);
  for (int t = 0; t < 10; ++t) {
    const auto st = random_mixed(Register::lettered({2, 3}), 3, rng.next());
    const MeasurementPlan plan({"A"}, {random_basis("A", 2, rng)});
    const ComplexMatrix u = random_unitary(3, rng);
    const auto moved = LabeledState(st.reg, DensityOperator(detail::apply_local(st.rho.matrix(), st.reg.dims(), 1, u), st.reg.dims()));
    const auto lhs = premeasure(moved, plan);
    const auto rhs = premeasure(st, plan);
    const Dims big{2, 3, 2};
    CHECK(max_abs_diff(lhs.rho.matrix(), detail::apply_local(rhs.rho.matrix(), big, 1, u)) <= 1e-12);
  }
}

TEST_CASE("dephasing") {
  const auto plus = qubit(ket_projector({kInvSqrt2, kInvSqrt2}));
  const auto d = dephase(plus, MeasurementPlan::computational(plus.reg, {"S"}));
  CHECK(max_abs_diff(d.rho.matrix(), ComplexMatrix::identity(2) * cplx(0.5)) <= 1e-15);

  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto st = random_mixed(Register::lettered({2, 2, 2}), 4, s);
    const MeasurementPlan plan({"C", "A"}, {basis_from_seed("C", 2, s), basis_from_seed("A", 2, s + 1)});
    const auto once = dephase(st, plan);
    CHECK(once.reg == st.reg);
    CHECK(trace_distance(dephase(once, plan).rho, once.rho) <= 1e-13);
    CHECK(von_neumann_entropy(once.rho) >= von_neumann_entropy(st.rho) - 1e-12);
  }
}

TEST_CASE("undoing the interaction") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto st = random_mixed(Register::lettered({2, 3}), 1 + s % 6, s);
    const MeasurementPlan plan({"A", "B"}, {basis_from_seed("A", 2, s), basis_from_seed("B", 3, s + 3)});
    const auto back = undo_interaction(premeasure(st, plan), plan);
    CHECK(back.reg == st.reg);
    CHECK(trace_distance(back.rho, st.rho) <= 1e-12);
  }
  // tampering with the apparatus leaves the isometry image
  const MeasurementPlan plan = MeasurementPlan::computational(bell().reg, {"A"});
  const auto pm = premeasure(bell(), plan);
  const auto tampered =
      LabeledState(pm.reg, DensityOperator(detail::apply_local(pm.rho.matrix(), pm.reg.dims(), 2, hadamard()), pm.reg.dims()));
  CHECK_THROWS_AS(undo_interaction(tampered, plan), InvariantError);
  CHECK_THROWS_AS(undo_interaction(bell(), plan), ArgumentError);
}
