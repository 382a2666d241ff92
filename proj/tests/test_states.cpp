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

TEST_CASE("register rules") {
  CHECK_THROWS_AS(Register({"A", "A"}, {2, 2}), ArgumentError);
  CHECK_THROWS_AS(Register({"A"}, {1}), ArgumentError);
  CHECK_THROWS_AS(Register({"A", "B"}, {2}), ArgumentError);
  const Register r = Register::lettered({2, 3, 4});
  CHECK(r.labels() == std::vector<std::string>{"A", "B", "C"});
  CHECK(r.total_dim() == 24);
  CHECK(r.index_of("C") == 2);
  CHECK_THROWS_AS(r.index_of("Z"), ArgumentError);
  const Register m = r.appended("M:A", 2, SubsystemKind::apparatus);
  CHECK(m.kind(3) == SubsystemKind::apparatus);
  CHECK(m.without(0).labels() == std::vector<std::string>{"B", "C", "M:A"});
  CHECK(r.permuted({2, 0, 1}).dims() == Dims{4, 2, 3});
}

TEST_CASE("pure states") {
  const auto z = pure_state({1, 0, 0, 0}, Register::lettered({2, 2}));
  const double d[] = {1, 0, 0, 0};
  CHECK(z.rho.matrix() == ComplexMatrix::diagonal(d));

  const auto b = bell();
  for (std::size_t r : {0u, 3u})
    for (std::size_t c : {0u, 3u}) CHECK_THAT(b.rho.matrix()(r, c).real(), WithinAbs(0.5, 1e-15));
  CHECK(b.rho.matrix()(1, 1) == cplx(0.0));

  for (std::uint64_t s = 0; s < 20; ++s) CHECK_THAT(random_pure(Register::lettered({2, 3}), s).rho.purity(), WithinAbs(1.0, 1e-12));

  CHECK_THROWS_AS(pure_state({1, 0, 0}, Register::lettered({2, 2})), ArgumentError);
  CHECK_THROWS_AS(pure_state({0, 0, 0, 0}, Register::lettered({2, 2})), ArgumentError);
  CHECK_THROWS_AS(pure_state({1.1, 0, 0, 0}, Register::lettered({2, 2})), ArgumentError);
  // within 1e-6 of unit norm: renormalized
  const auto near = pure_state({1.0 + 5e-7, 0, 0, 0}, Register::lettered({2, 2}));
  CHECK_THAT(near.rho.matrix().trace().real(), WithinAbs(1.0, 1e-15));
}

TEST_CASE("classical-quantum states") {
  SplitMix64 rng(4);
  const LocalBasis b = random_basis("A", 2, rng);
  const auto r0 = random_mixed(Register::lettered({2}), 2, 1).rho, r1 = random_mixed(Register::lettered({2}), 1, 2).rho;
  const auto prod = classical_quantum_state({1, 0}, b, {r0, r1});
  CHECK(max_abs_diff(prod.rho.matrix(), kron(ComplexMatrix::outer(b.vector(0), b.vector(0)), r0.matrix())) <= 1e-15);

  const auto cd = canonical_discordant();
  ComplexMatrix expect(4, 4);
  expect(0, 0) = 0.5;
  for (std::size_t r : {2u, 3u})
    for (std::size_t c : {2u, 3u}) expect(r, c) = 0.25;
  CHECK(max_abs_diff(cd.rho.matrix(), expect) <= 1e-15);
  CHECK(cd.reg.labels() == std::vector<std::string>{"A", "B"});

  const auto cq = classical_quantum_state({0.3, 0.7}, b, {r0, r1});
  const auto deph = dephase(cq, MeasurementPlan({"A"}, {b}));
  CHECK(trace_distance(deph.rho, cq.rho) <= 1e-13);
  CHECK(hermitian_eigenvalues(partial_transpose(cq.rho, {1})).front() >= -1e-10);

  CHECK_THROWS_AS(classical_quantum_state({0.5, 0.6}, b, {r0, r1}), ArgumentError);
  CHECK_THROWS_AS(classical_quantum_state({-0.5, 1.5}, b, {r0, r1}), ArgumentError);
  CHECK_THROWS_AS(classical_quantum_state({1.0}, b, {r0}), ArgumentError);
  CHECK_THROWS_AS(classical_quantum_state({0.5, 0.5}, b, {r0, random_mixed(Register::lettered({3}), 1, 3).rho}),
                  ArgumentError);
  CHECK_THROWS_AS(classical_quantum_state({0.5, 0.5}, b, {r0, DensityOperator(ComplexMatrix::identity(2), {2})}),
                  ArgumentError);
}

TEST_CASE("werner family") {
  CHECK(max_abs_diff(werner_state(0).rho.matrix(), ComplexMatrix::identity(4) * cplx(0.25)) <= 1e-16);
  const std::vector<cplx> singlet{0, kInvSqrt2, -kInvSqrt2, 0};
  CHECK(max_abs_diff(werner_state(1).rho.matrix(), ket_projector(singlet)) <= 1e-15);
  for (double p : {0.0, 0.2, 1.0 / 3, 0.5, 0.8, 1.0}) {
    const double n = oracle::negativity(werner_state(p).rho.matrix(), {2, 2}, {1});
    CHECK_THAT(n, WithinAbs(std::max(0.0, (3 * p - 1) / 4), 1e-12));
  }
  CHECK_THROWS_AS(werner_state(-0.1), ArgumentError);
  CHECK_THROWS_AS(werner_state(1.1), ArgumentError);
}

TEST_CASE("GHZ and W states") {
  CHECK(max_abs_diff(ghz_state(2).rho.matrix(), bell().rho.matrix()) <= 1e-15);
  const auto g3 = ghz_state(3);
  for (const auto& cut : enumerate_cuts(3)) {
    const auto red = oracle::partial_trace(g3.rho.matrix(), {2, 2, 2}, cut.p0());
    double purity = 0.0;
    for (const auto& z : red.data()) purity += std::norm(z);
    CHECK_THAT(purity, WithinAbs(0.5, 1e-14));
  }
  const auto w3 = w_state(3);
  const auto r = oracle::partial_trace(w3.rho.matrix(), {2, 2, 2}, {0});
  CHECK_THAT(r(0, 0).real(), WithinAbs(2.0 / 3, 1e-15));
  CHECK_THAT(r(1, 1).real(), WithinAbs(1.0 / 3, 1e-15));
  CHECK(std::abs(r(0, 1)) <= 1e-15);

  for (std::size_t n = 2; n <= 5; ++n) {
    const auto g = ghz_state(n);
    for (const auto& cut : enumerate_cuts(n)) CHECK(partial_trace(g.rho, cut.p0()).purity() < 1 - 1e-6);
  }
  const auto q = ghz_state(2, 3);
  CHECK_THAT(von_neumann_entropy(partial_trace(q.rho, {0})), WithinAbs(std::log2(3.0), 1e-12));
  CHECK_THROWS_AS(ghz_state(1), ArgumentError);
  CHECK_THROWS_AS(w_state(1), ArgumentError);
  CHECK_THROWS_AS(ghz_state(9), InvariantError);
}

TEST_CASE("random states") {
  const Register reg = Register::lettered({2, 2});
  CHECK(random_pure(reg, 42).rho.matrix() == random_pure(reg, 42).rho.matrix());
  CHECK(random_mixed(reg, 3, 42).rho.matrix() == random_mixed(reg, 3, 42).rho.matrix());
  CHECK_FALSE(random_pure(reg, 42).rho.matrix() == random_pure(reg, 43).rho.matrix());

  // Haar moments: E[Tr rho_A^2] = (dA + dB) / (dA dB + 1) = 4/5, so the
  // normalized linear entropy 2 (1 - Tr rho_A^2) averages 2/5.
  double mean = 0.0;
  for (std::uint64_t s = 0; s < 1000; ++s) mean += partial_trace(random_pure(reg, s).rho, {0}).purity();
  mean /= 1000;
  CHECK_THAT(mean, WithinAbs(0.8, 0.02));
  CHECK_THAT(2.0 * (1.0 - mean), WithinAbs(0.4, 0.02));

  for (std::size_t rank = 1; rank <= 4; ++rank)
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto m = random_mixed(reg, rank, s);
      CHECK(m.rho.is_valid());
      if (rank == 1) CHECK_THAT(m.rho.purity(), WithinAbs(1.0, 1e-12));
      if (rank == 4) CHECK(hermitian_eigenvalues(m.rho.matrix()).front() > 0.0);
    }
  CHECK_THROWS_AS(random_mixed(reg, 0, 1), ArgumentError);
  CHECK_THROWS_AS(random_mixed(reg, 5, 1), ArgumentError);
}

TEST_CASE("random number stream") {
  // reference values of the SplitMix64 output function
  SplitMix64 a(0);
  CHECK(a.next() == 0xE220A8397B1DCDAFull);
  CHECK(a.next() == 0x6E789E6AA1B965F4ull);
  SplitMix64 b(1234567);
  CHECK(b.next() == 0x599ED017FB08FC85ull);
  SplitMix64 u(7);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
  }
  CHECK(derive_seed(5, 0) != derive_seed(5, 1));
  CHECK(derive_seed(5, 3) == derive_seed(5, 3));
  SplitMix64 h(3);
  CHECK(unitarity_defect(random_unitary(5, h)) <= 1e-12);
}

TEST_CASE("every constructor yields a valid state") {
  std::vector<LabeledState> all{bell(), canonical_discordant(), werner_state(0.3), ghz_state(4), w_state(4),
                                random_pure(Register::lettered({3, 2}), 1), random_mixed(Register::lettered({2, 2, 2}), 3, 1)};
  for (const auto& s : all) CHECK_NOTHROW(s.validate());
}

TEST_CASE("register-aware helpers") {
  const auto a = random_mixed(Register({"A"}, {2}), 2, 1), b = random_mixed(Register({"B"}, {3}), 2, 2);
  const auto ab = tensor(a, b);
  CHECK(ab.reg.labels() == std::vector<std::string>{"A", "B"});
  const auto red = reduce(ab, {1});
  CHECK(red.reg.labels() == std::vector<std::string>{"B"});
  CHECK(max_abs_diff(red.rho.matrix(), b.rho.matrix()) <= 1e-14);
  const auto p = permute_subsystems(ab, {1, 0});
  CHECK(p.reg.labels() == std::vector<std::string>{"B", "A"});
}
