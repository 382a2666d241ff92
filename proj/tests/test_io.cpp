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

#include <cstdio>
#include <filesystem>

#include "support.hpp"

using namespace qcorr;
using namespace support;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using nlohmann::json;

namespace {

template <class F>
std::string error_message(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

std::filesystem::path scratch_dir() {
  auto p = std::filesystem::temp_directory_path() / "qcorr_test_io";
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("state round trip is exact") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto st = random_mixed(Register::lettered({2, 3}), 1 + s % 4, s);
    const auto back = io::state_from_json(io::parse_text(io::state_to_json(st).dump()));
    CHECK(back.reg.labels() == st.reg.labels());
    CHECK(back.reg.dims() == st.reg.dims());
    CHECK(max_abs_diff(back.rho.matrix(), st.rho.matrix()) == 0.0);
  }
  auto j = io::state_to_json(bell());
  j["kinds"] = {"system", "apparatus"};
  CHECK(io::state_from_json(j).reg.kind(1) == SubsystemKind::apparatus);
  j.erase("im");
  j.erase("kinds");
  CHECK_THAT(negativity(io::state_from_json(j), BipartitionCut::parse("A", bell().reg)), WithinAbs(0.5, 1e-12));
}

TEST_CASE("state parse errors name the field") {
  const auto good = io::state_to_json(bell());
  for (const char* f : {"labels", "dims", "re"}) {
    auto j = good;
    j.erase(f);
    CHECK_THROWS_AS(io::state_from_json(j), ParseError);
    CHECK_THAT(error_message([&] { io::state_from_json(j); }), ContainsSubstring(f));
  }
  auto j = good;
  j["dims"] = {2, 3};
  CHECK_THROWS_AS(io::state_from_json(j), ParseError);
  j = good;
  j["re"][0] = {0.5, 0.0};
  CHECK_THROWS_AS(io::state_from_json(j), ParseError);
  j = good;
  j["labels"] = {"A", "A"};
  CHECK_THROWS(io::state_from_json(j));
  CHECK_THROWS_AS(io::parse_text("{\"labels\": [", "x"), ParseError);
  CHECK_THROWS_AS(io::read_file("/nonexistent/qcorr.json"), ParseError);
}

TEST_CASE("invalid density operators are invariant errors") {
  auto j = io::state_to_json(bell());
  j["re"][0][0] = 0.7;  // trace 1.2
  CHECK_THROWS_AS(io::state_from_json(j), InvariantError);
  j = io::state_to_json(bell());
  j["im"][0][1] = 0.1;  // not Hermitian
  CHECK_THROWS_AS(io::state_from_json(j), InvariantError);
  j = io::state_to_json(qubit(ComplexMatrix::identity(2) * cplx(0.5)));
  j["re"] = {{1.5, 0.0}, {0.0, -0.5}};  // negative eigenvalue
  CHECK_THROWS_AS(io::state_from_json(j), InvariantError);
  json big = {{"labels", json::array({"A", "B"})}, {"dims", json::array({16, 17})}, {"re", {{1.0}}}};
  CHECK_THROWS_AS(io::state_from_json(big), InvariantError);
}

TEST_CASE("basis and plan round trip") {
  SplitMix64 rng(3);
  const auto b = random_basis("B", 3, rng);
  const auto back = io::basis_from_json(io::basis_to_json(b));
  CHECK(back.subsystem() == "B");
  CHECK(max_abs_diff(back.vectors(), b.vectors()) == 0.0);

  json bad = io::basis_to_json(LocalBasis::computational("A", 2));
  bad["re"] = {{1.0, 1.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(io::basis_from_json(bad), InvariantError);
  bad["re"] = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
  bad.erase("im");
  CHECK_THROWS_AS(io::basis_from_json(bad), ParseError);

  const MeasurementPlan plan({"A", "B"}, {LocalBasis("A", hadamard()), b});
  const auto p = io::plan_from_json(io::plan_to_json(plan));
  CHECK(p.measured == plan.measured);
  REQUIRE(p.bases.size() == 2);
  CHECK(max_abs_diff(p.bases[0].vectors(), hadamard()) == 0.0);
}

TEST_CASE("chain configuration parsing") {
  const auto dir = scratch_dir();
  io::write_file((dir / "s.json").string(), io::state_to_json(bell()).dump());
  const json cfg = {{"initial_file", "s.json"},
                    {"links",
                     {{{"target", "B"}, {"basis", "explicit"}, {"re", {{1, 0}, {0, 1}}}},
                      {{"basis", "flag-copy"}},
                      {{"basis", "optimized"}}}},
                    {"track", {"entanglement", "quantumness"}},
                    {"restarts", 3},
                    {"seed", 9}};
  const auto c = io::chain_config_from_json(cfg, dir.string());
  CHECK(c.initial.reg.size() == 2);
  REQUIRE(c.links.size() == 3);
  CHECK(*c.links[0].target == "B");
  CHECK(c.links[0].policy == BasisPolicy::explicit_basis);
  CHECK(c.links[1].policy == BasisPolicy::flag_copy);
  CHECK(c.links[2].policy == BasisPolicy::optimized);
  CHECK(c.track_quantumness);
  CHECK(c.optimizer.restarts == 3);
  CHECK(c.optimizer.seed == 9);
  CHECK(c.optimizer.max_iterations == 5000);

  auto bad = cfg;
  bad["links"][1]["basis"] = "random";
  CHECK_THROWS_AS(io::chain_config_from_json(bad, dir.string()), ParseError);
  bad = cfg;
  bad.erase("initial_file");
  CHECK_THAT(error_message([&] { io::chain_config_from_json(bad, dir.string()); }), ContainsSubstring("initial"));
  bad = cfg;
  bad["links"] = json::array();
  CHECK_THROWS_AS(io::chain_config_from_json(bad, dir.string()), ParseError);
  bad = cfg;
  bad["restarts"] = "many";
  CHECK_THROWS_AS(io::chain_config_from_json(bad, dir.string()), ParseError);
}

TEST_CASE("chain report serialization") {
  ChainConfig cfg{bell(),
                  {{std::string("B"), BasisPolicy::explicit_basis, ComplexMatrix::identity(2)},
                   {std::nullopt, BasisPolicy::flag_copy, std::nullopt}},
                  false,
                  {2, 500, 1e-8, 1, 1}};
  const auto r = run_chain(cfg);
  const auto csv = io::chain_report_to_csv(r);
  CHECK(csv.rfind("link,target,apparatus,entanglement,quantumness_upper_bound,break_negativity\n", 0) == 0);
  CHECK_THAT(csv, ContainsSubstring("1,B,M:B," + io::fmt17(r.rows[0].entanglement)));
  const auto j = io::chain_report_to_json(r);
  CHECK(j["monotone"] == true);
  CHECK(j["rows"].size() == 2);
  CHECK(j["rows"][0]["quantumness_upper_bound"].is_null());
  CHECK(j["rows"][0]["entanglement"].get<double>() == r.rows[0].entanglement);
}

TEST_CASE("number formatting round trips") {
  SplitMix64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<int>(rng.next() % 20) - 10);
    CHECK(std::stod(io::fmt17(v)) == v);
    CHECK(json::parse(json(v).dump()).get<double>() == v);
  }
  CHECK(io::fmt17(0.5) == "0.5");
}

TEST_CASE("quantumness report marks an upper bound") {
  const auto q = q_negativity(bell(), {"B"}, {2, 500, 1e-8, 1, 1});
  const auto j = io::quantumness_to_json(q);
  CHECK(j["upper_bound"] == true);
  CHECK(j["restart_values"].size() == 2);
  CHECK(j["measure"] == "negativity_of_quantumness");
  CHECK(j["argmin_bases"][0]["subsystem"] == "B");
}

TEST_CASE("suite csv and summary") {
  verify::SuiteOptions opt;
  opt.samples = 6;
  const auto r = verify::run_suite("locc-undo", opt);
  const auto csv = io::suite_to_csv(r);
  CHECK(csv.rfind("trial,family,passed,margin,trace_distance", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == 7);
  const auto s = io::suite_summary(r);
  CHECK(s["suite"] == "locc-undo");
  CHECK(s["trials"] == 6);
  CHECK(s["failures"] == 0);
  CHECK(s["failed_trials"].empty());
  CHECK(s["checks"].contains("trace_distance"));
}

TEST_CASE("manifest fields") {
  const io::RunManifest m{"measure", json{{"state", "x.json"}}, 7, "0.1.0", 0.25};
  const auto j = m.to_json();
  for (const char* f : {"command", "config", "seed", "version", "wall_time"}) CHECK(j.contains(f));
  CHECK(j["seed"] == 7);
  CHECK_THROWS_AS(io::write_file("/nonexistent/dir/out.json", "{}"), ArgumentError);
}
