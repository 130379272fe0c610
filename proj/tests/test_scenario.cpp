#include <cmath>
#include <sstream>

#include "doctest.h"
#include "opensys/scenario.hpp"
#include "test_support.hpp"

using namespace opensys;
using namespace opensys::testing;

namespace {

json minimal_scenario() {
  return json::parse(R"({
    "name": "decay",
    "initial_state": {"vector": {"re": [0.6, 0.8], "im": [0, 0]}},
    "generator": {"rates": {"n": 2, "gamma": [[0, 1.0], [0, 0]], "Gamma": [[0, 0.5], [0.5, 0]]}},
    "time_grid": [0, 0.5, 1.0]
  })");
}

std::string expect_spec_error(const json& j) {
  try {
    run_scenario(scenario_from_json(j));
  } catch (const SpecError& e) {
    return e.path();
  }
  FAIL("expected SpecError");
  return {};
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("scenario JSON parses and runs") {
  const auto ts = run_scenario(scenario_from_json(minimal_scenario()));
  REQUIRE(ts.records.size() == 3);
  CHECK(ts.dim == 2);
  CHECK(ts.records[0].t == 0.0);
  CHECK(ts.records[2].rho(1, 1).real() == doctest::Approx(0.64 * std::exp(-1.0)).epsilon(1e-12));
  REQUIRE(ts.constraint_report.has_value());
  CHECK(ts.constraint_report->satisfied);
  CHECK(ts.all_physical());
}

TEST_CASE("scenario spec round trips through JSON") {
  for (const auto& s : builtin_scenarios()) {
    const json j = scenario_to_json(s);
    const ScenarioSpec back = scenario_from_json(j);
    CHECK(scenario_to_json(back) == j);
    CHECK(run_scenario(back).records == run_scenario(s).records);
  }
}

TEST_CASE("spec errors carry the offending path") {
  json j = minimal_scenario();
  j["time_grid"] = json::array({0.0, 1.0, 0.5});
  CHECK(expect_spec_error(j) == "$.time_grid[2]");

  j = minimal_scenario();
  j["time_grid"] = json::array({-1.0, 1.0});
  CHECK(expect_spec_error(j) == "$.time_grid[0]");

  j = minimal_scenario();
  j["generator"]["rates"]["gamma"][0][1] = -1.0;
  CHECK(expect_spec_error(j) == "$.generator.rates");

  j = minimal_scenario();
  j["initial_state"] = json::parse(R"({"matrix": {"n": 2, "re": [1.5, 0, 0, -0.5]}})");
  CHECK(expect_spec_error(j) == "$.initial_state");

  j = minimal_scenario();
  j["initial_state"] = json::parse(R"({"vector": {"re": [1, 1]}})");
  CHECK(expect_spec_error(j) == "$.initial_state");

  j = minimal_scenario();
  j["outputs"] = json::array({"trace", "bogus"});
  CHECK(expect_spec_error(j) == "$.outputs[1]");

  j = minimal_scenario();
  j["generator"] = json::object();
  CHECK(expect_spec_error(j) == "$.generator");

  j = minimal_scenario();
  j["generator"]["rates"]["n"] = 3;
  CHECK(expect_spec_error(j) == "$.generator.rates.gamma");

  j = minimal_scenario();
  j.erase("name");
  CHECK(expect_spec_error(j) == "$");

  j = minimal_scenario();
  j["generator"]["lindblad"] = json::array({json::parse(R"({"n": 3, "re": [0,0,0,0,0,0,0,0,0]})")});
  CHECK(expect_spec_error(j) == "$.generator.lindblad[0]");
}

TEST_CASE("matrices accept nested rows") {
  json j = minimal_scenario();
  j["initial_state"] = json::parse(R"({"matrix": {"n": 2, "re": [[0.5, 0.25], [0.25, 0.5]], "im": [[0, 0.1], [-0.1, 0]]}})");
  const ScenarioSpec nested = scenario_from_json(j);
  j["initial_state"] = json::parse(R"({"matrix": {"n": 2, "re": [0.5, 0.25, 0.25, 0.5], "im": [0, 0.1, -0.1, 0]}})");
  CHECK(nested.initial_matrix() == scenario_from_json(j).initial_matrix());

  j["initial_state"] = json::parse(R"({"matrix": {"n": 2, "re": [[0.5, 0], [0, "x"]]}})");
  CHECK(expect_spec_error(j) == "$.initial_state.matrix.re[1][1]");
}

TEST_CASE("uniform and default grids") {
  json j = minimal_scenario();
  j["time_grid"] = json::parse(R"({"start": 0, "stop": 2, "points": 5})");
  auto ts = run_scenario(scenario_from_json(j));
  REQUIRE(ts.records.size() == 5);
  CHECK(ts.records[4].t == 2.0);

  j.erase("time_grid");
  ts = run_scenario(scenario_from_json(j));
  REQUIRE(ts.records.size() == 101);
  CHECK(ts.records[100].t == 10.0);
  CHECK(ts.records[10].t == 1.0);

  j["generator"]["rates"]["gamma"][0][1] = 4.0;
  j["generator"]["rates"]["Gamma"] = json::parse("[[0, 2.0], [2.0, 0]]");
  ts = run_scenario(scenario_from_json(j));
  CHECK(ts.records.back().t == 2.5);
}

TEST_CASE("generator components add up") {
  json j = minimal_scenario();
  j["generator"]["hamiltonian"] = json::parse(R"({"h0": {"n": 2, "re": [1, 0, 0, -1]},
      "controls": [{"amplitude": 0.3, "operator": {"n": 2, "re": [0, 1, 1, 0]}}]})");
  j["generator"]["lindblad"] = json::array({json::parse(R"({"n": 2, "re": [0, 0, 0.5, 0]})")});
  const auto s = scenario_from_json(j);
  const auto expected = hamiltonian_superop(two_level_hamiltonian(1.0, 0.3, 0.0)) + dissipator_from_rates(*s.rates) +
                        lindblad_superop(std::nullopt, s.lindblad_ops);
  CHECK(max_abs_diff(s.generator().matrix, expected.matrix) <= 1e-15);
  // explicit jump operators have no rate description
  CHECK_FALSE(run_scenario(s).constraint_report.has_value());
}

TEST_CASE("lindblad_coeffs generators report derived rates") {
  json j = minimal_scenario();
  j["generator"] = json::parse(R"({"lindblad_coeffs": {"n": 2, "re": [0.5, 1.0, 0, 0.5]}})");
  const auto ts = run_scenario(scenario_from_json(j));
  REQUIRE(ts.constraint_report.has_value());
  CHECK(ts.constraint_report->satisfied);
  CHECK(ts.all_physical());
}

TEST_CASE("analytic_dev requires a two-level rate model") {
  json j = minimal_scenario();
  j["outputs"] = json::array({"min_eig", "analytic_dev"});
  const auto ts = run_scenario(scenario_from_json(j));
  for (const auto& r : ts.records) CHECK(r.analytic_dev <= 1e-12);

  j["generator"]["lindblad"] = json::array({json::parse(R"({"n": 2, "re": [0, 0, 0.5, 0]})")});
  CHECK(expect_spec_error(j) == "$.outputs");
}

TEST_CASE("CSV layout") {
  json j = minimal_scenario();
  j["time_grid"] = json::array();
  std::ostringstream empty;
  emit_csv(run_scenario(scenario_from_json(j)), empty);
  CHECK(empty.str() ==
        "t,trace_dev,min_eig,det,re_1_1,im_1_1,re_1_2,im_1_2,re_2_1,im_2_1,re_2_2,im_2_2\n");

  j["time_grid"] = json::array({0.0});
  std::ostringstream one;
  const auto ts = run_scenario(scenario_from_json(j));
  emit_csv(ts, one);
  const std::string text = one.str();
  const std::string row = text.substr(text.find('\n') + 1);
  CHECK(row.rfind("0,", 0) == 0);
  CHECK(ts.records[0].min_eig >= 0.0 - 1e-15);
  CHECK(ts.records[0].trace_dev <= 1e-12);
  // 0.6 * 0.8 printed with 17 significant digits
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", (cplx{0.6} * std::conj(cplx{0.8})).real());
  CHECK(text.find(buf) != std::string::npos);

  j["outputs"] = json::array({"det"});
  std::ostringstream only;
  emit_csv(run_scenario(scenario_from_json(j)), only);
  CHECK(only.str().rfind("t,det\n", 0) == 0);
}

TEST_CASE("JSON time series round trips bit-exactly") {
  for (const auto& s : builtin_scenarios()) {
    const auto ts = run_scenario(s);
    std::ostringstream out;
    emit_json(ts, out);
    const TimeSeries back = time_series_from_json(json::parse(out.str()));
    CHECK(back.name == ts.name);
    CHECK(back.outputs == ts.outputs);
    REQUIRE(back.records.size() == ts.records.size());
    for (std::size_t k = 0; k < ts.records.size(); ++k) CHECK(back.records[k] == ts.records[k]);
    CHECK(back.constraint_report.has_value() == ts.constraint_report.has_value());
    std::ostringstream again;
    emit_json(back, again);
    CHECK(again.str() == out.str());
  }
}

TEST_CASE("runs are deterministic and thread-count independent") {
  const auto s = builtin_scenario("equal-superposition");
  std::ostringstream a, b, c;
  emit_csv(run_scenario(s), a);
  emit_csv(run_scenario(s), b);
  emit_csv(run_scenario(s, kDefaultTol, 3), c);
  CHECK(a.str() == b.str());
  CHECK(a.str() == c.str());
}

TEST_CASE("built-in scenarios") {
  const auto all = builtin_scenarios();
  CHECK(all.size() == 5);
  CHECK_THROWS_AS(builtin_scenario("nope"), Error);

  const auto iso = run_scenario(builtin_scenario("unpopulated-third-level"));
  CHECK(iso.all_physical());
  for (const auto& r : iso.records)
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(std::abs(r.rho(2, k)) == 0.0);
      CHECK(std::abs(r.rho(k, 2)) == 0.0);
    }

  const auto eq = run_scenario(builtin_scenario("equal-superposition"));
  CHECK_FALSE(eq.all_physical());
  bool early = false;
  for (const auto& r : eq.records)
    if (r.t <= 2.0 && r.min_eig < 0.0) early = true;
  CHECK(early);

  const auto deph = run_scenario(builtin_scenario("pure-dephasing"));
  CHECK(deph.records[10].t == 1.0);
  CHECK(std::abs(deph.records[10].min_eig - ((2.0 + std::exp(-1.0)) - std::sqrt(std::exp(-2.0) + 8.0)) / 6.0) <= 1e-9);

  const auto viol = run_scenario(builtin_scenario("two-level-violation"));
  CHECK_FALSE(viol.all_physical());
  CHECK_FALSE(viol.constraint_report->satisfied);

  const auto cross = run_scenario(builtin_scenario("two-level-analytic"));
  CHECK(cross.all_physical());
  for (const auto& r : cross.records) CHECK(r.analytic_dev <= 1e-9);
}

}  // TEST_SUITE
