#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "opensys/cli.hpp"
#include "opensys/io.hpp"
#include "opensys/scenario.hpp"

using namespace opensys;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name, const std::string& content) {
  const fs::path dir = fs::temp_directory_path() / "opensys_cli_tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("list-scenarios names every built-in") {
  const Run r = cli({"list-scenarios"});
  CHECK(r.code == kExitOk);
  for (const auto& s : builtin_scenarios()) CHECK(r.out.find(s.name + "\t") != std::string::npos);
}

TEST_CASE("scenario exit codes follow physicality") {
  CHECK(cli({"scenario", "unpopulated-third-level"}).code == kExitOk);
  CHECK(cli({"scenario", "two-level-analytic"}).code == kExitOk);
  CHECK(cli({"scenario", "equal-superposition"}).code == kExitViolation);
  CHECK(cli({"scenario", "pure-dephasing"}).code == kExitViolation);
  CHECK(cli({"scenario", "two-level-violation"}).code == kExitViolation);
  const Run bad = cli({"scenario", "missing"});
  CHECK(bad.code == kExitUsage);
  CHECK(bad.err.find("unknown scenario") != std::string::npos);
}

TEST_CASE("global flags and formats") {
  const Run j = cli({"scenario", "pure-dephasing", "--format", "json"});
  const json parsed = json::parse(j.out);
  CHECK(parsed["records"].size() == 101);
  CHECK(parsed["constraint_report"]["satisfied"] == false);

  const Run loose = cli({"--tol", "1", "scenario", "pure-dephasing"});
  CHECK(loose.code == kExitOk);

  CHECK(cli({"scenario", "pure-dephasing", "--format", "xml"}).code == kExitUsage);
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("evolve reads a scenario file and writes --output") {
  const std::string spec = scenario_to_json(builtin_scenario("two-level-analytic")).dump();
  const fs::path in = temp_file("analytic.json", spec);
  const fs::path out = fs::temp_directory_path() / "opensys_cli_tests" / "analytic.csv";
  fs::remove(out);
  const Run r = cli({"evolve", in.string(), "--output", out.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.empty());
  std::ifstream f(out);
  std::stringstream content;
  content << f.rdbuf();
  CHECK(content.str().rfind("t,trace_dev,min_eig,det,analytic_dev,re_1_1", 0) == 0);

  // byte-identical reruns
  const Run a = cli({"evolve", in.string()});
  const Run b = cli({"evolve", in.string(), "--threads", "4"});
  CHECK(a.out == content.str());
  CHECK(a.out == b.out);

  CHECK(cli({"evolve", "/nonexistent/file.json"}).code == kExitUsage);
  CHECK(cli({"evolve", in.string(), "--output", "/nonexistent/dir/x.csv"}).code == kExitUsage);
  const fs::path garbage = temp_file("garbage.json", "{not json");
  CHECK(cli({"evolve", garbage.string()}).code == kExitUsage);
  const fs::path invalid = temp_file("invalid.json", R"({"name": "x", "initial_state": {"vector": {"re": [1, 0]}}, "generator": {}})");
  const Run inv = cli({"evolve", invalid.string()});
  CHECK(inv.code == kExitUsage);
  CHECK(inv.err.find("$.generator") != std::string::npos);
}

TEST_CASE("check-state") {
  const fs::path good = temp_file("good.json", R"({"n": 2, "re": [0.5, 0, 0, 0.5], "im": [0, 0, 0, 0]})");
  const Run g = cli({"check-state", good.string()});
  CHECK(g.code == kExitOk);
  CHECK(json::parse(g.out)["is_physical"] == true);

  const fs::path bad = temp_file("bad.json", R"({"n": 2, "re": [1.2, 0, 0, -0.2]})");
  const Run b = cli({"check-state", bad.string()});
  CHECK(b.code == kExitViolation);
  CHECK(json::parse(b.out)["min_eigenvalue"].get<double>() == doctest::Approx(-0.2));

  const fs::path shape = temp_file("shape.json", R"({"n": 2, "re": [1, 0, 0]})");
  CHECK(cli({"check-state", shape.string()}).code == kExitUsage);
}

TEST_CASE("check-rates") {
  const fs::path ok = temp_file("ok.json", R"({"n": 2, "gamma": [[0, 1], [0, 0]], "Gamma": [[0, 0.5], [0.5, 0]]})");
  CHECK(cli({"check-rates", ok.string()}).code == kExitOk);

  const fs::path bad = temp_file("bad_rates.json", R"({"n": 3, "gamma": [[0, 1, 0], [0, 0, 0], [0, 0, 0]],
      "Gamma": [[0, 0.5, 0], [0.5, 0, 0], [0, 0, 0]]})");
  const Run r = cli({"check-rates", bad.string()});
  CHECK(r.code == kExitViolation);
  const json report = json::parse(r.out);
  CHECK(report["satisfied"] == false);
  bool found = false;
  for (const auto& v : report["violations"])
    if (v["id"] == "pure_dephasing[2,3]") found = true;
  CHECK(found);

  const fs::path asym = temp_file("asym.json", R"({"n": 2, "Gamma": [[0, 0.5], [0.4, 0]]})");
  CHECK(cli({"check-rates", asym.string()}).code == kExitUsage);
}

TEST_CASE("show-scenario output feeds evolve") {
  const Run shown = cli({"show-scenario", "equal-superposition"});
  REQUIRE(shown.code == kExitOk);
  const fs::path in = temp_file("shown.json", shown.out);
  CHECK(cli({"evolve", in.string()}).out == cli({"scenario", "equal-superposition"}).out);
}

TEST_CASE("installed binary reports exit codes") {
  const std::string bin = OPENSYS_CLI_PATH;
  auto status = [&](const std::string& args) {
    const int raw = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  CHECK(status("scenario unpopulated-third-level") == 0);
  CHECK(status("scenario equal-superposition") == 2);
  CHECK(status("no-such-command") == 1);
}

}  // TEST_SUITE
