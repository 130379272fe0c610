#include "opensys/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "opensys/constraints.hpp"
#include "opensys/io.hpp"
#include "opensys/scenario.hpp"
#include "opensys/states.hpp"

namespace opensys {

namespace {

struct Options {
  double tol = kDefaultTol;
  std::string format = "csv";
  std::string output;
  unsigned threads = 1;
  std::string input;
  std::string name;
};

// Writes to --output when given, otherwise to `out`.
void deliver(const std::string& text, const Options& opt, std::ostream& out) {
  if (opt.output.empty() || opt.output == "-") {
    out << text;
    return;
  }
  std::ofstream file(opt.output, std::ios::binary);
  if (!file) throw Error("cannot write " + opt.output);
  file << text;
  if (!file) throw Error("failed writing " + opt.output);
}

int emit_series(const TimeSeries& ts, const Options& opt, std::ostream& out) {
  std::ostringstream buf;
  if (opt.format == "json") emit_json(ts, buf);
  else emit_csv(ts, buf);
  deliver(buf.str(), opt, out);
  return ts.all_physical() ? kExitOk : kExitViolation;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Open quantum system evolution and rate-constraint checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--tol", opt.tol, "Physicality tolerance")->check(CLI::NonNegativeNumber)->capture_default_str();
  app.add_option("--format", opt.format, "Time-series format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--output", opt.output, "Output path (default stdout)");
  app.add_option("--threads", opt.threads, "Worker threads for grid propagation")->check(CLI::PositiveNumber);

  auto* evolve = app.add_subcommand("evolve", "Run a scenario JSON file");
  evolve->add_option("scenario", opt.input, "Scenario file")->required();
  auto* check_state_cmd = app.add_subcommand("check-state", "Diagnose a matrix JSON file");
  check_state_cmd->add_option("matrix", opt.input, "Matrix file")->required();
  auto* check_rates = app.add_subcommand("check-rates", "Check a rates JSON file for representability");
  check_rates->add_option("rates", opt.input, "Rates file")->required();
  auto* scenario = app.add_subcommand("scenario", "Run a built-in scenario");
  scenario->add_option("name", opt.name, "Scenario name")->required();
  auto* show = app.add_subcommand("show-scenario", "Print a built-in scenario as JSON");
  show->add_option("name", opt.name, "Scenario name")->required();
  app.add_subcommand("list-scenarios", "List built-in scenarios");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*evolve) {
      const ScenarioSpec s = scenario_from_json(read_json_file(opt.input));
      return emit_series(run_scenario(s, opt.tol, opt.threads), opt, out);
    }
    if (*scenario) {
      return emit_series(run_scenario(builtin_scenario(opt.name), opt.tol, opt.threads), opt, out);
    }
    if (*show) {
      deliver(scenario_to_json(builtin_scenario(opt.name)).dump(2) + "\n", opt, out);
      return kExitOk;
    }
    if (*check_state_cmd) {
      const ComplexMatrix m = matrix_from_json(read_json_file(opt.input));
      const StateDiagnostics d = check_state(m, opt.tol);
      deliver(diagnostics_to_json(d).dump(2) + "\n", opt, out);
      return d.is_physical ? kExitOk : kExitViolation;
    }
    if (*check_rates) {
      const RateSet r = rates_from_json(read_json_file(opt.input));
      const ConstraintReport report = check_n_level(r);
      deliver(report_to_json(report).dump(2) + "\n", opt, out);
      return report.satisfied ? kExitOk : kExitViolation;
    }
    std::ostringstream list;
    for (const auto& s : builtin_scenarios()) list << s.name << '\t' << s.description << '\n';
    deliver(list.str(), opt, out);
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace opensys
