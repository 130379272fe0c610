#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "opensys/constraints.hpp"
#include "opensys/dynamics.hpp"
#include "opensys/io.hpp"

namespace opensys {

/// Which diagnostics a scenario records.
struct OutputSet {
  bool trace = true;
  bool min_eig = true;
  bool det = true;
  bool entries = true;
  bool constraint_report = true;
  bool analytic_dev = false;  ///< two-level rate scenarios only

  std::vector<std::string> names() const;
  static OutputSet from_names(const std::vector<std::string>& names, const std::string& path);
  friend bool operator==(const OutputSet&, const OutputSet&) = default;
};

/// Declarative evolution experiment. The generator is the sum of every
/// component present.
struct ScenarioSpec {
  std::string name;
  std::string description;
  std::variant<std::vector<cplx>, ComplexMatrix> initial_state;
  std::optional<HamiltonianSpec> hamiltonian;
  std::optional<RateSet> rates;
  std::vector<ComplexMatrix> lindblad_ops;
  std::optional<LindbladDiagonalCoeffs> lindblad_coeffs;
  /// Empty optional selects the default grid: 101 points on [0, 10 / rate_max].
  std::optional<std::vector<double>> time_grid;
  OutputSet outputs;

  std::size_t dim() const;
  ComplexMatrix initial_matrix() const;
  Superoperator generator() const;
};

struct TimeRecord {
  double t = 0.0;
  double trace_dev = 0.0;
  double min_eig = 0.0;
  double det = 0.0;
  double analytic_dev = 0.0;
  ComplexMatrix rho;
  friend bool operator==(const TimeRecord&, const TimeRecord&) = default;
};

struct TimeSeries {
  std::string name;
  std::size_t dim = 0;
  double tol = kDefaultTol;
  OutputSet outputs;
  std::vector<TimeRecord> records;
  std::optional<ConstraintReport> constraint_report;

  /// True iff every record has trace deviation <= tol and min eigenvalue >= -tol.
  bool all_physical() const;
};

ScenarioSpec scenario_from_json(const json& j);
json scenario_to_json(const ScenarioSpec& s);

/// 101 uniform points on [0, 10 / r], r the largest decay rate on the
/// generator diagonal (r = 1 when the generator has no decay).
std::vector<double> default_time_grid(const Superoperator& l);

/// Builds the generator, propagates over the grid and records diagnostics.
/// Throws SpecError on invalid fields or an unphysical initial state.
TimeSeries run_scenario(const ScenarioSpec& s, double tol = kDefaultTol, unsigned threads = 1);

void emit_csv(const TimeSeries& ts, std::ostream& out);
void emit_json(const TimeSeries& ts, std::ostream& out);
json time_series_to_json(const TimeSeries& ts);
TimeSeries time_series_from_json(const json& j);

/// Scenarios reproducing the worked examples: the two-level violation and
/// analytic cross-check, and the three-level isolation cases.
std::vector<ScenarioSpec> builtin_scenarios();
/// Throws Error for an unknown name.
ScenarioSpec builtin_scenario(const std::string& name);

}  // namespace opensys
