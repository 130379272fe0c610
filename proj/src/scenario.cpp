#include "opensys/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace opensys {

namespace {

constexpr const char* kOutputNames[] = {"trace", "min_eig", "det", "entries", "constraint_report", "analytic_dev"};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw SpecError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SpecError(path, std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SpecError(path, "expected a number");
  return j.get<double>();
}

HamiltonianSpec hamiltonian_from_json(const json& j, const std::string& path) {
  HamiltonianSpec h;
  h.h0 = matrix_from_json(field(j, "h0", path), path + ".h0");
  if (j.contains("controls")) {
    const json& cs = j["controls"];
    if (!cs.is_array()) throw SpecError(path + ".controls", "expected an array");
    for (std::size_t m = 0; m < cs.size(); ++m) {
      const std::string p = path + ".controls[" + std::to_string(m) + "]";
      h.controls.push_back(
          {number(field(cs[m], "amplitude", p), p + ".amplitude"), matrix_from_json(field(cs[m], "operator", p), p + ".operator")});
    }
  }
  try {
    h.validate();
  } catch (const SpecError&) {
    throw;
  } catch (const Error& e) {
    throw SpecError(path, e.what());
  }
  return h;
}

json hamiltonian_to_json(const HamiltonianSpec& h) {
  json controls = json::array();
  for (const auto& c : h.controls) controls.push_back(json{{"amplitude", c.amplitude}, {"operator", matrix_to_json(c.operator_)}});
  return json{{"h0", matrix_to_json(h.h0)}, {"controls", std::move(controls)}};
}

RateSet add_rates(const RateSet& a, const RateSet& b) {
  if (a.dim() != b.dim()) throw Error("rate sets differ in dimension");
  std::vector<double> g(a.relaxation_table().begin(), a.relaxation_table().end());
  std::vector<double> d(a.dephasing_table().begin(), a.dephasing_table().end());
  for (std::size_t k = 0; k < g.size(); ++k) {
    g[k] += b.relaxation_table()[k];
    d[k] += b.dephasing_table()[k];
  }
  return RateSet::from_tables(a.dim(), std::move(g), std::move(d));
}

// Rate description of the dissipator, when the generator has one.
std::optional<RateSet> effective_rates(const ScenarioSpec& s) {
  if (!s.lindblad_ops.empty()) return std::nullopt;
  std::optional<RateSet> out = s.rates;
  if (s.lindblad_coeffs) {
    RateSet derived = rates_from_coeffs(*s.lindblad_coeffs).rates;
    out = out ? add_rates(*out, derived) : derived;
  }
  return out;
}

void validate_grid(const std::vector<double>& grid, const std::string& path) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0) {
      throw SpecError(path + "[" + std::to_string(i) + "]", "times must be finite and nonnegative");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) throw SpecError(path + "[" + std::to_string(i) + "]", "times must be strictly ascending");
  }
}

std::vector<double> uniform_grid(double start, double stop, std::size_t points) {
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = start;
    return grid;
  }
  const double steps = static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) grid[k] = start + static_cast<double>(k) * (stop - start) / steps;
  return grid;
}

RateSet rates_for(std::size_t n, std::initializer_list<std::pair<std::pair<int, int>, double>> gamma,
                  std::initializer_list<std::pair<std::pair<int, int>, double>> dephasing) {
  RateSet r(n);
  for (const auto& [idx, v] : gamma) r.set_relaxation(idx.first, idx.second, v);
  for (const auto& [idx, v] : dephasing) r.set_dephasing(idx.first, idx.second, v);
  return r;
}

}  // namespace

std::vector<std::string> OutputSet::names() const {
  const bool flags[] = {trace, min_eig, det, entries, constraint_report, analytic_dev};
  std::vector<std::string> out;
  for (std::size_t k = 0; k < std::size(flags); ++k)
    if (flags[k]) out.emplace_back(kOutputNames[k]);
  return out;
}

OutputSet OutputSet::from_names(const std::vector<std::string>& names, const std::string& path) {
  OutputSet o{false, false, false, false, false, false};
  bool* flags[] = {&o.trace, &o.min_eig, &o.det, &o.entries, &o.constraint_report, &o.analytic_dev};
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto it = std::find(std::begin(kOutputNames), std::end(kOutputNames), names[i]);
    if (it == std::end(kOutputNames)) throw SpecError(path + "[" + std::to_string(i) + "]", "unknown output \"" + names[i] + "\"");
    *flags[it - std::begin(kOutputNames)] = true;
  }
  return o;
}

std::size_t ScenarioSpec::dim() const {
  return std::visit([](const auto& v) -> std::size_t {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, ComplexMatrix>) return v.rows();
    else return v.size();
  }, initial_state);
}

ComplexMatrix ScenarioSpec::initial_matrix() const {
  if (const auto* m = std::get_if<ComplexMatrix>(&initial_state)) return *m;
  return pure_state(std::get<std::vector<cplx>>(initial_state)).matrix();
}

Superoperator ScenarioSpec::generator() const {
  const std::size_t n = dim();
  Superoperator l = Superoperator::zero(n);
  if (hamiltonian) l += hamiltonian_superop(*hamiltonian);
  if (rates) l += dissipator_from_rates(*rates);
  if (!lindblad_ops.empty()) l += lindblad_superop(std::nullopt, lindblad_ops);
  if (lindblad_coeffs) {
    const auto ops = lindblad_coeffs->operators();
    if (!ops.empty()) l += lindblad_superop(std::nullopt, ops);
  }
  return l;
}

bool TimeSeries::all_physical() const {
  return std::all_of(records.begin(), records.end(),
                     [&](const TimeRecord& r) { return r.trace_dev <= tol && r.min_eig >= -tol; });
}

ScenarioSpec scenario_from_json(const json& j) {
  if (!j.is_object()) throw SpecError("$", "scenario must be a JSON object");
  ScenarioSpec s;
  const json& name = field(j, "name", "$");
  if (!name.is_string()) throw SpecError("$.name", "expected a string");
  s.name = name.get<std::string>();
  if (j.contains("description")) s.description = j["description"].get<std::string>();

  const json& init = field(j, "initial_state", "$");
  if (init.contains("vector")) {
    s.initial_state = vector_from_json(init["vector"], "$.initial_state.vector");
  } else if (init.contains("matrix")) {
    s.initial_state = matrix_from_json(init["matrix"], "$.initial_state.matrix");
  } else {
    throw SpecError("$.initial_state", "expected \"vector\" or \"matrix\"");
  }
  const std::size_t n = s.dim();
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer() || j["dim"].get<long long>() != static_cast<long long>(n)) {
      throw SpecError("$.dim", "does not match the initial state dimension " + std::to_string(n));
    }
  }

  const json& gen = field(j, "generator", "$");
  if (!gen.is_object()) throw SpecError("$.generator", "expected an object");
  if (gen.contains("hamiltonian")) s.hamiltonian = hamiltonian_from_json(gen["hamiltonian"], "$.generator.hamiltonian");
  if (gen.contains("rates")) s.rates = rates_from_json(gen["rates"], "$.generator.rates");
  if (gen.contains("lindblad")) s.lindblad_ops = kraus_elements_from_json(gen["lindblad"], "$.generator.lindblad");
  if (gen.contains("lindblad_coeffs")) {
    const ComplexMatrix a = matrix_from_json(gen["lindblad_coeffs"], "$.generator.lindblad_coeffs");
    LindbladDiagonalCoeffs c(a.rows());
    std::copy(a.entries().begin(), a.entries().end(), c.a.begin());
    s.lindblad_coeffs = std::move(c);
  }
  if (!s.hamiltonian && !s.rates && s.lindblad_ops.empty() && !s.lindblad_coeffs) {
    throw SpecError("$.generator", "needs at least one of hamiltonian, rates, lindblad, lindblad_coeffs");
  }
  auto check_dim = [&](std::size_t got, const std::string& path) {
    if (got != n) throw SpecError(path, "dimension " + std::to_string(got) + " does not match state dimension " + std::to_string(n));
  };
  if (s.hamiltonian) check_dim(s.hamiltonian->dim(), "$.generator.hamiltonian");
  if (s.rates) check_dim(s.rates->dim(), "$.generator.rates");
  for (std::size_t k = 0; k < s.lindblad_ops.size(); ++k) check_dim(s.lindblad_ops[k].rows(), "$.generator.lindblad[" + std::to_string(k) + "]");
  if (s.lindblad_coeffs) check_dim(s.lindblad_coeffs->dim, "$.generator.lindblad_coeffs");

  if (j.contains("time_grid")) {
    const json& g = j["time_grid"];
    if (g.is_array()) {
      std::vector<double> grid;
      for (std::size_t i = 0; i < g.size(); ++i) grid.push_back(number(g[i], "$.time_grid[" + std::to_string(i) + "]"));
      s.time_grid = std::move(grid);
    } else if (g.is_object()) {
      const double start = number(field(g, "start", "$.time_grid"), "$.time_grid.start");
      const double stop = number(field(g, "stop", "$.time_grid"), "$.time_grid.stop");
      const json& pts = field(g, "points", "$.time_grid");
      if (!pts.is_number_integer() || pts.get<long long>() < 0) throw SpecError("$.time_grid.points", "expected a nonnegative integer");
      s.time_grid = uniform_grid(start, stop, pts.get<std::size_t>());
    } else {
      throw SpecError("$.time_grid", "expected an array or {start, stop, points}");
    }
    validate_grid(*s.time_grid, "$.time_grid");
  }

  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    if (!o.is_array()) throw SpecError("$.outputs", "expected an array of strings");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < o.size(); ++i) {
      if (!o[i].is_string()) throw SpecError("$.outputs[" + std::to_string(i) + "]", "expected a string");
      names.push_back(o[i].get<std::string>());
    }
    s.outputs = OutputSet::from_names(names, "$.outputs");
  }
  return s;
}

json scenario_to_json(const ScenarioSpec& s) {
  json j{{"name", s.name}, {"dim", s.dim()}};
  if (!s.description.empty()) j["description"] = s.description;
  if (const auto* m = std::get_if<ComplexMatrix>(&s.initial_state)) {
    j["initial_state"] = json{{"matrix", matrix_to_json(*m)}};
  } else {
    j["initial_state"] = json{{"vector", vector_to_json(std::get<std::vector<cplx>>(s.initial_state))}};
  }
  json gen = json::object();
  if (s.hamiltonian) gen["hamiltonian"] = hamiltonian_to_json(*s.hamiltonian);
  if (s.rates) gen["rates"] = rates_to_json(*s.rates);
  if (!s.lindblad_ops.empty()) {
    json ops = json::array();
    for (const auto& v : s.lindblad_ops) ops.push_back(matrix_to_json(v));
    gen["lindblad"] = std::move(ops);
  }
  if (s.lindblad_coeffs) {
    gen["lindblad_coeffs"] = matrix_to_json(ComplexMatrix(s.lindblad_coeffs->dim, s.lindblad_coeffs->dim, s.lindblad_coeffs->a));
  }
  j["generator"] = std::move(gen);
  if (s.time_grid) j["time_grid"] = *s.time_grid;
  j["outputs"] = s.outputs.names();
  return j;
}

std::vector<double> default_time_grid(const Superoperator& l) {
  double rate = 0.0;
  for (std::size_t i = 0; i < l.matrix.rows(); ++i) rate = std::max(rate, std::abs(l.matrix(i, i).real()));
  if (rate == 0.0) rate = 1.0;
  return uniform_grid(0.0, 10.0 / rate, 101);
}

TimeSeries run_scenario(const ScenarioSpec& s, double tol, unsigned threads) {
  const std::size_t n = s.dim();
  ComplexMatrix rho0;
  try {
    rho0 = s.initial_matrix();
  } catch (const SpecError&) {
    throw;
  } catch (const Error& e) {
    throw SpecError("$.initial_state", e.what());
  }
  const StateDiagnostics d0 = check_state(rho0, tol);
  if (!d0.is_physical) {
    throw SpecError("$.initial_state", "not a physical state (min eigenvalue " + fmt17(d0.min_eigenvalue) +
                                           ", trace deviation " + fmt17(d0.trace_deviation) + ")");
  }

  const Superoperator l = s.generator();
  const std::vector<double> grid = s.time_grid ? *s.time_grid : default_time_grid(l);
  validate_grid(grid, "$.time_grid");

  const std::optional<RateSet> rates = effective_rates(s);
  if (s.outputs.analytic_dev) {
    if (n != 2 || !s.rates || s.hamiltonian || !s.lindblad_ops.empty() || s.lindblad_coeffs) {
      throw SpecError("$.outputs", "\"analytic_dev\" needs a two-level scenario driven by rates only");
    }
  }

  TimeSeries ts;
  ts.name = s.name;
  ts.dim = n;
  ts.tol = tol;
  ts.outputs = s.outputs;
  if (s.outputs.constraint_report && rates) ts.constraint_report = check_n_level(*rates);

  const std::vector<ComplexMatrix> states = propagate_grid(l, rho0, grid, threads);
  ts.records.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const StateDiagnostics d = check_state(states[k], tol);
    TimeRecord r;
    r.t = grid[k];
    r.trace_dev = d.trace_deviation;
    r.min_eig = d.min_eigenvalue;
    r.det = d.determinant;
    r.rho = states[k];
    if (s.outputs.analytic_dev) {
      const ComplexMatrix exact = two_level_analytic(rho0, s.rates->relaxation(0, 1), s.rates->relaxation(1, 0),
                                                     s.rates->dephasing(0, 1), grid[k]);
      r.analytic_dev = max_abs_diff(exact, states[k]);
    }
    ts.records.push_back(std::move(r));
  }
  return ts;
}

void emit_csv(const TimeSeries& ts, std::ostream& out) {
  const OutputSet& o = ts.outputs;
  out << "t";
  if (o.trace) out << ",trace_dev";
  if (o.min_eig) out << ",min_eig";
  if (o.det) out << ",det";
  if (o.analytic_dev) out << ",analytic_dev";
  if (o.entries) {
    for (std::size_t i = 1; i <= ts.dim; ++i)
      for (std::size_t j = 1; j <= ts.dim; ++j) out << ",re_" << i << '_' << j << ",im_" << i << '_' << j;
  }
  out << '\n';
  for (const auto& r : ts.records) {
    out << fmt17(r.t);
    if (o.trace) out << ',' << fmt17(r.trace_dev);
    if (o.min_eig) out << ',' << fmt17(r.min_eig);
    if (o.det) out << ',' << fmt17(r.det);
    if (o.analytic_dev) out << ',' << fmt17(r.analytic_dev);
    if (o.entries) {
      for (const auto& z : r.rho.entries()) out << ',' << fmt17(z.real()) << ',' << fmt17(z.imag());
    }
    out << '\n';
  }
}

json time_series_to_json(const TimeSeries& ts) {
  const OutputSet& o = ts.outputs;
  json records = json::array();
  for (const auto& r : ts.records) {
    json rec{{"t", r.t}};
    if (o.trace) rec["trace_dev"] = r.trace_dev;
    if (o.min_eig) rec["min_eig"] = r.min_eig;
    if (o.det) rec["det"] = r.det;
    if (o.analytic_dev) rec["analytic_dev"] = r.analytic_dev;
    if (o.entries) {
      json parts = vector_to_json(r.rho.entries());
      rec["re"] = std::move(parts["re"]);
      rec["im"] = std::move(parts["im"]);
    }
    records.push_back(std::move(rec));
  }
  json j{{"name", ts.name}, {"dim", ts.dim}, {"tol", ts.tol}, {"outputs", o.names()}, {"records", std::move(records)}};
  if (ts.constraint_report) j["constraint_report"] = report_to_json(*ts.constraint_report);
  return j;
}

void emit_json(const TimeSeries& ts, std::ostream& out) { out << time_series_to_json(ts).dump(2) << '\n'; }

TimeSeries time_series_from_json(const json& j) {
  TimeSeries ts;
  ts.name = field(j, "name", "$").get<std::string>();
  ts.dim = field(j, "dim", "$").get<std::size_t>();
  ts.tol = number(field(j, "tol", "$"), "$.tol");
  ts.outputs = OutputSet::from_names(field(j, "outputs", "$").get<std::vector<std::string>>(), "$.outputs");
  const json& recs = field(j, "records", "$");
  for (std::size_t k = 0; k < recs.size(); ++k) {
    const std::string p = "$.records[" + std::to_string(k) + "]";
    const json& rj = recs[k];
    TimeRecord r;
    r.t = number(field(rj, "t", p), p + ".t");
    if (ts.outputs.trace) r.trace_dev = number(field(rj, "trace_dev", p), p + ".trace_dev");
    if (ts.outputs.min_eig) r.min_eig = number(field(rj, "min_eig", p), p + ".min_eig");
    if (ts.outputs.det) r.det = number(field(rj, "det", p), p + ".det");
    if (ts.outputs.analytic_dev) r.analytic_dev = number(field(rj, "analytic_dev", p), p + ".analytic_dev");
    if (ts.outputs.entries) {
      r.rho = ComplexMatrix(ts.dim, ts.dim, vector_from_json(json{{"re", field(rj, "re", p)}, {"im", field(rj, "im", p)}}, p));
    }
    ts.records.push_back(std::move(r));
  }
  if (j.contains("constraint_report")) ts.constraint_report = report_from_json(j["constraint_report"], "$.constraint_report");
  return ts;
}

std::vector<ScenarioSpec> builtin_scenarios() {
  const double h2 = 1.0 / std::sqrt(2.0);
  const double h3 = 1.0 / std::sqrt(3.0);
  std::vector<ScenarioSpec> out;

  ScenarioSpec violation;
  violation.name = "two-level-violation";
  violation.description = "Two-level decay 2->1 (gamma12=1) with Gamma=0.4 < (gamma12+gamma21)/2 from a pure superposition";
  violation.initial_state = std::vector<cplx>{h2, h2};
  violation.rates = rates_for(2, {{{0, 1}, 1.0}}, {{{0, 1}, 0.4}});
  violation.outputs.analytic_dev = true;
  out.push_back(std::move(violation));

  ScenarioSpec analytic;
  analytic.name = "two-level-analytic";
  analytic.description = "Numeric propagation vs closed-form two-level solution (gamma12=0.7, gamma21=0.2, Gamma=0.6)";
  analytic.initial_state = ComplexMatrix{{0.3, cplx{0.2, -0.1}}, {cplx{0.2, 0.1}, 0.7}};
  analytic.rates = rates_for(2, {{{0, 1}, 0.7}, {{1, 0}, 0.2}}, {{{0, 1}, 0.6}});
  analytic.outputs.analytic_dev = true;
  out.push_back(std::move(analytic));

  ScenarioSpec unpopulated;
  unpopulated.name = "unpopulated-third-level";
  unpopulated.description = "Levels 1-2 decay (gamma12=1, Gamma12=1/2) inside a three-level system; level 3 empty";
  unpopulated.initial_state = std::vector<cplx>{h2, h2, 0.0};
  unpopulated.rates = rates_for(3, {{{0, 1}, 1.0}}, {{{0, 1}, 0.5}});
  out.push_back(std::move(unpopulated));

  ScenarioSpec equal;
  equal.name = "equal-superposition";
  equal.description = "Same generator as unpopulated-third-level from the equal superposition of three levels";
  equal.initial_state = std::vector<cplx>{h3, h3, h3};
  equal.rates = rates_for(3, {{{0, 1}, 1.0}}, {{{0, 1}, 0.5}});
  out.push_back(std::move(equal));

  ScenarioSpec dephasing;
  dephasing.name = "pure-dephasing";
  dephasing.description = "Pure dephasing Gamma12=1, Gamma13=Gamma23=0 from the equal superposition of three levels";
  dephasing.initial_state = std::vector<cplx>{h3, h3, h3};
  dephasing.rates = rates_for(3, {}, {{{0, 1}, 1.0}});
  out.push_back(std::move(dephasing));

  return out;
}

ScenarioSpec builtin_scenario(const std::string& name) {
  for (auto& s : builtin_scenarios())
    if (s.name == name) return s;
  throw Error("unknown scenario \"" + name + "\"; run list-scenarios");
}

}  // namespace opensys
