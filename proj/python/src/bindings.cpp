#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <sstream>

#include "opensys/constraints.hpp"
#include "opensys/dynamics.hpp"
#include "opensys/io.hpp"
#include "opensys/kraus.hpp"
#include "opensys/scenario.hpp"
#include "opensys/states.hpp"

namespace py = pybind11;
using namespace opensys;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;
using RArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const CArray& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-d array");
  const auto rows = static_cast<std::size_t>(a.shape(0)), cols = static_cast<std::size_t>(a.shape(1));
  return ComplexMatrix(rows, cols, std::vector<cplx>(a.data(), a.data() + rows * cols));
}

CArray to_array(const ComplexMatrix& m) {
  CArray out({m.rows(), m.cols()});
  std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
  return out;
}

CArray to_array(const std::vector<cplx>& v) {
  CArray out(v.size());
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Superoperator to_superop(const CArray& a) {
  ComplexMatrix m = to_matrix(a);
  const auto n = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(m.rows()))));
  if (m.rows() != m.cols() || n * n != m.rows()) throw py::value_error("superoperator must be N^2 x N^2");
  return Superoperator(n, std::move(m));
}

std::vector<ComplexMatrix> to_matrices(const std::vector<CArray>& arrays) {
  std::vector<ComplexMatrix> out;
  out.reserve(arrays.size());
  for (const auto& a : arrays) out.push_back(to_matrix(a));
  return out;
}

std::vector<CArray> to_arrays(const KrausMap& k) {
  std::vector<CArray> out;
  for (const auto& w : k.elements()) out.push_back(to_array(w));
  return out;
}

RateSet to_rates(const RArray& gamma, const RArray& big_gamma) {
  if (gamma.ndim() != 2 || gamma.shape(0) != gamma.shape(1)) throw py::value_error("gamma must be square");
  if (big_gamma.ndim() != 2 || big_gamma.shape(0) != gamma.shape(0) || big_gamma.shape(1) != gamma.shape(1))
    throw py::value_error("Gamma must match gamma");
  const auto n = static_cast<std::size_t>(gamma.shape(0));
  RateSet r = RateSet::from_tables(n, std::vector<double>(gamma.data(), gamma.data() + n * n),
                                   std::vector<double>(big_gamma.data(), big_gamma.data() + n * n));
  r.validate();
  return r;
}

py::dict diagnostics_dict(const StateDiagnostics& d) {
  py::dict out;
  out["trace_deviation"] = d.trace_deviation;
  out["hermiticity_deviation"] = d.hermiticity_deviation;
  out["min_eigenvalue"] = d.min_eigenvalue;
  out["determinant"] = d.determinant;
  out["is_physical"] = d.is_physical;
  return out;
}

}  // namespace

PYBIND11_MODULE(_opensys, m) {
  m.doc() = "Open quantum system dynamics core";

  py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  m.def("kron", [](const CArray& a, const CArray& b) { return to_array(kron(to_matrix(a), to_matrix(b))); });
  m.def("mat_exp", [](const CArray& a) { return to_array(mat_exp(to_matrix(a))); });
  m.def("eigvals", [](const CArray& a) { return to_array(eigvals(to_matrix(a))); });

  m.def("check_state", [](const CArray& rho, double tol) { return diagnostics_dict(check_state(to_matrix(rho), tol)); },
        py::arg("rho"), py::arg("tol") = kDefaultTol);
  m.def("vectorize", [](const CArray& rho) { return to_array(vectorize(to_matrix(rho))); });
  m.def("devectorize", [](const CArray& v, std::size_t n) {
    if (v.ndim() != 1) throw py::value_error("expected a 1-d array");
    return to_array(devectorize(std::span<const cplx>(v.data(), static_cast<std::size_t>(v.shape(0))), n));
  });

  m.def("two_level_hamiltonian",
        [](double w, double fx, double fy) { return to_array(two_level_hamiltonian(w, fx, fy).total()); });
  m.def("hamiltonian_superop", [](const CArray& h) {
    HamiltonianSpec spec{to_matrix(h), {}};
    spec.validate();
    return to_array(hamiltonian_superop(spec).matrix);
  });
  m.def("dissipator_from_rates",
        [](const RArray& gamma, const RArray& big_gamma) {
          return to_array(dissipator_from_rates(to_rates(gamma, big_gamma)).matrix);
        },
        py::arg("gamma"), py::arg("Gamma"));
  m.def("lindblad_superop",
        [](const std::vector<CArray>& ops, std::optional<CArray> h) {
          std::optional<HamiltonianSpec> spec;
          if (h) {
            spec = HamiltonianSpec{to_matrix(*h), {}};
            spec->validate();
          }
          return to_array(lindblad_superop(spec, to_matrices(ops)).matrix);
        },
        py::arg("ops"), py::arg("hamiltonian") = py::none());
  m.def("propagate",
        [](const CArray& l, const CArray& rho0, double t) { return to_array(propagate(to_superop(l), to_matrix(rho0), t)); },
        py::arg("generator"), py::arg("rho0"), py::arg("t"));
  m.def("generator_spectrum", [](const CArray& l) { return to_array(generator_spectrum(to_superop(l))); });
  m.def("two_level_analytic",
        [](const CArray& rho0, double g12, double g21, double big, double t) {
          return to_array(two_level_analytic(to_matrix(rho0), g12, g21, big, t));
        },
        py::arg("rho0"), py::arg("gamma12"), py::arg("gamma21"), py::arg("Gamma"), py::arg("t"));
  m.def("two_level_det",
        [](const CArray& rho0, double g12, double g21, double big, double t) {
          return two_level_det(to_matrix(rho0), g12, g21, big, t);
        },
        py::arg("rho0"), py::arg("gamma12"), py::arg("gamma21"), py::arg("Gamma"), py::arg("t"));
  m.def("two_level_exact_det",
        [](const CArray& rho0, double g12, double g21, double big, double t) {
          return two_level_exact_det(to_matrix(rho0), g12, g21, big, t);
        },
        py::arg("rho0"), py::arg("gamma12"), py::arg("gamma21"), py::arg("Gamma"), py::arg("t"));

  m.def("validate_kraus",
        [](const std::vector<CArray>& elements, double tol) { return to_arrays(validate_kraus(to_matrices(elements), tol)); },
        py::arg("elements"), py::arg("tol") = kDefaultTol);
  m.def("apply_kraus", [](const std::vector<CArray>& elements, const CArray& rho) {
    return to_array(apply_kraus(validate_kraus(to_matrices(elements)), to_matrix(rho)));
  });
  m.def("compose_kraus", [](const std::vector<CArray>& g, const std::vector<CArray>& h) {
    return to_arrays(compose_kraus(validate_kraus(to_matrices(g)), validate_kraus(to_matrices(h))));
  });
  m.def("kraus_to_superop",
        [](const std::vector<CArray>& g) { return to_array(kraus_to_superop(validate_kraus(to_matrices(g))).matrix); });
  m.def("is_invertible_element",
        [](const std::vector<CArray>& g, double tol) { return is_invertible_element(validate_kraus(to_matrices(g)), tol); },
        py::arg("elements"), py::arg("tol") = kDefaultTol);
  m.def("amplitude_damping", [](double p) { return to_arrays(amplitude_damping(p)); });

  // Structured results cross the boundary as JSON text.
  m.def("_check_two_level",
        [](double g12, double g21, double big) { return report_to_json(check_two_level(g12, g21, big)).dump(); });
  m.def("_check_n_level",
        [](const RArray& gamma, const RArray& big_gamma, double tol) {
          return report_to_json(check_n_level(to_rates(gamma, big_gamma), tol)).dump();
        });
  m.def("_run_scenario",
        [](const std::string& spec, double tol, unsigned threads) {
          const ScenarioSpec s = scenario_from_json(json::parse(spec));
          TimeSeries ts;
          {
            py::gil_scoped_release release;
            ts = run_scenario(s, tol, threads);
          }
          return time_series_to_json(ts).dump();
        });
  m.def("_builtin_scenario", [](const std::string& name) { return scenario_to_json(builtin_scenario(name)).dump(); });
  m.def("builtin_scenario_names", [] {
    std::vector<std::string> names;
    for (const auto& s : builtin_scenarios()) names.push_back(s.name);
    return names;
  });
  m.def("scenario_csv", [](const std::string& series) {
    std::ostringstream out;
    emit_csv(time_series_from_json(json::parse(series)), out);
    return out.str();
  });
}
