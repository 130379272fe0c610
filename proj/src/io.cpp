#include "opensys/io.hpp"

#include <cmath>
#include <fstream>

namespace opensys {

namespace {

const json& require_field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw SpecError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SpecError(path, std::string("missing field \"") + key + "\"");
  return *it;
}

std::size_t read_size(const json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) throw SpecError(path, "expected a positive integer");
  const auto v = j.get<long long>();
  if (v <= 0) throw SpecError(path, "expected a positive integer");
  return static_cast<std::size_t>(v);
}

std::vector<double> read_reals(const json& j, const std::string& path) {
  if (!j.is_array()) throw SpecError(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    if (j[i].is_array()) {  // nested rows are flattened row-major
      for (std::size_t k = 0; k < j[i].size(); ++k) {
        if (!j[i][k].is_number()) throw SpecError(at + "[" + std::to_string(k) + "]", "expected a number");
        out.push_back(j[i][k].get<double>());
      }
      continue;
    }
    if (!j[i].is_number()) throw SpecError(at, "expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

std::vector<cplx> read_complex(const json& j, const std::string& path, std::size_t expected) {
  const std::vector<double> re = read_reals(require_field(j, "re", path), path + ".re");
  std::vector<double> im(re.size(), 0.0);
  if (j.contains("im")) im = read_reals(j["im"], path + ".im");
  if (expected != 0 && re.size() != expected) {
    throw SpecError(path + ".re", "expected " + std::to_string(expected) + " entries, got " + std::to_string(re.size()));
  }
  if (im.size() != re.size()) throw SpecError(path + ".im", "length differs from \"re\"");
  std::vector<cplx> out(re.size());
  for (std::size_t k = 0; k < re.size(); ++k) out[k] = {re[k], im[k]};
  return out;
}

json split(std::span<const cplx> values) {
  json re = json::array();
  json im = json::array();
  for (const auto& z : values) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

std::vector<double> read_table(const json& j, std::size_t n, const std::string& path) {
  if (!j.is_array() || j.size() != n) throw SpecError(path, "expected " + std::to_string(n) + " rows");
  std::vector<double> out;
  out.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    std::vector<double> row = read_reals(j[i], row_path);
    if (row.size() != n) throw SpecError(row_path, "expected " + std::to_string(n) + " entries");
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

json write_table(std::span<const double> t, std::size_t n) {
  json out = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < n; ++j) row.push_back(t[i * n + j]);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
  if (!m.is_square()) throw Error("matrix_to_json: only square matrices are serialized");
  json j = split(m.entries());
  j["n"] = m.rows();
  return j;
}

ComplexMatrix matrix_from_json(const json& j, const std::string& path) {
  const std::size_t n = read_size(require_field(j, "n", path), path + ".n");
  return ComplexMatrix(n, n, read_complex(j, path, n * n));
}

json vector_to_json(std::span<const cplx> v) { return split(v); }

std::vector<cplx> vector_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw SpecError(path, "expected an object with \"re\" and \"im\"");
  auto v = read_complex(j, path, 0);
  if (v.empty()) throw SpecError(path + ".re", "vector must be nonempty");
  return v;
}

json superop_to_json(const Superoperator& s) {
  json j = split(s.matrix.entries());
  j["n"] = s.dim;
  j["n2"] = s.dim * s.dim;
  return j;
}

Superoperator superop_from_json(const json& j, const std::string& path) {
  const std::size_t n = read_size(require_field(j, "n", path), path + ".n");
  const std::size_t n2 = read_size(require_field(j, "n2", path), path + ".n2");
  if (n2 != n * n) throw SpecError(path + ".n2", "must equal n*n");
  return Superoperator(n, ComplexMatrix(n2, n2, read_complex(j, path, n2 * n2)));
}

json rates_to_json(const RateSet& r) {
  return json{{"n", r.dim()},
              {"gamma", write_table(r.relaxation_table(), r.dim())},
              {"Gamma", write_table(r.dephasing_table(), r.dim())}};
}

RateSet rates_from_json(const json& j, const std::string& path) {
  const std::size_t n = read_size(require_field(j, "n", path), path + ".n");
  std::vector<double> gamma(n * n, 0.0);
  std::vector<double> dephasing(n * n, 0.0);
  if (j.contains("gamma")) gamma = read_table(j["gamma"], n, path + ".gamma");
  if (j.contains("Gamma")) dephasing = read_table(j["Gamma"], n, path + ".Gamma");
  RateSet r = RateSet::from_tables(n, std::move(gamma), std::move(dephasing));
  try {
    r.validate();
  } catch (const Error& e) {
    throw SpecError(path, e.what());
  }
  return r;
}

json kraus_to_json(const KrausMap& k) {
  json out = json::array();
  for (const auto& w : k.elements()) out.push_back(matrix_to_json(w));
  return out;
}

std::vector<ComplexMatrix> kraus_elements_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SpecError(path, "expected a nonempty array of matrices");
  std::vector<ComplexMatrix> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(matrix_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

json diagnostics_to_json(const StateDiagnostics& d) {
  return json{{"trace_deviation", d.trace_deviation},
              {"hermiticity_deviation", d.hermiticity_deviation},
              {"min_eigenvalue", d.min_eigenvalue},
              {"determinant", d.determinant},
              {"is_physical", d.is_physical}};
}

json report_to_json(const ConstraintReport& r) {
  json violations = json::array();
  for (const auto& v : r.violations) violations.push_back(json{{"id", v.id}, {"lhs", v.lhs}, {"rhs", v.rhs}});
  json out{{"satisfied", r.satisfied}, {"violations", std::move(violations)}};
  out["dephasing_allocation"] = r.dephasing_allocation ? json(*r.dephasing_allocation) : json(nullptr);
  if (!r.pure_dephasing.empty()) {
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(r.pure_dephasing.size()))));
    out["pure_dephasing"] = write_table(r.pure_dephasing, n);
  }
  return out;
}

ConstraintReport report_from_json(const json& j, const std::string& path) {
  ConstraintReport r;
  r.satisfied = require_field(j, "satisfied", path).get<bool>();
  const json& v = require_field(j, "violations", path);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = path + ".violations[" + std::to_string(i) + "]";
    r.violations.push_back({require_field(v[i], "id", p).get<std::string>(), require_field(v[i], "lhs", p).get<double>(),
                            require_field(v[i], "rhs", p).get<double>()});
  }
  if (j.contains("dephasing_allocation") && !j["dephasing_allocation"].is_null()) {
    r.dephasing_allocation = read_reals(j["dephasing_allocation"], path + ".dephasing_allocation");
  }
  if (j.contains("pure_dephasing")) {
    const json& t = j["pure_dephasing"];
    r.pure_dephasing = read_table(t, t.size(), path + ".pure_dephasing");
  }
  return r;
}

json read_json_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw Error("cannot open " + filename);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(filename + ": " + e.what());
  }
}

}  // namespace opensys
