#pragma once

// JSON forms used by the CLI and the Python bindings.
//
//   matrix        {"n": N, "re": [N*N row-major], "im": [N*N row-major]}  (nested rows also read)
//   superoperator {"n": N, "n2": N*N, "re": [N^4], "im": [N^4]}
//   vector        {"re": [...], "im": [...]}           ("im" optional)
//   rates         {"n": N, "gamma": [[...]], "Gamma": [[...]]}
//   kraus         [matrix, matrix, ...]
//
// Readers throw SpecError with a JSON-path style location.

#include <string>
#include <vector>

#include "json.hpp"
#include "opensys/constraints.hpp"
#include "opensys/dynamics.hpp"
#include "opensys/kraus.hpp"
#include "opensys/numerics.hpp"
#include "opensys/states.hpp"

namespace opensys {

using json = nlohmann::json;

/// Invalid input document; what() starts with the offending path.
class SpecError : public Error {
 public:
  SpecError(const std::string& path, const std::string& message)
      : Error(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j, const std::string& path = "$");

json vector_to_json(std::span<const cplx> v);
std::vector<cplx> vector_from_json(const json& j, const std::string& path = "$");

json superop_to_json(const Superoperator& s);
Superoperator superop_from_json(const json& j, const std::string& path = "$");

json rates_to_json(const RateSet& r);
/// Parses and validates; rate violations are reported as SpecError.
RateSet rates_from_json(const json& j, const std::string& path = "$");

json kraus_to_json(const KrausMap& k);
std::vector<ComplexMatrix> kraus_elements_from_json(const json& j, const std::string& path = "$");

json diagnostics_to_json(const StateDiagnostics& d);
json report_to_json(const ConstraintReport& r);
ConstraintReport report_from_json(const json& j, const std::string& path = "$");

/// Reads and parses a JSON file; IO and syntax failures raise Error.
json read_json_file(const std::string& filename);

}  // namespace opensys
