#include "opensys/states.hpp"

#include <cmath>
#include <string>

namespace opensys {

DensityMatrix::DensityMatrix(ComplexMatrix m, double tol) : m_(std::move(m)) {
  if (!m_.is_square() || m_.rows() == 0) throw Error("DensityMatrix: matrix must be square and nonempty");
  const StateDiagnostics d = check_state(m_, tol);
  if (!d.is_physical) {
    throw Error("DensityMatrix: not a physical state (trace deviation " +
                std::to_string(d.trace_deviation) + ", hermiticity deviation " +
                std::to_string(d.hermiticity_deviation) + ", min eigenvalue " +
                std::to_string(d.min_eigenvalue) + ")");
  }
}

DensityMatrix pure_state(std::span<const cplx> v) {
  if (v.empty()) throw Error("pure_state: empty vector");
  double norm2 = 0.0;
  for (const auto& z : v) norm2 += std::norm(z);
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-9) {
    throw Error("pure_state: vector is not normalized (norm " + std::to_string(std::sqrt(norm2)) + ")");
  }
  const std::size_t n = v.size();
  ComplexMatrix rho(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rho(i, j) = v[i] * std::conj(v[j]);
  return DensityMatrix(std::move(rho));
}

std::vector<cplx> vectorize(const ComplexMatrix& rho) {
  const auto e = rho.entries();
  return {e.begin(), e.end()};
}

ComplexMatrix devectorize(std::span<const cplx> v, std::size_t n) {
  if (v.size() != n * n) {
    throw Error("devectorize: expected " + std::to_string(n * n) + " entries, got " +
                std::to_string(v.size()));
  }
  return ComplexMatrix(n, n, std::vector<cplx>(v.begin(), v.end()));
}

StateDiagnostics check_state(const ComplexMatrix& rho, double tol) {
  StateDiagnostics d;
  if (!rho.is_square() || rho.rows() == 0) {
    d.trace_deviation = d.hermiticity_deviation = INFINITY;
    d.min_eigenvalue = -INFINITY;
    d.determinant = NAN;
    return d;
  }
  const std::size_t n = rho.rows();
  d.trace_deviation = std::abs(rho.trace() - 1.0);
  d.hermiticity_deviation = hermiticity_deviation(rho);

  ComplexMatrix herm(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) herm(i, j) = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
  const std::vector<double> ev = herm_eigvals(herm, INFINITY);
  d.min_eigenvalue = ev.front();
  d.determinant = 1.0;
  for (double x : ev) d.determinant *= x;

  d.is_physical = d.trace_deviation <= tol && d.hermiticity_deviation <= tol && d.min_eigenvalue >= -tol;
  return d;
}

}  // namespace opensys
