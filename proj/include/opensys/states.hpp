#pragma once

#include <span>
#include <vector>

#include "opensys/numerics.hpp"

namespace opensys {

/// Validity report for a candidate state. Diagnostics never throw.
struct StateDiagnostics {
  double trace_deviation = 0.0;        ///< |Tr rho - 1|
  double hermiticity_deviation = 0.0;  ///< max |rho - rho^dagger|
  double min_eigenvalue = 0.0;         ///< of the Hermitian part
  double determinant = 0.0;            ///< of the Hermitian part
  bool is_physical = false;
};

/// Hermitian, unit-trace, positive semidefinite N x N matrix.
///
/// Only validated matrices become a DensityMatrix; unphysical evolutions are
/// carried as plain ComplexMatrix values and inspected with check_state().
class DensityMatrix {
 public:
  /// Throws Error if `m` fails check_state at `tol`.
  explicit DensityMatrix(ComplexMatrix m, double tol = kDefaultTol);

  std::size_t dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  operator const ComplexMatrix&() const { return m_; }

 private:
  ComplexMatrix m_;
};

/// rho = v v^dagger; `v` must have unit 2-norm within 1e-9.
DensityMatrix pure_state(std::span<const cplx> v);

/// V[i*N + j] = rho(i, j), i.e. row-major stacking.
std::vector<cplx> vectorize(const ComplexMatrix& rho);

/// Inverse of vectorize. No physicality check is applied.
ComplexMatrix devectorize(std::span<const cplx> v, std::size_t n);

StateDiagnostics check_state(const ComplexMatrix& rho, double tol = kDefaultTol);

}  // namespace opensys
