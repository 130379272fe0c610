#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opensys/dynamics.hpp"
#include "opensys/numerics.hpp"

namespace opensys {

/// Amplitudes a[i][j] of the diagonal Lindblad ansatz V_[i,j] = a_[i,j] E_ij.
struct LindbladDiagonalCoeffs {
  std::size_t dim = 0;
  std::vector<cplx> a;  ///< row-major, a[i * dim + j]

  explicit LindbladDiagonalCoeffs(std::size_t n = 0) : dim(n), a(n * n, 0.0) {}

  cplx& operator()(std::size_t i, std::size_t j) { return a[i * dim + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a[i * dim + j]; }

  /// The N^2 jump operators a_[i,j] E_ij (zero amplitudes are skipped).
  std::vector<ComplexMatrix> operators() const;
};

struct DerivedRates {
  RateSet rates;
  /// Pure-dephasing part (|a_ii|^2 + |a_jj|^2) / 2, row-major N x N, zero diagonal.
  std::vector<double> pure_dephasing;
};

struct ConstraintViolation {
  std::string id;  ///< e.g. "two_level", "pure_dephasing[1,2]", "allocation[2]"
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ConstraintReport {
  bool satisfied = true;
  std::vector<ConstraintViolation> violations;
  /// Per-level pure-dephasing rates d_k when a nonnegative allocation exists.
  std::optional<std::vector<double>> dephasing_allocation;
  /// Gamma~_ij = Gamma_ij - (outflow_i + outflow_j) / 2, row-major (N x N);
  /// empty for the two-level check.
  std::vector<double> pure_dephasing;
};

DerivedRates rates_from_coeffs(const LindbladDiagonalCoeffs& c);

/// 2 Gamma >= gamma12 + gamma21; equality is accepted.
ConstraintReport check_two_level(double gamma12, double gamma21, double big_gamma);

/// Representability of `r` by the diagonal Lindblad ansatz: every
/// Gamma~_ij >= 0 and Gamma~_ij = (d_i + d_j) / 2 for some d_k >= 0.
ConstraintReport check_n_level(const RateSet& r, double tol = 1e-10);

}  // namespace opensys
