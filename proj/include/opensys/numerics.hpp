#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace opensys {

using cplx = std::complex<double>;

/// Default absolute tolerance for every physicality and shape check.
inline constexpr double kDefaultTol = 1e-9;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense complex matrix with row-major storage.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  /// Row-by-row literal, e.g. {{1, 0}, {0, 1}}.
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix zeros(std::size_t n) { return ComplexMatrix(n, n); }
  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const cplx> diag);
  /// Standard basis matrix E_ij (0-based) of size n x n.
  static ComplexMatrix unit(std::size_t n, std::size_t i, std::size_t j);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const cplx> entries() const { return data_; }
  std::span<cplx> entries() { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;

  cplx trace() const;
  /// Largest entry modulus.
  double max_abs() const;
  /// Maximum absolute column sum.
  double norm1() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx scale);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, cplx s);
std::vector<cplx> operator*(const ComplexMatrix& a, std::span<const cplx> v);

/// Elementwise max |a - b|; shapes must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// max |M - M^dagger| for a square matrix.
double hermiticity_deviation(const ComplexMatrix& m);

/// Kronecker product: block (i, j) of the result is a(i, j) * b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Solves a * x = b with partial-pivoting LU. Throws on a singular system.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);

/// Matrix exponential by scaling and squaring with a degree-13 Pade kernel.
ComplexMatrix mat_exp(const ComplexMatrix& m);

/// Eigenvalues of a Hermitian matrix in ascending order (cyclic Jacobi).
/// Throws if max |M - M^dagger| exceeds tol.
std::vector<double> herm_eigvals(const ComplexMatrix& m, double tol = kDefaultTol);

/// Eigenvalues of a general square matrix via Hessenberg reduction and
/// shifted QR. Returned sorted by descending real part, then imaginary part.
std::vector<cplx> eigvals(const ComplexMatrix& m);

}  // namespace opensys
