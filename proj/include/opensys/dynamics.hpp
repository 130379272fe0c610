#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "opensys/numerics.hpp"
#include "opensys/states.hpp"

namespace opensys {

/// H = H0 + sum_m f_m H_m with constant real control amplitudes (hbar = 1).
struct HamiltonianSpec {
  struct Control {
    double amplitude = 0.0;
    ComplexMatrix operator_;
  };

  ComplexMatrix h0;
  std::vector<Control> controls;

  std::size_t dim() const { return h0.rows(); }
  /// Throws Error unless all matrices are square, equal in size and
  /// Hermitian within 1e-12.
  void validate() const;
  ComplexMatrix total() const;
};

/// The two-level Hamiltonian w*sz + fx*sx + fy*sy.
HamiltonianSpec two_level_hamiltonian(double w, double fx, double fy);

/// Phenomenological population-relaxation and dephasing rates.
///
/// relaxation(n, k) is the rate of the transition k -> n (gain term of level n);
/// dephasing(k, n) is the symmetric decay rate of the coherence rho_kn.
/// Indices are 0-based; diagonal slots are unused and must stay zero.
class RateSet {
 public:
  RateSet() = default;
  explicit RateSet(std::size_t dim);

  std::size_t dim() const { return dim_; }

  double relaxation(std::size_t n, std::size_t k) const { return gamma_[n * dim_ + k]; }
  double dephasing(std::size_t k, std::size_t n) const { return dephasing_[k * dim_ + n]; }

  RateSet& set_relaxation(std::size_t n, std::size_t k, double rate);
  /// Sets both (k, n) and (n, k).
  RateSet& set_dephasing(std::size_t k, std::size_t n, double rate);

  /// Raw row-major storage, for serialization.
  std::span<const double> relaxation_table() const { return gamma_; }
  std::span<const double> dephasing_table() const { return dephasing_; }
  static RateSet from_tables(std::size_t dim, std::vector<double> relaxation, std::vector<double> dephasing);

  /// Throws Error on negative rates, asymmetric dephasing or nonzero diagonals.
  void validate() const;

  /// Total decay rate out of level k: sum over n != k of relaxation(n, k).
  double outflow(std::size_t k) const;

 private:
  void check_index(std::size_t a, std::size_t b) const;

  std::size_t dim_ = 0;
  std::vector<double> gamma_;
  std::vector<double> dephasing_;
};

/// Liouville-space operator acting on row-major vectorized N x N matrices.
struct Superoperator {
  std::size_t dim = 0;  ///< N; matrix is N^2 x N^2
  ComplexMatrix matrix;

  Superoperator() = default;
  Superoperator(std::size_t n, ComplexMatrix m);

  static Superoperator zero(std::size_t n);

  Superoperator& operator+=(const Superoperator& other);
  friend Superoperator operator+(Superoperator a, const Superoperator& b) { return a += b; }
};

/// L_H = -i (H (x) I - I (x) H^T).
Superoperator hamiltonian_superop(const HamiltonianSpec& h);

/// Dissipator with (kn,kn) = -Gamma_kn, (nn,kk) = gamma_nk and
/// (nn,nn) = -sum_k gamma_kn.
Superoperator dissipator_from_rates(const RateSet& rates);

/// Lindblad generator; the Hamiltonian part is omitted when `h` is empty.
Superoperator lindblad_superop(const std::optional<HamiltonianSpec>& h, std::span<const ComplexMatrix> ops);

/// devectorize(exp(L t) vectorize(rho0)). Rejects t < 0.
ComplexMatrix propagate(const Superoperator& l, const ComplexMatrix& rho0, double t);
inline ComplexMatrix propagate(const Superoperator& l, const DensityMatrix& rho0, double t) {
  return propagate(l, rho0.matrix(), t);
}

/// Propagates to every time in `times`. With threads > 1 the grid is split
/// across worker threads; results are identical to the sequential path.
std::vector<ComplexMatrix> propagate_grid(const Superoperator& l, const ComplexMatrix& rho0,
                                          std::span<const double> times, unsigned threads = 1);

/// Closed-form two-level solution under dissipator_from_rates with
/// relaxation(0,1) = gamma12, relaxation(1,0) = gamma21, dephasing = big_gamma.
ComplexMatrix two_level_analytic(const ComplexMatrix& rho0, double gamma12, double gamma21, double big_gamma,
                                 double t);

/// Three-term closed form
///   r11 r22 E - e^{-2 Gamma t} r12 r21 + 2 r11 r22 g12 g21 (1 - E)^2 / (g12 + g21)^2
/// with E = e^{-t (g12 + g21)}. This coincides with det(two_level_analytic) at
/// t = 0 and in a few degenerate cases only; two_level_exact_det gives the
/// determinant of the evolved matrix.
double two_level_det(const ComplexMatrix& rho0, double gamma12, double gamma21, double big_gamma, double t);

/// det(two_level_analytic(...)), expanded in closed form.
double two_level_exact_det(const ComplexMatrix& rho0, double gamma12, double gamma21, double big_gamma, double t);

/// All N^2 eigenvalues of the generator, descending by real part.
std::vector<cplx> generator_spectrum(const Superoperator& l);

/// max over V of |Tr devectorize(L V)|, evaluated on the trace functional:
/// the largest column sum over diagonal rows.
double trace_leak(const Superoperator& l);

}  // namespace opensys
