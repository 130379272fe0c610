#pragma once

#include <span>
#include <vector>

#include "opensys/dynamics.hpp"
#include "opensys/numerics.hpp"
#include "opensys/states.hpp"

namespace opensys {

/// Operator-sum channel {W_i} with sum_i W_i^dagger W_i = I.
class KrausMap {
 public:
  std::size_t dim() const { return elements_.front().rows(); }
  std::size_t size() const { return elements_.size(); }
  std::span<const ComplexMatrix> elements() const { return elements_; }

 private:
  explicit KrausMap(std::vector<ComplexMatrix> elements) : elements_(std::move(elements)) {}

  friend KrausMap validate_kraus(std::vector<ComplexMatrix>, double);
  friend KrausMap compose_kraus(const KrausMap&, const KrausMap&);

  std::vector<ComplexMatrix> elements_;
};

/// max |sum_i W_i^dagger W_i - I|. Throws on empty or mismatched input.
double completeness_deviation(std::span<const ComplexMatrix> elements);

/// Throws Error (naming the deviation) unless completeness holds within tol.
KrausMap validate_kraus(std::vector<ComplexMatrix> elements, double tol = kDefaultTol);

ComplexMatrix apply_kraus(const KrausMap& m, const ComplexMatrix& rho);

/// Set product {w_i w'_j}; applying the result equals applying g' then g.
KrausMap compose_kraus(const KrausMap& g, const KrausMap& g_prime);

/// True iff the map is a single unitary element.
bool is_invertible_element(const KrausMap& g, double tol = kDefaultTol);

/// sum_i W_i (x) conj(W_i).
Superoperator kraus_to_superop(const KrausMap& g);

/// Two-level amplitude damping {diag(1, sqrt(1-p)), sqrt(p) E_12}, p in [0, 1].
KrausMap amplitude_damping(double p);

}  // namespace opensys
