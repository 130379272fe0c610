#include "opensys/kraus.hpp"

#include <cmath>
#include <string>

namespace opensys {

double completeness_deviation(std::span<const ComplexMatrix> elements) {
  if (elements.empty()) throw Error("kraus: operator set must be nonempty");
  const std::size_t n = elements.front().rows();
  ComplexMatrix sum(n, n);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& w = elements[i];
    if (!w.is_square() || w.rows() != n) {
      throw Error("kraus: element " + std::to_string(i) + " is not " + std::to_string(n) + "x" + std::to_string(n));
    }
    sum += w.adjoint() * w;
  }
  return max_abs_diff(sum, ComplexMatrix::identity(n));
}

KrausMap validate_kraus(std::vector<ComplexMatrix> elements, double tol) {
  const double dev = completeness_deviation(elements);
  if (!(dev <= tol)) {
    throw Error("kraus: completeness violated, max |sum W^dagger W - I| = " + std::to_string(dev));
  }
  return KrausMap(std::move(elements));
}

ComplexMatrix apply_kraus(const KrausMap& m, const ComplexMatrix& rho) {
  if (rho.rows() != m.dim() || rho.cols() != m.dim()) throw Error("apply_kraus: dimension mismatch");
  ComplexMatrix out(m.dim(), m.dim());
  for (const auto& w : m.elements()) out += w * rho * w.adjoint();
  return out;
}

KrausMap compose_kraus(const KrausMap& g, const KrausMap& g_prime) {
  if (g.dim() != g_prime.dim()) throw Error("compose_kraus: dimension mismatch");
  std::vector<ComplexMatrix> product;
  product.reserve(g.size() * g_prime.size());
  for (const auto& w : g.elements())
    for (const auto& w2 : g_prime.elements()) product.push_back(w * w2);
  return KrausMap(std::move(product));
}

bool is_invertible_element(const KrausMap& g, double tol) {
  if (g.size() != 1) return false;
  const auto& w = g.elements().front();
  return max_abs_diff(w.adjoint() * w, ComplexMatrix::identity(w.rows())) <= tol;
}

Superoperator kraus_to_superop(const KrausMap& g) {
  const std::size_t n = g.dim();
  ComplexMatrix s(n * n, n * n);
  for (const auto& w : g.elements()) s += kron(w, w.conj());
  return Superoperator(n, std::move(s));
}

KrausMap amplitude_damping(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("amplitude_damping: p must lie in [0, 1]");
  std::vector<ComplexMatrix> w;
  w.push_back(ComplexMatrix{{1.0, 0.0}, {0.0, std::sqrt(1.0 - p)}});
  w.push_back(ComplexMatrix{{0.0, std::sqrt(p)}, {0.0, 0.0}});
  return validate_kraus(std::move(w), 1e-12);
}

}  // namespace opensys
