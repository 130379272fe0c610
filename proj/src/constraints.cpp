#include "opensys/constraints.hpp"

#include <algorithm>
#include <cmath>

namespace opensys {

namespace {

std::string pair_id(const char* prefix, std::size_t i, std::size_t j) {
  return std::string(prefix) + "[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]";
}

// Gamma~_ij for all i != j, zero diagonal.
std::vector<double> pure_dephasing_part(const RateSet& r) {
  const std::size_t n = r.dim();
  std::vector<double> out(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) out[i * n + j] = r.dephasing(i, j) - 0.5 * (r.outflow(i) + r.outflow(j));
  return out;
}

// Least-squares solution of (d_i + d_j) / 2 = target_ij over all pairs i < j.
std::vector<double> fit_allocation(const std::vector<double>& target, std::size_t n) {
  if (n == 1) return {0.0};
  if (n == 2) return {target[1], target[1]};
  if (n == 3) {
    const double t01 = target[0 * 3 + 1];
    const double t02 = target[0 * 3 + 2];
    const double t12 = target[1 * 3 + 2];
    return {t01 + t02 - t12, t01 + t12 - t02, t02 + t12 - t01};
  }
  // Normal equations: (A^T A)_kk = (n - 1) / 4, off-diagonal 1/4.
  ComplexMatrix normal(n, n);
  ComplexMatrix rhs(n, 1);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t m = 0; m < n; ++m) normal(k, m) = k == m ? 0.25 * static_cast<double>(n - 1) : 0.25;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      rhs(i, 0) += 0.5 * target[i * n + j];
      rhs(j, 0) += 0.5 * target[i * n + j];
    }
  const ComplexMatrix d = solve(normal, rhs);
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = d(k, 0).real();
  return out;
}

}  // namespace

std::vector<ComplexMatrix> LindbladDiagonalCoeffs::operators() const {
  std::vector<ComplexMatrix> ops;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const cplx amp = (*this)(i, j);
      if (amp == cplx{0.0, 0.0}) continue;
      ops.push_back(amp * ComplexMatrix::unit(dim, i, j));
    }
  return ops;
}

DerivedRates rates_from_coeffs(const LindbladDiagonalCoeffs& c) {
  const std::size_t n = c.dim;
  if (c.a.size() != n * n) throw Error("rates_from_coeffs: coefficient table has wrong size");
  RateSet rates(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) rates.set_relaxation(i, j, std::norm(c(i, j)));

  DerivedRates out{rates, std::vector<double>(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double pure = 0.5 * (std::norm(c(i, i)) + std::norm(c(j, j)));
      out.pure_dephasing[i * n + j] = out.pure_dephasing[j * n + i] = pure;
      out.rates.set_dephasing(i, j, pure + 0.5 * (rates.outflow(i) + rates.outflow(j)));
    }
  return out;
}

ConstraintReport check_two_level(double gamma12, double gamma21, double big_gamma) {
  if (!(gamma12 >= 0.0 && gamma21 >= 0.0 && big_gamma >= 0.0)) {
    throw Error("check_two_level: rates must be nonnegative");
  }
  ConstraintReport report;
  const double lhs = 2.0 * big_gamma;
  const double rhs = gamma12 + gamma21;
  if (lhs < rhs) {
    report.satisfied = false;
    report.violations.push_back({"two_level", lhs, rhs});
  } else {
    report.dephasing_allocation = std::vector<double>{big_gamma - 0.5 * rhs, big_gamma - 0.5 * rhs};
  }
  return report;
}

ConstraintReport check_n_level(const RateSet& r, double tol) {
  r.validate();
  const std::size_t n = r.dim();
  ConstraintReport report;
  report.pure_dephasing = pure_dephasing_part(r);
  if (n == 0) return report;

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double g = report.pure_dephasing[i * n + j];
      if (g < -tol) report.violations.push_back({pair_id("pure_dephasing", i, j), g, 0.0});
    }

  const std::vector<double> d = fit_allocation(report.pure_dephasing, n);
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      residual = std::max(residual, std::abs(0.5 * (d[i] + d[j]) - report.pure_dephasing[i * n + j]));
  if (residual > tol) report.violations.push_back({"allocation_residual", residual, tol});
  for (std::size_t k = 0; k < n; ++k)
    if (d[k] < -tol) report.violations.push_back({"allocation[" + std::to_string(k + 1) + "]", d[k], 0.0});

  report.satisfied = report.violations.empty();
  if (report.satisfied) report.dephasing_allocation = d;
  return report;
}

}  // namespace opensys
