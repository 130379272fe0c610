#include "opensys/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

namespace opensys {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kHermitianTol = 1e-12;

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0)) throw Error(std::string(what) + ": rates must be nonnegative, got " + std::to_string(v));
}

void require_two_level(const ComplexMatrix& rho0, const char* what) {
  if (rho0.rows() != 2 || rho0.cols() != 2) throw Error(std::string(what) + ": expected a 2x2 matrix");
}

// (1 - exp(-s t)) / s, continuous at s = 0.
double relaxed_fraction(double s, double t) { return s == 0.0 ? t : -std::expm1(-s * t) / s; }

}  // namespace

void HamiltonianSpec::validate() const {
  if (!h0.is_square() || h0.rows() == 0) throw Error("HamiltonianSpec: H0 must be square and nonempty");
  if (hermiticity_deviation(h0) > kHermitianTol) throw Error("HamiltonianSpec: H0 is not Hermitian");
  for (std::size_t m = 0; m < controls.size(); ++m) {
    const auto& op = controls[m].operator_;
    if (op.rows() != h0.rows() || op.cols() != h0.cols()) {
      throw Error("HamiltonianSpec: control " + std::to_string(m) + " has wrong dimension");
    }
    if (hermiticity_deviation(op) > kHermitianTol) {
      throw Error("HamiltonianSpec: control " + std::to_string(m) + " is not Hermitian");
    }
    if (!std::isfinite(controls[m].amplitude)) throw Error("HamiltonianSpec: non-finite control amplitude");
  }
}

ComplexMatrix HamiltonianSpec::total() const {
  ComplexMatrix h = h0;
  for (const auto& c : controls) h += cplx{c.amplitude, 0.0} * c.operator_;
  return h;
}

HamiltonianSpec two_level_hamiltonian(double w, double fx, double fy) {
  HamiltonianSpec h;
  h.h0 = ComplexMatrix{{w, 0.0}, {0.0, -w}};
  h.controls.push_back({fx, ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}});
  h.controls.push_back({fy, ComplexMatrix{{0.0, -kI}, {kI, 0.0}}});
  return h;
}

RateSet::RateSet(std::size_t dim) : dim_(dim), gamma_(dim * dim, 0.0), dephasing_(dim * dim, 0.0) {}

void RateSet::check_index(std::size_t a, std::size_t b) const {
  if (a >= dim_ || b >= dim_) throw Error("RateSet: level index out of range");
  if (a == b) throw Error("RateSet: diagonal rate slots are unused");
}

RateSet& RateSet::set_relaxation(std::size_t n, std::size_t k, double rate) {
  check_index(n, k);
  gamma_[n * dim_ + k] = rate;
  return *this;
}

RateSet& RateSet::set_dephasing(std::size_t k, std::size_t n, double rate) {
  check_index(k, n);
  dephasing_[k * dim_ + n] = rate;
  dephasing_[n * dim_ + k] = rate;
  return *this;
}

RateSet RateSet::from_tables(std::size_t dim, std::vector<double> relaxation, std::vector<double> dephasing) {
  if (relaxation.size() != dim * dim || dephasing.size() != dim * dim) {
    throw Error("RateSet: rate tables must be " + std::to_string(dim) + "x" + std::to_string(dim));
  }
  RateSet r;
  r.dim_ = dim;
  r.gamma_ = std::move(relaxation);
  r.dephasing_ = std::move(dephasing);
  return r;
}

void RateSet::validate() const {
  for (std::size_t a = 0; a < dim_; ++a) {
    if (gamma_[a * dim_ + a] != 0.0 || dephasing_[a * dim_ + a] != 0.0) {
      throw Error("RateSet: diagonal slot " + std::to_string(a) + " must be zero");
    }
    for (std::size_t b = 0; b < dim_; ++b) {
      const double g = gamma_[a * dim_ + b];
      const double d = dephasing_[a * dim_ + b];
      if (!(g >= 0.0) || !std::isfinite(g)) {
        throw Error("RateSet: negative relaxation rate gamma[" + std::to_string(a) + "][" + std::to_string(b) + "]");
      }
      if (!(d >= 0.0) || !std::isfinite(d)) {
        throw Error("RateSet: negative dephasing rate Gamma[" + std::to_string(a) + "][" + std::to_string(b) + "]");
      }
      if (d != dephasing_[b * dim_ + a]) {
        throw Error("RateSet: dephasing rates must be symmetric, Gamma[" + std::to_string(a) + "][" +
                    std::to_string(b) + "] != Gamma[" + std::to_string(b) + "][" + std::to_string(a) + "]");
      }
    }
  }
}

double RateSet::outflow(std::size_t k) const {
  double s = 0.0;
  for (std::size_t n = 0; n < dim_; ++n)
    if (n != k) s += gamma_[n * dim_ + k];
  return s;
}

Superoperator::Superoperator(std::size_t n, ComplexMatrix m) : dim(n), matrix(std::move(m)) {
  if (matrix.rows() != n * n || matrix.cols() != n * n) {
    throw Error("Superoperator: matrix must be " + std::to_string(n * n) + "x" + std::to_string(n * n));
  }
}

Superoperator Superoperator::zero(std::size_t n) { return Superoperator(n, ComplexMatrix(n * n, n * n)); }

Superoperator& Superoperator::operator+=(const Superoperator& other) {
  if (other.dim != dim) throw Error("Superoperator: dimension mismatch in sum");
  matrix += other.matrix;
  return *this;
}

Superoperator hamiltonian_superop(const HamiltonianSpec& h) {
  h.validate();
  const ComplexMatrix ham = h.total();
  const std::size_t n = ham.rows();
  // (i,j),(k,l) entry of -i (H (x) I - I (x) H^T) = -i (H_ik d_jl - d_ik H_lj)
  ComplexMatrix l(n * n, n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t m = 0; m < n; ++m) {
          cplx v{0.0, 0.0};
          if (j == m) v += ham(i, k);
          if (i == k) v -= ham(m, j);
          l(i * n + j, k * n + m) = -kI * v;
        }
  return Superoperator(n, std::move(l));
}

Superoperator dissipator_from_rates(const RateSet& rates) {
  rates.validate();
  const std::size_t n = rates.dim();
  ComplexMatrix l(n * n, n * n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t m = 0; m < n; ++m) {
      if (k == m) continue;
      l(k * n + m, k * n + m) = -rates.dephasing(k, m);
      l(m * n + m, k * n + k) = rates.relaxation(m, k);
    }
    l(k * n + k, k * n + k) = -rates.outflow(k);
  }
  return Superoperator(n, std::move(l));
}

Superoperator lindblad_superop(const std::optional<HamiltonianSpec>& h, std::span<const ComplexMatrix> ops) {
  std::size_t n = 0;
  if (h) n = h->dim();
  else if (!ops.empty()) n = ops.front().rows();
  if (n == 0) throw Error("lindblad_superop: need a Hamiltonian or at least one operator");

  Superoperator out = h ? hamiltonian_superop(*h) : Superoperator::zero(n);
  const ComplexMatrix eye = ComplexMatrix::identity(n);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const ComplexMatrix& v = ops[k];
    if (v.rows() != n || v.cols() != n) {
      throw Error("lindblad_superop: operator " + std::to_string(k) + " is not " + std::to_string(n) + "x" +
                  std::to_string(n));
    }
    const ComplexMatrix vdv = v.adjoint() * v;
    out.matrix += kron(v, v.conj());
    out.matrix -= 0.5 * kron(vdv, eye);
    out.matrix -= 0.5 * kron(eye, vdv.transpose());
  }
  return out;
}

ComplexMatrix propagate(const Superoperator& l, const ComplexMatrix& rho0, double t) {
  if (!(t >= 0.0)) throw Error("propagate: time must be nonnegative, got " + std::to_string(t));
  if (rho0.rows() != l.dim || rho0.cols() != l.dim) {
    throw Error("propagate: state is " + std::to_string(rho0.rows()) + "x" + std::to_string(rho0.cols()) +
                " but generator acts on " + std::to_string(l.dim) + "x" + std::to_string(l.dim));
  }
  const ComplexMatrix step = mat_exp(l.matrix * cplx{t, 0.0});
  const std::vector<cplx> v = vectorize(rho0);
  return devectorize(step * std::span<const cplx>(v), l.dim);
}

std::vector<ComplexMatrix> propagate_grid(const Superoperator& l, const ComplexMatrix& rho0,
                                          std::span<const double> times, unsigned threads) {
  std::vector<ComplexMatrix> out(times.size());
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(times.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < times.size(); ++i) out[i] = propagate(l, rho0, times[i]);
    return out;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < times.size(); i += threads) out[i] = propagate(l, rho0, times[i]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

ComplexMatrix two_level_analytic(const ComplexMatrix& rho0, double gamma12, double gamma21, double big_gamma,
                                 double t) {
  require_two_level(rho0, "two_level_analytic");
  require_nonnegative(gamma12, "two_level_analytic");
  require_nonnegative(gamma21, "two_level_analytic");
  require_nonnegative(big_gamma, "two_level_analytic");
  // Populations relax toward (g12, g21) / (g12 + g21) at total rate g12 + g21.
  const double phi = relaxed_fraction(gamma12 + gamma21, t);
  const cplx flow = phi * (gamma12 * rho0(1, 1) - gamma21 * rho0(0, 0));
  const double coherence = std::exp(-big_gamma * t);
  ComplexMatrix out(2, 2);
  out(0, 0) = rho0(0, 0) + flow;
  out(1, 1) = rho0(1, 1) - flow;
  out(0, 1) = coherence * rho0(0, 1);
  out(1, 0) = coherence * rho0(1, 0);
  return out;
}

double two_level_det(const ComplexMatrix& rho0, double gamma12, double gamma21, double big_gamma, double t) {
  require_two_level(rho0, "two_level_det");
  require_nonnegative(gamma12, "two_level_det");
  require_nonnegative(gamma21, "two_level_det");
  require_nonnegative(big_gamma, "two_level_det");
  const double s = gamma12 + gamma21;
  const double e = std::exp(-t * s);
  const double p11 = rho0(0, 0).real();
  const double p22 = rho0(1, 1).real();
  const double coh = (rho0(0, 1) * rho0(1, 0)).real();
  // (1 - E)^2 / s^2, continuous at s = 0
  const double frac = relaxed_fraction(s, t);
  return p11 * p22 * e - std::exp(-2.0 * t * big_gamma) * coh + 2.0 * p11 * gamma12 * p22 * gamma21 * frac * frac;
}

double two_level_exact_det(const ComplexMatrix& rho0, double gamma12, double gamma21, double big_gamma,
                           double t) {
  const ComplexMatrix r = two_level_analytic(rho0, gamma12, gamma21, big_gamma, t);
  return (r(0, 0) * r(1, 1) - r(0, 1) * r(1, 0)).real();
}

std::vector<cplx> generator_spectrum(const Superoperator& l) { return eigvals(l.matrix); }

double trace_leak(const Superoperator& l) {
  const std::size_t n = l.dim;
  double worst = 0.0;
  for (std::size_t col = 0; col < n * n; ++col) {
    cplx s{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) s += l.matrix(k * n + k, col);
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

}  // namespace opensys
