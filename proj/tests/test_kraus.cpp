#include <cmath>

#include "doctest.h"
#include "opensys/kraus.hpp"
#include "test_support.hpp"

using namespace opensys;
using namespace opensys::testing;

namespace {

RateSet decay_rates(double g) {
  RateSet r(2);
  r.set_relaxation(0, 1, g).set_dephasing(0, 1, g / 2);
  return r;
}

}  // namespace

TEST_SUITE("kraus") {

TEST_CASE("validate_kraus examples") {
  CHECK_NOTHROW(validate_kraus({ComplexMatrix::identity(2)}));
  for (double p : {0.0, 0.2, 0.75, 1.0}) CHECK(amplitude_damping(p).size() == 2);
  CHECK(completeness_deviation(std::vector<ComplexMatrix>{ComplexMatrix::identity(2), ComplexMatrix::identity(2)}) == 1.0);
  CHECK_THROWS_WITH_AS(validate_kraus({ComplexMatrix::identity(2), ComplexMatrix::identity(2)}),
                       doctest::Contains("1.0"), Error);
  CHECK_THROWS_AS(validate_kraus({}), Error);
  CHECK_THROWS_AS(validate_kraus({ComplexMatrix::identity(2), ComplexMatrix::identity(3)}), Error);
  CHECK_THROWS_AS(amplitude_damping(1.5), Error);
}

TEST_CASE("apply_kraus examples") {
  Rng rng(51);
  const auto rho = random_density(rng, 2);
  const auto id = validate_kraus({ComplexMatrix::identity(2)});
  CHECK(max_abs_diff(apply_kraus(id, rho), rho) == 0.0);

  const auto full = apply_kraus(amplitude_damping(1.0), rho);
  CHECK(max_abs_diff(full, ComplexMatrix::unit(2, 0, 0)) <= 1e-15);

  CHECK_THROWS_AS(apply_kraus(id, ComplexMatrix::identity(3)), Error);
}

TEST_CASE("amplitude damping equals the two-level decay solution") {
  Rng rng(52);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double g = u(rng), t = u(rng);
    const auto rho = random_density(rng, 2);
    const auto channel = amplitude_damping(-std::expm1(-g * t));
    CHECK(max_abs_diff(apply_kraus(channel, rho), two_level_analytic(rho, g, 0.0, g / 2, t)) <= 1e-10);
  }
}

TEST_CASE("compose_kraus examples") {
  Rng rng(53);
  const auto u1 = random_unitary(rng, 3), u2 = random_unitary(rng, 3);
  const auto composed = compose_kraus(validate_kraus({u1}), validate_kraus({u2}));
  REQUIRE(composed.size() == 1);
  CHECK(max_abs_diff(composed.elements()[0], u1 * u2) == 0.0);

  const double p = 0.3, q = 0.55;
  const auto dd = compose_kraus(amplitude_damping(p), amplitude_damping(q));
  CHECK(dd.size() == 4);
  CHECK(max_abs_diff(kraus_to_superop(dd).matrix, kraus_to_superop(amplitude_damping(p + q - p * q)).matrix) <= 1e-10);

  const auto g = validate_kraus(random_kraus_elements(rng, 3, 3), 1e-10);
  const auto gi = compose_kraus(g, validate_kraus({ComplexMatrix::identity(3)}));
  REQUIRE(gi.size() == g.size());
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(gi.elements()[i] == g.elements()[i]);

  CHECK_THROWS_AS(compose_kraus(g, amplitude_damping(0.1)), Error);
}

TEST_CASE("compose_kraus is a homomorphism into superoperators") {
  Rng rng(54);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto g = validate_kraus(random_kraus_elements(rng, n, 1 + trial % 3), 1e-10);
    const auto h = validate_kraus(random_kraus_elements(rng, n, 2), 1e-10);
    const auto gh = compose_kraus(g, h);
    CHECK(gh.size() == g.size() * h.size());
    CHECK(completeness_deviation(gh.elements()) <= 1e-9);
    CHECK(max_abs_diff(kraus_to_superop(gh).matrix, kraus_to_superop(g).matrix * kraus_to_superop(h).matrix) <= 1e-10);
    const auto rho = random_density(rng, n);
    CHECK(max_abs_diff(apply_kraus(gh, rho), apply_kraus(g, apply_kraus(h, rho))) <= 1e-12);
  }
}

TEST_CASE("is_invertible_element") {
  Rng rng(55);
  CHECK(is_invertible_element(validate_kraus({random_unitary(rng, 3)})));
  CHECK_FALSE(is_invertible_element(amplitude_damping(0.3)));
  const ComplexMatrix shrink{{1.0, 0.0}, {0.0, 0.9}};
  CHECK_THROWS_AS(validate_kraus({shrink}), Error);
  CHECK_FALSE(is_invertible_element(validate_kraus({shrink}, 1.0)));
}

TEST_CASE("kraus_to_superop examples") {
  CHECK(kraus_to_superop(validate_kraus({ComplexMatrix::identity(2)})).matrix == ComplexMatrix::identity(4));
  Rng rng(56);
  const auto u = random_unitary(rng, 2);
  CHECK(kraus_to_superop(validate_kraus({u})).matrix == kron(u, u.conj()));

  const auto ld = dissipator_from_rates(decay_rates(1.0));
  for (double t : {0.5, 1.0, 2.0}) {
    const auto channel = amplitude_damping(-std::expm1(-t));
    CHECK(max_abs_diff(kraus_to_superop(channel).matrix, mat_exp(ld.matrix * cplx{t, 0.0})) <= 1e-10);
  }

  const auto g = validate_kraus(random_kraus_elements(rng, 3, 2), 1e-10);
  const auto rho = random_density(rng, 3);
  const auto v = vectorize(rho);
  const auto applied = kraus_to_superop(g).matrix * std::span<const cplx>(v);
  CHECK(max_abs_diff(devectorize(applied, 3), apply_kraus(g, rho)) <= 1e-14);
}

TEST_CASE("random channels output physical states") {
  Rng rng(57);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const auto g = validate_kraus(random_kraus_elements(rng, n, 1 + trial % 4), 1e-10);
    const auto out = apply_kraus(g, random_density(rng, n));
    CHECK(check_state(out, 1e-9).is_physical);
    CHECK(std::abs(out.trace() - 1.0) <= 1e-12);
  }
}

}  // TEST_SUITE
