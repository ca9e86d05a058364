#include "varlex/exponent.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace varlex;
using doctest::Approx;

TEST_CASE("eval of registry exponents") {
  CHECK(ExponentFunction::constant(2.0)(0.5) == 2.0);
  const auto p = ExponentFunction::one_minus_log();
  CHECK(p(1.0) == Approx(1.0));
  CHECK(p(std::exp(-1.0)) == Approx(2.0).epsilon(1e-14));
  CHECK(std::isinf(p(0.0)));
  CHECK_THROWS_AS(p(1.5), DomainError);
  CHECK_THROWS_AS(p(-0.1), DomainError);
}

TEST_CASE("infinite set is explicit") {
  const auto p = ExponentFunction::constant(2.0).with_infinite_set({{0.5, 1.0}});
  CHECK(p(0.25) == 2.0);
  CHECK(std::isinf(p(0.75)));
  CHECK(p.infinite_measure() == Approx(0.5));
  CHECK_FALSE(p.in_d_plus());
}

TEST_CASE("values below one are rejected") {
  CHECK_THROWS(ExponentFunction::constant(0.5));
  CHECK_THROWS(ExponentFunction::affine(0.5, 1.0));
}

TEST_CASE("essential bounds") {
  auto b = ExponentFunction::constant(3.0).essential_bounds();
  CHECK(b.first == 3.0);
  CHECK(b.second == 3.0);
  b = ExponentFunction::one_minus_log().essential_bounds();
  CHECK(b.first == Approx(1.0));
  CHECK(std::isinf(b.second));
  b = ExponentFunction::sinusoidal(2.0, 1.0, 1.0).essential_bounds();
  CHECK(b.first == Approx(1.0).epsilon(1e-12));
  CHECK(b.second == Approx(3.0).epsilon(1e-12));
}

TEST_CASE("class membership") {
  CHECK(ExponentFunction::constant(2.0).in_c_plus());
  CHECK(ExponentFunction::constant(1.0).in_d_plus());
  CHECK_FALSE(ExponentFunction::constant(1.0).in_c_plus());
  CHECK_FALSE(ExponentFunction::one_minus_log().in_d_plus());
}

TEST_CASE("conjugate exponents") {
  CHECK(conjugate(ExponentFunction::constant(2.0))(0.3) == Approx(2.0));
  CHECK(std::isinf(conjugate(ExponentFunction::constant(1.0))(0.3)));
  CHECK(conjugate(ExponentFunction::constant(kInf))(0.3) == Approx(1.0));
  const auto q = conjugate(ExponentFunction::one_minus_log());
  for (double x : {0.1, 0.3, 0.7, 0.9}) CHECK(q(x) == Approx((1.0 - std::log(x)) / (-std::log(x))).epsilon(1e-12));
  CHECK(std::isinf(q(1.0)));
}

TEST_CASE("conjugate is an involution") {
  for (const auto& p : {ExponentFunction::one_minus_log(), ExponentFunction::sinusoidal(2.5, 1.0, 2.0),
                        ExponentFunction::affine(1.5, 3.0), ExponentFunction::constant(1.0)}) {
    const auto pp = conjugate(conjugate(p));
    for (double x = 0.05; x <= 0.95; x += 0.05) {
      const double a = p(x), b = pp(x);
      if (std::isinf(a)) CHECK(std::isinf(b));
      else CHECK(std::abs(a - b) <= 1e-12 * a);
    }
  }
}

TEST_CASE("composition exponent") {
  CHECK(composition_exponent(ExponentFunction::constant(2.0), ExponentFunction::constant(2.0))(0.4) == Approx(1.0));
  CHECK(composition_exponent(ExponentFunction::constant(2.0), ExponentFunction::constant(kInf))(0.4) == Approx(2.0));
  CHECK(composition_exponent(ExponentFunction::constant(3.0), ExponentFunction::constant(6.0))(0.4) == Approx(2.0));
  CHECK_THROWS_AS(composition_exponent(ExponentFunction::constant(3.0), ExponentFunction::constant(1.2)), ContractError);
}

TEST_CASE("composition exponent stays in [1, p)") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double p0 = 1.2 + 4.0 * u(rng);
    const auto p = ExponentFunction::sinusoidal(p0 + 0.5, 0.4 * u(rng), 1.0 + 2.0 * u(rng));
    const double floor = std::max(p0 + 1.0, (p0 + 0.1) / (p0 + 0.1 - 1.0)) + 0.1;
    const auto r = ExponentFunction::affine(floor, 3.0 * u(rng));
    const auto q = composition_exponent(p, r);
    for (double x = 0.0; x <= 1.0; x += 0.01) {
      CHECK(q(x) >= 1.0);
      CHECK(q(x) < p(x));
      CHECK(q(x) == Approx(p(x) * r(x) / (p(x) + r(x))).epsilon(1e-12));
    }
  }
}

TEST_CASE("essential bounds are monotone under pointwise order") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const double m = 2.0 + 2.0 * u(rng), a = 0.9 * u(rng);
    const auto p = ExponentFunction::sinusoidal(m, a, 1.0 + 3.0 * u(rng));
    const auto pp = ExponentFunction::sinusoidal(m + a + 0.1 + u(rng), 0.0, 1.0);
    const auto [lo, hi] = p.essential_bounds();
    const auto [lo2, hi2] = pointwise_min(pp, ExponentFunction::constant(100.0)).essential_bounds();
    CHECK(lo <= lo2);
    CHECK(hi <= hi2);
  }
}

TEST_CASE("grid exponents interpolate linearly") {
  const auto p = ExponentFunction::grid({1.0, 3.0, 2.0});
  CHECK(p(0.25) == Approx(2.0));
  CHECK(p(0.75) == Approx(2.5));
  const auto [lo, hi] = p.essential_bounds();
  CHECK(lo == Approx(1.0));
  CHECK(hi == Approx(3.0));
}
