#include "varlex/fractional.hpp"

#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

using namespace varlex;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

TEST_CASE("g kernel") {
  CHECK(g_kernel(1.0, 4.2) == Approx(1.0));
  CHECK(g_kernel(2.0, 3.0) == Approx(3.0));
  CHECK(g_kernel(0.5, 1.0) == Approx(1.0 / std::sqrt(pi)));
}

TEST_CASE("Mittag-Leffler closed forms") {
  CHECK(mittag_leffler(1.0, 1.0, -1.0) == Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(mittag_leffler(2.0, 1.0, -1.0) == Approx(std::cos(1.0)).epsilon(1e-12));
  CHECK(mittag_leffler(2.0, 1.0, -9.0) == Approx(std::cos(3.0)).epsilon(1e-10));
  for (double z : {-0.5, -1.0, -3.0, -10.0, -30.0, -50.0}) {
    using big = boost::multiprecision::cpp_bin_float_50;
    const big zb = z;
    const double ref = static_cast<double>(exp(zb * zb) * boost::math::erfc(-zb));
    CHECK(mittag_leffler(0.5, 1.0, z) == Approx(ref).epsilon(1e-10));
  }
  CHECK(mittag_leffler(1.0, 2.0, -2.0) == Approx((1.0 - std::exp(-2.0)) / 2.0).epsilon(1e-12));
  CHECK(mittag_leffler(1.0, 1.0, 5.0) == Approx(std::exp(5.0)).epsilon(1e-12));
}

TEST_CASE("Mittag-Leffler series and integral agree on [-10, -5]") {
  for (double a : {0.5, 0.75, 0.9})
    for (double b : {a, 1.0})
      for (double z = -10.0; z <= -5.0; z += 1.25)
        CHECK(mittag_leffler_integral(a, b, z) == Approx(mittag_leffler_series(a, b, z)).epsilon(1e-8));
}

TEST_CASE("resolvent values") {
  const auto S1 = ResolventFamily::scalar(KernelKind::S, 1.0, 1.0);
  CHECK(resolvent_eval(S1, 2.0)[0] == Approx(std::exp(-2.0)).epsilon(1e-12));
  const auto Sh = ResolventFamily::scalar(KernelKind::S, 1.0, 0.5);
  CHECK(resolvent_eval(Sh, 1.0)[0] == Approx(std::exp(1.0) * boost::math::erfc(1.0)).epsilon(1e-10));
  const auto R1 = ResolventFamily::scalar(KernelKind::R, 2.0, 1.0);
  for (double t : {0.1, 1.0, 5.0}) CHECK(resolvent_eval(R1, t)[0] == Approx(std::exp(-2.0 * t)).epsilon(1e-12));
  const auto Rh = ResolventFamily::scalar(KernelKind::R, 1.0, 0.5);
  const auto Ph = ResolventFamily::scalar(KernelKind::P, 1.0, 0.5);
  for (double t : {0.3, 2.0}) CHECK(resolvent_eval(Rh, t)[0] == Approx(std::pow(t, -0.5) * resolvent_eval(Ph, t)[0]));
  CHECK_THROWS_AS(resolvent_eval(Rh, 0.0), DomainError);
}

TEST_CASE("diagonal generators act entrywise") {
  Vec a(2);
  a << 1.0, 3.0;
  const auto S = ResolventFamily::diagonal(KernelKind::S, a, 1.0);
  const Vec v = S(0.5);
  CHECK(v[0] == Approx(std::exp(-0.5)));
  CHECK(v[1] == Approx(std::exp(-1.5)));
  CHECK(S.norm_at(0.5) == Approx(std::exp(-0.5)));
  CHECK(S.matrix(0.5).diagonal()[1] == Approx(std::exp(-1.5)));
}

TEST_CASE("Caputo derivative of powers") {
  for (double mu : {1.0, 2.0, 3.0})
    for (double g : {0.25, 0.5, 0.75})
      for (double t : {0.5, 1.0, 2.0}) {
        const double ref = boost::math::tgamma(mu + 1) / boost::math::tgamma(mu + 1 - g) * std::pow(t, mu - g);
        CHECK(caputo_derivative(VectorFunction::power(mu), g, t).value[0] == Approx(ref).epsilon(1e-4));
      }
  CHECK(caputo_derivative(VectorFunction::identity(), 0.5, 1.0).value[0] == Approx(2.0 / std::sqrt(pi)).epsilon(1e-6));
  CHECK(std::abs(caputo_derivative(VectorFunction::constant(3.0), 0.5, 1.0).value[0]) < 1e-10);
  CHECK(caputo_derivative(VectorFunction::sine(), 1.0, 0.7).value[0] == Approx(std::cos(0.7)).epsilon(1e-8));
}

TEST_CASE("Weyl derivative of sinusoids") {
  for (double g : {0.25, 0.5, 0.75})
    for (double t : {0.0, 1.3, -2.0}) {
      const auto d = weyl_derivative(VectorFunction::sine(), g, t, 400.0);
      CHECK(std::abs(d.value[0] - std::sin(t + g * pi / 2)) < 1e-4);
      CHECK(d.tail_bound < 1e-4);
    }
  CHECK(weyl_derivative(VectorFunction::sine(), 1.0, 0.0).value[0] == Approx(-1.0).epsilon(1e-8));
  CHECK(std::abs(weyl_derivative(VectorFunction::zero(), 0.5, 1.0).value[0]) < 1e-14);
}

TEST_CASE("decay estimates") {
  for (double g : {0.25, 0.5, 0.75}) {
    const auto r = decay_check(ResolventFamily::scalar(KernelKind::S, 1.0, g), geometric_grid(1.0, 100.0, 200));
    CHECK(std::isfinite(r.metric("sup_S_t_gamma")));
    CHECK(std::isfinite(r.metric("sup_P_t_2gamma")));
    CHECK(std::abs(r.metric("slope_S") + g) < 0.1);
    CHECK(std::abs(r.metric("slope_P") + 2 * g) < 0.1);
  }
  // E_{1/2}(-sqrt t) sqrt t -> 1/sqrt(pi)
  const auto r = decay_check(ResolventFamily::scalar(KernelKind::S, 1.0, 0.5), geometric_grid(1.0, 100.0, 200));
  CHECK(r.metric("sup_S_t_gamma") >= 0.45);
  CHECK(r.metric("sup_S_t_gamma") <= 1.0 / std::sqrt(pi) + 1e-3);
  const auto e = decay_check(ResolventFamily::scalar(KernelKind::S, 1.0, 1.0), geometric_grid(1.0, 100.0, 50));
  CHECK(e.metric("sup_S_t_gamma") == Approx(std::exp(-1.0)).epsilon(1e-8));
}

TEST_CASE("decay models") {
  CHECK(ResolventFamily::exponential(2.0).decay_model().exponential);
  const auto pw = ResolventFamily::power(3.0).decay_model();
  CHECK_FALSE(pw.exponential);
  CHECK(pw.rate == 3.0);
  const auto r = ResolventFamily::scalar(KernelKind::R, 1.0, 0.5);
  const auto m = r.decay_model();
  CHECK_FALSE(m.exponential);
  CHECK(m.rate == Approx(1.5));
  for (double t : {1.0, 3.0, 10.0, 100.0, 1000.0}) CHECK(r.norm_at(t) <= m.constant * std::pow(t, -m.rate));
}
