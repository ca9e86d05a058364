#include "varlex/stepanov.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace varlex;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

TEST_CASE("window norm examples") {
  const auto p2 = ExponentFunction::constant(2.0);
  CHECK(window_norm(VectorFunction::sine(), p2, 0.0) == Approx(std::sqrt(0.5 - std::sin(2.0) / 4.0)).epsilon(1e-9));
  CHECK(window_norm(VectorFunction::constant(1.7), ExponentFunction::one_minus_log(), 3.2) == Approx(1.7).epsilon(1e-9));
  for (double t : {0.0, 1.3, 7.7}) {
    const auto f = VectorFunction::two_sine();
    CHECK(window_norm(f, ExponentFunction::sinusoidal(2.0, 0.5, 1.0), t) <= f.sup_norm(t, t + 1.0) * (1.0 + 1e-9));
  }
}

TEST_CASE("window outside the domain") {
  CHECK_THROWS_AS(window_norm(VectorFunction::power(0.5), ExponentFunction::constant(2.0), -0.5), DomainError);
}

TEST_CASE("Stepanov norm of sine") {
  const auto s = stepanov_norm(VectorFunction::sine(), ExponentFunction::constant(2.0), uniform_grid(0.0, 2 * pi, 0.1));
  CHECK(s.sup_estimate == Approx(std::sqrt(0.5 + std::sin(1.0) / 2.0)).epsilon(1e-6));
  CHECK(s.sup_estimate <= std::sqrt(0.5) + 0.3);
}

TEST_CASE("Stepanov norm of the sign function is at most one") {
  for (const auto& p : {ExponentFunction::constant(1.0), ExponentFunction::constant(3.0),
                        ExponentFunction::sinusoidal(2.0, 1.0, 1.0)}) {
    const auto s = stepanov_norm(VectorFunction::sign_of_two_sine(), p, uniform_grid(0.0, 20.0, 0.5));
    CHECK(s.sup_estimate <= 1.0 + 1e-9);
  }
}

TEST_CASE("Stepanov norm of t on [0, 10]") {
  const auto f = VectorFunction::scalar("t", [](double t) { return t; }, {0.0, 10.0});
  const auto s = stepanov_norm(f, ExponentFunction::constant(1.0), uniform_grid(0.0, 9.0, 0.5));
  CHECK(s.sup_estimate == Approx(9.5).epsilon(1e-9));
  CHECK(s.argmax == Approx(9.0));
}

TEST_CASE("refining the grid never lowers the sup") {
  const auto f = VectorFunction::two_sine();
  const auto p = ExponentFunction::affine(1.5, 1.0);
  const auto coarse = stepanov_norm(f, p, uniform_grid(0.0, 10.0, 1.0), false);
  const auto fine = stepanov_norm(f, p, uniform_grid(0.0, 10.0, 0.5), false);
  CHECK(fine.sup_estimate >= coarse.sup_estimate);
  const auto refined = stepanov_norm(f, p, uniform_grid(0.0, 10.0, 0.5), true);
  CHECK(refined.sup_estimate >= fine.sup_estimate);
}

TEST_CASE("Stepanov norm is translation invariant") {
  const auto f = VectorFunction::two_sine();
  const auto p = ExponentFunction::one_minus_log();
  const double tau = 2.75;
  const auto a = stepanov_norm(translate(f, tau), p, uniform_grid(0.0, 5.0, 0.25), false);
  const auto b = stepanov_norm(f, p, uniform_grid(tau, tau + 5.0, 0.25), false);
  CHECK(a.sup_estimate == Approx(b.sup_estimate).epsilon(1e-8));
}

TEST_CASE("window norms at p-, p(x) and p+ compare with constant 2") {
  const auto f = VectorFunction::aa_exemplar();
  const auto p = ExponentFunction::sinusoidal(2.5, 1.0, 1.0);
  const auto [lo, hi] = p.essential_bounds();
  for (double t : {0.0, 2.0, 5.5}) {
    const double nlo = window_norm(f, ExponentFunction::constant(lo), t);
    const double np = window_norm(f, p, t);
    const double nhi = window_norm(f, ExponentFunction::constant(hi), t);
    CHECK(nlo <= 2.0 * np);
    CHECK(np <= 2.0 * nhi);
  }
}

TEST_CASE("S^p(x) bound dominates S^1") {
  const auto f = VectorFunction::two_sine();
  const auto g = uniform_grid(0.0, 10.0, 0.5);
  const auto s1 = stepanov_norm(f, ExponentFunction::constant(1.0), g);
  const auto sp = stepanov_norm(f, ExponentFunction::one_minus_log(), g);
  CHECK(s1.sup_estimate <= 2.0 * sp.sup_estimate);
}

TEST_CASE("decay test") {
  const auto p2 = ExponentFunction::constant(2.0);
  CHECK(c0_decay_test(VectorFunction::rational_decay(), p2, 100.0).verdict == Verdict::True);
  CHECK(c0_decay_test(VectorFunction::constant(1.0), p2, 100.0).verdict == Verdict::False);
  CHECK(c0_decay_test(VectorFunction::exp_decay(0.5), ExponentFunction::one_minus_log(), 100.0).verdict ==
        Verdict::True);
  const auto r = c0_decay_test(VectorFunction::rational_decay(), p2, 100.0);
  CHECK(r.fitted_slope < 0.0);
  for (std::size_t i = 0; i < r.series.size(); ++i)
    CHECK(r.series[i] <= 1.0 / (1.0 + r.abscissae[i] * r.abscissae[i]) + 1e-9);
}

TEST_CASE("ergodic mean test") {
  const auto r = ergodic_mean_test(VectorFunction::rational_decay(), 1024.0);
  CHECK(r.verdict == Verdict::True);
  for (std::size_t i = 0; i < r.series.size(); ++i) {
    const double x = r.abscissae[i];
    CHECK(r.series[i] == Approx(std::atan(x) / x).epsilon(1e-8));
  }
  CHECK(ergodic_mean_test(VectorFunction::constant(1.0), 1024.0).verdict == Verdict::False);
}
