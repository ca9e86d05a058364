#include "varlex/composition.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace varlex;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

namespace {

std::vector<double> periods(int n) {
  std::vector<double> out;
  for (int k = 1; k <= n; ++k) out.push_back(2 * pi * k);
  return out;
}

const ExponentFunction p2 = ExponentFunction::constant(2.0);
const ExponentFunction pinf = ExponentFunction::constant(kInf);

}  // namespace

TEST_CASE("compose") {
  const auto g = uniform_grid(-5.0, 5.0, 0.25);
  const auto a = compose(TwoParameterFunction::identity_in_y(), VectorFunction::sine(), g);
  const auto b = compose(TwoParameterFunction::sine_times_y(), VectorFunction::constant(1.0), g);
  const auto c = compose(TwoParameterFunction::two_sine_tanh(), VectorFunction::cosine(), g);
  for (double t : g) {
    CHECK(a(t)[0] == Approx(std::sin(t)));
    CHECK(b(t)[0] == Approx(std::sin(t)));
    CHECK(c(t)[0] == Approx((std::sin(t) + std::sin(std::sqrt(2.0) * t)) * std::tanh(std::cos(t))));
  }
  CHECK_THROWS_AS(compose(TwoParameterFunction::y_squared(0.5), VectorFunction::sine(), g), DomainError);
}

TEST_CASE("empirical Lipschitz functions") {
  const std::vector<double> ys{-1.0, -0.5, 0.0, 0.5, 1.0};
  const auto L = empirical_lipschitz(TwoParameterFunction::sine_times_y(), ys);
  for (double t = 0.0; t < 6.0; t += 0.3) CHECK(L(t)[0] == Approx(std::abs(std::sin(t))));
  const auto sq = empirical_lipschitz(TwoParameterFunction::y_squared(1.0), ys);
  CHECK(sq(0.0)[0] <= 2.0);
  CHECK(sq(0.0)[0] == Approx(1.5));
  CHECK(empirical_lipschitz(TwoParameterFunction::constant(3.0), ys)(1.0)[0] == 0.0);
  CHECK_THROWS_AS(empirical_lipschitz(TwoParameterFunction::constant(3.0), {1.0}), ContractError);
}

TEST_CASE("empirical Lipschitz stays below a declared one") {
  const std::vector<double> ys{-1.0, -0.3, 0.2, 0.9};
  for (const auto& f : {TwoParameterFunction::sine_times_y(), TwoParameterFunction::y_squared(1.0),
                        TwoParameterFunction::two_sine_tanh()}) {
    REQUIRE(f.lipschitz());
    const auto L = empirical_lipschitz(f, ys);
    for (double t = -4.0; t < 4.0; t += 0.25) CHECK(L(t)[0] <= (*f.lipschitz())(t)[0] + 1e-8);
  }
}

TEST_CASE("Lipschitz window norms") {
  const auto s = lipschitz_window_check(TwoParameterFunction::sine_times_y(), p2, uniform_grid(0.0, 6.0, 1.0),
                                        {-1.0, 0.0, 1.0});
  CHECK(std::isfinite(s.sup_estimate));
  CHECK(s.sup_estimate <= 1.0);
  CHECK(s.values[0] == Approx(std::sqrt(0.5 - std::sin(2.0) / 4.0)).epsilon(1e-8));
}

TEST_CASE("membership of compositions") {
  const auto a = composition_membership_test(TwoParameterFunction::sine_times_y(), VectorFunction::sine(), p2, pinf,
                                             periods(10));
  CHECK(a.q_exponent(0.5) == Approx(2.0));
  CHECK(a.membership.verdict == Verdict::True);
  CHECK(a.range_bounded);
  const auto b = composition_membership_test(TwoParameterFunction::constant(3.0), VectorFunction::sine(), p2,
                                             ExponentFunction::constant(4.0), periods(10));
  CHECK(b.q_exponent(0.5) == Approx(4.0 / 3.0));
  CHECK(b.membership.verdict == Verdict::True);
  const auto c = composition_membership_test(TwoParameterFunction::identity_in_y(), VectorFunction::identity(), p2,
                                             pinf, periods(10));
  CHECK(c.membership.verdict == Verdict::Inconclusive);
}

TEST_CASE("identity composition reproduces the inner verdict") {
  const auto seq = almost_period_sequence(VectorFunction::two_sine(), 7, 8000);
  const auto F = VectorFunction::sign_of_two_sine();
  const auto p1 = ExponentFunction::constant(1.0);
  CompositionOptions opt;
  const auto r = composition_membership_test(TwoParameterFunction::identity_in_y(), F, p1, pinf, seq, opt);
  const auto direct = bochner_shift_test(F, p1, seq, opt.t_grid, opt.shift);
  CHECK(r.membership.verdict == direct.verdict);
  CHECK(r.verdict_at_q_minus == direct.verdict);
  CHECK(r.membership.verdict == Verdict::True);
}

TEST_CASE("asymptotic compositions") {
  const auto y = TwoParameterFunction::identity_in_y();
  const auto zero = TwoParameterFunction::constant(0.0);
  const auto a = asymptotic_composition_test(y, VectorFunction::sine(), zero, VectorFunction::rational_decay(), p2,
                                             pinf, periods(10));
  CHECK(a.membership.verdict == Verdict::True);
  const auto b = asymptotic_composition_test(y, VectorFunction::sine(), zero, VectorFunction::zero(), p2, pinf,
                                             periods(10));
  const auto plain = composition_membership_test(y, VectorFunction::sine(), p2, pinf, periods(10));
  CHECK(b.membership.verdict == plain.membership.verdict);
  const auto c = asymptotic_composition_test(y, VectorFunction::sine(), zero, VectorFunction::constant(1.0), p2, pinf,
                                             periods(10));
  CHECK(c.membership.verdict == Verdict::False);
}
