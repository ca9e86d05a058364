#include "varlex/almost_auto.hpp"

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

double worst(const ShiftTestReport& r) {
  double m = 0.0;
  for (const auto& row : r.forward_residuals)
    for (double x : row) m = std::max(m, x);
  for (const auto& row : r.backward_residuals)
    for (double x : row) m = std::max(m, x);
  return m;
}

const std::vector<double>& two_sine_periods() {
  static const auto seq = almost_period_sequence(VectorFunction::two_sine(), 7, 8000);
  return seq;
}

}  // namespace

TEST_CASE("epsilon periods of sine") {
  const auto r = epsilon_period_scan(VectorFunction::sine(), std::nullopt, 0.01, 10.0, 100.0);
  CHECK(r.verdict == Verdict::True);
  for (double tau : r.abscissae) CHECK(std::abs(std::remainder(tau, 2 * pi)) < 0.01);
  for (double d : r.series) CHECK(d < 0.01);
}

TEST_CASE("epsilon periods of two-sine") {
  CHECK(epsilon_period_scan(VectorFunction::two_sine(), std::nullopt, 0.3, 100.0, 500.0).verdict == Verdict::True);
}

TEST_CASE("t has no epsilon periods") {
  CHECK(epsilon_period_scan(VectorFunction::identity(), std::nullopt, 0.1, 10.0, 100.0).verdict == Verdict::False);
}

TEST_CASE("Stepanov defect of a true period vanishes") {
  CHECK(stepanov_defect(VectorFunction::sine(), ExponentFunction::one_minus_log(), 2 * pi) < 1e-8);
  CHECK(sup_defect(VectorFunction::sine(), 2 * pi) < 1e-12);
}

TEST_CASE("almost period sequence has shrinking defects") {
  const auto& seq = two_sine_periods();
  REQUIRE(seq.size() == 7);
  for (std::size_t i = 1; i < seq.size(); ++i) CHECK(seq[i] > seq[i - 1]);
  CHECK(sup_defect(VectorFunction::two_sine(), seq.back()) < sup_defect(VectorFunction::two_sine(), seq.front()));
}

TEST_CASE("shift test: sine along its periods") {
  const auto r = bochner_shift_test(VectorFunction::sine(), ExponentFunction::constant(2.0), periods(10),
                                    uniform_grid(0.0, 5.0, 0.5));
  CHECK(r.verdict == Verdict::True);
  CHECK(worst(r) < 1e-8);
  REQUIRE(r.candidate_limit);
  for (double t = 0.0; t < 5.0; t += 0.3) CHECK((*r.candidate_limit)(t)[0] == Approx(std::sin(t)).epsilon(1e-9));
  CHECK(r.forward_residuals.size() == r.chosen_subsequence.size());
  CHECK(r.backward_residuals.size() == r.chosen_subsequence.size());
}

TEST_CASE("shift test: t is not almost automorphic") {
  CHECK(bochner_shift_test(VectorFunction::identity(), ExponentFunction::constant(2.0), periods(10),
                           uniform_grid(0.0, 5.0, 0.5))
            .verdict == Verdict::False);
}

TEST_CASE("shift test: sign of two-sine at p = 1") {
  const auto r = bochner_shift_test(VectorFunction::sign_of_two_sine(), ExponentFunction::constant(1.0),
                                    two_sine_periods(), uniform_grid(0.0, 5.0, 0.5));
  CHECK(r.verdict == Verdict::True);
}

TEST_CASE("shift test needs three shifts") {
  CHECK(bochner_shift_test(VectorFunction::sine(), ExponentFunction::constant(2.0), periods(2), {0.0}).verdict ==
        Verdict::Inconclusive);
}

TEST_CASE("verdicts are unchanged under translation") {
  for (double tau : {1.0, std::sqrt(2.0)}) {
    const auto g = uniform_grid(0.0, 5.0, 0.5);
    std::vector<double> shifted;
    for (double t : g) shifted.push_back(t - tau);
    const auto a = bochner_shift_test(translate(VectorFunction::sine(), tau), ExponentFunction::constant(2.0),
                                      periods(10), shifted);
    CHECK(a.verdict == Verdict::True);
    const auto b = bochner_shift_test(translate(VectorFunction::identity(), tau), ExponentFunction::constant(2.0),
                                      periods(10), shifted);
    CHECK(b.verdict == Verdict::False);
  }
}

TEST_CASE("residuals at exponent 1 are at most twice those at p(x)") {
  const auto g = uniform_grid(0.0, 3.0, 1.0);
  const auto f = VectorFunction::two_sine();
  const auto& seq = two_sine_periods();
  const auto rp = bochner_shift_test(f, ExponentFunction::affine(2.0, 1.0), seq, g);
  const auto r1 = bochner_shift_test(f, ExponentFunction::constant(1.0), seq, g);
  CHECK(rp.verdict == Verdict::True);
  CHECK(r1.verdict == Verdict::True);
  REQUIRE(rp.chosen_subsequence == r1.chosen_subsequence);
  for (std::size_t k = 0; k < rp.forward_residuals.size(); ++k)
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(r1.forward_residuals[k][i] <= 2.0 * rp.forward_residuals[k][i] + 1e-12);
}

TEST_CASE("sup-norm test separates the exemplar from compact almost automorphy") {
  const auto f = VectorFunction::aa_exemplar();
  const auto& seq = two_sine_periods();
  const auto a = bochner_shift_test(f, ExponentFunction::constant(1.0), seq, uniform_grid(0.0, 3.0, 0.5));
  CHECK(a.verdict != Verdict::False);
  const auto s = bochner_shift_test(f, ExponentFunction::constant(kInf), seq, uniform_grid(0.0, 3.0, 0.5));
  CHECK(s.tail_residual >= a.tail_residual);
}

TEST_CASE("counterexample modular") {
  const auto [a, b] = saturated_pair();
  for (double x = 0.0; x <= 1.0; x += 0.01) {
    CHECK(VectorFunction::two_sine()(a + x)[0] > 0.0);
    CHECK(VectorFunction::two_sine()(b + x)[0] < 0.0);
  }
  CHECK(counterexample_divergence(0.5, a, b).divergent);
  const auto c = counterexample_divergence(0.8, a, b);
  CHECK_FALSE(c.divergent);
  CHECK(c.value == Approx(2.5 / (1.0 - std::log(2.5))).epsilon(1e-6));
  CHECK(c.value == Approx(29.87).epsilon(1e-3));
  CHECK(counterexample_divergence(0.5, 3.0, 3.0).value == 0.0);
}

TEST_CASE("counterexample shifts follow the pairing") {
  const auto s = counterexample_shifts(4);
  REQUIRE(s.size() == 8);
  for (std::size_t n = 1; n <= 4; ++n) CHECK(s[2 * n - 1] - s[2 * n - 2] == Approx(static_cast<double>(n)));
  const auto F = VectorFunction::sign_of_two_sine();
  for (std::size_t n = 0; n < 4; ++n) CHECK(F(s[2 * n])[0] * F(s[2 * n + 1])[0] < 0.0);
}

TEST_CASE("asymptotic decomposition") {
  const auto f = VectorFunction::sine() + VectorFunction::rational_decay();
  const auto g = uniform_grid(0.0, 3.0, 0.5);
  CHECK(asymptotic_decompose(f, ExponentFunction::constant(2.0), VectorFunction::sine(), periods(10), g).verdict ==
        Verdict::True);
  const auto f1 = VectorFunction::sine() + VectorFunction::constant(1.0);
  CHECK(asymptotic_decompose(f1, ExponentFunction::constant(2.0), VectorFunction::sine(), periods(10), g).verdict ==
        Verdict::False);
}
