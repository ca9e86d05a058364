#include "varlex/almost_auto.hpp"
#include "varlex/convolution.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace varlex;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

namespace {

const ResolventFamily& expk() {
  static const auto k = ResolventFamily::exponential(1.0);
  return k;
}

double max_error(const ConvolutionResult& r, const std::function<double(double)>& exact) {
  double e = 0.0;
  for (std::size_t i = 0; i < r.t_grid.size(); ++i) e = std::max(e, std::abs(r.values[i][0] - exact(r.t_grid[i])));
  return e;
}

}  // namespace

TEST_CASE("tail constant of the exponential kernel") {
  const auto m2 = tail_constant_M(expk(), ExponentFunction::constant(2.0), 40);
  CHECK(m2.M == Approx(std::sqrt((1.0 - std::exp(-2.0)) / 2.0) / (1.0 - std::exp(-1.0))).epsilon(1e-9));
  CHECK(m2.remainder_bound < 1e-15);
  CHECK(tail_constant_M(expk(), ExponentFunction::constant(1.0), 40).M == Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(tail_constant_M(ResolventFamily::power(0.5), ExponentFunction::constant(2.0), 10), NumericalError);
  const auto pw = tail_constant_M(ResolventFamily::power(3.0), ExponentFunction::constant(2.0), 20);
  CHECK(std::isfinite(pw.M));
  CHECK(pw.remainder_bound > 0.0);
}

TEST_CASE("m_t of the exponential kernel") {
  const auto q = ExponentFunction::constant(2.0);
  const auto M = tail_constant_M(expk(), q, 40);
  const auto mt = m_t_series(expk(), q, {0.0, 1.0, 2.5}, 40);
  CHECK(mt.values[0] == Approx(M.M).epsilon(1e-9));
  CHECK(mt.values[1] == Approx(std::exp(-1.0) * M.M).epsilon(1e-9));
  CHECK(mt.values[1] == Approx(0.38243).epsilon(2e-4));
  CHECK(mt.values[2] == Approx(std::exp(-2.5) * M.M).epsilon(1e-9));
}

TEST_CASE("m_t of R_gamma decays") {
  const auto r = ResolventFamily::scalar(KernelKind::R, 1.0, 0.5);
  const auto mt = m_t_series(r, ExponentFunction::constant(2.0), geometric_grid(1.0, 50.0, 15), 30);
  const double nu = 0.3;
  CHECK(mt.fitted_slope <= nu * (-1.0 - 0.5) + 0.1);
  for (std::size_t i = 1; i < mt.upper_bound.size(); ++i) CHECK(mt.upper_bound[i] < mt.upper_bound[i - 1]);
}

TEST_CASE("infinite convolution with the exponential kernel") {
  const auto g = uniform_grid(0.0, 20.0, 0.1);
  const auto p = ExponentFunction::constant(2.0);
  const auto r = line_convolution(expk(), VectorFunction::sine(), p, g);
  CHECK(max_error(r, [](double t) { return 0.5 * (std::sin(t) - std::cos(t)); }) < 1e-6);
  for (double b : r.tail_bound_series) CHECK(b <= 1e-8);
  CHECK(max_error(line_convolution(expk(), VectorFunction::constant(1.0), p, g), [](double) { return 1.0; }) < 1e-8);
  CHECK(max_error(line_convolution(expk(), VectorFunction::zero(), p, g), [](double) { return 0.0; }) == 0.0);
}

TEST_CASE("tail bound covers the truncation error") {
  const auto g = uniform_grid(0.0, 5.0, 0.5);
  const auto p = ExponentFunction::constant(2.0);
  ConvolutionOptions small;
  small.K = 3;
  ConvolutionOptions large;
  large.K = 30;
  const auto a = line_convolution(expk(), VectorFunction::two_sine(), p, g, small);
  const auto b = line_convolution(expk(), VectorFunction::two_sine(), p, g, large);
  CHECK(a.tail_bound_series[0] > b.tail_bound_series[0]);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK((a.values[i] - b.values[i]).norm() <= a.tail_bound_series[i]);
}

TEST_CASE("infinite convolution commutes with translation") {
  const auto g = uniform_grid(0.0, 5.0, 0.5);
  const auto p = ExponentFunction::constant(2.0);
  const double tau = 1.7;
  const auto a = line_convolution(expk(), translate(VectorFunction::two_sine(), tau), p, g);
  std::vector<double> shifted;
  for (double t : g) shifted.push_back(t + tau);
  const auto b = line_convolution(expk(), VectorFunction::two_sine(), p, shifted);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(a.values[i][0] == Approx(b.values[i][0]).epsilon(1e-8));
}

TEST_CASE("finite convolution") {
  const auto g = uniform_grid(0.0, 10.0, 0.25);
  CHECK(max_error(finite_convolution(expk(), VectorFunction::constant(1.0), g),
                  [](double t) { return 1.0 - std::exp(-t); }) < 1e-10);
  CHECK(max_error(finite_convolution(expk(), VectorFunction::zero(), g), [](double) { return 0.0; }) == 0.0);
  // int_0^t e^{-(t-s)} sin s ds = (sin t - cos t + e^{-t}) / 2
  CHECK(max_error(finite_convolution(expk(), VectorFunction::sine(), g),
                  [](double t) { return 0.5 * (std::sin(t) - std::cos(t) + std::exp(-t)); }) < 1e-10);
}

TEST_CASE("finite convolution with R_gamma against the Mittag-Leffler closed form") {
  // int_0^t s^{-1/2} E_{1/2,1/2}(-sqrt s) ds = 1 - E_{1/2}(-sqrt t)
  const auto r = ResolventFamily::scalar(KernelKind::R, 1.0, 0.5);
  const auto g = uniform_grid(0.0, 5.0, 0.5);
  const auto h = finite_convolution(r, VectorFunction::constant(1.0), g);
  CHECK(max_error(h, [](double t) { return 1.0 - mittag_leffler(0.5, 1.0, -std::sqrt(t)); }) < 1e-8);
}

TEST_CASE("decomposed finite convolution") {
  const auto g = uniform_grid(0.0, 20.0, 0.1);
  const auto r = finite_convolution(expk(), VectorFunction::sine(), VectorFunction::rational_decay(),
                                    ExponentFunction::constant(2.0), g);
  REQUIRE(r.decomposition);
  const auto& d = *r.decomposition;
  CHECK(d.identity_defect < 1e-6);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(d.F2[i].norm() <= d.f2_bound[i] + 1e-8);
  // F2(t) = -int_t^inf e^{-s} sin(t - s) ds = e^{-t} / 2
  for (std::size_t i = 0; i < g.size(); i += 20)
    CHECK(std::abs(d.F2[i][0] - 0.5 * std::exp(-g[i])) < 1e-8);
}

TEST_CASE("ergodic components") {
  const auto g = uniform_grid(0.0, 60.0, 0.5);
  const auto p = ExponentFunction::constant(2.0);
  const auto a = finite_convolution(expk(), VectorFunction::sine(), VectorFunction::rational_decay(), p, g);
  CHECK(ergodic_component_classify(a, p, p).verdict == Verdict::True);
  const auto b = finite_convolution(expk(), VectorFunction::sine(), VectorFunction::constant(1.0), p, g);
  CHECK(ergodic_component_classify(b, p, p).verdict == Verdict::False);
  const auto z = finite_convolution(expk(), VectorFunction::zero(), VectorFunction::zero(), p, g);
  CHECK(ergodic_component_classify(z, p, p).verdict == Verdict::True);
  CHECK_THROWS_AS(ergodic_component_classify(finite_convolution(expk(), VectorFunction::sine(), g), p, p),
                  ContractError);
}

TEST_CASE("mild solutions") {
  Vec one(1), zero(1);
  one << 1.0;
  zero << 0.0;
  const auto g = uniform_grid(0.0, 10.0, 0.01);
  const auto s1 = ResolventFamily::scalar(KernelKind::S, 1.0, 1.0);
  CHECK(max_error(solve_dfp(s1, one, VectorFunction::zero(), g), [](double t) { return std::exp(-t); }) < 1e-8);
  CHECK(max_error(solve_dfp(s1, zero, VectorFunction::constant(1.0), g), [](double t) { return 1.0 - std::exp(-t); }) <
        1e-8);
  const auto sh = ResolventFamily::scalar(KernelKind::S, 1.0, 0.5);
  const auto u = solve_dfp(sh, one, VectorFunction::zero(), uniform_grid(0.0, 5.0, 0.25));
  CHECK(max_error(u, [](double t) { return mittag_leffler(0.5, 1.0, -std::sqrt(t)); }) < 1e-10);
}

TEST_CASE("mild solution with almost periodic forcing is asymptotically almost automorphic") {
  Vec zero(1);
  zero << 0.0;
  const auto s1 = ResolventFamily::scalar(KernelKind::S, 1.0, 1.0);
  const auto u = solve_dfp(s1, zero, VectorFunction::sine(), uniform_grid(0.0, 20.0, 0.005));
  std::vector<double> vals;
  for (const auto& v : u.values) vals.push_back(v[0]);
  const auto uf = VectorFunction::grid(0.0, 0.005, vals);
  const auto aa = VectorFunction::scalar("(sin - cos)/2", [](double t) { return 0.5 * (std::sin(t) - std::cos(t)); });
  std::vector<double> shifts;
  for (int k = 1; k <= 10; ++k) shifts.push_back(2 * pi * k);
  const auto r = asymptotic_decompose(uf, ExponentFunction::constant(2.0), aa, shifts, uniform_grid(0.0, 3.0, 0.5),
                                      10.0);
  CHECK(r.verdict == Verdict::True);
}
