#include "varlex/function.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

using namespace varlex;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

TEST_CASE("registry evaluation") {
  CHECK(VectorFunction::sine()(pi / 2)[0] == Approx(1.0));
  CHECK(VectorFunction::two_sine()(0.0)[0] == 0.0);
  CHECK(VectorFunction::two_sine()(1.0)[0] == Approx(std::sin(1.0) + std::sin(std::sqrt(2.0))));
  CHECK(VectorFunction::rational_decay()(2.0)[0] == Approx(0.2));
  CHECK(VectorFunction::exp_decay(2.0)(1.0)[0] == Approx(std::exp(-2.0)));
  CHECK(VectorFunction::aa_exemplar()(0.0)[0] == Approx(std::sin(0.25)));
  CHECK(VectorFunction::indicator(0.0, 1.0)(0.5)[0] == 1.0);
  CHECK(VectorFunction::indicator(0.0, 1.0)(1.5)[0] == 0.0);
  const Vec r = VectorFunction::rotation(2.0)(0.3);
  CHECK(r.size() == 2);
  CHECK(r.norm() == Approx(1.0));
}

TEST_CASE("grid evaluation interpolates and refuses extrapolation") {
  const auto g = VectorFunction::grid(0.0, 1.0, std::vector<double>{1.0, 3.0});
  CHECK(g(0.5)[0] == Approx(2.0));
  CHECK_THROWS_AS(g(1.5), DomainError);
  CHECK_THROWS_AS(g(-0.1), DomainError);
  CHECK_THROWS(VectorFunction::grid(0.0, 0.0, std::vector<double>{1.0, 2.0}));
  CHECK_THROWS(VectorFunction::grid(0.0, 1.0, std::vector<double>{1.0, std::nan("")}));
}

TEST_CASE("half-line registry functions reject negative time") {
  CHECK_THROWS_AS(VectorFunction::power(0.5)(-1.0), DomainError);
}

TEST_CASE("translation") {
  const auto f = VectorFunction::sine();
  const auto g = translate(f, 2.0 * pi);
  for (double t = -10.0; t <= 10.0; t += 0.37) CHECK(std::abs(g(t)[0] - f(t)[0]) < 1e-12);
  const auto s = VectorFunction::sign_of_two_sine();
  const auto s0 = translate(s, 0.0);
  for (double t = -10.0; t <= 10.0; t += 0.37) CHECK(s0(t)[0] == s(t)[0]);
  std::vector<double> samples;
  for (int i = 0; i <= 10; ++i) samples.push_back(i * i);
  const auto grid = translate(VectorFunction::grid(0.0, 1.0, samples), 3.0);
  CHECK(grid.domain().lo == Approx(-3.0));
  CHECK(grid.domain().hi == Approx(7.0));
  CHECK(grid(-3.0)[0] == Approx(0.0));
  CHECK(grid(2.0)[0] == Approx(25.0));
}

TEST_CASE("translations compose") {
  const auto f = VectorFunction::two_sine();
  const auto a = translate(translate(f, 1.3), 2.1), b = translate(f, 3.4);
  for (double t = -5.0; t <= 5.0; t += 0.1) CHECK(a(t)[0] == Approx(b(t)[0]).epsilon(1e-14));
  std::vector<double> samples;
  for (int i = 0; i <= 200; ++i) samples.push_back(std::cos(0.1 * i));
  const auto g = VectorFunction::grid(0.0, 0.1, samples);
  const auto ga = translate(translate(g, 0.7), 0.45), gb = translate(g, 1.15);
  for (double t = -1.0; t <= 15.0; t += 0.13) CHECK(std::abs(ga(t)[0] - gb(t)[0]) <= 1e-12);
}

TEST_CASE("reflection") {
  const auto s = reflect(VectorFunction::sine());
  const auto c = reflect(VectorFunction::cosine());
  for (double t = -3.0; t <= 3.0; t += 0.25) {
    CHECK(s(t)[0] == Approx(-std::sin(t)));
    CHECK(c(t)[0] == Approx(std::cos(t)));
  }
  const auto e = reflect(VectorFunction::scalar("exp(-t)", [](double t) { return std::exp(-t); }));
  CHECK(e(1.0)[0] == Approx(std::exp(1.0)));
  const auto rr = reflect(reflect(VectorFunction::two_sine()));
  for (double t = -3.0; t <= 3.0; t += 0.25) CHECK(rr(t)[0] == VectorFunction::two_sine()(t)[0]);
}

TEST_CASE("sign with sign(0) = 0") {
  const auto F = VectorFunction::sign_of_two_sine();
  CHECK(F(0.0)[0] == 0.0);
  const auto s = sign_of(VectorFunction::sine());
  CHECK(s(pi / 2)[0] == 1.0);
  CHECK(s(3 * pi / 2)[0] == -1.0);
  for (double t = -50.0; t <= 50.0; t += 0.173) {
    const double v = F(t)[0];
    CHECK((v == -1.0 || v == 0.0 || v == 1.0));
  }
  CHECK_THROWS_AS(sign_of(VectorFunction::rotation()), ContractError);
}

TEST_CASE("sign function exposes its jumps") {
  const auto F = VectorFunction::sign_of_two_sine();
  CHECK(F.discontinuous());
  const auto jumps = F.breakpoints(0.0, 10.0);
  REQUIRE(!jumps.empty());
  for (double x : jumps) CHECK(std::abs(std::sin(x) + std::sin(std::sqrt(2.0) * x)) < 1e-10);
}

TEST_CASE("CSV grid functions") {
  const std::string path = "varlex_test_function.csv";
  {
    std::ofstream out(path);
    out << "t,v1,v2\n0,1,0\n0.5,2,1\n1,3,4\n";
  }
  const auto f = VectorFunction::from_csv(path);
  CHECK(f.dim() == 2);
  CHECK(f(0.25)[0] == Approx(1.5));
  CHECK(f(0.75)[1] == Approx(2.5));
  {
    std::ofstream out(path);
    out << "x,v1\n0,1\n";
  }
  CHECK_THROWS(VectorFunction::from_csv(path));
  std::remove(path.c_str());
}

TEST_CASE("two-parameter functions") {
  const auto f = TwoParameterFunction::two_sine_tanh();
  CHECK(f(1.0, 0.5) == Approx((std::sin(1.0) + std::sin(std::sqrt(2.0))) * std::tanh(0.5)));
  const auto sum = TwoParameterFunction::identity_in_y() + TwoParameterFunction::constant(2.0);
  CHECK(sum(0.0, 3.0) == Approx(5.0));
}
