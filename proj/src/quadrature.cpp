#include "varlex/quadrature.hpp"

#include <numbers>

namespace varlex::quad {

namespace {

GaussLegendre15 build_rule() {
  constexpr int n = 15;
  GaussLegendre15 rule{};
  for (int i = 0; i < n; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-17) break;
    }
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const GaussLegendre15& gauss_legendre15() {
  static const GaussLegendre15 rule = build_rule();
  return rule;
}

namespace detail {

double fitted_log2_ratio(const std::vector<double>& contributions, int window) {
  const int n = static_cast<int>(contributions.size());
  if (n < 3) return std::nan("");
  const int start = std::max(0, n - window);
  bool all_zero = true;
  std::vector<double> xs, ys;
  for (int i = start; i < n; ++i) {
    const double c = std::abs(contributions[i]);
    if (c > 0.0) {
      all_zero = false;
      xs.push_back(i);
      ys.push_back(std::log2(c));
    }
  }
  if (all_zero) return -kInf;
  if (contributions.back() == 0.0 && xs.size() < 3) return -kInf;
  if (xs.size() < 3) return std::nan("");
  return linear_fit(xs, ys).second;
}

}  // namespace detail

}  // namespace varlex::quad
