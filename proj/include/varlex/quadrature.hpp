#pragma once

#include "varlex/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

namespace varlex::quad {

/// Fifteen-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre15 {
  std::array<double, 15> nodes;
  std::array<double, 15> weights;
};

const GaussLegendre15& gauss_legendre15();

template <class F>
double gl15(F&& f, double a, double b) {
  const auto& rule = gauss_legendre15();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (int i = 0; i < 15; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

struct Options {
  double rel_tol = 1e-13;
  double abs_tol = 0.0;
  int max_panels = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
  bool converged = true;
};

/// Globally adaptive composite Gauss-Legendre over [a, b], split first at the
/// given breakpoints (jumps, kinks). The panel with the largest local error is
/// bisected until the summed error meets the tolerance or the panel budget runs out.
template <class F>
Result integrate(F&& f, double a, double b, std::span<const double> breaks, const Options& opt = {}) {
  Result out;
  if (!(b > a)) return out;
  std::vector<double> cuts{a};
  for (double x : breaks)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  struct Panel {
    double lo, hi, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  auto make = [&](double lo, double hi, double whole) {
    const double mid = 0.5 * (lo + hi);
    const double v = gl15(f, lo, mid) + gl15(f, mid, hi);
    return Panel{lo, hi, v, std::abs(v - whole)};
  };
  auto infinite = [](double v) { return std::isnan(v) ? v : kInf * (v > 0 ? 1.0 : -1.0); };
  std::vector<Panel> heap;
  heap.reserve(cuts.size() + 64);
  double total = 0.0, total_abs = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    heap.push_back(make(cuts[i], cuts[i + 1], gl15(f, cuts[i], cuts[i + 1])));
    total += heap.back().value;
    total_abs += std::abs(heap.back().value);
    err += heap.back().error;
  }
  out.panels = static_cast<int>(heap.size());
  if (!std::isfinite(total) || !std::isfinite(err)) {
    out.value = infinite(total);
    return out;
  }
  std::make_heap(heap.begin(), heap.end());
  // Rounding noise in the integrand shows up as an error estimate that no
  // longer shrinks under refinement; stop once that happens.
  double checkpoint = err;
  int stagnant = 0;
  int splits = 0;
  while (err > std::max(opt.abs_tol, opt.rel_tol * total_abs) && out.panels < opt.max_panels) {
    if (++splits % 64 == 0) {
      stagnant = err > 0.9 * checkpoint ? stagnant + 1 : 0;
      checkpoint = err;
      if (stagnant >= 2) break;
    }
    std::pop_heap(heap.begin(), heap.end());
    const Panel worst = heap.back();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      std::push_heap(heap.begin(), heap.end());
      break;
    }
    heap.pop_back();
    const Panel l = make(worst.lo, mid, gl15(f, worst.lo, mid));
    const Panel r = make(mid, worst.hi, gl15(f, mid, worst.hi));
    total += l.value + r.value - worst.value;
    total_abs += std::abs(l.value) + std::abs(r.value) - std::abs(worst.value);
    err += l.error + r.error - worst.error;
    if (!std::isfinite(total)) {
      out.value = infinite(total);
      return out;
    }
    heap.push_back(l);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(r);
    std::push_heap(heap.begin(), heap.end());
    ++out.panels;
  }
  // Re-sum left to right so the result does not depend on the refinement order.
  std::sort(heap.begin(), heap.end(), [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
  out.value = 0.0;
  out.error = 0.0;
  total_abs = 0.0;
  for (const auto& p : heap) {
    out.value += p.value;
    out.error += p.error;
    total_abs += std::abs(p.value);
  }
  out.converged = out.error <= std::max(opt.abs_tol, opt.rel_tol * total_abs) * (1.0 + 1e-9);
  return out;
}

template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
  return integrate(std::forward<F>(f), a, b, std::span<const double>{}, opt);
}

struct GradedOptions {
  Options panel;
  int min_panels = 16;
  int max_panels = 1000;
  int fit_window = 8;
  int confirmations = 4;      // successive refinements above threshold before declaring divergence
  int divergence_min_panels = 48;
  double divergence_slope = 0.0;  // fitted log2 panel-ratio at or above this means non-summable tail
};

struct GradedResult {
  double value = 0.0;
  double error = 0.0;
  bool divergent = false;
  double tail_slope = 0.0;   // fitted log2(I_{k+1}/I_k) near the singular end
  double tail_estimate = 0.0;
  std::vector<std::pair<int, double>> trace;  // (panel count, cumulative value)
  int panels = 0;
};

namespace detail {
double fitted_log2_ratio(const std::vector<double>& contributions, int window);
}

/// Integrates over [a, b] with dyadic panels shrinking toward the singular end
/// (toward_lo selects which). The summed panel contributions form the
/// refinement trace; a geometric fit of their decay extrapolates the unresolved
/// tail or, when the contributions stop decaying, reports divergence.
template <class F>
GradedResult integrate_graded(F&& f, double a, double b, bool toward_lo, std::span<const double> breaks,
                              const GradedOptions& opt = {}) {
  GradedResult out;
  if (!(b > a)) return out;
  const double len = b - a;
  auto edge = [&](int k) {
    const double off = std::ldexp(len, -k);
    return toward_lo ? a + off : b - off;
  };
  auto panel_breaks = [&](double lo, double hi) {
    std::vector<double> inner;
    for (double x : breaks)
      if (x > lo && x < hi) inner.push_back(x);
    return inner;
  };

  std::vector<double> contributions;
  double total = 0.0;
  int above = 0;
  double prev_outer = toward_lo ? b : a;
  for (int k = 1; k <= opt.max_panels; ++k) {
    const double inner_edge = edge(k);
    const double lo = toward_lo ? inner_edge : prev_outer;
    const double hi = toward_lo ? prev_outer : inner_edge;
    if (!(hi > lo) || inner_edge == (toward_lo ? a : b)) break;
    const auto inner = panel_breaks(lo, hi);
    const Result r = integrate(f, lo, hi, std::span<const double>(inner), opt.panel);
    prev_outer = inner_edge;
    out.panels += r.panels;
    if (!std::isfinite(r.value)) {
      out.value = kInf;
      out.divergent = true;
      out.trace.emplace_back(k, kInf);
      return out;
    }
    contributions.push_back(r.value);
    total += r.value;
    out.error += r.error;
    out.trace.emplace_back(k, total);

    if (k < opt.min_panels) continue;
    const double s = detail::fitted_log2_ratio(contributions, opt.fit_window);
    out.tail_slope = s;
    if (std::isnan(s)) continue;
    if (s == -kInf) return out.value = total, out;  // integrand vanishes near the end
    if (s >= opt.divergence_slope) {
      if (++above >= opt.confirmations && k >= opt.divergence_min_panels) {
        out.value = kInf;
        out.divergent = true;
        return out;
      }
      continue;
    }
    above = 0;
    const double ratio = std::exp2(s);
    const double tail = std::abs(contributions.back()) * ratio / (1.0 - ratio);
    if (tail <= std::max(opt.panel.abs_tol, opt.panel.rel_tol * std::abs(total))) {
      out.tail_estimate = tail;
      out.value = total + tail;
      out.error += tail * 1e-3;
      return out;
    }
  }
  // Panel budget exhausted or resolution floor reached.
  const double s = detail::fitted_log2_ratio(contributions, opt.fit_window);
  out.tail_slope = s;
  if (!std::isnan(s) && s >= opt.divergence_slope) {
    out.value = kInf;
    out.divergent = true;
    return out;
  }
  double tail = 0.0;
  if (!std::isnan(s) && s > -kInf && !contributions.empty()) {
    const double ratio = std::exp2(s);
    tail = std::abs(contributions.back()) * ratio / (1.0 - ratio);
  }
  out.tail_estimate = tail;
  out.value = total + tail;
  out.error += 0.05 * tail;
  return out;
}

}  // namespace varlex::quad
