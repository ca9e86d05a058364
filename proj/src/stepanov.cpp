#include "varlex/stepanov.hpp"

#include "varlex/parallel.hpp"

#include <algorithm>
#include <sstream>

namespace varlex {

double window_norm(const VectorFunction& f, const ExponentFunction& p, double t, const NormOptions& opt) {
  const Interval dom = f.domain();
  if (!(dom.lo <= t && t + 1.0 <= dom.hi)) {
    std::ostringstream os;
    os << "window [" << t << "," << t + 1.0 << "] leaves the domain of " << f.describe();
    throw DomainError(os.str());
  }
  if (!p.domain().contains(Interval{0.0, 1.0})) throw ContractError("window exponent must be defined on [0, 1]");
  return luxemburg_norm(translate(f, t), p, {0.0, 1.0}, opt).value;
}

WindowNormSeries stepanov_norm(const VectorFunction& f, const ExponentFunction& p, const std::vector<double>& t_grid,
                               bool refine, const NormOptions& opt) {
  if (t_grid.empty()) throw ContractError("stepanov grid is empty");
  WindowNormSeries out;
  out.exponent = p;
  out.base_points = t_grid;
  out.values = parallel_map(t_grid.size(), [&](std::size_t i) { return window_norm(f, p, t_grid[i], opt); });
  const auto it = std::max_element(out.values.begin(), out.values.end());
  const auto k = static_cast<std::size_t>(it - out.values.begin());
  out.sup_estimate = *it;
  out.argmax = t_grid[k];
  if (!refine || t_grid.size() < 2 || !std::isfinite(out.sup_estimate)) return out;

  // Golden-section search for the local maximum bracketed by the grid neighbours.
  double a = t_grid[k == 0 ? 0 : k - 1];
  double b = t_grid[std::min(k + 1, t_grid.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto g = [&](double t) { return window_norm(f, p, t, opt); };
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c), gd = g(d);
  for (int i = 0; i < 40 && b - a > 1e-9 * std::max(1.0, std::abs(a)); ++i) {
    if (gc >= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  const double best = std::max(gc, gd);
  if (best > out.sup_estimate) {
    out.sup_estimate = best;
    out.argmax = gc >= gd ? c : d;
  }
  return out;
}

TestReport c0_decay_test(const VectorFunction& w, const ExponentFunction& p, double horizon, const DecayOptions& opt) {
  TestReport rep;
  rep.tolerance = opt.tolerance;
  const Interval dom = w.domain();
  if (!(horizon > 0.0) || dom.lo > 0.0 || dom.hi < horizon + 1.0) {
    rep.verdict = Verdict::Inconclusive;
    rep.note = "samples do not reach horizon + 1";
    return rep;
  }
  const std::size_t n = std::max<std::size_t>(opt.points, 8);
  std::vector<double> ts(n);
  for (std::size_t i = 0; i < n; ++i) ts[i] = horizon * static_cast<double>(i) / static_cast<double>(n - 1);
  const auto series = stepanov_norm(w, p, ts, false);
  rep.abscissae = ts;
  rep.series = series.values;

  std::vector<double> tx, ty;
  double tail_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (ts[i] >= 0.25 * horizon && ts[i] > 0.0) {
      tx.push_back(ts[i]);
      ty.push_back(series.values[i]);
    }
    if (ts[i] >= 0.9 * horizon) tail_max = std::max(tail_max, series.values[i]);
  }
  const double slope = loglog_slope(tx, ty);
  rep.fitted_slope = slope;
  rep.value = tail_max;
  rep.metrics = {{"final_norm", series.values.back()}, {"tail_max", tail_max}, {"sup", series.sup_estimate}};
  if (tail_max == 0.0) {
    rep.verdict = Verdict::True;
    rep.note = "window norms vanish";
  } else if (tail_max <= opt.tolerance && slope < opt.flat_slope) {
    rep.verdict = Verdict::True;
  } else if (tail_max > opt.tolerance && !(slope < opt.flat_slope)) {
    rep.verdict = Verdict::False;
    rep.note = "window norms do not decay";
  } else {
    rep.verdict = Verdict::Inconclusive;
    rep.note = "decay not resolved by the horizon";
  }
  return rep;
}

TestReport ergodic_mean_test(const VectorFunction& phi_fn, double r_max, const ErgodicOptions& opt) {
  TestReport rep;
  rep.tolerance = opt.tolerance;
  const Interval dom = phi_fn.domain();
  if (!(r_max >= 1.0) || dom.lo > -r_max || dom.hi < r_max) {
    rep.verdict = Verdict::Inconclusive;
    rep.note = "samples do not cover [-r_max, r_max]";
    return rep;
  }
  auto integrand = [&](double s) { return phi_fn.norm_at(s); };
  auto shell = [&](double a, double b) {
    std::vector<double> cuts = phi_fn.breakpoints(a, b);
    for (double x = a + 4.0; x < b; x += 4.0) cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    return quad::integrate(integrand, a, b, std::span<const double>(cuts), {1e-10, 0.0, 20000}).value;
  };
  double r = 1.0;
  double integral = shell(-1.0, 1.0);
  for (;;) {
    rep.abscissae.push_back(r);
    rep.series.push_back(integral / (2.0 * r));
    if (r >= r_max) break;
    const double next = std::min(2.0 * r, r_max);
    integral += shell(-next, -r) + shell(r, next);
    r = next;
  }
  std::vector<double> tx, ty;
  for (std::size_t i = rep.abscissae.size() / 2; i < rep.abscissae.size(); ++i) {
    tx.push_back(rep.abscissae[i]);
    ty.push_back(rep.series[i]);
  }
  const double slope = loglog_slope(tx, ty);
  rep.fitted_slope = slope;
  rep.value = rep.series.back();
  rep.metrics = {{"final_mean", rep.value}, {"r_max", r_max}};
  if (rep.value == 0.0) {
    rep.verdict = Verdict::True;
  } else if (rep.value <= opt.tolerance && slope < opt.flat_slope) {
    rep.verdict = Verdict::True;
  } else if (rep.value > opt.tolerance && !(slope < opt.flat_slope)) {
    rep.verdict = Verdict::False;
    rep.note = "mean does not decay";
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
  return rep;
}

}  // namespace varlex
