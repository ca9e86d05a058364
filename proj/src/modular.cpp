#include "varlex/modular.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <sstream>

namespace varlex {

double phi(double p, double t) {
  if (t < 0.0 || std::isnan(t)) throw ContractError("phi needs t >= 0");
  if (std::isinf(p)) return t <= 1.0 ? 0.0 : kInf;
  if (t == 0.0) return 0.0;
  return std::pow(t, p);
}

double phi(const ExponentFunction& p, double x, double t) { return phi(p(x), t); }

namespace {

std::vector<Interval> finite_parts(const ExponentFunction& p, Interval omega) {
  std::vector<Interval> inf;
  for (const auto& iv : p.infinite_set()) {
    const Interval c{std::max(iv.lo, omega.lo), std::min(iv.hi, omega.hi)};
    if (c.hi > c.lo) inf.push_back(c);
  }
  std::sort(inf.begin(), inf.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  double cursor = omega.lo;
  for (const auto& iv : inf) {
    if (iv.lo > cursor) out.push_back({cursor, iv.lo});
    cursor = std::max(cursor, iv.hi);
  }
  if (omega.hi > cursor) out.push_back({cursor, omega.hi});
  return out;
}

double sampled_sup(const VectorFunction& f, Interval iv, std::size_t samples) {
  double s = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = iv.lo + iv.length() * static_cast<double>(i) / static_cast<double>(samples - 1);
    s = std::max(s, f.norm_at(x));
  }
  for (double x : f.breakpoints(iv.lo, iv.hi)) {
    s = std::max(s, f.norm_at(std::nextafter(x, iv.lo)));
    s = std::max(s, f.norm_at(std::nextafter(x, iv.hi)));
  }
  return s;
}

}  // namespace

std::vector<double> sign_changes(const VectorFunction& f, double a, double b) {
  std::vector<double> out;
  if (f.dim() != 1 || !(b > a) || !std::isfinite(b - a)) return out;
  const int n = std::clamp(static_cast<int>(128.0 * (b - a)), 64, 4096);
  const double h = (b - a) / n;
  auto value = [&](double x) {
    const double v = f.scalar_at(x);
    return std::isfinite(v) ? v : std::nan("");
  };
  double x0 = a + 0.5 * h, v0 = value(x0);
  for (int i = 1; i < n; ++i) {
    const double x1 = a + (i + 0.5) * h, v1 = value(x1);
    if (v0 * v1 < 0.0) {
      std::uintmax_t iters = 100;
      const auto r = boost::math::tools::toms748_solve(value, x0, x1, v0, v1,
                                                       boost::math::tools::eps_tolerance<double>(52), iters);
      out.push_back(0.5 * (r.first + r.second));
    }
    x0 = x1, v0 = v1;
  }
  return out;
}

ModularResult modular(const VectorFunction& f, const ExponentFunction& p, Interval omega, double scale,
                      const ModularOptions& opt) {
  if (!(scale > 0.0)) throw ContractError("modular scale must be positive");
  if (!(omega.hi >= omega.lo) || !omega.bounded()) throw ContractError("modular needs a bounded interval");
  if (!p.domain().contains(omega)) throw DomainError("integration interval leaves the exponent domain");
  if (!f.domain().contains(omega)) throw DomainError("integration interval leaves the function domain");

  ModularResult out;
  // Infinite branch: zero if |f| <= scale there, infinite otherwise.
  for (const auto& iv : p.infinite_set()) {
    const Interval c{std::max(iv.lo, omega.lo), std::min(iv.hi, omega.hi)};
    if (!(c.hi > c.lo)) continue;
    if (sampled_sup(f, c, opt.sup_samples) / scale > 1.0) {
      out.value = kInf;
      out.divergent = true;
      out.trace.emplace_back(0, kInf);
      return out;
    }
  }

  std::vector<double> singular = p.singular_points();
  for (double x : f.singular_points()) singular.push_back(x);
  auto is_singular = [&](double x) {
    return std::any_of(singular.begin(), singular.end(), [x](double s) { return s == x; });
  };
  std::vector<double> p_breaks = p.breakpoints();
  p_breaks.insert(p_breaks.end(), opt.breaks.begin(), opt.breaks.end());
  if (opt.locate_sign_changes)
    for (double x : sign_changes(f, omega.lo, omega.hi)) p_breaks.push_back(x);

  auto integrand = [&](double x) { return phi(p.value_unchecked(x), f.norm_at(x) / scale); };

  int panels = 0;
  double total = 0.0;
  double worst_slope = -kInf;
  bool graded_used = false;
  auto add_piece = [&](double a, double b) {
    std::vector<double> breaks = f.breakpoints(a, b);
    for (double x : p_breaks)
      if (x > a && x < b) breaks.push_back(x);
    std::sort(breaks.begin(), breaks.end());
    const bool sing_lo = is_singular(a);
    const bool sing_hi = is_singular(b);
    if (!sing_lo && !sing_hi) {
      const auto r = quad::integrate(integrand, a, b, std::span<const double>(breaks), opt.graded.panel);
      panels += r.panels;
      total += r.value;
      out.error += r.error;
      out.trace.emplace_back(panels, total);
      return true;
    }
    const auto r = quad::integrate_graded(integrand, a, b, sing_lo, std::span<const double>(breaks), opt.graded);
    graded_used = true;
    worst_slope = std::max(worst_slope, r.tail_slope);
    for (const auto& [k, v] : r.trace) out.trace.emplace_back(panels + k, total + v);
    panels += static_cast<int>(r.trace.size());
    out.error += r.error;
    if (r.divergent) {
      out.value = kInf;
      out.divergent = true;
      out.tail_slope = r.tail_slope;
      out.trace.emplace_back(panels, kInf);
      return false;
    }
    total += r.value;
    return true;
  };

  for (const auto& part : finite_parts(p, omega)) {
    std::vector<double> cuts{part.lo};
    for (double s : singular)
      if (s > part.lo && s < part.hi) cuts.push_back(s);
    cuts.push_back(part.hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = cuts[i], b = cuts[i + 1];
      if (is_singular(a) && is_singular(b)) {
        const double m = 0.5 * (a + b);
        if (!add_piece(a, m) || !add_piece(m, b)) return out;
      } else if (!add_piece(a, b)) {
        return out;
      }
    }
  }
  out.value = total;
  if (graded_used) out.tail_slope = worst_slope;
  if (!std::isfinite(total)) out.divergent = true, out.value = kInf;
  return out;
}

NormResult luxemburg_norm(const VectorFunction& f, const ExponentFunction& p, Interval omega,
                          const NormOptions& opt) {
  NormResult out;
  const double measure = omega.length();
  // rho is only compared with 1, so an absolute floor is harmless and stops
  // refinement on integrands that are pure rounding noise.
  ModularOptions mopt = opt.modular;
  mopt.graded.panel.abs_tol = std::max(mopt.graded.panel.abs_tol, 1e-15);
  if (mopt.locate_sign_changes) {
    for (double x : sign_changes(f, omega.lo, omega.hi)) mopt.breaks.push_back(x);
    mopt.locate_sign_changes = false;
  }
  const auto l1 = modular(f, ExponentFunction::constant(1.0, omega), omega, 1.0, mopt);
  if (l1.divergent) {
    out.value = kInf;
    out.bracket = {kInf, kInf};
    out.modular_at_value = kInf;
    out.diagnostic = "f is not integrable on the interval";
    return out;
  }
  if (l1.value == 0.0) {
    out.diagnostic = "f vanishes";
    return out;
  }
  {
    // Differences of nearly equal terms: below the cancellation floor f is zero.
    auto mag = [&](double x) { return f.magnitude_at(x); };
    const auto bp = f.breakpoints(omega.lo, omega.hi);
    const double scale = quad::integrate(mag, omega.lo, omega.hi, std::span<const double>(bp), {1e-6, 0.0, 200}).value;
    if (std::isfinite(scale) && l1.value <= 1e-11 * scale) {
      out.diagnostic = "f is below the rounding floor of its terms";
      return out;
    }
  }
  auto rho = [&](double lambda) { return modular(f, p, omega, lambda, mopt).value; };

  // |f|_1 <= (1 + m) |f|, so the L1 bound gives a lower bracket.
  double lo = l1.value / (1.0 + measure);
  double hi = 1.0 + l1.value;
  int evals = 0;
  while (rho(lo) <= 1.0 && evals < opt.max_iterations) {
    hi = lo;
    lo *= 0.5;
    ++evals;
  }
  double rho_hi = rho(hi);
  while (rho_hi > 1.0) {
    if (++evals >= opt.max_iterations || !std::isfinite(hi)) {
      out.value = kInf;
      out.bracket = {hi, kInf};
      out.modular_at_value = rho_hi;
      out.iterations = evals;
      out.diagnostic = "modular exceeds 1 at every tested scale";
      return out;
    }
    lo = hi;
    hi *= 2.0;
    rho_hi = rho(hi);
  }
  int it = 0;
  while (hi - lo > opt.rel_tol * hi && it < opt.max_iterations) {
    const double mid = 0.5 * (lo + hi);
    const double r = rho(mid);
    if (r <= 1.0) {
      hi = mid;
      rho_hi = r;
    } else {
      lo = mid;
    }
    ++it;
  }
  out.value = hi;
  out.bracket = {lo, hi};
  out.modular_at_value = rho_hi;
  out.iterations = it;
  if (hi - lo > opt.rel_tol * hi) out.diagnostic = "iteration limit reached";
  return out;
}

HolderReport holder_check(const VectorFunction& u, const VectorFunction& v, const ExponentFunction& p,
                          const ExponentFunction& r, Interval omega, const NormOptions& opt) {
  const ExponentFunction q = holder_exponent(p, r);
  HolderReport out;
  out.u_norm = luxemburg_norm(u, p, omega, opt);
  out.v_norm = luxemburg_norm(v, r, omega, opt);
  out.uv_norm = luxemburg_norm(product(u, v), q, omega, opt);
  out.product_norm = out.uv_norm.value;
  out.bound = 2.0 * out.u_norm.value * out.v_norm.value;
  out.holds = out.product_norm <= out.bound * (1.0 + 1e-8);
  return out;
}

EmbeddingReport embedding_check(const VectorFunction& f, const ExponentFunction& p, const ExponentFunction& q,
                                Interval omega, const NormOptions& opt) {
  if (!omega.bounded()) throw ContractError("embedding needs a finite-measure interval");
  const auto grid = p.evaluation_grid(10000);
  auto violates = [&](double x) {
    return x >= omega.lo && x <= omega.hi && q.value_unchecked(x) > p.value_unchecked(x) * (1.0 + 1e-12);
  };
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (violates(grid[i]) && violates(grid[i + 1])) {
      std::ostringstream os;
      os << "q <= p violated near x=" << grid[i];
      throw ContractError(os.str());
    }
  }
  EmbeddingReport out;
  out.norm_q = luxemburg_norm(f, q, omega, opt).value;
  out.norm_p = luxemburg_norm(f, p, omega, opt).value;
  out.constant = 1.0 + omega.length();
  out.ratio = out.norm_p > 0.0 ? out.norm_q / out.norm_p : 0.0;
  out.holds = out.norm_q <= out.constant * out.norm_p * (1.0 + 1e-8);
  return out;
}

}  // namespace varlex
