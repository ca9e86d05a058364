#include "varlex/composition.hpp"

#include <sstream>

namespace varlex {

VectorFunction compose(const TwoParameterFunction& f, const VectorFunction& u, const std::vector<double>& t_grid) {
  const Interval yr = f.y_range();
  for (double t : t_grid) {
    const double y = u(t)[0];
    if (!yr.contains(y)) {
      std::ostringstream os;
      os << "u(" << t << ") = " << y << " leaves the y-range of " << f.describe();
      throw DomainError(os.str());
    }
  }
  return compose_pointwise(f, u);
}

VectorFunction empirical_lipschitz(const TwoParameterFunction& f, const std::vector<double>& y_samples) {
  if (y_samples.size() < 2) throw ContractError("Lipschitz estimate needs at least 2 y samples");
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < y_samples.size(); ++i)
    for (std::size_t j = i + 1; j < y_samples.size(); ++j)
      if (std::abs(y_samples[i] - y_samples[j]) >= 1e-6) pairs.emplace_back(y_samples[i], y_samples[j]);
  auto L = [f, pairs](double t) {
    double m = 0.0;
    for (const auto& [a, b] : pairs) m = std::max(m, std::abs(f(t, a) - f(t, b)) / std::abs(a - b));
    return m;
  };
  return VectorFunction::scalar("L_hat[" + f.describe() + "]", L);
}

WindowNormSeries lipschitz_window_check(const TwoParameterFunction& f, const ExponentFunction& r,
                                       const std::vector<double>& t_grid, const std::vector<double>& y_samples) {
  return stepanov_norm(empirical_lipschitz(f, y_samples), r, t_grid, true);
}

namespace {

std::vector<double> y_grid(const TwoParameterFunction& f, double bound, std::size_t n) {
  const Interval yr = f.y_range();
  const double lo = std::max(-bound, yr.lo), hi = std::min(bound, yr.hi);
  std::vector<double> out;
  n = std::max<std::size_t>(n, 2);
  for (std::size_t i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  return out;
}

}  // namespace

CompositionReport composition_membership_test(const TwoParameterFunction& f, const VectorFunction& u,
                                              const ExponentFunction& p, const ExponentFunction& r,
                                              const std::vector<double>& shifts, const CompositionOptions& opt) {
  CompositionReport rep;
  rep.q_exponent = composition_exponent(p, r);
  rep.membership.tolerance = opt.shift.tolerance;
  const auto& tg = opt.t_grid;
  if (shifts.empty() || tg.empty()) throw ContractError("composition test needs shifts and a t grid");

  const Interval dom = u.domain();
  const double lo = std::max(dom.lo, *std::min_element(shifts.begin(), shifts.end()) + *std::min_element(tg.begin(), tg.end()));
  const double hi = std::min(dom.hi, *std::max_element(shifts.begin(), shifts.end()) + *std::max_element(tg.begin(), tg.end()) + 1.0);
  rep.range_bound = u.sup_norm(lo, hi);
  rep.range_bounded = std::isfinite(rep.range_bound);

  const double step = std::max(0.05, (hi - lo) / 20000.0);
  rep.composed = compose(f, u, uniform_grid(lo, hi, step));
  if (rep.range_bounded) {
    const auto ys = y_grid(f, std::max(rep.range_bound, 1e-3), opt.y_samples);
    const Interval rdom = r.domain();
    if (rdom.lo <= 0.0 && rdom.hi >= 1.0) rep.lipschitz_window_norms = lipschitz_window_check(f, r, tg, ys);
  }

  const ShiftTestReport inner = bochner_shift_test(u, p, shifts, tg, opt.shift);
  if (!rep.range_bounded || inner.verdict != Verdict::True) {
    rep.membership.verdict = Verdict::Inconclusive;
    rep.membership.note = !rep.range_bounded ? "range of u is unbounded on the grid"
                                             : "u does not pass the shift test at p (" +
                                                   std::string(to_string(inner.verdict)) + ")";
    rep.shift_test = inner;
    return rep;
  }

  rep.shift_test = bochner_shift_test(*rep.composed, rep.q_exponent, shifts, tg, opt.shift);
  rep.membership.verdict = rep.shift_test.verdict;
  rep.membership.value = rep.shift_test.tail_residual;
  rep.membership.note = rep.shift_test.note;
  const double q_minus = rep.q_exponent.essential_bounds().first;
  if (rep.q_exponent.is_constant()) {
    rep.verdict_at_q_minus = rep.shift_test.verdict;
  } else {
    rep.verdict_at_q_minus =
        bochner_shift_test(*rep.composed, ExponentFunction::constant(q_minus), shifts, tg, opt.shift).verdict;
  }
  rep.membership.metrics = {{"tail_residual", rep.shift_test.tail_residual},
                            {"closest_pair", rep.shift_test.closest_pair},
                            {"q_minus", q_minus},
                            {"range_bound", rep.range_bound},
                            {"lipschitz_sup", rep.lipschitz_window_norms.sup_estimate}};
  return rep;
}

CompositionReport asymptotic_composition_test(const TwoParameterFunction& g, const VectorFunction& v,
                                              const TwoParameterFunction& q_part, const VectorFunction& omega,
                                              const ExponentFunction& p, const ExponentFunction& r,
                                              const std::vector<double>& shifts, double horizon,
                                              const CompositionOptions& opt) {
  CompositionReport rep = composition_membership_test(g, v, p, r, shifts, opt);
  const TwoParameterFunction f = g + q_part;
  const VectorFunction u = v + omega;
  const VectorFunction composed = compose(f, u, uniform_grid(std::max(0.0, u.domain().lo), horizon + 1.0, 0.05));
  const VectorFunction residual = composed - compose_pointwise(g, v);
  const TestReport decay = c0_decay_test(residual, rep.q_exponent, horizon);
  const Verdict aa = rep.membership.verdict;
  rep.composed = composed;
  rep.membership.abscissae = decay.abscissae;
  rep.membership.series = decay.series;
  rep.membership.fitted_slope = decay.fitted_slope;
  rep.membership.metrics.emplace_back("residual_tail_max", decay.value);
  rep.membership.metrics.emplace_back("residual_slope", decay.fitted_slope);
  if (aa == Verdict::True && decay.verdict == Verdict::True) {
    rep.membership.verdict = Verdict::True;
  } else if (aa == Verdict::False || decay.verdict == Verdict::False) {
    rep.membership.verdict = Verdict::False;
    rep.membership.note = decay.verdict == Verdict::False ? "residual does not decay" : rep.membership.note;
  } else {
    rep.membership.verdict = Verdict::Inconclusive;
    if (decay.verdict != Verdict::True) rep.membership.note = "residual decay not resolved by the horizon";
  }
  return rep;
}

}  // namespace varlex
