#include "varlex/almost_auto.hpp"

#include "varlex/parallel.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace varlex {

namespace {

std::vector<double> defect_grid(const PeriodScanOptions& opt) {
  return opt.t_grid.empty() ? uniform_grid(0.0, 100.0, 0.25) : opt.t_grid;
}

std::vector<double> window_grid(const PeriodScanOptions& opt) {
  return opt.stepanov_t_grid.empty() ? uniform_grid(0.0, 10.0, 1.0) : opt.stepanov_t_grid;
}

/// Sup-norm defect with cached base values and early exit above a threshold.
class DefectScanner {
 public:
  DefectScanner(const VectorFunction& f, const PeriodScanOptions& opt) : f_(f), ts_(defect_grid(opt)) {
    base_.reserve(ts_.size());
    for (double t : ts_) base_.push_back(f(t));
    lipschitz_ = kInf;
    if (!f.discontinuous()) {
      const double lo = ts_.front();
      const double hi = ts_.back();
      constexpr double h = 1e-3;
      double best = 0.0;
      Vec a = f(lo), b;
      for (double t = lo + h; t <= hi; t += h) {
        b = f(t);
        best = std::max(best, (b - a).norm() / h);
        a = b;
      }
      lipschitz_ = 1.5 * best + 1e-12;
    }
  }

  /// Returns the defect, or a value above `stop` once the running max exceeds it.
  double operator()(double tau, double stop = kInf) const {
    double m = 0.0;
    for (std::size_t i = 0; i < ts_.size(); ++i) {
      m = std::max(m, (f_(ts_[i] + tau) - base_[i]).norm());
      if (m > stop) return m;
    }
    return m;
  }

  /// Golden-section minimisation of the defect over [a, b].
  std::pair<double, double> refine(double a, double b) const {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = (*this)(c), fd = (*this)(d);
    for (int i = 0; i < 40 && b - a > 1e-10 * std::max(1.0, std::abs(a)); ++i) {
      if (fc <= fd) {
        b = d, d = c, fd = fc;
        c = b - inv_phi * (b - a);
        fc = (*this)(c);
      } else {
        a = c, c = d, fc = fd;
        d = a + inv_phi * (b - a);
        fd = (*this)(d);
      }
    }
    return fc <= fd ? std::pair{c, fc} : std::pair{d, fd};
  }

  double lipschitz() const { return lipschitz_; }

 private:
  const VectorFunction& f_;
  std::vector<double> ts_;
  std::vector<Vec> base_;
  double lipschitz_;
};

}  // namespace

double sup_defect(const VectorFunction& f, double tau, const PeriodScanOptions& opt) {
  double m = 0.0;
  for (double t : defect_grid(opt)) m = std::max(m, (f(t + tau) - f(t)).norm());
  return m;
}

double stepanov_defect(const VectorFunction& f, const ExponentFunction& p, double tau, const PeriodScanOptions& opt) {
  const VectorFunction diff = translate(f, tau) - f;
  const auto ts = window_grid(opt);
  const auto norms = parallel_map(ts.size(), [&](std::size_t i) { return window_norm(diff, p, ts[i], opt.norm); });
  return *std::max_element(norms.begin(), norms.end());
}

TestReport epsilon_period_scan(const VectorFunction& f, const std::optional<ExponentFunction>& p, double eps,
                               double interval_length, double horizon, const PeriodScanOptions& opt) {
  if (!(eps > 0.0)) throw ContractError("epsilon must be positive");
  if (!(interval_length > 0.0) || !(horizon >= interval_length))
    throw ContractError("need 0 < interval_length <= horizon");
  TestReport rep;
  rep.tolerance = eps;
  const DefectScanner scan(f, opt);
  const double h = opt.step;
  const double slack = std::isfinite(scan.lipschitz()) ? 0.5 * scan.lipschitz() * h : 0.0;
  const auto windows = static_cast<std::size_t>(std::ceil(horizon / interval_length - 1e-9));
  const std::size_t keep = p ? std::max<std::size_t>(opt.stepanov_candidates, 1) : 3;
  std::size_t found = 0;
  for (std::size_t k = 0; k < windows; ++k) {
    const double lo = k == 0 ? std::min(1.0, 0.5 * interval_length) : interval_length * static_cast<double>(k);
    const double hi = std::min(interval_length * static_cast<double>(k + 1), horizon);
    std::vector<std::pair<double, double>> best;  // (defect, tau), ascending
    bool hit = false;
    for (double tau = lo; tau <= hi + 1e-12; tau += h) {
      const double stop = best.size() < keep ? kInf : best.back().first + slack;
      const double v = scan(tau, stop);
      if (v > stop) continue;
      best.emplace_back(v, tau);
      std::sort(best.begin(), best.end());
      if (best.size() > keep) best.pop_back();
      if (v < eps) {
        hit = true;
        break;
      }
    }
    double best_tau = best.front().second;
    double best_val = best.front().first;
    if (!hit && slack > 0.0) {
      for (const auto& [v, tau] : best) {
        const auto [t2, v2] = scan.refine(std::max(lo, tau - h), std::min(hi, tau + h));
        if (v2 < best_val) best_val = v2, best_tau = t2;
      }
    }
    if (p) {
      // The window norm never exceeds the sup norm on a unit window.
      double sbest = stepanov_defect(f, *p, best_tau, opt);
      if (!(best_val < eps)) {
        for (const auto& [v, tau] : best) {
          const double s = stepanov_defect(f, *p, tau, opt);
          if (s < sbest) sbest = s, best_tau = tau;
        }
      }
      best_val = std::min(best_val, sbest);
    }
    rep.abscissae.push_back(best_tau);
    rep.series.push_back(best_val);
    if (best_val < eps) ++found;
  }
  rep.value = *std::max_element(rep.series.begin(), rep.series.end());
  rep.metrics = {{"windows", static_cast<double>(windows)},
                 {"windows_with_period", static_cast<double>(found)},
                 {"interval_length", interval_length},
                 {"horizon", horizon}};
  rep.verdict = found == windows ? Verdict::True : Verdict::False;
  std::ostringstream os;
  os << found << " of " << windows << " windows contain an eps-period";
  rep.note = os.str();
  return rep;
}

std::vector<double> almost_period_sequence(const VectorFunction& f, std::size_t count, double horizon, double eps0,
                                           double factor, const PeriodScanOptions& opt) {
  if (f.discontinuous()) throw ContractError("almost_period_sequence needs a continuous function");
  if (!(factor > 0.0 && factor < 1.0)) throw ContractError("factor must lie in (0, 1)");
  const DefectScanner scan(f, opt);
  const double h = opt.step;
  const double slack = 0.5 * scan.lipschitz() * h;
  std::vector<double> out;
  double target = eps0;
  for (double tau = 1.0; tau <= horizon && out.size() < count; tau += h) {
    const double v = scan(tau, target + slack);
    if (v > target + slack) continue;
    const auto [t2, v2] = scan.refine(tau - h, tau + h);
    if (v2 < target) {
      out.push_back(t2);
      target = std::min(target, v2) * factor;
      tau = std::max(tau, t2 + h);
    }
  }
  return out;
}

ShiftTestReport bochner_shift_test(const VectorFunction& f, const ExponentFunction& p,
                                   const std::vector<double>& shifts, const std::vector<double>& t_grid,
                                   const ShiftTestOptions& opt) {
  if (t_grid.empty()) throw ContractError("shift test needs a nonempty t grid");
  ShiftTestReport rep;
  rep.sequence = shifts;
  rep.t_grid = t_grid;
  rep.tolerance = opt.tolerance;
  const auto [tmin, tmax] = std::minmax_element(t_grid.begin(), t_grid.end());
  const Interval dom = f.domain();
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < shifts.size(); ++i)
    if (dom.lo <= shifts[i] + *tmin && shifts[i] + *tmax + 1.0 <= dom.hi) usable.push_back(i);
  if (usable.size() < 3) {
    rep.note = "fewer than 3 usable shifts";
    return rep;
  }

  auto distance = [&](double a, double b) {
    const VectorFunction diff = translate(f, a) - translate(f, b);
    double m = 0.0;
    for (double t : t_grid) m = std::max(m, window_norm(diff, p, t, opt.norm));
    return m;
  };
  const std::size_t nu = usable.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < nu; ++i)
    for (std::size_t j = i + 1; j < nu; ++j) pairs.emplace_back(i, j);
  const auto dists = parallel_map(pairs.size(), [&](std::size_t k) {
    return distance(shifts[usable[pairs[k].first]], shifts[usable[pairs[k].second]]);
  });
  std::vector<std::vector<double>> dist(nu, std::vector<double>(nu, 0.0));
  for (std::size_t k = 0; k < pairs.size(); ++k)
    dist[pairs[k].first][pairs[k].second] = dist[pairs[k].second][pairs[k].first] = dists[k];

  // Greedy Cauchy-type extraction: keep a shift when its distance to the last
  // kept one does not exceed the previous kept distance.
  const double floor = 1e-2 * opt.tolerance;
  std::vector<std::size_t> kept_local{0};
  double d_prev = kInf;
  for (std::size_t j = 1; j < nu; ++j) {
    const double d = dist[kept_local.back()][j];
    if (d <= d_prev || d <= floor) {
      kept_local.push_back(j);
      d_prev = std::max(d, floor);
    }
  }
  // Closest pair among the later half of the list: if even that exceeds the
  // tolerance, no subsequence of the list is Cauchy at this resolution.
  double closest = kInf;
  for (std::size_t i = nu / 2; i < nu; ++i)
    for (std::size_t j = i + 1; j < nu; ++j) closest = std::min(closest, dist[i][j]);
  rep.closest_pair = closest;
  const bool separated = nu - nu / 2 >= 3 && closest > opt.tolerance;
  std::vector<std::size_t> kept;
  for (std::size_t k : kept_local) kept.push_back(usable[k]);
  rep.chosen_subsequence = kept;
  if (kept.size() < 3) {
    if (separated) {
      rep.verdict = Verdict::False;
      rep.note = "no two late shifts are within tolerance";
    } else {
      rep.note = "fewer than 3 shifts survive the extraction";
    }
    return rep;
  }

  const auto tail = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(opt.tail_fraction * kept.size())));
  std::vector<double> tail_shifts;
  for (std::size_t k = kept.size() - tail; k < kept.size(); ++k) tail_shifts.push_back(shifts[kept[k]]);
  const VectorFunction g = shift_average(f, tail_shifts);
  rep.candidate_limit = g;

  const std::size_t nk = kept.size(), nt = t_grid.size();
  const auto cells = parallel_map(2 * nk * nt, [&](std::size_t idx) {
    const std::size_t k = (idx / 2) / nt, i = (idx / 2) % nt;
    const double a = shifts[kept[k]];
    try {
      if (idx % 2 == 0) return window_norm(translate(f, a) - g, p, t_grid[i], opt.norm);
      return window_norm(translate(g, -a) - f, p, t_grid[i], opt.norm);
    } catch (const DomainError&) {
      return std::nan("");
    }
  });
  rep.forward_residuals.assign(nk, std::vector<double>(nt));
  rep.backward_residuals.assign(nk, std::vector<double>(nt));
  std::vector<double> per_k(nk, 0.0);
  bool missing = false;
  for (std::size_t idx = 0; idx < cells.size(); ++idx) {
    const std::size_t k = (idx / 2) / nt, i = (idx / 2) % nt;
    (idx % 2 == 0 ? rep.forward_residuals : rep.backward_residuals)[k][i] = cells[idx];
    if (std::isnan(cells[idx])) missing = true;
    else per_k[k] = std::max(per_k[k], cells[idx]);
  }

  const std::size_t tail_start = nk - tail;
  const double tail_max = *std::max_element(per_k.begin() + static_cast<std::ptrdiff_t>(tail_start), per_k.end());
  rep.tail_residual = tail_max;
  if (missing) {
    rep.verdict = Verdict::Inconclusive;
    rep.note = "some backward windows leave the domain";
  } else if (tail_max <= opt.tolerance) {
    rep.verdict = Verdict::True;
  } else if (separated) {
    rep.verdict = Verdict::False;
    rep.note = "no two late shifts are within tolerance";
  } else {
    rep.verdict = Verdict::Inconclusive;
    rep.note = "residuals above tolerance but some shifts nearly agree";
  }
  return rep;
}

ModularResult counterexample_divergence(double lambda, double a, double b, const ModularOptions& opt) {
  if (!(lambda > 0.0)) throw ContractError("lambda must be positive");
  const VectorFunction F = VectorFunction::sign_of_two_sine();
  return modular(translate(F, a) - translate(F, b), ExponentFunction::one_minus_log(), {0.0, 1.0}, lambda, opt);
}

std::vector<double> counterexample_shifts(std::size_t pairs) {
  const VectorFunction f = VectorFunction::two_sine();
  std::vector<double> out;
  double start = 0.0;
  for (std::size_t n = 1; n <= pairs; ++n) {
    const double shift = static_cast<double>(n);
    for (double t = start;; t += 0.01) {
      const double u = f.scalar_at(t), v = f.scalar_at(t + shift);
      if (u * v < 0.0 && std::abs(u) >= 0.05 && std::abs(v) >= 0.05) {
        out.push_back(t);
        out.push_back(t + shift);
        start = t + shift + 0.5;
        break;
      }
    }
  }
  return out;
}

std::pair<double, double> saturated_pair() {
  const VectorFunction f = VectorFunction::two_sine();
  auto first = [&](double sign) {
    for (double a = 0.0;; a += 0.01)
      if (f.zeros(a - 0.01, a + 1.01).empty() && sign * f.scalar_at(a + 0.5) > 0.0) return a;
  };
  return {first(1.0), first(-1.0)};
}

TestReport asymptotic_decompose(const VectorFunction& f, const ExponentFunction& p, const VectorFunction& g_candidate,
                                const std::vector<double>& shifts, const std::vector<double>& t_grid, double horizon,
                                const ShiftTestOptions& shift_opt, const DecayOptions& decay_opt) {
  const VectorFunction w = f - g_candidate;
  TestReport rep = c0_decay_test(w, p, horizon, decay_opt);
  const Verdict decay = rep.verdict;
  const ShiftTestReport shift = bochner_shift_test(g_candidate, p, shifts, t_grid, shift_opt);
  rep.metrics.emplace_back("shift_tail_residual", shift.tail_residual);
  rep.metrics.emplace_back("decay_verdict", decay == Verdict::True ? 1.0 : decay == Verdict::False ? 0.0 : 0.5);
  rep.metrics.emplace_back("shift_verdict",
                           shift.verdict == Verdict::True ? 1.0 : shift.verdict == Verdict::False ? 0.0 : 0.5);
  if (decay == Verdict::True && shift.verdict == Verdict::True) rep.verdict = Verdict::True;
  else if (decay == Verdict::False || shift.verdict == Verdict::False) rep.verdict = Verdict::False;
  else rep.verdict = Verdict::Inconclusive;
  rep.note = std::string("decay: ") + to_string(decay) + ", shift test: " + to_string(shift.verdict);
  return rep;
}

}  // namespace varlex
