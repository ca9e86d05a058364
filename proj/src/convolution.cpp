#include "varlex/convolution.hpp"

#include "varlex/parallel.hpp"
#include "varlex/quadrature.hpp"

#include <mutex>
#include <sstream>
#include <unordered_map>

namespace varlex {

namespace {

constexpr quad::Options kKernelQuad{1e-12, 1e-15, 4000};

double entry(const ResolventFamily& rf, double s, Eigen::Index i) {
  const Vec v = rf(s);
  return v[v.size() == 1 ? 0 : i];
}

// int_a^b R_i(s) h(s) ds. Near s = 0 a t^(gamma-1) kernel is integrated in
// tau = s^gamma, where R ds = P(tau^(1/gamma)) dtau / gamma.
template <class H>
double kernel_integral(const ResolventFamily& rf, Eigen::Index i, H&& h, double a, double b,
                       std::vector<double> breaks = {}) {
  if (!(b > a)) return 0.0;
  std::sort(breaks.begin(), breaks.end());
  auto plain = [&](double lo, double hi) {
    auto f = [&](double s) { return entry(rf, s, i) * h(s); };
    std::vector<double> cuts;
    for (double x : breaks)
      if (x > lo && x < hi) cuts.push_back(x);
    for (double x = std::floor(lo) + 1.0; x < hi; x += 1.0) cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    return quad::integrate(f, lo, hi, std::span<const double>(cuts), kKernelQuad).value;
  };
  if (a > 0.0 || rf.singular_exponent() == 0.0) return plain(a, b);
  const double g = rf.gamma();
  const double ai = rf.generator()[rf.dim() == 1 ? 0 : i];
  const double split = std::min(b, 1.0);
  auto f = [&](double tau) { return mittag_leffler(g, g, -ai * tau) * h(std::pow(tau, 1.0 / g)) / g; };
  std::vector<double> cuts;
  for (double x : breaks)
    if (x > 0.0 && x < split) cuts.push_back(std::pow(x, g));
  std::sort(cuts.begin(), cuts.end());
  const double head = quad::integrate(f, 0.0, std::pow(split, g), std::span<const double>(cuts), kKernelQuad).value;
  return head + plain(split, b);
}

int output_dim(const ResolventFamily& rf, int d) {
  if (rf.dim() != 1 && rf.dim() != d) throw ContractError("generator and function dimensions differ");
  return d;
}

// int_a^b R(s) f(t - s) ds per component, cut at the jumps of f.
Vec kernel_convolve(const ResolventFamily& rf, const VectorFunction& f, double t, double a, double b) {
  const int d = output_dim(rf, f.dim());
  std::vector<double> breaks;
  for (double x : f.breakpoints(t - b, t - a)) breaks.push_back(t - x);
  Vec out(d);
  for (int i = 0; i < d; ++i) out[i] = kernel_integral(rf, i, [&](double s) { return f(t - s)[i]; }, a, b, breaks);
  return out;
}

double remainder_after(const DecayModel& m, double start) {
  if (m.exponential) return m.constant * std::exp(-m.rate * start) / (1.0 - std::exp(-m.rate));
  if (!(m.rate > 1.0)) throw NumericalError("kernel decay t^-" + std::to_string(m.rate) + " is not summable");
  return m.constant * std::pow(start - 1.0, 1.0 - m.rate) / (m.rate - 1.0);
}

// Sum over k > K of sup_{[s + k, s + k + 1]} |R| bounds the window norms at any exponent.
double window_remainder(const DecayModel& m, double shift, int K) {
  const double start = shift + K + 1.0;
  if (!m.exponential && start - 1.0 < 1.0) return kInf;
  return remainder_after(m, start);
}

double window_norm_of_kernel(const ResolventFamily& rf, const ExponentFunction& q, double shift,
                             const NormOptions& opt) {
  return luxemburg_norm(kernel_norm_function(rf, shift), q, {0.0, 1.0}, opt).value;
}

double stepanov_of_reflection(const VectorFunction& g, const ExponentFunction& p, double lo, double hi,
                              const NormOptions& opt) {
  const VectorFunction gc = reflect(g);
  const Interval dom = gc.domain();
  lo = std::max(lo, dom.lo);
  hi = std::min(hi, dom.hi - 1.0);
  if (hi < lo) throw DomainError("reflected forcing has no unit window in range");
  return stepanov_norm(gc, p, uniform_grid(lo, hi, 0.5), true, opt).sup_estimate;
}

}  // namespace

VectorFunction kernel_norm_function(const ResolventFamily& rf, double shift) {
  if (shift < 0.0) throw ContractError("kernel shift must be nonnegative");
  struct Cache {
    std::mutex m;
    std::unordered_map<double, double> values;
  };
  auto cache = std::make_shared<Cache>();
  auto formula = [rf, shift, cache](double s) {
    {
      std::lock_guard lock(cache->m);
      if (auto it = cache->values.find(s); it != cache->values.end()) return it->second;
    }
    const double v = s + shift > 0.0 || rf.singular_exponent() == 0.0 ? rf.norm_at(s + shift) : kInf;
    std::lock_guard lock(cache->m);
    cache->values.emplace(s, v);
    return v;
  };
  std::vector<double> singular;
  if (shift == 0.0 && rf.singular_exponent() < 0.0) singular.push_back(0.0);
  std::ostringstream name;
  name << "|" << rf.describe() << "(. + " << shift << ")|";
  return VectorFunction::scalar(name.str(), formula, {0.0, kInf}, singular);
}

TailConstant tail_constant_M(const ResolventFamily& rf, const ExponentFunction& q, int K, const NormOptions& opt) {
  if (K < 0) throw ContractError("K must be nonnegative");
  const DecayModel model = rf.decay_model();
  TailConstant out;
  out.K = K;
  out.remainder_bound = window_remainder(model, 0.0, K);
  out.window_norms = parallel_map(static_cast<std::size_t>(K) + 1, [&](std::size_t k) {
    return window_norm_of_kernel(rf, q, static_cast<double>(k), opt);
  });
  for (double v : out.window_norms) out.M += v;
  return out;
}

MtSeries m_t_series(const ResolventFamily& rf, const ExponentFunction& q, const std::vector<double>& t_grid, int K,
                    const NormOptions& opt) {
  if (K < 0) throw ContractError("K must be nonnegative");
  const DecayModel model = rf.decay_model();
  MtSeries out;
  out.t_grid = t_grid;
  const std::size_t nk = static_cast<std::size_t>(K) + 1;
  const auto norms = parallel_map(t_grid.size() * nk, [&](std::size_t idx) {
    return window_norm_of_kernel(rf, q, t_grid[idx / nk] + static_cast<double>(idx % nk), opt);
  });
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < nk; ++k) s += norms[i * nk + k];
    out.values.push_back(s);
    out.upper_bound.push_back(s + window_remainder(model, t_grid[i], K));
  }
  std::vector<double> tx, ty;
  for (std::size_t i = 0; i < t_grid.size(); ++i)
    if (t_grid[i] > 0.0 && std::isfinite(out.upper_bound[i])) {
      tx.push_back(t_grid[i]);
      ty.push_back(out.upper_bound[i]);
    }
  out.fitted_slope = tx.size() >= 2 ? loglog_slope(tx, ty) : std::nan("");
  return out;
}

ConvolutionResult line_convolution(const ResolventFamily& rf, const VectorFunction& g, const ExponentFunction& p,
                                   const std::vector<double>& t_grid, const ConvolutionOptions& opt) {
  if (t_grid.empty()) throw ContractError("convolution grid is empty");
  const int d = output_dim(rf, g.dim());
  const DecayModel model = rf.decay_model();
  const auto [tmin, tmax] = std::minmax_element(t_grid.begin(), t_grid.end());
  const int K_cap = opt.K > 0 ? opt.K : opt.max_K;
  // g(t - s - k) for s in [0, 1] is the window of g_check at k - t.
  const double gs = stepanov_of_reflection(g, p, -*tmax, std::min<double>(K_cap, 64.0) - *tmin, opt.norm);
  int K = opt.K;
  if (K <= 0) {
    K = 1;
    while (K < opt.max_K && 2.0 * gs * window_remainder(model, 0.0, K) > opt.tail_tolerance) ++K;
  }
  const double tail = 2.0 * gs * window_remainder(model, 0.0, K);
  const Interval dom = g.domain();
  if (dom.lo > *tmin - K - 1.0 || dom.hi < *tmax) throw DomainError("g is not defined on [t - K - 1, t]");

  ConvolutionResult out;
  out.t_grid = t_grid;
  out.truncation_K = K;
  out.tail_bound_series.assign(t_grid.size(), tail);
  if (tail > opt.tail_tolerance) out.note = "tail tolerance not met at the largest K";
  out.values = parallel_map(t_grid.size(), [&](std::size_t j) {
    Vec v = Vec::Zero(d);
    for (int k = 0; k <= K; ++k) v += kernel_convolve(rf, g, t_grid[j], k, k + 1.0);
    return v;
  });
  return out;
}

ConvolutionResult finite_convolution(const ResolventFamily& rf, const VectorFunction& f,
                                     const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw ContractError("convolution grid is empty");
  const int d = output_dim(rf, f.dim());
  const Interval dom = f.domain();
  const auto [tmin, tmax] = std::minmax_element(t_grid.begin(), t_grid.end());
  if (*tmin < 0.0) throw ContractError("finite convolution needs t >= 0");
  if (dom.lo > 0.0 || dom.hi < *tmax) throw DomainError("f is not defined on [0, t]");
  ConvolutionResult out;
  out.t_grid = t_grid;
  out.tail_bound_series.assign(t_grid.size(), 0.0);
  out.values = parallel_map(t_grid.size(), [&](std::size_t j) {
    const double t = t_grid[j];
    return t == 0.0 ? Vec(Vec::Zero(d)) : kernel_convolve(rf, f, t, 0.0, t);
  });
  return out;
}

ConvolutionResult finite_convolution(const ResolventFamily& rf, const VectorFunction& g, const VectorFunction& w,
                                     const ExponentFunction& p, const std::vector<double>& t_grid,
                                     const ConvolutionOptions& opt) {
  ConvolutionResult out = finite_convolution(rf, g + w, t_grid);
  const ConvolutionResult G = line_convolution(rf, g, p, t_grid, opt);
  const ConvolutionResult F1 = finite_convolution(rf, w, t_grid);
  const int K = G.truncation_K;
  const int d = g.dim();
  Decomposition dec;
  dec.G = G.values;
  dec.F1 = F1.values;
  dec.F2 = parallel_map(t_grid.size(), [&](std::size_t j) {
    const double t = t_grid[j];
    Vec v = Vec::Zero(d);
    for (int k = 0; k <= K; ++k) v -= kernel_convolve(rf, g, t, t + k, t + k + 1.0);
    return v;
  });
  const auto [tmin, tmax] = std::minmax_element(t_grid.begin(), t_grid.end());
  dec.g_check_stepanov = stepanov_of_reflection(g, p, -*tmax, std::min<double>(K, 64.0) - *tmin, opt.norm);
  const MtSeries mt = m_t_series(rf, conjugate(p), t_grid, K, opt.norm);
  dec.m_t = mt.upper_bound;
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    dec.f2_bound.push_back(2.0 * dec.g_check_stepanov * dec.m_t[j]);
    dec.identity_defect =
        std::max(dec.identity_defect, (out.values[j] - dec.G[j] - dec.F1[j] - dec.F2[j]).cwiseAbs().maxCoeff());
  }
  out.truncation_K = K;
  out.tail_bound_series = G.tail_bound_series;
  out.decomposition = std::move(dec);
  out.note = G.note;
  return out;
}

ConvolutionResult solve_dfp(const ResolventFamily& rf, const Vec& x0, const VectorFunction& f,
                            const std::vector<double>& t_grid) {
  const bool plain = rf.kind() == KernelKind::Exponential;
  if (rf.kind() == KernelKind::Power) throw ContractError("solve_dfp needs an exponential or Mittag-Leffler family");
  const auto S = plain ? rf : ResolventFamily::diagonal(KernelKind::S, rf.generator(), rf.gamma(), rf.beta());
  const auto R = plain ? rf : ResolventFamily::diagonal(KernelKind::R, rf.generator(), rf.gamma(), rf.beta());
  if (x0.size() != f.dim()) throw ContractError("x0 and f dimensions differ");
  ConvolutionResult out = finite_convolution(R, f, t_grid);
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    const Vec s = S(t_grid[j]);
    out.values[j] += s.size() == 1 ? Vec(s[0] * x0) : Vec(s.cwiseProduct(x0));
  }
  return out;
}

TestReport ergodic_component_classify(const ConvolutionResult& result, const ExponentFunction& r1,
                                      const ExponentFunction& r2, const DecayOptions& opt) {
  if (!result.decomposition) throw ContractError("classification needs a decomposition");
  const auto& ts = result.t_grid;
  if (ts.size() < 3 || ts.front() != 0.0) throw ContractError("classification needs a grid starting at 0");
  const double step = ts[1] - ts[0];
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (std::abs(ts[i] - ts[i - 1] - step) > 1e-9 * std::max(1.0, ts[i]))
      throw ContractError("classification needs a uniform grid");
  const auto& dec = *result.decomposition;
  const double horizon = ts.back() - 1.0;
  const auto f1 = VectorFunction::grid(0.0, step, dec.F1);
  const auto f2 = VectorFunction::grid(0.0, step, dec.f2_bound);
  const TestReport c1 = c0_decay_test(f1, r1, horizon, opt);
  const TestReport c2 = c0_decay_test(f2, r2, horizon, opt);
  TestReport rep;
  rep.tolerance = opt.tolerance;
  rep.abscissae = c1.abscissae;
  rep.series = c1.series;
  rep.fitted_slope = c1.fitted_slope;
  rep.value = std::max(c1.value, c2.value);
  rep.metrics = {{"F1_tail_max", c1.value},
                 {"F1_slope", c1.fitted_slope},
                 {"F2_bound_tail_max", c2.value},
                 {"F2_bound_slope", c2.fitted_slope},
                 {"condition_i", c1.verdict == Verdict::True ? 1.0 : c1.verdict == Verdict::False ? 0.0 : 0.5},
                 {"condition_ii", c2.verdict == Verdict::True ? 1.0 : c2.verdict == Verdict::False ? 0.0 : 0.5}};
  if (c1.verdict == Verdict::True && c2.verdict == Verdict::True) {
    rep.verdict = Verdict::True;
  } else if (c1.verdict == Verdict::False || c2.verdict == Verdict::False) {
    rep.verdict = Verdict::False;
    rep.note = c1.verdict == Verdict::False ? "F1 window norms do not decay" : "F2 bound does not decay";
  } else {
    rep.verdict = Verdict::Inconclusive;
    rep.note = "decay not resolved by the horizon";
  }
  return rep;
}

}  // namespace varlex
