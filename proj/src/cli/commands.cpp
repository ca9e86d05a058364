#include "varlex/cli.hpp"
#include "detail.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace varlex::cli::detail {

namespace {

const Json& need(const Json& cfg, const std::string& key) {
  if (!cfg.contains(key)) throw ConfigError("field '" + key + "' is required");
  return cfg.at(key);
}

Json opt(const Json& cfg, const std::string& key, Json fallback) {
  return cfg.contains(key) ? cfg.at(key) : fallback;
}

double real(const Json& cfg, const std::string& key, double fallback) {
  if (!cfg.contains(key)) return fallback;
  const Json& j = cfg.at(key);
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto g = parse_grid(j, key);
    if (g.size() == 1) return g[0];
  }
  throw ConfigError("field '" + key + "': expected a number");
}

double positive(const Json& cfg, const std::string& key, double fallback) {
  const double v = real(cfg, key, fallback);
  if (!(v > 0.0)) throw ConfigError("field '" + key + "': must be positive");
  return v;
}

bool flag(const Json& cfg, const std::string& key, bool fallback) {
  if (!cfg.contains(key)) return fallback;
  const Json& j = cfg.at(key);
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number()) return j.get<double>() != 0.0;
  if (j.is_string()) return j.get<std::string>() == "true";
  throw ConfigError("field '" + key + "': expected a boolean");
}

std::string text(const Json& cfg, const std::string& key, const std::string& fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg.at(key).is_string()) throw ConfigError("field '" + key + "': expected a string");
  return cfg.at(key).get<std::string>();
}

Json numbers(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

Json vec(const Vec& v) {
  if (v.size() == 1) return number(v[0]);
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
  return a;
}

Json exponent_json(const ExponentFunction& p) {
  const auto [lo, hi] = p.essential_bounds();
  return Json{{"name", p.describe()}, {"p_minus", number(lo)}, {"p_plus", number(hi)}};
}

Json report_json(const TestReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["value"] = number(r.value);
  j["tolerance"] = number(r.tolerance);
  j["fitted_slope"] = number(r.fitted_slope);
  Json m = Json::object();
  for (const auto& [k, v] : r.metrics) m[k] = number(v);
  j["metrics"] = m;
  j["note"] = r.note;
  j["abscissae"] = numbers(r.abscissae);
  j["series"] = numbers(r.series);
  return j;
}

Json shift_json(const ShiftTestReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["tolerance"] = number(r.tolerance);
  j["tail_residual"] = number(r.tail_residual);
  j["closest_pair"] = number(r.closest_pair);
  j["note"] = r.note;
  j["sequence"] = numbers(r.sequence);
  j["chosen_subsequence"] = r.chosen_subsequence;
  j["t_grid"] = numbers(r.t_grid);
  Json fw = Json::array(), bw = Json::array();
  for (const auto& row : r.forward_residuals) fw.push_back(numbers(row));
  for (const auto& row : r.backward_residuals) bw.push_back(numbers(row));
  j["forward_residuals"] = fw;
  j["backward_residuals"] = bw;
  return j;
}

Table shift_table(const ShiftTestReport& r) {
  Table t{{"k", "shift", "forward_max", "backward_max"}, {}};
  for (std::size_t k = 0; k < r.forward_residuals.size(); ++k) {
    double fw = 0.0, bw = 0.0;
    for (double x : r.forward_residuals[k]) fw = std::max(fw, x);
    for (double x : r.backward_residuals[k]) bw = std::max(bw, x);
    t.rows.push_back({static_cast<double>(k), r.sequence[r.chosen_subsequence[k]], fw, bw});
  }
  return t;
}

Table report_table(const TestReport& r, const std::string& x, const std::string& y) {
  Table t{{x, y}, {}};
  for (std::size_t i = 0; i < r.series.size() && i < r.abscissae.size(); ++i) t.rows.push_back({r.abscissae[i], r.series[i]});
  return t;
}

Interval omega_of(const Json& cfg, const ExponentFunction& p) {
  if (!cfg.contains("omega")) return p.domain();
  const auto g = parse_grid(cfg.at("omega"), "omega");
  if (g.size() != 2 || !(g[1] > g[0])) throw ConfigError("field 'omega': expected [lo, hi] with lo < hi");
  return {g[0], g[1]};
}

Json trace_json(const std::vector<std::pair<int, double>>& trace) {
  Json a = Json::array();
  for (const auto& [k, v] : trace) a.push_back(Json::array({k, number(v)}));
  return a;
}

Table convolution_table(const ConvolutionResult& r) {
  Table t;
  t.header.push_back("t");
  const int d = r.values.empty() ? 1 : static_cast<int>(r.values[0].size());
  for (int i = 1; i <= d; ++i) t.header.push_back("u" + std::to_string(i));
  t.header.push_back("tail_bound");
  for (std::size_t j = 0; j < r.t_grid.size(); ++j) {
    std::vector<double> row{r.t_grid[j]};
    for (int i = 0; i < d; ++i) row.push_back(r.values[j][i]);
    row.push_back(j < r.tail_bound_series.size() ? r.tail_bound_series[j] : 0.0);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Json convolution_json(const ConvolutionResult& r) {
  Json j;
  j["truncation_K"] = r.truncation_K;
  double tail = 0.0;
  for (double x : r.tail_bound_series) tail = std::max(tail, x);
  j["max_tail_bound"] = number(tail);
  j["note"] = r.note;
  j["points"] = r.t_grid.size();
  if (r.decomposition) {
    const auto& d = *r.decomposition;
    double viol = -kInf;
    for (std::size_t i = 0; i < d.F2.size(); ++i) viol = std::max(viol, d.F2[i].norm() - d.f2_bound[i]);
    j["decomposition"] = Json{{"identity_defect", number(d.identity_defect)},
                              {"g_check_stepanov", number(d.g_check_stepanov)},
                              {"max_F2_minus_bound", number(viol)},
                              {"f2_bound_holds", viol <= 0.0}};
  }
  return j;
}

Vec vec_from(const Json& cfg, const std::string& key, double fallback) {
  Vec v(1);
  v << fallback;
  if (!cfg.contains(key)) return v;
  const Json& j = cfg.at(key);
  if (j.is_array()) {
    if (j.empty() || j.size() > static_cast<std::size_t>(kMaxDim)) throw ConfigError("field '" + key + "': 1 to 8 entries");
    v.resize(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_number()) throw ConfigError("field '" + key + "': expected numbers");
      v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
  }
  v[0] = real(cfg, key, fallback);
  return v;
}

ShiftTestOptions shift_options(const Json& cfg) {
  ShiftTestOptions o;
  o.tolerance = positive(cfg, "tolerance", o.tolerance);
  o.tail_fraction = positive(cfg, "tail_fraction", o.tail_fraction);
  return o;
}

DecayOptions decay_options(const Json& cfg) {
  DecayOptions o;
  o.tolerance = positive(cfg, "decay_tolerance", o.tolerance);
  return o;
}

}  // namespace

Outcome cmd_norm(const Json& cfg) {
  const auto f = parse_function(opt(cfg, "function", "sin"), "function");
  const auto p = parse_exponent(opt(cfg, "exponent", 2.0), "exponent");
  NormOptions o;
  o.rel_tol = positive(cfg, "rel_tol", o.rel_tol);
  const NormResult r = luxemburg_norm(f, p, omega_of(cfg, p), o);
  Outcome out;
  out.report["function"] = f.describe();
  out.report["exponent"] = exponent_json(p);
  out.report["value"] = number(r.value);
  out.report["bracket"] = Json::array({number(r.bracket.first), number(r.bracket.second)});
  out.report["iterations"] = r.iterations;
  out.report["modular_at_value"] = number(r.modular_at_value);
  out.report["diagnostic"] = r.diagnostic;
  return out;
}

Outcome cmd_modular(const Json& cfg) {
  const auto f = parse_function(opt(cfg, "function", "sin"), "function");
  const auto p = parse_exponent(opt(cfg, "exponent", 2.0), "exponent");
  const double scale = positive(cfg, "scale", 1.0);
  const ModularResult r = modular(f, p, omega_of(cfg, p), scale);
  Outcome out;
  out.report["function"] = f.describe();
  out.report["exponent"] = exponent_json(p);
  out.report["scale"] = scale;
  out.report["value"] = number(r.value);
  out.report["error"] = number(r.error);
  out.report["divergent"] = r.divergent;
  out.report["tail_slope"] = number(r.tail_slope);
  out.report["refinement_trace"] = trace_json(r.trace);
  Table t{{"panels", "cumulative"}, {}};
  for (const auto& [k, v] : r.trace) t.rows.push_back({static_cast<double>(k), v});
  out.table = std::move(t);
  return out;
}

Outcome cmd_stepanov(const Json& cfg) {
  const auto f = parse_function(opt(cfg, "function", "sin"), "function");
  const auto p = parse_exponent(opt(cfg, "exponent", 2.0), "exponent");
  const auto grid = parse_grid(opt(cfg, "grid", "0:10:0.5"), "grid");
  const WindowNormSeries s = stepanov_norm(f, p, grid, flag(cfg, "refine", true));
  Outcome out;
  out.report["function"] = f.describe();
  out.report["exponent"] = exponent_json(p);
  out.report["sup_estimate"] = number(s.sup_estimate);
  out.report["argmax"] = number(s.argmax);
  out.report["t"] = numbers(s.base_points);
  out.report["norm"] = numbers(s.values);
  Table t{{"t", "norm"}, {}};
  for (std::size_t i = 0; i < s.values.size(); ++i) t.rows.push_back({s.base_points[i], s.values[i]});
  out.table = std::move(t);
  return out;
}

Outcome cmd_aa_test(const Json& cfg) {
  const std::string test = text(cfg, "test", "bochner");
  const auto f = parse_function(opt(cfg, "function", "sin"), "function");
  const auto p = parse_exponent(opt(cfg, "exponent", 1.0), "exponent");
  Outcome out;
  out.report["test"] = test;
  out.report["function"] = f.describe();
  out.report["exponent"] = exponent_json(p);
  if (test == "bochner") {
    const auto shifts = parse_shifts(opt(cfg, "shifts", "periods:10"), "shifts", &f);
    const auto grid = parse_grid(opt(cfg, "grid", "0:5:0.5"), "grid");
    const ShiftTestReport r = bochner_shift_test(f, p, shifts, grid, shift_options(cfg));
    out.report["result"] = shift_json(r);
    out.table = shift_table(r);
  } else if (test == "c0-decay") {
    const TestReport r = c0_decay_test(f, p, positive(cfg, "horizon", 100.0), decay_options(cfg));
    out.report["result"] = report_json(r);
    out.table = report_table(r, "t", "window_norm");
  } else if (test == "ergodic-mean") {
    ErgodicOptions o;
    o.tolerance = positive(cfg, "tolerance", o.tolerance);
    const TestReport r = ergodic_mean_test(f, positive(cfg, "r_max", 1024.0), o);
    out.report["result"] = report_json(r);
    out.table = report_table(r, "r", "mean");
  } else if (test == "asymptotic") {
    const auto g = parse_function(need(cfg, "candidate"), "candidate");
    const auto shifts = parse_shifts(opt(cfg, "shifts", "periods:10"), "shifts", &g);
    const auto grid = parse_grid(opt(cfg, "grid", "0:5:0.5"), "grid");
    const TestReport r = asymptotic_decompose(f, p, g, shifts, grid, positive(cfg, "horizon", 100.0),
                                              shift_options(cfg), decay_options(cfg));
    out.report["result"] = report_json(r);
    out.table = report_table(r, "t", "window_norm");
  } else if (test == "exponent-sweep") {
    // Residuals of the shift test across exponents for a bounded function; no verdict.
    const Json specs = opt(cfg, "exponents", Json::array({1, "one-minus-log", "affine:1,1", "affine:2,-1", 2}));
    if (!specs.is_array() || specs.empty()) throw ConfigError("field 'exponents': expected a nonempty array");
    const auto shifts = parse_shifts(opt(cfg, "shifts", "almost-periods:7,8000"), "shifts", &f);
    const auto grid = parse_grid(opt(cfg, "grid", "0:5:0.5"), "grid");
    Table t{{"index", "tail_residual", "closest_pair"}, {}};
    Json rows = Json::array();
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const auto q = parse_exponent(specs[i], "exponents");
      const ShiftTestReport r = bochner_shift_test(f, q, shifts, grid, shift_options(cfg));
      const double tail = r.forward_residuals.empty() ? std::nan("") : r.tail_residual;
      rows.push_back(Json{{"exponent", exponent_json(q)},
                          {"tail_residual", number(tail)},
                          {"closest_pair", number(r.closest_pair)},
                          {"note", r.note}});
      t.rows.push_back({static_cast<double>(i), tail, r.closest_pair});
    }
    out.report.erase("exponent");
    out.report["sweep"] = rows;
    out.table = std::move(t);
  } else {
    throw ConfigError("field 'test': unknown test '" + test +
                      "' (bochner, c0-decay, ergodic-mean, asymptotic, exponent-sweep)");
  }
  return out;
}

Outcome cmd_ap_scan(const Json& cfg) {
  const auto f = parse_function(opt(cfg, "function", "two-sine"), "function");
  std::optional<ExponentFunction> p;
  if (cfg.contains("exponent") && !cfg.at("exponent").is_null()) p = parse_exponent(cfg.at("exponent"), "exponent");
  PeriodScanOptions o;
  o.step = positive(cfg, "step", o.step);
  const double eps = positive(cfg, "eps", 0.1);
  const double length = positive(cfg, "length", 20.0);
  const double horizon = positive(cfg, "horizon", 200.0);
  const TestReport r = epsilon_period_scan(f, p, eps, length, horizon, o);
  Outcome out;
  out.report["function"] = f.describe();
  out.report["defect"] = p ? "stepanov " + p->describe() : "sup";
  out.report["result"] = report_json(r);
  if (cfg.contains("sequence_count")) {
    const double n = positive(cfg, "sequence_count", 1.0);
    out.report["almost_periods"] =
        numbers(almost_period_sequence(f, static_cast<std::size_t>(n), positive(cfg, "sequence_horizon", 8000.0)));
  }
  out.table = report_table(r, "best_shift", "defect");
  return out;
}

double counterexample_oracle(double lambda) {
  // Modular of the constant 2/lambda at p(x) = 1 - ln x over [0, 1].
  const double c = 2.0 / lambda;
  return std::log(c) < 1.0 ? c / (1.0 - std::log(c)) : kInf;
}

Outcome cmd_counterexample(const Json& cfg) {
  std::vector<double> lambdas;
  if (cfg.contains("lambda")) lambdas = parse_grid(cfg.at("lambda"), "lambda");
  else lambdas = {0.5, 0.6, 0.7, 0.7358, 0.8};
  for (double l : lambdas)
    if (!(l > 0.0)) throw ConfigError("field 'lambda': must be positive");
  auto [a, b] = saturated_pair();
  if (cfg.contains("pair")) {
    const auto pr = parse_grid(cfg.at("pair"), "pair");
    if (pr.size() != 2) throw ConfigError("field 'pair': expected [a, b]");
    a = pr[0];
    b = pr[1];
  }
  Outcome out;
  out.report["exponent"] = "1 - ln x";
  out.report["pair"] = Json::array({number(a), number(b)});
  Json rows = Json::array();
  Table t{{"lambda", "panels", "cumulative"}, {}};
  for (double l : lambdas) {
    const ModularResult r = counterexample_divergence(l, a, b);
    rows.push_back(Json{{"lambda", l},
                        {"verdict", r.divergent ? "divergent" : "convergent"},
                        {"value", number(r.value)},
                        {"error", number(r.error)},
                        {"tail_slope", number(r.tail_slope)},
                        {"refinement_trace", trace_json(r.trace)}});
    for (const auto& [k, v] : r.trace) t.rows.push_back({l, static_cast<double>(k), v});
  }
  if (rows.size() == 1) out.report["verdict"] = rows[0]["verdict"];
  out.report["results"] = rows;
  if (cfg.contains("pairs")) {
    const double n = positive(cfg, "pairs", 1.0);
    out.report["shifts"] = numbers(counterexample_shifts(static_cast<std::size_t>(n)));
  }
  out.table = std::move(t);
  return out;
}

Outcome cmd_convolve(const Json& cfg) {
  const std::string mode = text(cfg, "mode", "line");
  const auto rf = parse_kernel(opt(cfg, "kernel", "exponential:1"), "kernel");
  const auto p = parse_exponent(opt(cfg, "exponent", 2.0), "exponent");
  Outcome out;
  out.report["mode"] = mode;
  out.report["kernel"] = rf.describe();
  if (mode == "tail-constant") {
    const int K = static_cast<int>(real(cfg, "K", 40.0));
    const TailConstant tc = tail_constant_M(rf, p, K);
    out.report["M"] = number(tc.M);
    out.report["remainder_bound"] = number(tc.remainder_bound);
    out.report["K"] = tc.K;
    out.report["window_norms"] = numbers(tc.window_norms);
    Table t{{"k", "window_norm"}, {}};
    for (std::size_t k = 0; k < tc.window_norms.size(); ++k) t.rows.push_back({static_cast<double>(k), tc.window_norms[k]});
    out.table = std::move(t);
    return out;
  }
  if (mode == "m-t") {
    const int K = static_cast<int>(real(cfg, "K", 30.0));
    const auto grid = parse_grid(opt(cfg, "grid", Json{{"geometric", {1, 50, 15}}}), "grid");
    const MtSeries ms = m_t_series(rf, p, grid, K);
    out.report["fitted_slope"] = number(ms.fitted_slope);
    out.report["t"] = numbers(ms.t_grid);
    out.report["m_t"] = numbers(ms.values);
    out.report["upper_bound"] = numbers(ms.upper_bound);
    Table t{{"t", "m_t", "upper_bound"}, {}};
    for (std::size_t i = 0; i < ms.t_grid.size(); ++i) t.rows.push_back({ms.t_grid[i], ms.values[i], ms.upper_bound[i]});
    out.table = std::move(t);
    return out;
  }
  const auto grid = parse_grid(opt(cfg, "grid", "0:20:0.1"), "grid");
  ConvolutionOptions o;
  o.K = static_cast<int>(real(cfg, "K", 0.0));
  o.tail_tolerance = positive(cfg, "tail_tolerance", o.tail_tolerance);
  ConvolutionResult r;
  if (mode == "line") {
    r = line_convolution(rf, parse_function(opt(cfg, "g", "sin"), "g"), p, grid, o);
  } else if (mode == "finite") {
    r = finite_convolution(rf, parse_function(opt(cfg, "f", "sin"), "f"), grid);
  } else if (mode == "decomposed") {
    r = finite_convolution(rf, parse_function(opt(cfg, "g", "sin"), "g"),
                           parse_function(opt(cfg, "w", "rational-decay"), "w"), p, grid, o);
    if (cfg.contains("r1") || cfg.contains("r2")) {
      const TestReport c = ergodic_component_classify(r, parse_exponent(opt(cfg, "r1", 2.0), "r1"),
                                                      parse_exponent(opt(cfg, "r2", 2.0), "r2"), decay_options(cfg));
      out.report["classification"] = report_json(c);
    }
  } else {
    throw ConfigError("field 'mode': unknown mode '" + mode + "' (line, finite, decomposed, tail-constant, m-t)");
  }
  out.report["result"] = convolution_json(r);
  out.table = convolution_table(r);
  out.csv_default = true;
  return out;
}

Outcome cmd_solve_dfp(const Json& cfg) {
  ResolventFamily rf = ResolventFamily::exponential(1.0);
  if (cfg.contains("kernel")) {
    rf = parse_kernel(cfg.at("kernel"), "kernel");
  } else {
    const double gamma = positive(cfg, "gamma", 1.0);
    const Vec a = vec_from(cfg, "a", 1.0);
    rf = ResolventFamily::diagonal(KernelKind::S, a, gamma, positive(cfg, "beta", 1.0));
  }
  const Vec x0 = vec_from(cfg, "x0", 1.0);
  const Json fspec = opt(cfg, "f", "zero");
  const auto f = fspec == Json("zero") ? VectorFunction::zero(static_cast<int>(x0.size())) : parse_function(fspec, "f");
  const auto grid = parse_grid(opt(cfg, "grid", "0:10:0.1"), "grid");
  const ConvolutionResult r = solve_dfp(rf, x0, f, grid);
  Outcome out;
  out.report["kernel"] = rf.describe();
  out.report["x0"] = vec(x0);
  out.report["forcing"] = f.describe();
  out.report["result"] = convolution_json(r);
  out.table = convolution_table(r);
  out.csv_default = true;
  return out;
}

Outcome cmd_ml(const Json& cfg) {
  const double alpha = positive(cfg, "alpha", 1.0);
  const double beta = positive(cfg, "beta", 1.0);
  const auto zs = parse_grid(opt(cfg, "z", -1.0), "z");
  Outcome out;
  out.report["alpha"] = alpha;
  out.report["beta"] = beta;
  Table t{{"z", "value", "error_estimate"}, {}};
  Json rows = Json::array();
  for (double z : zs) {
    const MittagLefflerValue v = mittag_leffler_eval(alpha, beta, z);
    rows.push_back(Json{{"z", z},
                        {"value", number(v.value)},
                        {"method", v.method},
                        {"error_estimate", number(v.error_estimate)},
                        {"degraded", v.degraded}});
    t.rows.push_back({z, v.value, v.error_estimate});
  }
  if (rows.size() == 1) {
    for (const auto& [k, v] : rows[0].items())
      if (k != "z") out.report[k] = v;
    out.report["z"] = zs[0];
  } else {
    out.report["values"] = rows;
  }
  out.table = std::move(t);
  return out;
}

Outcome cmd_compose_test(const Json& cfg) {
  const std::string mode = text(cfg, "mode", "membership");
  const auto p = parse_exponent(opt(cfg, "p", 2.0), "p");
  const auto r = parse_exponent(opt(cfg, "r", "inf"), "r");
  const auto f = parse_two_parameter(opt(cfg, "f", "sin-y"), "f");
  const auto u = parse_function(opt(cfg, "u", "sin"), "u");
  CompositionOptions o;
  o.t_grid = parse_grid(opt(cfg, "grid", "0:5:0.5"), "grid");
  o.y_samples = static_cast<std::size_t>(positive(cfg, "y_samples", 9.0));
  o.shift = shift_options(cfg);
  const auto shifts = parse_shifts(opt(cfg, "shifts", "periods:10"), "shifts", &u);
  CompositionReport rep;
  if (mode == "membership") {
    rep = composition_membership_test(f, u, p, r, shifts, o);
  } else if (mode == "asymptotic") {
    rep = asymptotic_composition_test(f, u, parse_two_parameter(opt(cfg, "q_part", "zero"), "q_part"),
                                      parse_function(opt(cfg, "omega", "rational-decay"), "omega"), p, r, shifts,
                                      positive(cfg, "horizon", 100.0), o);
  } else {
    throw ConfigError("field 'mode': unknown mode '" + mode + "' (membership, asymptotic)");
  }
  Outcome out;
  out.report["mode"] = mode;
  out.report["f"] = f.describe();
  out.report["u"] = u.describe();
  out.report["q_exponent"] = exponent_json(rep.q_exponent);
  out.report["range_bounded"] = rep.range_bounded;
  out.report["range_bound"] = number(rep.range_bound);
  out.report["lipschitz_sup"] = number(rep.lipschitz_window_norms.sup_estimate);
  out.report["verdict"] = to_string(rep.membership.verdict);
  out.report["verdict_at_q_minus"] = to_string(rep.verdict_at_q_minus);
  out.report["membership"] = report_json(rep.membership);
  out.report["shift_test"] = shift_json(rep.shift_test);
  out.table = shift_table(rep.shift_test);
  return out;
}

Outcome cmd_exponent(const Json& cfg) {
  const auto p = parse_exponent(opt(cfg, "exponent", "one-minus-log"), "exponent");
  const auto xs = parse_grid(opt(cfg, "x", Json::array({0.25, 0.5, 1.0})), "x");
  const auto q = conjugate(p);
  Outcome out;
  out.report["exponent"] = exponent_json(p);
  out.report["d_plus"] = p.in_d_plus();
  out.report["c_plus"] = p.in_c_plus();
  out.report["conjugate"] = exponent_json(q);
  Table t{{"x", "p", "conjugate"}, {}};
  std::vector<double> pv, qv, cv;
  std::optional<ExponentFunction> c;
  if (cfg.contains("r")) {
    c = composition_exponent(p, parse_exponent(cfg.at("r"), "r"));
    out.report["composition"] = exponent_json(*c);
    t.header.push_back("composition");
  }
  for (double x : xs) {
    pv.push_back(p(x));
    qv.push_back(q(x));
    std::vector<double> row{x, pv.back(), qv.back()};
    if (c) {
      cv.push_back((*c)(x));
      row.push_back(cv.back());
    }
    t.rows.push_back(std::move(row));
  }
  out.report["x"] = numbers(xs);
  out.report["p"] = numbers(pv);
  out.report["conjugate_values"] = numbers(qv);
  if (c) out.report["composition_values"] = numbers(cv);
  out.table = std::move(t);
  return out;
}

namespace {

VectorFunction random_function(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> cs(3), ss(3);
  for (auto& c : cs) c = u(rng);
  for (auto& s : ss) s = u(rng);
  return VectorFunction::fourier(u(rng), cs, ss, 2.0);
}

/// Random exponent with values in [floor, floor + 4].
ExponentFunction random_exponent(std::mt19937_64& rng, double floor) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng) < 0.5) {
    const double lo = floor + 2.0 * u(rng);
    const double hi = floor + 2.0 * u(rng) + 2.0 * u(rng);
    return u(rng) < 0.5 ? ExponentFunction::affine(lo, hi - lo) : ExponentFunction::affine(hi, lo - hi);
  }
  const double mean = floor + 1.0 + 2.0 * u(rng);
  return ExponentFunction::sinusoidal(mean, (mean - floor) * u(rng), 1.0 + 3.0 * u(rng), 6.0 * u(rng));
}

}  // namespace

Outcome cmd_check(const Json& cfg, std::uint64_t seed) {
  const std::string kind = text(cfg, "kind", "both");
  if (kind != "holder" && kind != "embedding" && kind != "both")
    throw ConfigError("field 'kind': expected holder, embedding or both");
  const auto cases = static_cast<std::size_t>(positive(cfg, "cases", 10.0));
  std::mt19937_64 rng(seed);
  Outcome out;
  out.report["cases"] = cases;
  Table t{{"case", "lhs", "rhs", "ratio"}, {}};
  Json rows = Json::array();
  std::size_t violations = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < cases; ++i) {
    const bool holder = kind == "holder" || (kind == "both" && i % 2 == 0);
    double lhs = 0.0, rhs = 0.0;
    bool holds = false;
    std::string what;
    if (holder) {
      const auto uf = random_function(rng), vf = random_function(rng);
      const auto p = random_exponent(rng, 2.0), r = random_exponent(rng, 2.0);
      const HolderReport h = holder_check(uf, vf, p, r, {0.0, 1.0});
      lhs = h.product_norm;
      rhs = h.bound;
      holds = h.holds;
      what = "holder " + p.describe() + " " + r.describe();
    } else {
      const auto f = random_function(rng);
      const auto p = random_exponent(rng, 1.0), other = random_exponent(rng, 1.0);
      const auto q = pointwise_min(p, other);
      const EmbeddingReport e = embedding_check(f, p, q, {0.0, 1.0});
      lhs = e.norm_q;
      rhs = e.constant * e.norm_p;
      holds = e.holds;
      what = "embedding " + p.describe() + " " + q.describe();
    }
    const double ratio = rhs > 0.0 ? lhs / rhs : 0.0;
    worst = std::max(worst, ratio);
    if (!holds) ++violations;
    rows.push_back(Json{{"case", what}, {"lhs", number(lhs)}, {"rhs", number(rhs)}, {"holds", holds}});
    t.rows.push_back({static_cast<double>(i), lhs, rhs, ratio});
  }
  out.report["violations"] = violations;
  out.report["worst_ratio"] = number(worst);
  out.report["results"] = rows;
  out.table = std::move(t);
  return out;
}

Outcome cmd_fractional(const Json& cfg) {
  const std::string op = text(cfg, "op", "caputo");
  Outcome out;
  out.report["op"] = op;
  if (op == "caputo" || op == "weyl") {
    const auto u = parse_function(opt(cfg, "function", op == "caputo" ? "power:2" : "sin"), "function");
    const double gamma = positive(cfg, "gamma", 0.5);
    const auto ts = parse_grid(opt(cfg, "t", "1"), "t");
    out.report["function"] = u.describe();
    out.report["gamma"] = gamma;
    Table t{{"t", "value", "tail_bound"}, {}};
    Json rows = Json::array();
    for (double x : ts) {
      const DerivativeValue d = op == "caputo" ? caputo_derivative(u, gamma, x)
                                               : weyl_derivative(u, gamma, x, positive(cfg, "truncation", 400.0));
      rows.push_back(Json{{"t", x}, {"value", vec(d.value)}, {"tail_bound", number(d.tail_bound)}, {"degraded", d.degraded}});
      t.rows.push_back({x, d.value[0], d.tail_bound});
    }
    out.report["values"] = rows;
    out.table = std::move(t);
  } else if (op == "resolvent") {
    const auto rf = parse_kernel(opt(cfg, "kernel", "S:1,0.5"), "kernel");
    const auto ts = parse_grid(opt(cfg, "t", "0.5:5:0.5"), "t");
    out.report["kernel"] = rf.describe();
    Json rows = Json::array();
    Table t{{"t", "norm"}, {}};
    for (double x : ts) {
      const Vec v = resolvent_eval(rf, x);
      rows.push_back(Json{{"t", x}, {"value", vec(v)}});
      t.rows.push_back({x, v.cwiseAbs().maxCoeff()});
    }
    out.report["values"] = rows;
    out.table = std::move(t);
  } else if (op == "decay") {
    const auto rf = parse_kernel(opt(cfg, "kernel", "S:1,0.5"), "kernel");
    const auto ts = parse_grid(opt(cfg, "t", Json{{"geometric", {1, 100, 200}}}), "t");
    const TestReport r = decay_check(rf, ts);
    out.report["kernel"] = rf.describe();
    out.report["result"] = report_json(r);
  } else if (op == "g-kernel") {
    const double zeta = positive(cfg, "zeta", 0.5);
    const auto ts = parse_grid(opt(cfg, "t", "0.5:5:0.5"), "t");
    std::vector<double> vals;
    Table t{{"t", "g"}, {}};
    for (double x : ts) {
      vals.push_back(g_kernel(zeta, x));
      t.rows.push_back({x, vals.back()});
    }
    out.report["zeta"] = zeta;
    out.report["t"] = numbers(ts);
    out.report["values"] = numbers(vals);
    out.table = std::move(t);
  } else {
    throw ConfigError("field 'op': unknown op '" + op + "' (caputo, weyl, resolvent, decay, g-kernel)");
  }
  return out;
}

Outcome cmd_eval(const Json& cfg) {
  const auto f = parse_function(opt(cfg, "function", "sin"), "function");
  const auto ts = parse_grid(opt(cfg, "grid", "0:1:0.25"), "grid");
  Outcome out;
  out.report["function"] = f.describe();
  Table t;
  t.header.push_back("t");
  for (int i = 1; i <= f.dim(); ++i) t.header.push_back("v" + std::to_string(i));
  Json rows = Json::array();
  for (double x : ts) {
    const Vec v = f(x);
    rows.push_back(vec(v));
    std::vector<double> row{x};
    for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(v[i]);
    t.rows.push_back(std::move(row));
  }
  out.report["t"] = numbers(ts);
  out.report["values"] = rows;
  out.table = std::move(t);
  return out;
}

Outcome cmd_reproduce(const Json& cfg) {
  const std::string id = text(cfg, "id", "");
  Outcome out;
  out.report["id"] = id;
  if (id == "example-3-sign") {
    const auto [a, b] = saturated_pair();
    Table t{{"lambda", "divergent", "value", "oracle", "rel_error"}, {}};
    Json rows = Json::array();
    bool agree = true;
    for (double l : {0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8}) {
      const ModularResult r = counterexample_divergence(l, a, b);
      const double oracle = counterexample_oracle(l);
      const bool oracle_divergent = std::isinf(oracle);
      const double rel = oracle_divergent || r.divergent ? (r.divergent == oracle_divergent ? 0.0 : kInf)
                                                         : std::abs(r.value - oracle) / oracle;
      agree = agree && r.divergent == oracle_divergent && rel < 1e-4;
      rows.push_back(Json{{"lambda", l},
                          {"verdict", r.divergent ? "divergent" : "convergent"},
                          {"oracle_verdict", oracle_divergent ? "divergent" : "convergent"},
                          {"value", number(r.value)},
                          {"oracle", number(oracle)},
                          {"rel_error", number(rel)}});
      t.rows.push_back({l, r.divergent ? 1.0 : 0.0, r.value, oracle, rel});
    }
    out.report["pair"] = Json::array({a, b});
    out.report["rows"] = rows;
    out.report["agrees_with_oracle"] = agree;
    out.table = std::move(t);
  } else if (id == "prop-5-1-exp-sin") {
    const auto grid = uniform_grid(0.0, 20.0, 0.1);
    const ConvolutionResult r =
        line_convolution(ResolventFamily::exponential(1.0), VectorFunction::sine(), ExponentFunction::constant(2.0), grid);
    Table t{{"t", "G", "oracle", "abs_error", "tail_bound"}, {}};
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double oracle = 0.5 * (std::sin(grid[i]) - std::cos(grid[i]));
      const double e = std::abs(r.values[i][0] - oracle);
      worst = std::max(worst, e);
      t.rows.push_back({grid[i], r.values[i][0], oracle, e, r.tail_bound_series[i]});
    }
    out.report["truncation_K"] = r.truncation_K;
    out.report["max_error"] = number(worst);
    out.report["max_tail_bound"] = number(*std::max_element(r.tail_bound_series.begin(), r.tail_bound_series.end()));
    out.report["within_1e-6"] = worst < 1e-6;
    out.table = std::move(t);
  } else if (id == "example-5-4-mt-decay") {
    const double gamma = 0.5, nu = 0.3;
    const MtSeries ms = m_t_series(ResolventFamily::scalar(KernelKind::R, 1.0, gamma), ExponentFunction::constant(2.0),
                                   geometric_grid(1.0, 50.0, 15), 30);
    const double bound = nu * (-1.0 - gamma) + 0.1;
    Table t{{"t", "m_t", "upper_bound"}, {}};
    for (std::size_t i = 0; i < ms.t_grid.size(); ++i) t.rows.push_back({ms.t_grid[i], ms.values[i], ms.upper_bound[i]});
    out.report["gamma"] = gamma;
    out.report["nu"] = nu;
    out.report["fitted_slope"] = number(ms.fitted_slope);
    out.report["slope_bound"] = bound;
    out.report["holds"] = ms.fitted_slope <= bound;
    out.table = std::move(t);
  } else {
    std::string known;
    for (const auto& k : reproduce_ids()) known += (known.empty() ? "" : ", ") + k;
    throw ConfigError("field 'id': unknown reproduction id '" + id + "' (" + known + ")");
  }
  return out;
}

}  // namespace varlex::cli::detail
