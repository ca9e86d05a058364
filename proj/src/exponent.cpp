#include "varlex/exponent.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

namespace varlex {

struct ExponentFunction::Impl {
  Shape shape = Shape::Constant;
  Interval domain{0.0, 1.0};
  std::vector<Interval> infinite;
  Monotonicity monotone = Monotonicity::None;
  std::vector<double> singular;
  std::string name;
  // closed-form parameters
  double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
  std::vector<double> samples;
  std::function<double(double)> formula;

  bool in_infinite(double x) const {
    for (const auto& iv : infinite)
      if (iv.contains(x)) return true;
    return false;
  }

  double formula_value(double x) const {
    switch (shape) {
      case Shape::Constant: return c0;
      case Shape::OneMinusLog: return 1.0 - std::log(x);
      case Shape::Affine: return c0 + c1 * x;
      case Shape::Sinusoidal: return c0 + c1 * std::sin(2.0 * std::numbers::pi * c2 * x + c3);
      case Shape::Grid: {
        const auto n = samples.size();
        if (n == 1) return samples[0];
        const double step = domain.length() / static_cast<double>(n - 1);
        double pos = (x - domain.lo) / step;
        pos = std::clamp(pos, 0.0, static_cast<double>(n - 1));
        auto i = static_cast<std::size_t>(pos);
        if (i >= n - 1) i = n - 2;
        const double w = pos - static_cast<double>(i);
        return (1.0 - w) * samples[i] + w * samples[i + 1];
      }
      case Shape::Derived: return formula(x);
    }
    return c0;
  }
};

ExponentFunction::ExponentFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

namespace {

void require_domain(const Interval& d) {
  if (!d.bounded() || !(d.hi > d.lo)) throw ContractError("exponent domain must be a bounded interval");
}

void validate_lower_bound(const ExponentFunction& p) {
  for (double x : p.evaluation_grid(2001)) {
    const double v = p.value_unchecked(x);
    if (std::isnan(v) || v < 1.0 - 1e-12) {
      std::ostringstream os;
      os << "exponent " << p.describe() << " takes value " << v << " < 1 at x=" << x;
      throw ContractError(os.str());
    }
  }
}

}  // namespace

ExponentFunction ExponentFunction::constant(double value, Interval domain) {
  require_domain(domain);
  if (!(value >= 1.0)) throw ContractError("constant exponent must be >= 1");
  auto impl = std::make_shared<Impl>();
  impl->domain = domain;
  impl->shape = Shape::Constant;
  std::ostringstream os;
  if (std::isinf(value)) {
    impl->infinite = {domain};
    impl->c0 = 1.0;  // never read on the infinite set
    os << "constant(inf)";
  } else {
    impl->c0 = value;
    os << "constant(" << value << ")";
  }
  impl->name = os.str();
  return ExponentFunction(impl);
}

ExponentFunction ExponentFunction::one_minus_log(Interval domain) {
  require_domain(domain);
  if (domain.lo < 0.0 || domain.hi > 1.0) throw ContractError("1 - ln x needs a domain inside [0, 1]");
  auto impl = std::make_shared<Impl>();
  impl->domain = domain;
  impl->shape = Shape::OneMinusLog;
  impl->monotone = Monotonicity::Decreasing;
  if (domain.lo == 0.0) impl->singular = {0.0};
  impl->name = "one-minus-log";
  return ExponentFunction(impl);
}

ExponentFunction ExponentFunction::affine(double intercept, double slope, Interval domain) {
  require_domain(domain);
  auto impl = std::make_shared<Impl>();
  impl->domain = domain;
  impl->shape = Shape::Affine;
  impl->c0 = intercept;
  impl->c1 = slope;
  impl->monotone = slope > 0 ? Monotonicity::Increasing : slope < 0 ? Monotonicity::Decreasing : Monotonicity::None;
  std::ostringstream os;
  os << "affine(" << intercept << "," << slope << ")";
  impl->name = os.str();
  ExponentFunction p(impl);
  validate_lower_bound(p);
  return p;
}

ExponentFunction ExponentFunction::sinusoidal(double mean, double amplitude, double frequency, double phase,
                                              Interval domain) {
  require_domain(domain);
  auto impl = std::make_shared<Impl>();
  impl->domain = domain;
  impl->shape = Shape::Sinusoidal;
  impl->c0 = mean;
  impl->c1 = amplitude;
  impl->c2 = frequency;
  impl->c3 = phase;
  std::ostringstream os;
  os << "sinusoidal(" << mean << "," << amplitude << "," << frequency << "," << phase << ")";
  impl->name = os.str();
  ExponentFunction p(impl);
  validate_lower_bound(p);
  return p;
}

ExponentFunction ExponentFunction::grid(std::vector<double> samples, Interval domain) {
  require_domain(domain);
  if (samples.empty()) throw ContractError("grid exponent needs samples");
  for (double v : samples)
    if (!std::isfinite(v) || v < 1.0)
      throw ContractError("grid exponent samples must be finite and >= 1; mark infinity with an infinite set");
  auto impl = std::make_shared<Impl>();
  impl->domain = domain;
  impl->shape = Shape::Grid;
  impl->samples = std::move(samples);
  impl->name = "grid(" + std::to_string(impl->samples.size()) + ")";
  return ExponentFunction(impl);
}

ExponentFunction ExponentFunction::derived(std::string name, std::function<double(double)> formula,
                                           Interval domain, std::vector<Interval> infinite_set,
                                           Monotonicity monotone, std::vector<double> singular_points) {
  require_domain(domain);
  auto impl = std::make_shared<Impl>();
  impl->domain = domain;
  impl->shape = Shape::Derived;
  impl->formula = std::move(formula);
  impl->infinite = std::move(infinite_set);
  impl->monotone = monotone;
  impl->singular = std::move(singular_points);
  impl->name = std::move(name);
  return ExponentFunction(impl);
}

ExponentFunction ExponentFunction::with_infinite_set(std::vector<Interval> set) const {
  for (const auto& iv : set)
    if (!(iv.hi >= iv.lo) || !impl_->domain.contains(iv)) throw ContractError("infinite set must lie in the domain");
  auto impl = std::make_shared<Impl>(*impl_);
  impl->infinite = std::move(set);
  impl->monotone = Monotonicity::None;
  return ExponentFunction(impl);
}

double ExponentFunction::operator()(double x) const {
  if (!impl_->domain.contains(x)) {
    std::ostringstream os;
    os << "x=" << x << " outside exponent domain [" << impl_->domain.lo << "," << impl_->domain.hi << "]";
    throw DomainError(os.str());
  }
  return value_unchecked(x);
}

double ExponentFunction::value_unchecked(double x) const {
  if (!impl_->infinite.empty() && impl_->in_infinite(x)) return kInf;
  return impl_->formula_value(x);
}

Interval ExponentFunction::domain() const { return impl_->domain; }
ExponentFunction::Shape ExponentFunction::shape() const { return impl_->shape; }
ExponentFunction::Monotonicity ExponentFunction::monotonicity() const { return impl_->monotone; }
const std::vector<Interval>& ExponentFunction::infinite_set() const { return impl_->infinite; }
const std::vector<double>& ExponentFunction::singular_points() const { return impl_->singular; }
const std::vector<double>& ExponentFunction::grid_samples() const { return impl_->samples; }
std::string ExponentFunction::describe() const { return impl_->name; }

double ExponentFunction::infinite_measure() const {
  // Union length of possibly overlapping intervals.
  auto set = impl_->infinite;
  std::sort(set.begin(), set.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double measure = 0.0;
  double reach = -kInf;
  for (const auto& iv : set) {
    const double lo = std::max(iv.lo, reach);
    if (iv.hi > lo) measure += iv.hi - lo;
    reach = std::max(reach, iv.hi);
  }
  return measure;
}

bool ExponentFunction::is_constant() const {
  if (impl_->shape == Shape::Constant) return true;
  if (impl_->shape == Shape::Affine && impl_->c1 == 0.0 && impl_->infinite.empty()) return true;
  if (impl_->shape == Shape::Sinusoidal && impl_->c1 == 0.0 && impl_->infinite.empty()) return true;
  return false;
}

double ExponentFunction::constant_value() const {
  if (!is_constant()) throw ContractError("exponent " + describe() + " is not constant");
  if (impl_->shape == Shape::Constant && !impl_->infinite.empty()) {
    if (infinite_measure() >= impl_->domain.length()) return kInf;
    throw ContractError("exponent " + describe() + " is only partly infinite");
  }
  return impl_->c0;
}

std::vector<double> ExponentFunction::breakpoints() const {
  std::vector<double> out;
  if (impl_->shape == Shape::Grid && impl_->samples.size() > 2) {
    const auto n = impl_->samples.size();
    const double step = impl_->domain.length() / static_cast<double>(n - 1);
    for (std::size_t i = 1; i + 1 < n; ++i) out.push_back(impl_->domain.lo + step * static_cast<double>(i));
  }
  for (const auto& iv : impl_->infinite) {
    out.push_back(iv.lo);
    out.push_back(iv.hi);
  }
  return out;
}

std::vector<double> ExponentFunction::evaluation_grid(std::size_t points) const {
  points = std::max<std::size_t>(points, 2);
  std::vector<double> grid(points);
  const auto& d = impl_->domain;
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = d.lo + d.length() * static_cast<double>(i) / static_cast<double>(points - 1);
  grid.back() = d.hi;
  return grid;
}

std::pair<double, double> ExponentFunction::essential_bounds(std::size_t grid_points) const {
  const auto& d = impl_->domain;
  const double inf_measure = infinite_measure();
  if (inf_measure >= d.length()) return {kInf, kInf};
  double lo = kInf;
  double hi = -kInf;
  auto take = [&](double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  };
  // Finite-part values only: points of a positive-measure infinite set are
  // accounted for below; measure-zero infinite points are essentially irrelevant.
  auto finite_value = [&](double x) { return impl_->formula_value(x); };
  const bool exact_closed_form = impl_->infinite.empty() &&
                                 (impl_->monotone != Monotonicity::None || impl_->shape == Shape::Constant ||
                                  impl_->shape == Shape::Sinusoidal || impl_->shape == Shape::Grid);
  if (exact_closed_form) {
    switch (impl_->shape) {
      case Shape::Constant: take(impl_->c0); break;
      case Shape::Grid:
        for (double v : impl_->samples) take(v);
        break;
      case Shape::Sinusoidal: {
        take(finite_value(d.lo));
        take(finite_value(d.hi));
        if (impl_->c2 != 0.0) {
          // Critical points 2 pi f x + phase = pi/2 + k pi.
          const double w = 2.0 * std::numbers::pi * impl_->c2;
          const double k_lo = std::ceil((std::min(w * d.lo, w * d.hi) + impl_->c3 - std::numbers::pi / 2) / std::numbers::pi);
          const double k_hi = std::floor((std::max(w * d.lo, w * d.hi) + impl_->c3 - std::numbers::pi / 2) / std::numbers::pi);
          for (double k = k_lo; k <= k_hi; k += 1.0) {
            const double x = (std::numbers::pi / 2 + k * std::numbers::pi - impl_->c3) / w;
            if (d.contains(x)) take(finite_value(x));
          }
        }
        break;
      }
      default:
        take(finite_value(d.lo));
        take(finite_value(d.hi));
        break;
    }
  } else {
    for (double x : evaluation_grid(grid_points)) {
      if (!impl_->infinite.empty() && impl_->in_infinite(x)) continue;
      const double v = finite_value(x);
      if (std::isnan(v)) continue;
      take(v);
    }
  }
  if (inf_measure > 0.0) hi = kInf;
  if (lo == kInf && hi == -kInf) return {kInf, kInf};
  return {lo, hi};
}

bool ExponentFunction::in_d_plus() const {
  const auto [lo, hi] = essential_bounds();
  return std::isfinite(hi) && infinite_measure() == 0.0 && lo >= 1.0;
}

bool ExponentFunction::in_c_plus() const { return in_d_plus() && essential_bounds().first > 1.0; }

ExponentFunction conjugate(const ExponentFunction& p) {
  auto q_of = [](double v) {
    if (std::isinf(v)) return 1.0;
    if (v <= 1.0) return kInf;
    return v / (v - 1.0);
  };
  const Interval d = p.domain();
  // q = infinity exactly where p = 1.
  std::vector<Interval> infinite;
  if (p.is_constant()) {
    const double c = p.constant_value();
    const double q = q_of(c);
    return std::isinf(q) ? ExponentFunction::constant(kInf, d) : ExponentFunction::constant(q, d);
  }
  if (p.shape() == ExponentFunction::Shape::Grid) {
    const auto& s = p.grid_samples();
    const double step = d.length() / static_cast<double>(s.size() - 1);
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
      if (s[i] == 1.0 && s[i + 1] == 1.0)
        infinite.push_back({d.lo + step * static_cast<double>(i), d.lo + step * static_cast<double>(i + 1)});
  }
  auto mono = p.monotonicity();
  if (mono == ExponentFunction::Monotonicity::Increasing) mono = ExponentFunction::Monotonicity::Decreasing;
  else if (mono == ExponentFunction::Monotonicity::Decreasing) mono = ExponentFunction::Monotonicity::Increasing;
  // q is unbounded near domain ends where p reaches 1; near p's own
  // singular points q tends to 1 and stays bounded.
  std::vector<double> singular;
  for (double x : {d.lo, d.hi})
    if (p.value_unchecked(x) <= 1.0) singular.push_back(x);
  return ExponentFunction::derived(
      "conjugate(" + p.describe() + ")", [p, q_of](double x) { return q_of(p.value_unchecked(x)); }, d,
      std::move(infinite), mono, std::move(singular));
}

ExponentFunction composition_exponent(const ExponentFunction& p, const ExponentFunction& r,
                                      std::size_t grid_points) {
  const Interval d = p.domain();
  if (r.domain().lo > d.lo || r.domain().hi < d.hi) throw ContractError("r must be defined on the domain of p");
  const auto grid = p.evaluation_grid(grid_points);
  auto violates = [&](double x) {
    const double pv = p.value_unchecked(x);
    const double rv = r.value_unchecked(x);
    const double conj = std::isinf(pv) ? 1.0 : (pv <= 1.0 ? kInf : pv / (pv - 1.0));
    const double need = std::max(pv, conj);
    if (std::isinf(need)) return !std::isinf(rv);
    return rv < need * (1.0 - 1e-12);
  };
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (violates(grid[i]) && violates(grid[i + 1])) {
      std::ostringstream os;
      os << "r(x) >= max(p(x), p(x)/(p(x)-1)) violated near x=" << grid[i] << " (p=" << p.value_unchecked(grid[i])
         << ", r=" << r.value_unchecked(grid[i]) << ")";
      throw ContractError(os.str());
    }
  }
  auto q_of = [](double pv, double rv) {
    if (std::isinf(rv)) return pv;
    if (std::isinf(pv)) return rv;
    return pv * rv / (pv + rv);
  };
  std::vector<Interval> infinite;
  for (const auto& a : p.infinite_set())
    for (const auto& b : r.infinite_set()) {
      const Interval c{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
      if (c.hi >= c.lo) infinite.push_back(c);
    }
  ExponentFunction q = [&] {
    if (p.is_constant() && r.is_constant()) {
      const double v = q_of(p.constant_value(), r.constant_value());
      return ExponentFunction::constant(v, d);
    }
    return ExponentFunction::derived(
        "composition(" + p.describe() + "," + r.describe() + ")",
        [p, r, q_of](double x) { return q_of(p.value_unchecked(x), r.value_unchecked(x)); }, d, infinite,
        ExponentFunction::Monotonicity::None, p.singular_points());
  }();
  for (double x : grid) {
    const double qv = q.value_unchecked(x);
    const double pv = p.value_unchecked(x);
    const double rv = r.value_unchecked(x);
    if (std::isinf(rv)) continue;
    if (qv < 1.0 - 1e-9 || (std::isfinite(pv) && qv >= pv)) {
      std::ostringstream os;
      os << "composition exponent q=" << qv << " leaves [1, p) at x=" << x;
      throw NumericalError(os.str());
    }
  }
  return q;
}

ExponentFunction holder_exponent(const ExponentFunction& p, const ExponentFunction& r) {
  const Interval d = p.domain();
  if (r.domain().lo > d.lo || r.domain().hi < d.hi) throw ContractError("r must be defined on the domain of p");
  auto q_of = [](double pv, double rv) {
    if (std::isinf(pv) && std::isinf(rv)) return kInf;
    if (std::isinf(rv)) return pv;
    if (std::isinf(pv)) return rv;
    return pv * rv / (pv + rv);
  };
  std::vector<Interval> infinite;
  for (const auto& a : p.infinite_set())
    for (const auto& b : r.infinite_set()) {
      const Interval c{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
      if (c.hi >= c.lo) infinite.push_back(c);
    }
  if (p.is_constant() && r.is_constant()) {
    const double v = q_of(p.constant_value(), r.constant_value());
    if (v < 1.0 - 1e-12) throw ContractError("1/p + 1/r exceeds 1");
    return ExponentFunction::constant(std::max(v, 1.0), d);
  }
  for (double x : p.evaluation_grid(2001)) {
    if (q_of(p.value_unchecked(x), r.value_unchecked(x)) < 1.0 - 1e-12) {
      std::ostringstream os;
      os << "1/p + 1/r exceeds 1 at x=" << x;
      throw ContractError(os.str());
    }
  }
  std::vector<double> singular = p.singular_points();
  for (double x : r.singular_points()) singular.push_back(x);
  return ExponentFunction::derived(
      "holder(" + p.describe() + "," + r.describe() + ")",
      [p, r, q_of](double x) { return std::max(1.0, q_of(p.value_unchecked(x), r.value_unchecked(x))); }, d,
      infinite, ExponentFunction::Monotonicity::None, singular);
}

ExponentFunction pointwise_min(const ExponentFunction& p, const ExponentFunction& q) {
  if (p.is_constant() && q.is_constant())
    return ExponentFunction::constant(std::min(p.constant_value(), q.constant_value()), p.domain());
  std::vector<Interval> infinite;
  for (const auto& a : p.infinite_set())
    for (const auto& b : q.infinite_set()) {
      const Interval c{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
      if (c.hi >= c.lo) infinite.push_back(c);
    }
  return ExponentFunction::derived(
      "min(" + p.describe() + "," + q.describe() + ")",
      [p, q](double x) { return std::min(p.value_unchecked(x), q.value_unchecked(x)); }, p.domain(), infinite);
}

}  // namespace varlex
