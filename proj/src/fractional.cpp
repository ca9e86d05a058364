#include "varlex/fractional.hpp"

#include "varlex/quadrature.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <Eigen/Dense>

#include <numbers>
#include <sstream>

namespace varlex {

double g_kernel(double zeta, double t) {
  if (!(zeta > 0.0) || !(t > 0.0)) throw ContractError("g_kernel needs zeta > 0 and t > 0");
  return std::exp((zeta - 1.0) * std::log(t) - std::lgamma(zeta));
}

namespace {

struct SeriesSum {
  double value = 0.0;
  double abs_sum = 0.0;
  double last = 0.0;
};

// Neumaier-compensated power series in double precision.
SeriesSum double_series(double alpha, double beta, double z) {
  SeriesSum out;
  double sum = 0.0, comp = 0.0;
  const double lz = std::log(std::abs(z));
  double prev = kInf;
  for (int k = 0; k < 5000; ++k) {
    const double mag = std::exp(k * lz - std::lgamma(alpha * k + beta));
    const double term = (z < 0.0 && k % 2 == 1) ? -mag : mag;
    const double s = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - s) + term : (term - s) + sum;
    sum = s;
    out.abs_sum += mag;
    out.last = mag;
    if (k > 2 && mag < prev && mag <= 1e-17 * std::abs(sum + comp)) break;
    prev = mag;
  }
  out.value = sum + comp;
  return out;
}

}  // namespace

double mittag_leffler_series(double alpha, double beta, double z) {
  using mp = boost::multiprecision::cpp_bin_float_100;
  const mp zz(z);
  mp sum = 0, power = 1, prev = 0;
  for (int k = 0; k < 20000; ++k) {
    const mp term = power / boost::math::tgamma(mp(alpha) * k + mp(beta));
    sum += term;
    if (k > 2 && abs(term) < abs(prev) && abs(term) <= mp("1e-40") * abs(sum)) break;
    prev = term;
    power *= zz;
  }
  return static_cast<double>(sum);
}

double mittag_leffler_integral(double alpha, double beta, double z) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(beta < 1.0 + alpha) || !(z < 0.0))
    throw ContractError("integral representation needs 0 < alpha < 1, beta < 1 + alpha, z < 0");
  const double pi = std::numbers::pi;
  const double x = -z;
  const double s1 = std::sin(pi * (1.0 - beta)), s2 = std::sin(pi * (1.0 - beta + alpha));
  const double c = std::cos(pi * alpha);
  const double e = (1.0 - beta) / alpha;
  auto kernel = [&](double r) {
    if (r <= 0.0) return 0.0;
    const double num = r * s1 + x * s2;
    const double den = r * r + 2.0 * r * x * c + x * x;
    return std::exp(e * std::log(r) - std::pow(r, 1.0 / alpha)) * num / den / (pi * alpha);
  };
  const double r_max = std::pow(745.0, alpha);
  std::vector<double> breaks;
  const double peak = x * std::max(0.0, -c);
  const double width = x * std::sin(pi * alpha);
  for (double b : {peak - width, peak, peak + width})
    if (b > 0.0 && b < r_max) breaks.push_back(b);
  for (double b = 1e-8; b < std::min(1.0, r_max); b *= 10.0) breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  return quad::integrate(kernel, 0.0, r_max, std::span<const double>(breaks), {1e-14, 0.0, 20000}).value;
}

MittagLefflerValue mittag_leffler_eval(double alpha, double beta, double z) {
  if (!(alpha > 0.0 && alpha <= 2.0) || !(beta > 0.0) || !std::isfinite(z))
    throw ContractError("mittag_leffler needs alpha in (0, 2], beta > 0 and finite z");
  MittagLefflerValue out;
  if (alpha == 1.0 && beta == 1.0) {
    out.value = std::exp(z);
    out.method = "exp";
    out.error_estimate = 1e-16 * out.value;
    return out;
  }
  if (z == 0.0) {
    out.value = 1.0 / std::tgamma(beta);
    out.method = "series";
    return out;
  }
  const SeriesSum s = double_series(alpha, beta, z);
  const double eps = std::numeric_limits<double>::epsilon();
  if (std::isfinite(s.value) && s.abs_sum <= 1e4 * std::abs(s.value)) {
    out.value = s.value;
    out.method = "series";
    out.error_estimate = 8.0 * eps * s.abs_sum + s.last;
    return out;
  }
  if (z < 0.0 && alpha < 1.0 && beta < 1.0 + alpha) {
    out.value = mittag_leffler_integral(alpha, beta, z);
    out.method = "integral";
    out.error_estimate = 1e-13 * std::abs(out.value);
    return out;
  }
  // The largest term grows like exp(|z|^(1/alpha)); 100 digits absorb up to about e^190.
  const double growth = std::pow(std::abs(z), 1.0 / alpha);
  out.value = mittag_leffler_series(alpha, beta, z);
  out.method = "series-mp";
  out.degraded = growth > 190.0;
  out.error_estimate = out.degraded ? kInf : 1e-14 * std::abs(out.value);
  return out;
}

double mittag_leffler(double alpha, double beta, double z) { return mittag_leffler_eval(alpha, beta, z).value; }

ResolventFamily::ResolventFamily(KernelKind kind, Vec a, double gamma, double beta, double decay)
    : kind_(kind), a_(std::move(a)), gamma_(gamma), beta_(beta), decay_(decay) {}

ResolventFamily ResolventFamily::scalar(KernelKind kind, double a, double gamma, double beta) {
  Vec v(1);
  v << a;
  return diagonal(kind, v, gamma, beta);
}

ResolventFamily ResolventFamily::diagonal(KernelKind kind, const Vec& a, double gamma, double beta) {
  if (kind == KernelKind::Exponential || kind == KernelKind::Power)
    throw ContractError("use ResolventFamily::exponential or ResolventFamily::power");
  if (a.size() == 0 || (a.array() <= 0.0).any()) throw ContractError("generator entries must be positive");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ContractError("gamma must lie in (0, 1]");
  if (!(beta > 0.0 && beta <= 1.0)) throw ContractError("beta must lie in (0, 1]");
  return ResolventFamily(kind, a, gamma, beta, 0.0);
}

ResolventFamily ResolventFamily::exponential(double rate) {
  if (!(rate > 0.0)) throw ContractError("rate must be positive");
  Vec v(1);
  v << rate;
  return ResolventFamily(KernelKind::Exponential, v, 1.0, 1.0, 0.0);
}

ResolventFamily ResolventFamily::power(double decay) {
  if (!(decay > 0.0)) throw ContractError("decay must be positive");
  Vec v(1);
  v << 1.0;
  return ResolventFamily(KernelKind::Power, v, 1.0, 1.0, decay);
}

Vec ResolventFamily::operator()(double t) const {
  Vec out(a_.size());
  for (Eigen::Index i = 0; i < a_.size(); ++i) {
    const double a = a_[i];
    switch (kind_) {
      case KernelKind::Exponential:
        out[i] = std::exp(-a * t);
        break;
      case KernelKind::Power:
        out[i] = std::pow(1.0 + t, -decay_);
        break;
      case KernelKind::S:
        out[i] = gamma_ == 1.0 ? std::exp(-a * t) : mittag_leffler(gamma_, 1.0, -a * std::pow(t, gamma_));
        break;
      case KernelKind::P:
        out[i] = gamma_ == 1.0 ? std::exp(-a * t) : mittag_leffler(gamma_, gamma_, -a * std::pow(t, gamma_));
        break;
      case KernelKind::R:
        out[i] = gamma_ == 1.0 ? std::exp(-a * t)
                               : std::pow(t, gamma_ - 1.0) * mittag_leffler(gamma_, gamma_, -a * std::pow(t, gamma_));
        break;
    }
  }
  return out;
}

Eigen::DiagonalMatrix<double, Eigen::Dynamic> ResolventFamily::matrix(double t) const {
  return Eigen::DiagonalMatrix<double, Eigen::Dynamic>(Eigen::VectorXd((*this)(t)));
}

double ResolventFamily::norm_at(double t) const { return (*this)(t).cwiseAbs().maxCoeff(); }

double ResolventFamily::singular_exponent() const {
  return kind_ == KernelKind::R && gamma_ < 1.0 ? gamma_ - 1.0 : 0.0;
}

DecayModel ResolventFamily::decay_model() const {
  DecayModel m;
  if (kind_ == KernelKind::Exponential || (gamma_ == 1.0 && kind_ != KernelKind::Power)) {
    m.exponential = true;
    m.rate = a_.minCoeff();
    m.constant = 1.0;
    return m;
  }
  m.exponential = false;
  if (kind_ == KernelKind::Power) {
    m.rate = decay_;
    m.constant = 1.0;
    return m;
  }
  if (kind_ == KernelKind::S) {
    // E_gamma(-x) <= 1 / (1 + x / Gamma(1 + gamma)).
    m.rate = gamma_;
    m.constant = std::tgamma(1.0 + gamma_) / a_.minCoeff();
    return m;
  }
  m.rate = kind_ == KernelKind::P ? 2.0 * gamma_ : 1.0 + gamma_;
  double c = 0.0;
  for (double t : geometric_grid(1.0, 1e8, 321)) c = std::max(c, norm_at(t) * std::pow(t, m.rate));
  const double limit = 1.0 / (a_.minCoeff() * a_.minCoeff() * std::abs(std::tgamma(-gamma_)));
  m.constant = 1.001 * std::max(c, limit);
  return m;
}

std::string ResolventFamily::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case KernelKind::Exponential:
      return "exp(-" + std::to_string(a_[0]) + " t)";
    case KernelKind::Power:
      os << "(1+t)^(-" << decay_ << ")";
      return os.str();
    case KernelKind::S:
      os << "S";
      break;
    case KernelKind::P:
      os << "P";
      break;
    case KernelKind::R:
      os << "R";
      break;
  }
  os << "_gamma(gamma=" << gamma_ << ", a=" << a_.transpose() << ")";
  return os.str();
}

Vec resolvent_eval(const ResolventFamily& rf, double t) {
  if (t < 0.0 || (t == 0.0 && rf.singular_exponent() < 0.0))
    throw DomainError("resolvent kernel is singular at t = 0");
  return rf(t);
}

namespace {

// Richardson-extrapolated centred difference of a vector-valued map.
template <class F>
Vec centred_derivative(F&& f, double t, double h) {
  const Vec d1 = (f(t + h) - f(t - h)) / (2.0 * h);
  const Vec d2 = (f(t + 0.5 * h) - f(t - 0.5 * h)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

template <class F>
double integrate_plain(F&& f, double a, double b, double piece) {
  std::vector<double> breaks;
  for (double x = a + piece; x < b; x += piece) breaks.push_back(x);
  return quad::integrate(f, a, b, std::span<const double>(breaks), {1e-13, 1e-15, 40000}).value;
}

// Smooth step: 1 on (-inf, 0], 0 on [1, inf).
double smooth_cutoff(double x) {
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / (1.0 - x)), b = std::exp(-1.0 / x);
  return a / (a + b);
}

}  // namespace

DerivativeValue caputo_derivative(const VectorFunction& u, double gamma, double t) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ContractError("gamma must lie in (0, 1]");
  if (!(t > 0.0)) throw ContractError("caputo_derivative needs t > 0");
  DerivativeValue out;
  const double h = std::min(0.01, 0.25 * t);
  const Interval dom = u.domain();
  out.degraded = dom.lo > 0.0 || dom.hi < t + h;
  if (out.degraded) throw DomainError("u must be sampled on [0, t + h]");
  if (gamma == 1.0) {
    out.value = centred_derivative([&](double s) { return u(s); }, t, h);
    return out;
  }
  const Vec u0 = u(0.0);
  const int d = u.dim();
  const double e = 1.0 / (1.0 - gamma);
  // With sigma = tau^(1/(1-gamma)) the weakly singular kernel becomes constant.
  auto integral = [&](double s) {
    Vec v(d);
    for (int i = 0; i < d; ++i) {
      auto f = [&](double tau) { return u(s - std::pow(tau, e))[i] - u0[i]; };
      v[i] = integrate_plain(f, 0.0, std::pow(s, 1.0 - gamma), 1.0);
    }
    return Vec(v / std::tgamma(2.0 - gamma));
  };
  out.value = centred_derivative(integral, t, h);
  return out;
}

DerivativeValue weyl_derivative(const VectorFunction& u, double gamma, double t, double truncation) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ContractError("gamma must lie in (0, 1]");
  if (!(truncation >= 4.0)) throw ContractError("truncation must be at least 4");
  const double h = 0.01;
  const Interval dom = u.domain();
  if (dom.lo > t - truncation || dom.hi < t + h) throw DomainError("u must be defined on [t - truncation, t + h]");
  DerivativeValue out;
  if (gamma == 1.0) {
    out.value = -centred_derivative([&](double s) { return u(s); }, t, h);
    return out;
  }
  const int d = u.dim();
  const double e = 1.0 / (1.0 - gamma);
  const double c = 1.0 / std::tgamma(1.0 - gamma);
  auto windowed = [&](double length) {
    return [&, length](double s) {
      Vec v(d);
      for (int i = 0; i < d; ++i) {
        // sigma in [0, 1] through sigma = tau^(1/(1-gamma)); plain panels beyond.
        auto near = [&](double tau) { return u(s - std::pow(tau, e))[i] * e; };
        auto far = [&](double sigma) {
          return std::pow(sigma, -gamma) * smooth_cutoff(2.0 * sigma / length - 1.0) * u(s - sigma)[i];
        };
        v[i] = c * (integrate_plain(near, 0.0, 1.0, 1.0) + integrate_plain(far, 1.0, length, 2.0));
      }
      return v;
    };
  };
  out.value = centred_derivative(windowed(truncation), t, h);
  const Vec half = centred_derivative(windowed(0.5 * truncation), t, h);
  out.tail_bound = (out.value - half).cwiseAbs().maxCoeff();
  out.degraded = out.tail_bound > 1e-4;
  return out;
}

TestReport decay_check(const ResolventFamily& rf, const std::vector<double>& t_grid) {
  if (t_grid.empty() || t_grid.front() <= 0.0) throw ContractError("decay grid must be positive");
  if (rf.kind() == KernelKind::Exponential || rf.kind() == KernelKind::Power)
    throw ContractError("decay_check needs a Mittag-Leffler family");
  const double g = rf.gamma(), b = rf.beta();
  const auto S = ResolventFamily::diagonal(KernelKind::S, rf.generator(), g, b);
  const auto P = ResolventFamily::diagonal(KernelKind::P, rf.generator(), g, b);
  TestReport rep;
  rep.abscissae = t_grid;
  double sup_s = 0.0, sup_s_beta = 0.0, sup_p = 0.0;
  std::vector<double> ls, lp, lt, corr;
  for (double t : t_grid) {
    const double s = S.norm_at(t), p = P.norm_at(t);
    rep.series.push_back(s);
    sup_s = std::max(sup_s, s * std::pow(t, g));
    sup_s_beta = std::max(sup_s_beta, s * std::pow(t, g * (1.0 - b)));
    sup_p = std::max(sup_p, p * std::pow(t, 2.0 * g));
    if (t >= 10.0 && s > 0.0 && p > 0.0) {
      lt.push_back(std::log(t));
      ls.push_back(std::log(s));
      lp.push_back(std::log(p));
      corr.push_back(std::pow(t, -g));
    }
  }
  // log|K(t)| = c + slope log t + d t^(-gamma): the leading power with its first correction.
  auto fit = [&](const std::vector<double>& y) {
    const auto n = static_cast<Eigen::Index>(y.size());
    if (n < 4) return std::nan("");
    Eigen::MatrixXd X(n, 3);
    Eigen::VectorXd Y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      X(i, 0) = 1.0;
      X(i, 1) = lt[i];
      X(i, 2) = corr[i];
      Y(i) = y[i];
    }
    return Eigen::VectorXd(X.colPivHouseholderQr().solve(Y))(1);
  };
  const double slope_s = g == 1.0 ? std::nan("") : fit(ls);
  const double slope_p = g == 1.0 ? std::nan("") : fit(lp);
  rep.fitted_slope = slope_s;
  rep.value = std::max(sup_s, sup_p);
  rep.metrics = {{"sup_S_t_gamma", sup_s},       {"sup_S_t_gamma_1_minus_beta", sup_s_beta},
                 {"sup_P_t_2gamma", sup_p},      {"slope_S", slope_s},
                 {"slope_P", slope_p},           {"M1", sup_s_beta},
                 {"M2", sup_p}};
  const bool finite = std::isfinite(sup_s) && std::isfinite(sup_p) && std::isfinite(sup_s_beta);
  rep.verdict = finite ? Verdict::True : Verdict::False;
  if (!finite) rep.note = "scaled kernel is unbounded on the grid";
  return rep;
}

}  // namespace varlex
