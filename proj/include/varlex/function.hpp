#pragma once

#include "varlex/types.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace varlex {

/// A function I -> R^d with Euclidean norm: a registry closed form, a uniform
/// sample grid, or an expression built from those by translation, reflection,
/// sign, sums and products. Immutable; copies share state.
class VectorFunction {
 public:
  struct Node;

  // Registry closed forms (all defined on the real line unless noted).
  static VectorFunction sine(double frequency = 1.0, double amplitude = 1.0, double phase = 0.0);
  static VectorFunction cosine(double frequency = 1.0, double amplitude = 1.0);
  /// sin t + sin(sqrt(2) t).
  static VectorFunction two_sine();
  static VectorFunction sign_of_two_sine();
  static VectorFunction exp_decay(double rate = 1.0);
  /// 1 / (1 + t^2).
  static VectorFunction rational_decay();
  static VectorFunction constant(double value);
  static VectorFunction constant(const Vec& value);
  static VectorFunction zero(int dim = 1);
  /// 1 on [lo, hi], 0 elsewhere.
  static VectorFunction indicator(double lo, double hi);
  /// sin(1 / (2 + cos t + cos(sqrt(2) t))): almost automorphic but not compactly so.
  static VectorFunction aa_exemplar();
  static VectorFunction identity();
  /// t^exponent on [0, inf); unbounded at 0 for negative exponents.
  static VectorFunction power(double exponent);
  /// a0 + sum_k cos_k cos(2 pi k t / period) + sin_k sin(2 pi k t / period).
  static VectorFunction fourier(double a0, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs,
                                double period = 2.0);
  /// (cos(w t), sin(w t)) in R^2, a stand-in for e^{i w t}.
  static VectorFunction rotation(double frequency = 1.0);
  /// Uniform grid start + i * step with linear interpolation; no extrapolation.
  static VectorFunction grid(double start, double step, std::vector<Vec> samples);
  static VectorFunction grid(double start, double step, const std::vector<double>& samples);
  /// CSV with header "t,v1,...,vd" and uniformly spaced t.
  static VectorFunction from_csv(const std::string& path);
  /// Scalar closed form supplied by the caller.
  static VectorFunction scalar(std::string name, std::function<double(double)> formula,
                               Interval domain = Interval::real_line(), std::vector<double> singular_points = {});

  /// Checked evaluation; DomainError outside the domain.
  Vec operator()(double t) const;
  /// Unchecked Euclidean norm of f(t).
  double norm_at(double t) const;
  /// Unchecked bound on |f(t)| before cancellation in sums and differences.
  double magnitude_at(double t) const;
  /// Unchecked first component.
  double scalar_at(double t) const;

  int dim() const;
  Interval domain() const;
  bool discontinuous() const;
  bool is_grid() const;
  /// Jumps and kinks strictly inside (a, b), sorted.
  std::vector<double> breakpoints(double a, double b) const;
  /// Sign changes of the first component inside (a, b), sorted.
  std::vector<double> zeros(double a, double b) const;
  /// Points where the function is unbounded.
  std::vector<double> singular_points() const;
  std::string describe() const;
  /// Sampled sup of |f| over [a, b] (grid nodes included for grid kinds).
  double sup_norm(double a, double b, std::size_t samples = 4097) const;

  const std::shared_ptr<const Node>& node() const { return node_; }
  explicit VectorFunction(std::shared_ptr<const Node> node);

 private:
  std::shared_ptr<const Node> node_;
};

/// t -> f(t + tau); the domain shifts by -tau.
VectorFunction translate(const VectorFunction& f, double tau);
/// t -> f(-t).
VectorFunction reflect(const VectorFunction& f);
/// Pointwise sign with sign(0) = 0; requires d = 1.
VectorFunction sign_of(const VectorFunction& f);
/// a f + b g on the common domain.
VectorFunction linear_combination(double a, const VectorFunction& f, double b, const VectorFunction& g);
VectorFunction operator+(const VectorFunction& f, const VectorFunction& g);
VectorFunction operator-(const VectorFunction& f, const VectorFunction& g);
VectorFunction operator*(double c, const VectorFunction& f);
/// u(t) * v(t) with scalar v.
VectorFunction product(const VectorFunction& u, const VectorFunction& v);
/// Pointwise average of f(. + shift) over the given shifts.
VectorFunction shift_average(const VectorFunction& f, std::vector<double> shifts);
/// Samples f on a uniform grid over [a, b].
VectorFunction sample_on_grid(const VectorFunction& f, double a, double b, double step);

/// f : R x R -> R, two-parameter function of time and a scalar state y.
class TwoParameterFunction {
 public:
  using Formula = std::function<double(double, double)>;

  /// f(t, y) = y.
  static TwoParameterFunction identity_in_y();
  /// f(t, y) = sin(t) y.
  static TwoParameterFunction sine_times_y();
  /// f(t, y) = (sin t + sin(sqrt(2) t)) tanh(y).
  static TwoParameterFunction two_sine_tanh();
  /// f(t, y) = y^2 for |y| <= bound.
  static TwoParameterFunction y_squared(double bound = 1.0);
  static TwoParameterFunction constant(double c);
  /// f(t, y) = w(t), a time-only perturbation.
  static TwoParameterFunction time_only(const VectorFunction& w);
  static TwoParameterFunction custom(std::string name, Formula formula, Interval y_range = Interval::real_line(),
                                     std::optional<VectorFunction> lipschitz = std::nullopt);

  double operator()(double t, double y) const;
  Interval y_range() const { return y_range_; }
  /// Declared exact Lipschitz function L_f(t), when known.
  const std::optional<VectorFunction>& lipschitz() const { return lipschitz_; }
  const std::string& describe() const { return name_; }

  friend TwoParameterFunction operator+(const TwoParameterFunction& a, const TwoParameterFunction& b);

 private:
  TwoParameterFunction(std::string name, Formula formula, Interval y_range, std::optional<VectorFunction> lipschitz);
  std::string name_;
  Formula formula_;
  Interval y_range_;
  std::optional<VectorFunction> lipschitz_;
};

/// t -> f(t, u(t)) for scalar u, keeping the jumps of u.
VectorFunction compose_pointwise(const TwoParameterFunction& f, const VectorFunction& u);

}  // namespace varlex
