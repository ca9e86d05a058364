#pragma once

#include "varlex/types.hpp"

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace varlex {

/// Variable exponent p : [a, b] -> [1, inf]. Values equal to infinity live in
/// an explicit finite union of intervals; closed forms never encode infinity
/// as a large float. Cheap to copy (shared immutable state).
class ExponentFunction {
 public:
  enum class Shape { Constant, OneMinusLog, Affine, Sinusoidal, Grid, Derived };
  enum class Monotonicity { None, Increasing, Decreasing };

  static ExponentFunction constant(double value, Interval domain = {0.0, 1.0});
  /// p(x) = 1 - ln x; requires domain inside [0, 1].
  static ExponentFunction one_minus_log(Interval domain = {0.0, 1.0});
  static ExponentFunction affine(double intercept, double slope, Interval domain = {0.0, 1.0});
  /// p(x) = mean + amplitude * sin(2 pi frequency x + phase).
  static ExponentFunction sinusoidal(double mean, double amplitude, double frequency, double phase = 0.0,
                                     Interval domain = {0.0, 1.0});
  /// Uniform samples over the domain, piecewise-linear in between.
  static ExponentFunction grid(std::vector<double> samples, Interval domain = {0.0, 1.0});
  static ExponentFunction derived(std::string name, std::function<double(double)> formula, Interval domain,
                                  std::vector<Interval> infinite_set = {},
                                  Monotonicity monotone = Monotonicity::None,
                                  std::vector<double> singular_points = {});

  /// Marks [lo, hi] subsets of the domain where p = infinity.
  ExponentFunction with_infinite_set(std::vector<Interval> set) const;

  /// Value at x; infinity on the infinite set. Throws DomainError outside the domain.
  double operator()(double x) const;
  /// Same without the domain check (hot loops that already clipped x).
  double value_unchecked(double x) const;

  Interval domain() const;
  Shape shape() const;
  Monotonicity monotonicity() const;
  const std::vector<Interval>& infinite_set() const;
  double infinite_measure() const;
  bool is_constant() const;
  /// Constant value when the exponent is a constant (possibly infinite).
  double constant_value() const;
  /// Points of the domain near which p is unbounded (e.g. x = 0 for 1 - ln x).
  const std::vector<double>& singular_points() const;
  /// Kinks of the representation (grid nodes).
  std::vector<double> breakpoints() const;
  const std::vector<double>& grid_samples() const;
  std::string describe() const;

  /// Essential bounds (p-, p+). Exact for monotone and sinusoidal closed forms,
  /// grid-based otherwise.
  std::pair<double, double> essential_bounds(std::size_t grid_points = 10000) const;
  bool in_d_plus() const;
  bool in_c_plus() const;

  /// Evaluation grid used for invariant checks.
  std::vector<double> evaluation_grid(std::size_t points = 10000) const;

  struct Impl;

 private:
  explicit ExponentFunction(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// Pointwise 1/p + 1/q = 1 with 1 <-> infinity.
ExponentFunction conjugate(const ExponentFunction& p);

/// q = p r / (p + r) where r is finite and q = p where r is infinite.
/// Requires r >= max(p, p/(p-1)) on a positive-measure subset of the grid.
ExponentFunction composition_exponent(const ExponentFunction& p, const ExponentFunction& r,
                                      std::size_t grid_points = 10000);

/// q with 1/q = 1/p + 1/r pointwise (infinity where both are infinite).
/// Requires q >= 1, i.e. 1/p + 1/r <= 1.
ExponentFunction holder_exponent(const ExponentFunction& p, const ExponentFunction& r);

/// Pointwise minimum; used to compare membership at exponent min(p, q).
ExponentFunction pointwise_min(const ExponentFunction& p, const ExponentFunction& q);

}  // namespace varlex
