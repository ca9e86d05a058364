#pragma once

#include "varlex/almost_auto.hpp"

namespace varlex {

struct CompositionReport {
  ExponentFunction q_exponent = ExponentFunction::constant(1.0);
  WindowNormSeries lipschitz_window_norms;
  std::optional<VectorFunction> composed;
  TestReport membership;
  /// Shift test of the composition at q, and at the constant ess inf of q.
  ShiftTestReport shift_test;
  Verdict verdict_at_q_minus = Verdict::Inconclusive;
  /// Bounded grid range of u, the stand-in for relative compactness.
  bool range_bounded = false;
  double range_bound = 0.0;
};

/// t -> f(t, u(t)); DomainError when u leaves the y-range of f on the grid.
VectorFunction compose(const TwoParameterFunction& f, const VectorFunction& u, const std::vector<double>& t_grid);

/// Stepanov r(x) window norms of the empirical Lipschitz function
/// L(t) = max |f(t, y_i) - f(t, y_j)| / |y_i - y_j| over pairs with |y_i - y_j| >= 1e-6.
WindowNormSeries lipschitz_window_check(const TwoParameterFunction& f, const ExponentFunction& r,
                                       const std::vector<double>& t_grid, const std::vector<double>& y_samples);

/// Empirical Lipschitz function used by lipschitz_window_check.
VectorFunction empirical_lipschitz(const TwoParameterFunction& f, const std::vector<double>& y_samples);

struct CompositionOptions {
  std::vector<double> t_grid{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
  std::size_t y_samples = 9;
  ShiftTestOptions shift{};
};

/// q = composition_exponent(p, r), then a shift test of f(., u(.)) at q.
/// Fails over to inconclusive when u itself does not pass at p.
CompositionReport composition_membership_test(const TwoParameterFunction& f, const VectorFunction& u,
                                              const ExponentFunction& p, const ExponentFunction& r,
                                              const std::vector<double>& shifts, const CompositionOptions& opt = {});

/// f = g + q_part and u = v + omega: the membership test on (g, v) and the
/// decay of f(., u(.)) - g(., v(.)) at q.
CompositionReport asymptotic_composition_test(const TwoParameterFunction& g, const VectorFunction& v,
                                              const TwoParameterFunction& q_part, const VectorFunction& omega,
                                              const ExponentFunction& p, const ExponentFunction& r,
                                              const std::vector<double>& shifts, double horizon = 100.0,
                                              const CompositionOptions& opt = {});

}  // namespace varlex
