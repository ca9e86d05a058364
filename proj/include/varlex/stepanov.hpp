#pragma once

#include "varlex/modular.hpp"

#include <vector>

namespace varlex {

/// t -> |f(. + t)|_{L^{p(x)}[0,1]} sampled on a grid.
struct WindowNormSeries {
  std::vector<double> base_points;
  std::vector<double> values;
  ExponentFunction exponent = ExponentFunction::constant(1.0);
  double sup_estimate = 0.0;
  double argmax = 0.0;
};

/// Luxemburg norm of x -> f(x + t) over [0, 1].
double window_norm(const VectorFunction& f, const ExponentFunction& p, double t, const NormOptions& opt = {});

/// Window norms over t_grid plus golden-section refinement around the grid argmax.
WindowNormSeries stepanov_norm(const VectorFunction& f, const ExponentFunction& p, const std::vector<double>& t_grid,
                               bool refine = true, const NormOptions& opt = {});

struct DecayOptions {
  double tolerance = 1e-3;
  std::size_t points = 201;
  double flat_slope = -1e-3;  // tail slopes at or above this count as no decay
};

/// Three-valued test that the window norms of w vanish at infinity.
TestReport c0_decay_test(const VectorFunction& w, const ExponentFunction& p, double horizon,
                         const DecayOptions& opt = {});

struct ErgodicOptions {
  double tolerance = 1e-2;
  double flat_slope = -0.05;
};

/// M(r) = (1/2r) int_{-r}^{r} |Phi(s)| ds on r = 1, 2, 4, ..., r_max.
TestReport ergodic_mean_test(const VectorFunction& phi_fn, double r_max, const ErgodicOptions& opt = {});

}  // namespace varlex
