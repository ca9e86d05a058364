#pragma once

#include "varlex/fractional.hpp"
#include "varlex/stepanov.hpp"

#include <optional>

namespace varlex {

/// H = G + F1 + F2 on the grid, with the bound 2 |g_check|_S m_t for F2.
struct Decomposition {
  std::vector<Vec> G, F1, F2;
  std::vector<double> f2_bound;
  std::vector<double> m_t;
  double g_check_stepanov = 0.0;
  double identity_defect = 0.0;  // sup over the grid of |H - (G + F1 + F2)|
};

struct ConvolutionResult {
  std::vector<double> t_grid;
  std::vector<Vec> values;
  std::vector<double> tail_bound_series;
  int truncation_K = 0;
  std::optional<Decomposition> decomposition;
  std::string note;
};

struct TailConstant {
  double M = 0.0;
  double remainder_bound = 0.0;
  int K = 0;
  std::vector<double> window_norms;  // |R(. + k)|_{L^q[0,1]}, k = 0..K
};

/// Operator norm s -> |R(s + shift)| as a function on [0, inf).
VectorFunction kernel_norm_function(const ResolventFamily& rf, double shift = 0.0);

/// Sum over k = 0..K of |R(. + k)|_{L^q[0,1]} plus the remainder bound from
/// the decay model. NumericalError when the decay is not summable.
TailConstant tail_constant_M(const ResolventFamily& rf, const ExponentFunction& q, int K,
                             const NormOptions& opt = {});

struct MtSeries {
  std::vector<double> t_grid;
  std::vector<double> values;       // partial sums over k = 0..K
  std::vector<double> upper_bound;  // partial sums plus remainder bounds
  double fitted_slope = 0.0;        // log-log slope of the upper bound
};

MtSeries m_t_series(const ResolventFamily& rf, const ExponentFunction& q, const std::vector<double>& t_grid, int K,
                    const NormOptions& opt = {});

struct ConvolutionOptions {
  int K = 0;                  // windows summed; 0 selects K from the tail tolerance
  double tail_tolerance = 1e-8;
  int max_K = 400;
  NormOptions norm{};
};

/// G(t) = sum_{k<=K} int_0^1 R(s + k) g(t - s - k) ds with the tail bound
/// 2 |g_check|_{S^p} sum_{k>K} |R(. + k)|_{L^{p'}[0,1]}.
ConvolutionResult line_convolution(const ResolventFamily& rf, const VectorFunction& g, const ExponentFunction& p,
                                   const std::vector<double>& t_grid, const ConvolutionOptions& opt = {});

/// H(t) = int_0^t R(t - s) f(s) ds.
ConvolutionResult finite_convolution(const ResolventFamily& rf, const VectorFunction& f,
                                     const std::vector<double>& t_grid);

/// H for f = g + w together with G, F1(t) = int_0^t R(t - s) w(s) ds and
/// F2(t) = -int_t^inf R(s) g(t - s) ds.
ConvolutionResult finite_convolution(const ResolventFamily& rf, const VectorFunction& g, const VectorFunction& w,
                                     const ExponentFunction& p, const std::vector<double>& t_grid,
                                     const ConvolutionOptions& opt = {});

/// Mild solution u(t) = S(t) x0 + int_0^t R(t - s) f(s) ds.
ConvolutionResult solve_dfp(const ResolventFamily& rf, const Vec& x0, const VectorFunction& f,
                            const std::vector<double>& t_grid);

/// Decay of F1 at exponent r1 and of the F2 bound at exponent r2; needs a
/// decomposition on a uniform grid.
TestReport ergodic_component_classify(const ConvolutionResult& result, const ExponentFunction& r1,
                                      const ExponentFunction& r2, const DecayOptions& opt = {});

}  // namespace varlex
