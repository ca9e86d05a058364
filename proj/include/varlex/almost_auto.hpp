#pragma once

#include "varlex/stepanov.hpp"

#include <optional>
#include <vector>

namespace varlex {

/// Shift-sequence test of Bochner type with its residual series.
struct ShiftTestReport {
  std::vector<double> sequence;
  std::vector<std::size_t> chosen_subsequence;
  std::optional<VectorFunction> candidate_limit;
  std::vector<double> t_grid;
  /// forward_residuals[k][i] = |f(a_k + . + t_i) - g(. + t_i)| over [0, 1].
  std::vector<std::vector<double>> forward_residuals;
  /// backward_residuals[k][i] = |g(t_i + . - a_k) - f(t_i + .)| over [0, 1].
  std::vector<std::vector<double>> backward_residuals;
  Verdict verdict = Verdict::Inconclusive;
  double tolerance = 0.0;
  double tail_residual = 0.0;  // largest residual over the tail of the subsequence
  double closest_pair = 0.0;   // smallest distance between two shifts of the later half
  std::string note;
};

/// Options for the defect scans. An empty exponent selects the sup-norm defect.
struct PeriodScanOptions {
  std::vector<double> t_grid;           // defect sample points; default [0, 100] step 0.25
  std::vector<double> stepanov_t_grid;  // windows used for the Stepanov defect; default 0, 1, ..., 10
  double step = 0.05;                   // coarse shift resolution
  std::size_t stepanov_candidates = 5;
  NormOptions norm{};
};

/// sup over the t-grid of |f(t + tau) - f(t)|.
double sup_defect(const VectorFunction& f, double tau, const PeriodScanOptions& opt = {});

/// sup over the window grid of |f(. + tau + t) - f(. + t)|_{L^{p(x)}[0,1]}.
double stepanov_defect(const VectorFunction& f, const ExponentFunction& p, double tau,
                       const PeriodScanOptions& opt = {});

/// Bohr scan: each length-L window of [0, horizon] is searched for an
/// eps-translation number. abscissae hold the best shift per window and series
/// its defect; the verdict is true iff every window has one.
TestReport epsilon_period_scan(const VectorFunction& f, const std::optional<ExponentFunction>& p, double eps,
                               double interval_length, double horizon, const PeriodScanOptions& opt = {});

/// Increasing shifts whose sup-norm defects fall geometrically: the k-th shift
/// has defect below eps0 * factor^k (or below the previous record times factor).
std::vector<double> almost_period_sequence(const VectorFunction& f, std::size_t count, double horizon,
                                           double eps0 = 0.5, double factor = 0.5,
                                           const PeriodScanOptions& opt = {});

struct ShiftTestOptions {
  double tolerance = 0.02;
  double tail_fraction = 0.25;
  NormOptions norm{};
};

ShiftTestReport bochner_shift_test(const VectorFunction& f, const ExponentFunction& p,
                                   const std::vector<double>& shifts, const std::vector<double>& t_grid,
                                   const ShiftTestOptions& opt = {});

/// Modular of (F(. + a) - F(. + b)) / lambda over [0, 1] with p(x) = 1 - ln x,
/// where F = sign(sin t + sin(sqrt 2 t)).
ModularResult counterexample_divergence(double lambda, double a, double b, const ModularOptions& opt = {});

/// Shifts a_{2n-1} = t_n, a_{2n} = t_n + n with F(t_n + .) and F(t_n + n + .)
/// of opposite sign near 0, for n = 1..pairs.
std::vector<double> counterexample_shifts(std::size_t pairs);

/// (a, b) with sin t + sin(sqrt 2 t) positive on [a, a+1] and negative on
/// [b, b+1], so that F(. + a) - F(. + b) = 2 on [0, 1].
std::pair<double, double> saturated_pair();

/// Splits f = g + w on [0, inf): c0 decay of w and a shift test of g.
TestReport asymptotic_decompose(const VectorFunction& f, const ExponentFunction& p, const VectorFunction& g_candidate,
                                const std::vector<double>& shifts, const std::vector<double>& t_grid,
                                double horizon = 100.0, const ShiftTestOptions& shift_opt = {},
                                const DecayOptions& decay_opt = {});

}  // namespace varlex
