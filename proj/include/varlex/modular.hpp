#pragma once

#include "varlex/exponent.hpp"
#include "varlex/function.hpp"
#include "varlex/quadrature.hpp"

#include <string>
#include <utility>
#include <vector>

namespace varlex {

struct ModularResult {
  double value = 0.0;
  double error = 0.0;
  bool divergent = false;
  /// Fitted log2 panel ratio at graded ends (most critical end); NaN if none.
  double tail_slope = std::nan("");
  std::vector<std::pair<int, double>> trace;
};

struct NormResult {
  double value = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};
  double modular_at_value = 0.0;
  int iterations = 0;
  std::string diagnostic;
};

struct ModularOptions {
  quad::GradedOptions graded{};
  std::size_t sup_samples = 2049;
  /// Extra quadrature breakpoints, e.g. kinks of |f|.
  std::vector<double> breaks;
  /// Add the sign changes of a scalar f to the breakpoints.
  bool locate_sign_changes = true;
};

/// Sign changes of a scalar function on [a, b], found by sampling and refined
/// with TOMS 748. Empty for vector-valued functions.
std::vector<double> sign_changes(const VectorFunction& f, double a, double b);

struct NormOptions {
  ModularOptions modular{};
  double rel_tol = 1e-10;
  int max_iterations = 200;
};

/// phi_p(t): t^p for finite p; for p = infinity, 0 on [0, 1] and infinity beyond.
double phi(double p, double t);
double phi(const ExponentFunction& p, double x, double t);

/// rho(f / scale) = integral over omega of phi_{p(x)}(|f(x)| / scale).
ModularResult modular(const VectorFunction& f, const ExponentFunction& p, Interval omega, double scale = 1.0,
                      const ModularOptions& opt = {});

/// Luxemburg norm inf{lambda > 0 : rho(f / lambda) <= 1} by bisection.
NormResult luxemburg_norm(const VectorFunction& f, const ExponentFunction& p, Interval omega,
                          const NormOptions& opt = {});

struct HolderReport {
  double product_norm = 0.0;  // |uv|_q
  double bound = 0.0;         // 2 |u|_p |v|_r
  bool holds = false;
  NormResult u_norm, v_norm, uv_norm;
};

/// |uv|_q <= 2 |u|_p |v|_r with 1/q = 1/p + 1/r.
HolderReport holder_check(const VectorFunction& u, const VectorFunction& v, const ExponentFunction& p,
                          const ExponentFunction& r, Interval omega, const NormOptions& opt = {});

struct EmbeddingReport {
  double norm_q = 0.0;
  double norm_p = 0.0;
  double constant = 2.0;  // 1 + m(omega)
  double ratio = 0.0;     // norm_q / norm_p, the empirical constant
  bool holds = false;
};

/// |f|_q <= (1 + m(omega)) |f|_p for q <= p a.e.
EmbeddingReport embedding_check(const VectorFunction& f, const ExponentFunction& p, const ExponentFunction& q,
                                Interval omega, const NormOptions& opt = {});

}  // namespace varlex
