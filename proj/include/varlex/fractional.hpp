#pragma once

#include "varlex/function.hpp"

#include <Eigen/Core>

#include <string>

namespace varlex {

/// g_zeta(t) = t^(zeta - 1) / Gamma(zeta).
double g_kernel(double zeta, double t);

struct MittagLefflerValue {
  double value = 0.0;
  std::string method;  // "exp", "series", "series-mp" or "integral"
  double error_estimate = 0.0;
  bool degraded = false;
};

/// E_{alpha,beta}(z) for real z, alpha in (0, 2], beta > 0.
MittagLefflerValue mittag_leffler_eval(double alpha, double beta, double z);
double mittag_leffler(double alpha, double beta, double z);

/// Power series summed in 100-digit arithmetic.
double mittag_leffler_series(double alpha, double beta, double z);
/// Contour integral collapsed onto the negative axis; alpha in (0, 1),
/// beta < 1 + alpha, z < 0.
double mittag_leffler_integral(double alpha, double beta, double z);

enum class KernelKind { S, P, R, Exponential, Power };

/// Upper bound |R(t)| <= constant * e^(-rate t) or constant * t^(-exponent) for t >= 1.
struct DecayModel {
  bool exponential = true;
  double constant = 1.0;
  double rate = 1.0;
};

/// Scalar or diagonal resolvent kernels. The generator holds the diagonal of
/// a in A = -a; every entry is positive.
class ResolventFamily {
 public:
  static ResolventFamily scalar(KernelKind kind, double a, double gamma, double beta = 1.0);
  static ResolventFamily diagonal(KernelKind kind, const Vec& a, double gamma, double beta = 1.0);
  /// R(t) = e^(-rate t).
  static ResolventFamily exponential(double rate = 1.0);
  /// R(t) = (1 + t)^(-decay).
  static ResolventFamily power(double decay);

  /// Diagonal entries of the kernel at t > 0.
  Vec operator()(double t) const;
  Eigen::DiagonalMatrix<double, Eigen::Dynamic> matrix(double t) const;
  /// Operator norm: the largest entry in absolute value.
  double norm_at(double t) const;

  KernelKind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  double beta() const { return beta_; }
  const Vec& generator() const { return a_; }
  int dim() const { return static_cast<int>(a_.size()); }
  /// Exponent e with R(t) ~ t^e at 0; nonzero only for R_gamma, gamma < 1.
  double singular_exponent() const;
  DecayModel decay_model() const;
  std::string describe() const;

 private:
  ResolventFamily(KernelKind kind, Vec a, double gamma, double beta, double decay);
  KernelKind kind_;
  Vec a_;
  double gamma_;
  double beta_;
  double decay_;
};

/// Kernel values at t; R_gamma at t = 0 with gamma < 1 is a DomainError.
Vec resolvent_eval(const ResolventFamily& rf, double t);

struct DerivativeValue {
  Vec value;
  double tail_bound = 0.0;
  bool degraded = false;
};

/// d/dt [g_{1-gamma} * (u - u(0))](t); gamma = 1 gives du/dt.
DerivativeValue caputo_derivative(const VectorFunction& u, double gamma, double t);

/// d/dt int_{-inf}^t g_{1-gamma}(t - s) u(s) ds over a window of the given
/// length with a smooth cutoff; gamma = 1 gives -du/dt. tail_bound is the
/// change when the window is halved.
DerivativeValue weyl_derivative(const VectorFunction& u, double gamma, double t, double truncation = 400.0);

/// Sup over the grid of |S(t)| t^gamma, |S(t)| t^(gamma (1 - beta)) and
/// |P(t)| t^(2 gamma), with fitted tail exponents of |S| and |P|.
TestReport decay_check(const ResolventFamily& rf, const std::vector<double>& t_grid);

}  // namespace varlex
