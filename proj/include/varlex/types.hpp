#pragma once

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace varlex {

/// Point value of a function I -> R^d. Stack storage up to eight components.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 8, 1>;

inline constexpr int kMaxDim = 8;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed interval [lo, hi]; either end may be infinite.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  bool contains(const Interval& other) const { return other.lo >= lo && other.hi <= hi; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

  static Interval real_line() { return {-kInf, kInf}; }
  static Interval half_line() { return {0.0, kInf}; }
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Verdict { False, True, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

/// Structured verdict shared by the decay, ergodic, period and membership tests.
struct TestReport {
  Verdict verdict = Verdict::Inconclusive;
  double value = 0.0;           // headline quantity (final residual, final norm, ...)
  double tolerance = 0.0;
  double fitted_slope = 0.0;    // log-log tail slope where meaningful
  std::vector<double> abscissae;
  std::vector<double> series;
  std::vector<std::pair<std::string, double>> metrics;
  std::string note;

  double metric(const std::string& key, double fallback = std::nan("")) const {
    for (const auto& [k, v] : metrics)
      if (k == key) return v;
    return fallback;
  }
};

/// Uniform grid start, start+step, ..., inclusive of stop up to rounding.
std::vector<double> uniform_grid(double start, double stop, double step);

/// Geometrically spaced points between two positive bounds.
std::vector<double> geometric_grid(double start, double stop, std::size_t count);

/// Least-squares slope of log|y| against log x, skipping non-positive entries.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Least-squares line y = c0 + c1 x. Returns (c0, c1).
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace varlex
