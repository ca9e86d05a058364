#include "varlex/types.hpp"

#include <Eigen/Dense>

namespace varlex {

std::vector<double> uniform_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw ContractError("grid step must be positive");
  if (stop < start) throw ContractError("grid stop precedes start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = start + static_cast<double>(i) * step;
  return grid;
}

std::vector<double> geometric_grid(double start, double stop, std::size_t count) {
  if (!(start > 0.0) || !(stop > start) || count < 2) throw ContractError("geometric grid needs 0 < start < stop");
  std::vector<double> grid(count);
  const double ratio = std::log(stop / start) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) grid[i] = start * std::exp(ratio * static_cast<double>(i));
  grid.back() = stop;
  return grid;
}

std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<Eigen::Index>(std::min(x.size(), y.size()));
  if (n < 2) return {n == 1 ? y[0] : 0.0, 0.0};
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = x[i];
    rhs(i) = y[i];
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  return {coef(0), coef(1)};
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (x[i] > 0.0 && std::abs(y[i]) > 0.0 && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(std::abs(y[i])));
    }
  }
  if (lx.size() < 2) return std::nan("");
  return linear_fit(lx, ly).second;
}

}  // namespace varlex
