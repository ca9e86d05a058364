#include "varlex/function.hpp"

#include <algorithm>
#include <fstream>
#include <numbers>
#include <sstream>

namespace varlex {

struct VectorFunction::Node {
  virtual ~Node() = default;
  virtual int dim() const = 0;
  virtual Interval domain() const = 0;
  virtual void eval(double t, Vec& out) const = 0;
  virtual double scalar(double t) const {
    Vec v;
    eval(t, v);
    return v(0);
  }
  virtual double norm(double t) const {
    Vec v;
    eval(t, v);
    return v.size() == 1 ? std::abs(v(0)) : v.norm();
  }
  /// Bound on |f(t)| before cancellation; differs from norm() for sums.
  virtual double magnitude(double t) const { return norm(t); }
  virtual bool discontinuous() const { return false; }
  virtual bool is_grid() const { return false; }
  virtual void breakpoints(double, double, std::vector<double>&) const {}
  virtual std::vector<double> singular_points() const { return {}; }
  virtual std::string describe() const = 0;
  /// Sign changes of the first component in (a, b).
  virtual std::vector<double> zeros(double a, double b) const { return sampled_zeros(a, b); }

  std::vector<double> sampled_zeros(double a, double b) const {
    std::vector<double> out;
    if (!(b > a)) return out;
    constexpr double h = 0.01;
    const auto n = static_cast<std::size_t>(std::ceil((b - a) / h));
    double x0 = a;
    double f0 = scalar(x0);
    for (std::size_t i = 1; i <= n; ++i) {
      const double x1 = i == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
      const double f1 = scalar(x1);
      if (f0 == 0.0 && x0 > a) {
        out.push_back(x0);
      } else if ((f0 < 0.0 && f1 > 0.0) || (f0 > 0.0 && f1 < 0.0)) {
        double lo = x0, hi = x1, flo = f0;
        for (int it = 0; it < 200 && hi - lo > 4e-16 * std::max(1.0, std::abs(lo)); ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = scalar(mid);
          if (fm == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        out.push_back(0.5 * (lo + hi));
      }
      x0 = x1;
      f0 = f1;
    }
    return out;
  }
};

namespace {

using Node = VectorFunction::Node;

void keep_inside(std::vector<double>& out, double a, double b, const std::vector<double>& pts) {
  for (double x : pts)
    if (x > a && x < b) out.push_back(x);
}

/// Solutions of w t + phase = c + k pi for t in (a, b).
std::vector<double> arithmetic_zeros(double w, double phase, double c, double a, double b) {
  std::vector<double> out;
  if (w == 0.0) return out;
  const double lo = std::min(w * a, w * b) + phase - c;
  const double hi = std::max(w * a, w * b) + phase - c;
  for (double k = std::ceil(lo / std::numbers::pi); k <= std::floor(hi / std::numbers::pi); k += 1.0) {
    const double t = (c + k * std::numbers::pi - phase) / w;
    if (t > a && t < b) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

class ScalarFormula final : public Node {
 public:
  using ZeroFn = std::function<std::vector<double>(double, double)>;
  ScalarFormula(std::string name, std::function<double(double)> f, Interval domain, std::vector<double> singular = {},
                ZeroFn zeros = {}, bool jumps = false)
      : name_(std::move(name)), f_(std::move(f)), domain_(domain), singular_(std::move(singular)),
        zeros_(std::move(zeros)), jumps_(jumps) {}
  int dim() const override { return 1; }
  Interval domain() const override { return domain_; }
  void eval(double t, Vec& out) const override {
    out.resize(1);
    out(0) = f_(t);
  }
  double scalar(double t) const override { return f_(t); }
  double norm(double t) const override { return std::abs(f_(t)); }
  bool discontinuous() const override { return jumps_; }
  std::vector<double> singular_points() const override { return singular_; }
  std::string describe() const override { return name_; }
  std::vector<double> zeros(double a, double b) const override {
    return zeros_ ? zeros_(a, b) : sampled_zeros(a, b);
  }
  void breakpoints(double a, double b, std::vector<double>& out) const override {
    if (jumps_ && jump_points_) keep_inside(out, a, b, jump_points_(a, b));
  }
  void set_jump_points(ZeroFn fn) { jump_points_ = std::move(fn); }

 private:
  std::string name_;
  std::function<double(double)> f_;
  Interval domain_;
  std::vector<double> singular_;
  ZeroFn zeros_;
  ZeroFn jump_points_;
  bool jumps_;
};

class ConstantNode final : public Node {
 public:
  explicit ConstantNode(Vec v) : v_(std::move(v)), norm_(v_.norm()) {}
  int dim() const override { return static_cast<int>(v_.size()); }
  Interval domain() const override { return Interval::real_line(); }
  void eval(double, Vec& out) const override { out = v_; }
  double scalar(double) const override { return v_(0); }
  double norm(double) const override { return norm_; }
  std::vector<double> zeros(double, double) const override { return {}; }
  std::string describe() const override {
    std::ostringstream os;
    os << "constant(";
    for (Eigen::Index i = 0; i < v_.size(); ++i) os << (i ? "," : "") << v_(i);
    os << ")";
    return os.str();
  }

 private:
  Vec v_;
  double norm_;
};

class RotationNode final : public Node {
 public:
  explicit RotationNode(double w) : w_(w) {}
  int dim() const override { return 2; }
  Interval domain() const override { return Interval::real_line(); }
  void eval(double t, Vec& out) const override {
    out.resize(2);
    out << std::cos(w_ * t), std::sin(w_ * t);
  }
  double norm(double) const override { return 1.0; }
  std::string describe() const override { return "rotation(" + std::to_string(w_) + ")"; }

 private:
  double w_;
};

class GridNode final : public Node {
 public:
  GridNode(double start, double step, std::vector<Vec> samples)
      : start_(start), step_(step), samples_(std::move(samples)) {
    if (!(step_ > 0.0)) throw ContractError("grid step must be positive");
    if (samples_.size() < 2) throw ContractError("grid needs at least two samples");
    dim_ = static_cast<int>(samples_.front().size());
    if (dim_ < 1 || dim_ > kMaxDim) throw ContractError("grid dimension out of range");
    for (const auto& s : samples_) {
      if (s.size() != dim_) throw ContractError("grid samples have inconsistent dimension");
      if (!s.allFinite()) throw ContractError("grid samples must be finite");
    }
  }
  int dim() const override { return dim_; }
  Interval domain() const override { return {start_, end()}; }
  double end() const { return start_ + step_ * static_cast<double>(samples_.size() - 1); }
  bool is_grid() const override { return true; }
  void eval(double t, Vec& out) const override {
    const auto n = samples_.size();
    double pos = (t - start_) / step_;
    pos = std::clamp(pos, 0.0, static_cast<double>(n - 1));
    auto i = static_cast<std::size_t>(pos);
    if (i >= n - 1) i = n - 2;
    const double w = pos - static_cast<double>(i);
    out = (1.0 - w) * samples_[i] + w * samples_[i + 1];
  }
  void breakpoints(double a, double b, std::vector<double>& out) const override {
    const double first = std::ceil((a - start_) / step_);
    for (double k = std::max(first, 0.0); k < static_cast<double>(samples_.size()); k += 1.0) {
      const double x = start_ + k * step_;
      if (x >= b) break;
      if (x > a) out.push_back(x);
    }
  }
  std::string describe() const override {
    std::ostringstream os;
    os << "grid(" << start_ << ":" << end() << ":" << step_ << ")";
    return os.str();
  }
  double start() const { return start_; }
  double step() const { return step_; }
  const std::vector<Vec>& samples() const { return samples_; }

 private:
  double start_, step_;
  std::vector<Vec> samples_;
  int dim_ = 1;
};

class TranslateNode final : public Node {
 public:
  TranslateNode(std::shared_ptr<const Node> base, double tau) : base_(std::move(base)), tau_(tau) {}
  int dim() const override { return base_->dim(); }
  Interval domain() const override {
    const auto d = base_->domain();
    return {d.lo - tau_, d.hi - tau_};
  }
  void eval(double t, Vec& out) const override { base_->eval(t + tau_, out); }
  double scalar(double t) const override { return base_->scalar(t + tau_); }
  double norm(double t) const override { return base_->norm(t + tau_); }
  double magnitude(double t) const override { return base_->magnitude(t + tau_); }
  bool discontinuous() const override { return base_->discontinuous(); }
  void breakpoints(double a, double b, std::vector<double>& out) const override {
    std::vector<double> inner;
    base_->breakpoints(a + tau_, b + tau_, inner);
    for (double x : inner) out.push_back(x - tau_);
  }
  std::vector<double> zeros(double a, double b) const override {
    auto z = base_->zeros(a + tau_, b + tau_);
    for (double& x : z) x -= tau_;
    return z;
  }
  std::vector<double> singular_points() const override {
    auto s = base_->singular_points();
    for (double& x : s) x -= tau_;
    return s;
  }
  std::string describe() const override {
    std::ostringstream os;
    os << "translate(" << base_->describe() << "," << tau_ << ")";
    return os.str();
  }
  const std::shared_ptr<const Node>& base() const { return base_; }
  double tau() const { return tau_; }

 private:
  std::shared_ptr<const Node> base_;
  double tau_;
};

class ReflectNode final : public Node {
 public:
  explicit ReflectNode(std::shared_ptr<const Node> base) : base_(std::move(base)) {}
  int dim() const override { return base_->dim(); }
  Interval domain() const override {
    const auto d = base_->domain();
    return {-d.hi, -d.lo};
  }
  void eval(double t, Vec& out) const override { base_->eval(-t, out); }
  double scalar(double t) const override { return base_->scalar(-t); }
  double norm(double t) const override { return base_->norm(-t); }
  double magnitude(double t) const override { return base_->magnitude(-t); }
  bool discontinuous() const override { return base_->discontinuous(); }
  void breakpoints(double a, double b, std::vector<double>& out) const override {
    std::vector<double> inner;
    base_->breakpoints(-b, -a, inner);
    for (double x : inner) out.push_back(-x);
  }
  std::vector<double> zeros(double a, double b) const override {
    auto z = base_->zeros(-b, -a);
    for (double& x : z) x = -x;
    std::reverse(z.begin(), z.end());
    return z;
  }
  std::vector<double> singular_points() const override {
    auto s = base_->singular_points();
    for (double& x : s) x = -x;
    return s;
  }
  std::string describe() const override { return "reflect(" + base_->describe() + ")"; }
  const std::shared_ptr<const Node>& base() const { return base_; }

 private:
  std::shared_ptr<const Node> base_;
};

class SignNode final : public Node {
 public:
  explicit SignNode(std::shared_ptr<const Node> base) : base_(std::move(base)) {}
  int dim() const override { return 1; }
  Interval domain() const override { return base_->domain(); }
  double scalar(double t) const override {
    const double v = base_->scalar(t);
    return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
  }
  void eval(double t, Vec& out) const override {
    out.resize(1);
    out(0) = scalar(t);
  }
  double norm(double t) const override { return std::abs(scalar(t)); }
  bool discontinuous() const override { return true; }
  void breakpoints(double a, double b, std::vector<double>& out) const override {
    keep_inside(out, a, b, base_->zeros(a, b));
    base_->breakpoints(a, b, out);
  }
  std::vector<double> zeros(double a, double b) const override { return base_->zeros(a, b); }
  std::string describe() const override { return "sign(" + base_->describe() + ")"; }

 private:
  std::shared_ptr<const Node> base_;
};

class ComposeNode final : public Node {
 public:
  ComposeNode(TwoParameterFunction f, std::shared_ptr<const Node> base) : f_(std::move(f)), base_(std::move(base)) {}
  int dim() const override { return 1; }
  Interval domain() const override { return base_->domain(); }
  double scalar(double t) const override { return f_(t, base_->scalar(t)); }
  void eval(double t, Vec& out) const override {
    out.resize(1);
    out(0) = scalar(t);
  }
  double norm(double t) const override { return std::abs(scalar(t)); }
  bool discontinuous() const override { return base_->discontinuous(); }
  void breakpoints(double a, double b, std::vector<double>& out) const override { base_->breakpoints(a, b, out); }
  std::vector<double> singular_points() const override { return base_->singular_points(); }
  std::string describe() const override { return f_.describe() + " o " + base_->describe(); }

 private:
  TwoParameterFunction f_;
  std::shared_ptr<const Node> base_;
};

Interval intersect(const Interval& a, const Interval& b) { return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)}; }

class CombinationNode final : public Node {
 public:
  CombinationNode(double a, std::shared_ptr<const Node> f, double b, std::shared_ptr<const Node> g)
      : a_(a), b_(b), f_(std::move(f)), g_(std::move(g)) {
    if (f_->dim() != g_->dim()) throw ContractError("cannot combine functions of different dimension");
  }
  int dim() const override { return f_->dim(); }
  Interval domain() const override { return intersect(f_->domain(), g_->domain()); }
  void eval(double t, Vec& out) const override {
    Vec u, v;
    f_->eval(t, u);
    g_->eval(t, v);
    out = a_ * u + b_ * v;
  }
  double scalar(double t) const override { return a_ * f_->scalar(t) + b_ * g_->scalar(t); }
  double norm(double t) const override {
    if (dim() == 1) return std::abs(scalar(t));
    return Node::norm(t);
  }
  double magnitude(double t) const override {
    return std::abs(a_) * f_->magnitude(t) + std::abs(b_) * g_->magnitude(t);
  }
  bool discontinuous() const override { return f_->discontinuous() || g_->discontinuous(); }
  void breakpoints(double a, double b, std::vector<double>& out) const override {
    f_->breakpoints(a, b, out);
    g_->breakpoints(a, b, out);
  }
  std::vector<double> singular_points() const override {
    auto s = f_->singular_points();
    auto t = g_->singular_points();
    s.insert(s.end(), t.begin(), t.end());
    return s;
  }
  std::string describe() const override {
    std::ostringstream os;
    os << a_ << "*" << f_->describe() << "+" << b_ << "*" << g_->describe();
    return os.str();
  }

 private:
  double a_, b_;
  std::shared_ptr<const Node> f_, g_;
};

class ProductNode final : public Node {
 public:
  ProductNode(std::shared_ptr<const Node> u, std::shared_ptr<const Node> v) : u_(std::move(u)), v_(std::move(v)) {
    if (v_->dim() != 1) throw ContractError("product needs a scalar second factor");
  }
  int dim() const override { return u_->dim(); }
  Interval domain() const override { return intersect(u_->domain(), v_->domain()); }
  void eval(double t, Vec& out) const override {
    u_->eval(t, out);
    out *= v_->scalar(t);
  }
  double scalar(double t) const override { return u_->scalar(t) * v_->scalar(t); }
  double norm(double t) const override { return u_->norm(t) * std::abs(v_->scalar(t)); }
  double magnitude(double t) const override { return u_->magnitude(t) * v_->magnitude(t); }
  bool discontinuous() const override { return u_->discontinuous() || v_->discontinuous(); }
  void breakpoints(double a, double b, std::vector<double>& out) const override {
    u_->breakpoints(a, b, out);
    v_->breakpoints(a, b, out);
  }
  std::vector<double> singular_points() const override {
    auto s = u_->singular_points();
    auto t = v_->singular_points();
    s.insert(s.end(), t.begin(), t.end());
    return s;
  }
  std::string describe() const override { return u_->describe() + "*" + v_->describe(); }

 private:
  std::shared_ptr<const Node> u_, v_;
};

class ShiftAverageNode final : public Node {
 public:
  ShiftAverageNode(std::shared_ptr<const Node> f, std::vector<double> shifts)
      : f_(std::move(f)), shifts_(std::move(shifts)) {
    if (shifts_.empty()) throw ContractError("shift average needs at least one shift");
  }
  int dim() const override { return f_->dim(); }
  Interval domain() const override {
    const auto d = f_->domain();
    const auto [lo, hi] = std::minmax_element(shifts_.begin(), shifts_.end());
    return {d.lo - *lo, d.hi - *hi};
  }
  void eval(double t, Vec& out) const override {
    Vec v;
    f_->eval(t + shifts_[0], out);
    for (std::size_t i = 1; i < shifts_.size(); ++i) {
      f_->eval(t + shifts_[i], v);
      out += v;
    }
    out /= static_cast<double>(shifts_.size());
  }
  double scalar(double t) const override {
    double s = 0.0;
    for (double sh : shifts_) s += f_->scalar(t + sh);
    return s / static_cast<double>(shifts_.size());
  }
  double norm(double t) const override { return dim() == 1 ? std::abs(scalar(t)) : Node::norm(t); }
  double magnitude(double t) const override {
    double s = 0.0;
    for (double sh : shifts_) s += f_->magnitude(t + sh);
    return s / static_cast<double>(shifts_.size());
  }
  bool discontinuous() const override { return f_->discontinuous(); }
  void breakpoints(double a, double b, std::vector<double>& out) const override {
    for (double sh : shifts_) {
      std::vector<double> inner;
      f_->breakpoints(a + sh, b + sh, inner);
      for (double x : inner) out.push_back(x - sh);
    }
  }
  std::string describe() const override {
    return "shift-average(" + f_->describe() + "," + std::to_string(shifts_.size()) + ")";
  }

 private:
  std::shared_ptr<const Node> f_;
  std::vector<double> shifts_;
};

std::vector<double> two_sine_zeros(double a, double b) {
  // sin t + sin(sqrt2 t) = 2 sin((1+sqrt2) t / 2) cos((sqrt2-1) t / 2)
  auto z = arithmetic_zeros(0.5 * (1.0 + std::numbers::sqrt2), 0.0, 0.0, a, b);
  auto w = arithmetic_zeros(0.5 * (std::numbers::sqrt2 - 1.0), 0.0, std::numbers::pi / 2, a, b);
  z.insert(z.end(), w.begin(), w.end());
  std::sort(z.begin(), z.end());
  return z;
}

double two_sine_value(double t) { return std::sin(t) + std::sin(std::numbers::sqrt2 * t); }

}  // namespace

VectorFunction::VectorFunction(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

VectorFunction VectorFunction::sine(double frequency, double amplitude, double phase) {
  std::ostringstream os;
  if (frequency == 1.0 && amplitude == 1.0 && phase == 0.0) os << "sin";
  else os << "sin(" << frequency << "," << amplitude << "," << phase << ")";
  return VectorFunction(std::make_shared<ScalarFormula>(
      os.str(), [=](double t) { return amplitude * std::sin(frequency * t + phase); }, Interval::real_line(),
      std::vector<double>{},
      [=](double a, double b) { return arithmetic_zeros(frequency, phase, 0.0, a, b); }));
}

VectorFunction VectorFunction::cosine(double frequency, double amplitude) {
  std::ostringstream os;
  if (frequency == 1.0 && amplitude == 1.0) os << "cos";
  else os << "cos(" << frequency << "," << amplitude << ")";
  return VectorFunction(std::make_shared<ScalarFormula>(
      os.str(), [=](double t) { return amplitude * std::cos(frequency * t); }, Interval::real_line(),
      std::vector<double>{},
      [=](double a, double b) { return arithmetic_zeros(frequency, 0.0, std::numbers::pi / 2, a, b); }));
}

VectorFunction VectorFunction::two_sine() {
  return VectorFunction(std::make_shared<ScalarFormula>("two-sine", two_sine_value, Interval::real_line(),
                                                        std::vector<double>{}, two_sine_zeros));
}

VectorFunction VectorFunction::sign_of_two_sine() { return sign_of(two_sine()); }

VectorFunction VectorFunction::exp_decay(double rate) {
  return VectorFunction(std::make_shared<ScalarFormula>(
      "exp-decay(" + std::to_string(rate) + ")", [rate](double t) { return std::exp(-rate * t); },
      Interval::real_line(), std::vector<double>{}, [](double, double) { return std::vector<double>{}; }));
}

VectorFunction VectorFunction::rational_decay() {
  return VectorFunction(std::make_shared<ScalarFormula>(
      "rational-decay", [](double t) { return 1.0 / (1.0 + t * t); }, Interval::real_line(), std::vector<double>{},
      [](double, double) { return std::vector<double>{}; }));
}

VectorFunction VectorFunction::constant(double value) {
  Vec v(1);
  v(0) = value;
  return constant(v);
}

VectorFunction VectorFunction::constant(const Vec& value) {
  if (value.size() < 1 || value.size() > kMaxDim) throw ContractError("constant dimension out of range");
  return VectorFunction(std::make_shared<ConstantNode>(value));
}

VectorFunction VectorFunction::zero(int dim) {
  if (dim < 1 || dim > kMaxDim) throw ContractError("dimension out of range");
  return constant(Vec::Zero(dim));
}

VectorFunction VectorFunction::indicator(double lo, double hi) {
  if (!(hi > lo)) throw ContractError("indicator needs lo < hi");
  auto node = std::make_shared<ScalarFormula>(
      "indicator(" + std::to_string(lo) + "," + std::to_string(hi) + ")",
      [=](double t) { return t >= lo && t <= hi ? 1.0 : 0.0; }, Interval::real_line(), std::vector<double>{},
      [](double, double) { return std::vector<double>{}; }, true);
  node->set_jump_points([=](double, double) { return std::vector<double>{lo, hi}; });
  return VectorFunction(node);
}

VectorFunction VectorFunction::aa_exemplar() {
  return VectorFunction(std::make_shared<ScalarFormula>(
      "aa-exemplar",
      [](double t) { return std::sin(1.0 / (2.0 + std::cos(t) + std::cos(std::numbers::sqrt2 * t))); },
      Interval::real_line()));
}

VectorFunction VectorFunction::identity() {
  return VectorFunction(std::make_shared<ScalarFormula>(
      "identity", [](double t) { return t; }, Interval::real_line(), std::vector<double>{},
      [](double a, double b) { return a < 0.0 && b > 0.0 ? std::vector<double>{0.0} : std::vector<double>{}; }));
}

VectorFunction VectorFunction::power(double exponent) {
  std::vector<double> singular;
  if (exponent < 0.0) singular.push_back(0.0);
  return VectorFunction(std::make_shared<ScalarFormula>(
      "power(" + std::to_string(exponent) + ")", [exponent](double t) { return std::pow(t, exponent); },
      Interval::half_line(), singular, [](double, double) { return std::vector<double>{}; }));
}

VectorFunction VectorFunction::fourier(double a0, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs,
                                       double period) {
  if (!(period > 0.0)) throw ContractError("fourier period must be positive");
  const double w = 2.0 * std::numbers::pi / period;
  return VectorFunction(std::make_shared<ScalarFormula>(
      "fourier", [=](double t) {
        double s = a0;
        for (std::size_t k = 0; k < cos_coeffs.size(); ++k) s += cos_coeffs[k] * std::cos(w * (k + 1.0) * t);
        for (std::size_t k = 0; k < sin_coeffs.size(); ++k) s += sin_coeffs[k] * std::sin(w * (k + 1.0) * t);
        return s;
      },
      Interval::real_line()));
}

VectorFunction VectorFunction::rotation(double frequency) {
  return VectorFunction(std::make_shared<RotationNode>(frequency));
}

VectorFunction VectorFunction::grid(double start, double step, std::vector<Vec> samples) {
  return VectorFunction(std::make_shared<GridNode>(start, step, std::move(samples)));
}

VectorFunction VectorFunction::grid(double start, double step, const std::vector<double>& samples) {
  std::vector<Vec> v;
  v.reserve(samples.size());
  for (double s : samples) {
    Vec x(1);
    x(0) = s;
    v.push_back(x);
  }
  return grid(start, step, std::move(v));
}

VectorFunction VectorFunction::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open CSV file " + path);
  std::string line;
  if (!std::getline(in, line)) throw ContractError("CSV file " + path + " is empty");
  {
    std::istringstream hs(line);
    std::string first;
    std::getline(hs, first, ',');
    first.erase(std::remove_if(first.begin(), first.end(), ::isspace), first.end());
    if (first != "t") throw ContractError("CSV header must start with column 't' in " + path);
  }
  std::vector<double> ts;
  std::vector<Vec> samples;
  int dim = -1;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ContractError("non-numeric CSV cell '" + cell + "' in " + path);
      }
    }
    if (row.size() < 2) throw ContractError("CSV rows need t and at least one value");
    if (dim < 0) dim = static_cast<int>(row.size()) - 1;
    if (static_cast<int>(row.size()) - 1 != dim) throw ContractError("ragged CSV row in " + path);
    if (dim > kMaxDim) throw ContractError("CSV has too many value columns");
    ts.push_back(row[0]);
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = row[i + 1];
    samples.push_back(v);
  }
  if (ts.size() < 2) throw ContractError("CSV needs at least two rows");
  const double step = (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (std::abs((ts[i] - ts[i - 1]) - step) > 1e-9 * std::max(1.0, std::abs(step)))
      throw ContractError("CSV t column must be uniformly spaced in " + path);
  return grid(ts.front(), step, std::move(samples));
}

VectorFunction VectorFunction::scalar(std::string name, std::function<double(double)> formula, Interval domain,
                                      std::vector<double> singular_points) {
  return VectorFunction(
      std::make_shared<ScalarFormula>(std::move(name), std::move(formula), domain, std::move(singular_points)));
}

Vec VectorFunction::operator()(double t) const {
  if (!node_->domain().contains(t)) {
    std::ostringstream os;
    os << "t=" << t << " outside domain of " << node_->describe();
    throw DomainError(os.str());
  }
  Vec out;
  node_->eval(t, out);
  return out;
}

double VectorFunction::norm_at(double t) const { return node_->norm(t); }
double VectorFunction::magnitude_at(double t) const { return node_->magnitude(t); }
double VectorFunction::scalar_at(double t) const { return node_->scalar(t); }
int VectorFunction::dim() const { return node_->dim(); }
Interval VectorFunction::domain() const { return node_->domain(); }
bool VectorFunction::discontinuous() const { return node_->discontinuous(); }
bool VectorFunction::is_grid() const { return node_->is_grid(); }
std::string VectorFunction::describe() const { return node_->describe(); }
std::vector<double> VectorFunction::singular_points() const { return node_->singular_points(); }

std::vector<double> VectorFunction::breakpoints(double a, double b) const {
  std::vector<double> out;
  node_->breakpoints(a, b, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> VectorFunction::zeros(double a, double b) const { return node_->zeros(a, b); }

double VectorFunction::sup_norm(double a, double b, std::size_t samples) const {
  samples = std::max<std::size_t>(samples, 2);
  double s = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = a + (b - a) * static_cast<double>(i) / static_cast<double>(samples - 1);
    const double v = node_->norm(t);
    if (std::isfinite(v)) s = std::max(s, v);
  }
  for (double t : breakpoints(a, b)) {
    const double v = node_->norm(t);
    if (std::isfinite(v)) s = std::max(s, v);
  }
  return s;
}

VectorFunction translate(const VectorFunction& f, double tau) {
  const auto& node = f.node();
  if (const auto* g = dynamic_cast<const GridNode*>(node.get()))
    return VectorFunction(std::make_shared<GridNode>(g->start() - tau, g->step(), g->samples()));
  if (const auto* t = dynamic_cast<const TranslateNode*>(node.get())) {
    const double total = t->tau() + tau;
    if (total == 0.0) return VectorFunction(t->base());
    return VectorFunction(std::make_shared<TranslateNode>(t->base(), total));
  }
  if (tau == 0.0) return f;
  return VectorFunction(std::make_shared<TranslateNode>(node, tau));
}

VectorFunction reflect(const VectorFunction& f) {
  const auto& node = f.node();
  if (const auto* r = dynamic_cast<const ReflectNode*>(node.get())) return VectorFunction(r->base());
  if (const auto* g = dynamic_cast<const GridNode*>(node.get())) {
    const double lo = g->start();
    const double hi = g->end();
    if (std::abs(lo + hi) > 1e-9 * std::max(1.0, hi - lo)) {
      std::ostringstream os;
      os << "cannot reflect grid on [" << lo << "," << hi << "]: not symmetric about 0";
      throw DomainError(os.str());
    }
    std::vector<Vec> rev(g->samples().rbegin(), g->samples().rend());
    return VectorFunction(std::make_shared<GridNode>(-hi, g->step(), std::move(rev)));
  }
  return VectorFunction(std::make_shared<ReflectNode>(node));
}

VectorFunction sign_of(const VectorFunction& f) {
  if (f.dim() != 1) throw ContractError("sign_of requires a scalar function (d = 1)");
  return VectorFunction(std::make_shared<SignNode>(f.node()));
}

VectorFunction compose_pointwise(const TwoParameterFunction& f, const VectorFunction& u) {
  if (u.dim() != 1) throw ContractError("composition needs a scalar inner function (d = 1)");
  return VectorFunction(std::make_shared<ComposeNode>(f, u.node()));
}

VectorFunction linear_combination(double a, const VectorFunction& f, double b, const VectorFunction& g) {
  return VectorFunction(std::make_shared<CombinationNode>(a, f.node(), b, g.node()));
}

VectorFunction operator+(const VectorFunction& f, const VectorFunction& g) { return linear_combination(1.0, f, 1.0, g); }
VectorFunction operator-(const VectorFunction& f, const VectorFunction& g) {
  return linear_combination(1.0, f, -1.0, g);
}
VectorFunction operator*(double c, const VectorFunction& f) {
  return linear_combination(c, f, 0.0, VectorFunction::zero(f.dim()));
}

VectorFunction product(const VectorFunction& u, const VectorFunction& v) {
  return VectorFunction(std::make_shared<ProductNode>(u.node(), v.node()));
}

VectorFunction shift_average(const VectorFunction& f, std::vector<double> shifts) {
  return VectorFunction(std::make_shared<ShiftAverageNode>(f.node(), std::move(shifts)));
}

VectorFunction sample_on_grid(const VectorFunction& f, double a, double b, double step) {
  const auto ts = uniform_grid(a, b, step);
  std::vector<Vec> samples;
  samples.reserve(ts.size());
  for (double t : ts) samples.push_back(f(t));
  return VectorFunction::grid(a, step, std::move(samples));
}

// ---------------------------------------------------------------------------

TwoParameterFunction::TwoParameterFunction(std::string name, Formula formula, Interval y_range,
                                           std::optional<VectorFunction> lipschitz)
    : name_(std::move(name)), formula_(std::move(formula)), y_range_(y_range), lipschitz_(std::move(lipschitz)) {}

TwoParameterFunction TwoParameterFunction::identity_in_y() {
  return {"y", [](double, double y) { return y; }, Interval::real_line(), VectorFunction::constant(1.0)};
}

TwoParameterFunction TwoParameterFunction::sine_times_y() {
  return {"sin(t)*y", [](double t, double y) { return std::sin(t) * y; }, Interval::real_line(),
          VectorFunction::scalar("|sin|", [](double t) { return std::abs(std::sin(t)); })};
}

TwoParameterFunction TwoParameterFunction::two_sine_tanh() {
  return {"two-sine(t)*tanh(y)", [](double t, double y) { return two_sine_value(t) * std::tanh(y); },
          Interval::real_line(),
          VectorFunction::scalar("|two-sine|", [](double t) { return std::abs(two_sine_value(t)); })};
}

TwoParameterFunction TwoParameterFunction::y_squared(double bound) {
  return {"y^2", [](double, double y) { return y * y; }, Interval{-bound, bound},
          VectorFunction::constant(2.0 * bound)};
}

TwoParameterFunction TwoParameterFunction::constant(double c) {
  return {"constant(" + std::to_string(c) + ")", [c](double, double) { return c; }, Interval::real_line(),
          VectorFunction::constant(0.0)};
}

TwoParameterFunction TwoParameterFunction::time_only(const VectorFunction& w) {
  if (w.dim() != 1) throw ContractError("time-only perturbation must be scalar");
  return {"time(" + w.describe() + ")", [w](double t, double) { return w.scalar_at(t); }, Interval::real_line(),
          VectorFunction::constant(0.0)};
}

TwoParameterFunction TwoParameterFunction::custom(std::string name, Formula formula, Interval y_range,
                                                  std::optional<VectorFunction> lipschitz) {
  return {std::move(name), std::move(formula), y_range, std::move(lipschitz)};
}

double TwoParameterFunction::operator()(double t, double y) const {
  if (!y_range_.contains(y)) {
    std::ostringstream os;
    os << "y=" << y << " outside declared range of " << name_;
    throw DomainError(os.str());
  }
  return formula_(t, y);
}

TwoParameterFunction operator+(const TwoParameterFunction& a, const TwoParameterFunction& b) {
  std::optional<VectorFunction> lip;
  if (a.lipschitz_ && b.lipschitz_) lip = *a.lipschitz_ + *b.lipschitz_;
  const Interval range{std::max(a.y_range_.lo, b.y_range_.lo), std::min(a.y_range_.hi, b.y_range_.hi)};
  return {a.name_ + "+" + b.name_, [fa = a.formula_, fb = b.formula_](double t, double y) { return fa(t, y) + fb(t, y); },
          range, lip};
}

}  // namespace varlex
