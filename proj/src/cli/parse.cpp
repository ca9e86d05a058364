#include "varlex/cli.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace varlex::cli {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw ConfigError("field '" + field + "': " + message);
}

double parse_real(const std::string& text, const std::string& field) {
  std::string s = text;
  s.erase(0, s.find_first_not_of(" \t"));
  s.erase(s.find_last_not_of(" \t") + 1);
  if (s == "inf" || s == "infinity") return kInf;
  if (s == "-inf") return -kInf;
  if (s == "pi") return std::numbers::pi;
  if (s == "2pi") return 2.0 * std::numbers::pi;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(field, "'" + text + "' is not a number");
  }
  if (used != s.size()) fail(field, "'" + text + "' is not a number");
  return v;
}

double json_real(const Json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_real(j.get<std::string>(), field);
  fail(field, "expected a number");
}

struct Spec {
  std::string name;
  std::vector<double> params;
};

Spec split_spec(const Json& spec, const std::string& field) {
  Spec out;
  if (spec.is_string()) {
    const std::string s = spec.get<std::string>();
    const auto colon = s.find(':');
    out.name = s.substr(0, colon);
    if (colon != std::string::npos) {
      std::istringstream in(s.substr(colon + 1));
      std::string cell;
      while (std::getline(in, cell, ',')) out.params.push_back(parse_real(cell, field));
    }
  } else if (spec.is_object() && spec.contains("name")) {
    out.name = spec.at("name").get<std::string>();
    if (spec.contains("params")) {
      const Json& p = spec.at("params");
      if (p.is_array()) {
        for (const auto& x : p) out.params.push_back(json_real(x, field));
      } else {
        out.params.push_back(json_real(p, field));
      }
    }
  } else {
    fail(field, "expected a name string or an object with 'name'");
  }
  return out;
}

double param(const Spec& s, std::size_t i, double fallback, const std::string& field) {
  if (i < s.params.size()) return s.params[i];
  if (std::isnan(fallback)) fail(field, "'" + s.name + "' needs parameter " + std::to_string(i + 1));
  return fallback;
}

void max_params(const Spec& s, std::size_t n, const std::string& field) {
  if (s.params.size() > n) fail(field, "'" + s.name + "' takes at most " + std::to_string(n) + " parameters");
}

Interval parse_domain(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) fail(field, "domain must be [lo, hi]");
  const Interval d{json_real(j[0], field), json_real(j[1], field)};
  if (!(d.hi > d.lo)) fail(field, "domain must satisfy lo < hi");
  return d;
}

constexpr double kRequired = std::numeric_limits<double>::quiet_NaN();

}  // namespace

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

VectorFunction parse_function(const Json& spec, const std::string& field) {
  if (spec.is_number()) return VectorFunction::constant(spec.get<double>());
  if (spec.is_object()) {
    if (spec.contains("csv")) return VectorFunction::from_csv(spec.at("csv").get<std::string>());
    if (spec.contains("translate"))
      return translate(parse_function(spec.at("translate"), field), json_real(spec.value("by", Json(0.0)), field));
    if (spec.contains("reflect")) return reflect(parse_function(spec.at("reflect"), field));
    if (spec.contains("sign")) return sign_of(parse_function(spec.at("sign"), field));
    if (spec.contains("scale"))
      return json_real(spec.at("scale"), field) * parse_function(spec.at("of"), field);
    if (spec.contains("sum")) {
      const Json& terms = spec.at("sum");
      if (!terms.is_array() || terms.empty()) fail(field, "'sum' needs a nonempty array");
      VectorFunction f = parse_function(terms[0], field);
      for (std::size_t i = 1; i < terms.size(); ++i) f = f + parse_function(terms[i], field);
      return f;
    }
    if (spec.contains("product")) {
      const Json& terms = spec.at("product");
      if (!terms.is_array() || terms.size() != 2) fail(field, "'product' needs two functions");
      return product(parse_function(terms[0], field), parse_function(terms[1], field));
    }
  }
  const Spec s = split_spec(spec, field);
  const std::string& n = s.name;
  if (n == "sin" || n == "sine") {
    max_params(s, 3, field);
    return VectorFunction::sine(param(s, 0, 1.0, field), param(s, 1, 1.0, field), param(s, 2, 0.0, field));
  }
  if (n == "cos" || n == "cosine") {
    max_params(s, 2, field);
    return VectorFunction::cosine(param(s, 0, 1.0, field), param(s, 1, 1.0, field));
  }
  if (n == "two-sine") return max_params(s, 0, field), VectorFunction::two_sine();
  if (n == "sign-of-two-sine") return max_params(s, 0, field), VectorFunction::sign_of_two_sine();
  if (n == "exp-decay") return max_params(s, 1, field), VectorFunction::exp_decay(param(s, 0, 1.0, field));
  if (n == "rational-decay") return max_params(s, 0, field), VectorFunction::rational_decay();
  if (n == "constant") return max_params(s, 1, field), VectorFunction::constant(param(s, 0, kRequired, field));
  if (n == "zero") return max_params(s, 1, field), VectorFunction::zero(static_cast<int>(param(s, 0, 1.0, field)));
  if (n == "indicator" || n == "step") {
    max_params(s, 2, field);
    return VectorFunction::indicator(param(s, 0, kRequired, field), param(s, 1, kInf, field));
  }
  if (n == "aa-exemplar") return max_params(s, 0, field), VectorFunction::aa_exemplar();
  if (n == "identity") return max_params(s, 0, field), VectorFunction::identity();
  if (n == "power") return max_params(s, 1, field), VectorFunction::power(param(s, 0, kRequired, field));
  if (n == "rotation") return max_params(s, 1, field), VectorFunction::rotation(param(s, 0, 1.0, field));
  fail(field, "unknown function '" + n + "'");
}

ExponentFunction parse_exponent(const Json& spec, const std::string& field) {
  if (spec.is_number()) return ExponentFunction::constant(spec.get<double>());
  Interval domain{0.0, 1.0};
  if (spec.is_object()) {
    if (spec.contains("conjugate")) return conjugate(parse_exponent(spec.at("conjugate"), field));
    if (spec.contains("domain")) domain = parse_domain(spec.at("domain"), field);
    if (spec.contains("grid")) {
      std::vector<double> samples;
      for (const auto& x : spec.at("grid")) samples.push_back(json_real(x, field));
      return ExponentFunction::grid(std::move(samples), domain);
    }
  }
  if (spec.is_string()) {
    const std::string s = spec.get<std::string>();
    if (s.find(':') == std::string::npos && !s.empty() && (std::isdigit(s[0]) || s == "inf" || s == "infinity"))
      return ExponentFunction::constant(parse_real(s, field));
  }
  const Spec s = split_spec(spec, field);
  const std::string& n = s.name;
  if (n == "constant") return max_params(s, 1, field), ExponentFunction::constant(param(s, 0, kRequired, field), domain);
  if (n == "one-minus-log") return max_params(s, 0, field), ExponentFunction::one_minus_log(domain);
  if (n == "affine") {
    max_params(s, 2, field);
    return ExponentFunction::affine(param(s, 0, kRequired, field), param(s, 1, kRequired, field), domain);
  }
  if (n == "sinusoidal") {
    max_params(s, 4, field);
    return ExponentFunction::sinusoidal(param(s, 0, kRequired, field), param(s, 1, kRequired, field),
                                        param(s, 2, 1.0, field), param(s, 3, 0.0, field), domain);
  }
  fail(field, "unknown exponent '" + n + "'");
}

ResolventFamily parse_kernel(const Json& spec, const std::string& field) {
  std::string kind;
  Vec a(1);
  a << 1.0;
  double gamma = 1.0, beta = 1.0, rate = 1.0, decay = 2.0;
  if (spec.is_object() && spec.contains("kind")) {
    kind = spec.at("kind").get<std::string>();
    if (spec.contains("a")) {
      const Json& ja = spec.at("a");
      if (ja.is_array()) {
        if (ja.empty() || ja.size() > static_cast<std::size_t>(kMaxDim)) fail(field, "'a' needs 1 to 8 entries");
        a.resize(static_cast<Eigen::Index>(ja.size()));
        for (std::size_t i = 0; i < ja.size(); ++i) a[static_cast<Eigen::Index>(i)] = json_real(ja[i], field);
      } else {
        a[0] = json_real(ja, field);
      }
    }
    if (spec.contains("gamma")) gamma = json_real(spec.at("gamma"), field);
    if (spec.contains("beta")) beta = json_real(spec.at("beta"), field);
    if (spec.contains("rate")) rate = json_real(spec.at("rate"), field);
    if (spec.contains("decay")) decay = json_real(spec.at("decay"), field);
  } else {
    const Spec s = split_spec(spec, field);
    kind = s.name;
    if (kind == "exponential") {
      rate = param(s, 0, 1.0, field);
    } else if (kind == "power") {
      decay = param(s, 0, kRequired, field);
    } else {
      max_params(s, 3, field);
      a[0] = param(s, 0, 1.0, field);
      gamma = param(s, 1, 1.0, field);
      beta = param(s, 2, 1.0, field);
    }
  }
  if (kind == "exponential") return ResolventFamily::exponential(rate);
  if (kind == "power") return ResolventFamily::power(decay);
  KernelKind k;
  if (kind == "S") k = KernelKind::S;
  else if (kind == "P") k = KernelKind::P;
  else if (kind == "R") k = KernelKind::R;
  else fail(field, "unknown kernel kind '" + kind + "'");
  return a.size() == 1 ? ResolventFamily::scalar(k, a[0], gamma, beta) : ResolventFamily::diagonal(k, a, gamma, beta);
}

TwoParameterFunction parse_two_parameter(const Json& spec, const std::string& field) {
  if (spec.is_object() && spec.contains("time-only"))
    return TwoParameterFunction::time_only(parse_function(spec.at("time-only"), field));
  if (spec.is_number()) return TwoParameterFunction::constant(spec.get<double>());
  const Spec s = split_spec(spec, field);
  const std::string& n = s.name;
  if (n == "y") return max_params(s, 0, field), TwoParameterFunction::identity_in_y();
  if (n == "sin-y") return max_params(s, 0, field), TwoParameterFunction::sine_times_y();
  if (n == "two-sine-tanh") return max_params(s, 0, field), TwoParameterFunction::two_sine_tanh();
  if (n == "y-squared") return max_params(s, 1, field), TwoParameterFunction::y_squared(param(s, 0, 1.0, field));
  if (n == "constant") return max_params(s, 1, field), TwoParameterFunction::constant(param(s, 0, kRequired, field));
  if (n == "zero") return max_params(s, 0, field), TwoParameterFunction::constant(0.0);
  fail(field, "unknown two-parameter function '" + n + "'");
}

std::vector<double> parse_grid(const Json& spec, const std::string& field) {
  std::vector<double> out;
  if (spec.is_array()) {
    for (const auto& x : spec) out.push_back(json_real(x, field));
  } else if (spec.is_object() && spec.contains("geometric")) {
    const Json& g = spec.at("geometric");
    if (!g.is_array() || g.size() != 3) fail(field, "'geometric' needs [start, stop, count]");
    const double a = json_real(g[0], field), b = json_real(g[1], field), n = json_real(g[2], field);
    if (!(a > 0.0 && b > a && n >= 2.0)) fail(field, "'geometric' needs 0 < start < stop and count >= 2");
    out = geometric_grid(a, b, static_cast<std::size_t>(n));
  } else if (spec.is_string()) {
    std::vector<double> parts;
    std::istringstream in(spec.get<std::string>());
    std::string cell;
    while (std::getline(in, cell, ':')) parts.push_back(parse_real(cell, field));
    if (parts.size() == 1) return parts;
    if (parts.size() != 3) fail(field, "grid must be 'start:stop:step'");
    if (!(parts[2] > 0.0) || parts[1] < parts[0]) fail(field, "grid needs step > 0 and stop >= start");
    if ((parts[1] - parts[0]) / parts[2] > 1e7) fail(field, "grid has more than 1e7 points");
    out = uniform_grid(parts[0], parts[1], parts[2]);
  } else if (spec.is_number()) {
    out.push_back(spec.get<double>());
  } else {
    fail(field, "expected 'start:stop:step', an array or {\"geometric\": [...]}");
  }
  if (out.empty()) fail(field, "grid is empty");
  for (double x : out)
    if (!std::isfinite(x)) fail(field, "grid points must be finite");
  return out;
}

std::vector<double> parse_shifts(const Json& spec, const std::string& field, const VectorFunction* source) {
  if (spec.is_string()) {
    const std::string s = spec.get<std::string>();
    const auto colon = s.find(':');
    const std::string head = s.substr(0, colon);
    if (head == "periods" || head == "almost-periods" || head == "counterexample") {
      const Spec sp = split_spec(spec, field);
      if (head == "periods") {
        const int n = static_cast<int>(param(sp, 0, 10.0, field));
        const double period = param(sp, 1, 2.0 * std::numbers::pi, field);
        if (n < 1) fail(field, "periods count must be positive");
        std::vector<double> out;
        for (int k = 1; k <= n; ++k) out.push_back(period * k);
        return out;
      }
      if (head == "almost-periods") {
        const double count = param(sp, 0, 7.0, field), horizon = param(sp, 1, 8000.0, field);
        if (count < 1) fail(field, "almost-periods count must be positive");
        return almost_period_sequence(source && !source->discontinuous() ? *source : VectorFunction::two_sine(), static_cast<std::size_t>(count), horizon);
      }
      const double pairs = param(sp, 0, 6.0, field);
      if (pairs < 1) fail(field, "counterexample pairs must be positive");
      return counterexample_shifts(static_cast<std::size_t>(pairs));
    }
  }
  return parse_grid(spec, field);
}

}  // namespace varlex::cli
