#pragma once

#include "varlex/composition.hpp"
#include "varlex/convolution.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace varlex::cli {

using Json = nlohmann::ordered_json;

/// Bad configuration: unknown names, missing fields, malformed grids. Exit code 2.
class ConfigError : public ContractError {
 public:
  using ContractError::ContractError;
};

struct CommandInfo {
  std::string name;
  std::string summary;
  std::vector<std::string> operations;  // library operations the command reaches
};

/// Every command with the operations it dispatches to.
const std::vector<CommandInfo>& dispatch_table();

/// Function spec: "sin", "sin:2", "constant:3", {"name": ..., "params": [...]},
/// {"csv": path}, or a combinator {"translate": f, "by": tau}, {"reflect": f},
/// {"sign": f}, {"sum": [f, g]}, {"scale": c, "of": f}.
VectorFunction parse_function(const Json& spec, const std::string& field);

/// Exponent spec: a number, "inf", "one-minus-log", "affine:a,b",
/// "sinusoidal:mean,amp,freq[,phase]", {"name": ..., "params": [...], "domain": [a, b]},
/// {"grid": [...]} or {"conjugate": spec}.
ExponentFunction parse_exponent(const Json& spec, const std::string& field);

/// Kernel spec: "exponential:rate", "power:decay", "S:a,gamma[,beta]" (also P, R),
/// or {"kind": ..., "a": number or array, "gamma": ..., "beta": ..., "rate": ..., "decay": ...}.
ResolventFamily parse_kernel(const Json& spec, const std::string& field);

/// Two-parameter spec: "y", "sin-y", "two-sine-tanh", "y-squared:bound", "constant:c",
/// or {"time-only": function spec}.
TwoParameterFunction parse_two_parameter(const Json& spec, const std::string& field);

/// Grid spec: "a:b:step", an array of numbers, or {"geometric": [a, b, count]}.
std::vector<double> parse_grid(const Json& spec, const std::string& field);

/// Shift spec: an array, "periods:n" (2 pi k), "almost-periods:count,horizon",
/// "counterexample:pairs", or a grid spec. Almost periods are those of source
/// (two-sine when source is null or discontinuous).
std::vector<double> parse_shifts(const Json& spec, const std::string& field, const VectorFunction* source = nullptr);

/// Finite doubles as numbers; inf, -inf and nan as strings.
Json number(double x);

/// Runs the command line; returns the process exit code
/// (0 completed, 2 configuration error, 3 numerical failure).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Named reproduction recipes.
const std::vector<std::string>& reproduce_ids();

}  // namespace varlex::cli
