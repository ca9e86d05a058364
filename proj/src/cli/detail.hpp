#pragma once

#include "varlex/cli.hpp"

#include <cstdint>
#include <optional>

namespace varlex::cli::detail {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct Outcome {
  Json report = Json::object();
  std::optional<Table> table;
  bool csv_default = false;  // print the table rather than the report when no --out is given
};

Outcome cmd_norm(const Json& cfg);
Outcome cmd_modular(const Json& cfg);
Outcome cmd_stepanov(const Json& cfg);
Outcome cmd_aa_test(const Json& cfg);
Outcome cmd_ap_scan(const Json& cfg);
Outcome cmd_counterexample(const Json& cfg);
Outcome cmd_convolve(const Json& cfg);
Outcome cmd_solve_dfp(const Json& cfg);
Outcome cmd_ml(const Json& cfg);
Outcome cmd_compose_test(const Json& cfg);
Outcome cmd_exponent(const Json& cfg);
Outcome cmd_check(const Json& cfg, std::uint64_t seed);
Outcome cmd_fractional(const Json& cfg);
Outcome cmd_eval(const Json& cfg);
Outcome cmd_reproduce(const Json& cfg);

double counterexample_oracle(double lambda);

}  // namespace varlex::cli::detail
