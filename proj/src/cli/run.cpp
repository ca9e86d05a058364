#include "varlex/cli.hpp"
#include "detail.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>

namespace varlex::cli {

namespace {

using detail::Outcome;
using detail::Table;

struct Command {
  CommandInfo info;
  std::vector<std::string> keys;  // config keys exposed as --flags
  std::function<Outcome(const Json&, std::uint64_t)> handler;
};

template <Outcome (*F)(const Json&)>
Outcome plain(const Json& cfg, std::uint64_t) {
  return F(cfg);
}

const std::vector<Command>& commands() {
  static const std::vector<Command> table = {
      {{"norm", "Luxemburg norm of a function on a domain", {"luxemburg_norm", "essential_bounds", "eval"}},
       {"function", "exponent", "omega", "rel_tol"},
       plain<detail::cmd_norm>},
      {{"modular", "Modular with its refinement trace", {"modular", "phi"}},
       {"function", "exponent", "omega", "scale"},
       plain<detail::cmd_modular>},
      {{"stepanov", "Window norms t -> |f(. + t)| over [0, 1]", {"window_norm", "stepanov_norm"}},
       {"function", "exponent", "grid", "refine"},
       plain<detail::cmd_stepanov>},
      {{"aa-test",
        "Shift, decay, ergodic-mean and asymptotic tests",
        {"bochner_shift_test", "c0_decay_test", "ergodic_mean_test", "asymptotic_decompose", "translate"}},
       {"test", "function", "exponent", "exponents", "shifts", "grid", "tolerance", "tail_fraction", "horizon", "candidate", "r_max",
        "decay_tolerance"},
       plain<detail::cmd_aa_test>},
      {{"ap-scan", "Bohr epsilon-period scan", {"epsilon_period_scan"}},
       {"function", "exponent", "eps", "length", "horizon", "step", "sequence_count", "sequence_horizon"},
       plain<detail::cmd_ap_scan>},
      {{"counterexample", "Modular of the sign counterexample differences", {"counterexample_divergence", "sign_of"}},
       {"lambda", "pair", "pairs"},
       plain<detail::cmd_counterexample>},
      {{"convolve",
        "Infinite and finite convolutions, tail constants and m_t",
        {"line_convolution", "finite_convolution", "tail_constant_M", "m_t_series", "ergodic_component_classify",
         "reflect"}},
       {"mode", "kernel", "exponent", "g", "f", "w", "grid", "K", "tail_tolerance", "r1", "r2", "decay_tolerance"},
       plain<detail::cmd_convolve>},
      {{"solve-dfp", "Mild solution of the fractional relaxation problem", {"solve_dfp"}},
       {"kernel", "gamma", "a", "beta", "x0", "f", "grid"},
       plain<detail::cmd_solve_dfp>},
      {{"ml", "Mittag-Leffler function E_{alpha,beta}(z)", {"mittag_leffler"}},
       {"alpha", "beta", "z"},
       plain<detail::cmd_ml>},
      {{"compose-test",
        "Composition membership and asymptotic composition tests",
        {"compose", "lipschitz_window_check", "composition_membership_test", "asymptotic_composition_test"}},
       {"mode", "f", "u", "p", "r", "grid", "shifts", "tolerance", "tail_fraction", "y_samples", "q_part", "omega",
        "horizon"},
       plain<detail::cmd_compose_test>},
      {{"exponent", "Exponent values, bounds, classes, conjugate and composition exponent",
        {"eval", "essential_bounds", "conjugate", "composition_exponent"}},
       {"exponent", "x", "r"},
       plain<detail::cmd_exponent>},
      {{"check", "Randomized Holder and embedding inequality checks", {"holder_check", "embedding_check"}},
       {"kind", "cases"},
       detail::cmd_check},
      {{"fractional", "Caputo and Weyl derivatives, kernels and decay estimates",
        {"caputo_derivative", "weyl_derivative", "resolvent_eval", "decay_check", "g_kernel"}},
       {"op", "function", "gamma", "t", "truncation", "kernel", "zeta"},
       plain<detail::cmd_fractional>},
      {{"eval", "Evaluate a function (with translate, reflect and sign combinators)",
        {"evaluate", "translate", "reflect", "sign_of"}},
       {"function", "grid"},
       plain<detail::cmd_eval>},
      {{"reproduce", "Run a named reproduction recipe against its oracle", {"reproduce", "run"}},
       {"id"},
       plain<detail::cmd_reproduce>},
  };
  return table;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto end = std::to_chars(buf, buf + sizeof buf, x).ptr;
  return std::string(buf, end);
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
}

Json flag_value(const std::string& raw) {
  try {
    Json j = Json::parse(raw);
    if (!j.is_string()) return j;
  } catch (const Json::parse_error&) {
  }
  return raw;
}

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

const std::vector<CommandInfo>& dispatch_table() {
  static const std::vector<CommandInfo> infos = [] {
    std::vector<CommandInfo> v;
    for (const auto& c : commands()) v.push_back(c.info);
    return v;
  }();
  return infos;
}

const std::vector<std::string>& reproduce_ids() {
  static const std::vector<std::string> ids = {"example-3-sign", "prop-5-1-exp-sin", "example-5-4-mt-decay"};
  return ids;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"varlex: variable-exponent function spaces, Stepanov almost automorphy and fractional resolvents"};
  app.require_subcommand(1);
  std::string config_path, out_path;
  std::uint64_t seed = 1;
  std::vector<std::string> sets;
  std::map<std::string, std::map<std::string, std::string>> raw;
  std::string reproduce_id;
  for (const auto& c : commands()) {
    CLI::App* sub = app.add_subcommand(c.info.name, c.info.summary);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", out_path, "output path (.csv writes the table, anything else the JSON report)");
    sub->add_option("--seed", seed, "seed for randomized corpora");
    sub->add_option("--set", sets, "extra config entry key=value");
    for (const auto& key : c.keys) sub->add_option(flag_name(key), raw[c.info.name][key], "config field '" + key + "'");
    if (c.info.name == "reproduce") sub->add_option("name", reproduce_id, "recipe id");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  const Command* cmd = nullptr;
  for (const auto& c : commands())
    if (app.got_subcommand(c.info.name)) cmd = &c;
  CLI::App* sub = app.get_subcommand(cmd->info.name);
  try {
    Json cfg = Json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config file " + config_path);
      cfg = Json::parse(in);
      if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
      if (cfg.contains("command") && cfg.at("command") != cmd->info.name)
        throw ConfigError("field 'command': config is for '" + cfg.at("command").get<std::string>() + "'");
      if (cfg.contains("seed") && sub->count("--seed") == 0) seed = cfg.at("seed").get<std::uint64_t>();
      if (cfg.contains("out") && out_path.empty()) out_path = cfg.at("out").get<std::string>();
    }
    for (const auto& key : cmd->keys)
      if (sub->count(flag_name(key)) > 0) cfg[key] = flag_value(raw[cmd->info.name][key]);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + s + "'");
      cfg[s.substr(0, eq)] = flag_value(s.substr(eq + 1));
    }
    if (!reproduce_id.empty()) cfg["id"] = reproduce_id;

    Outcome result = cmd->handler(cfg, seed);
    Json report;
    report["schema_version"] = "1";
    report["command"] = cmd->info.name;
    report["seed"] = seed;
    report["config"] = cfg;
    for (const auto& [k, v] : result.report.items()) report[k] = v;

    if (!out_path.empty()) {
      std::ofstream file(out_path);
      if (!file) throw ConfigError("cannot write output file " + out_path);
      if (ends_with(out_path, ".csv")) {
        if (!result.table) throw ConfigError("command '" + cmd->info.name + "' has no CSV output");
        write_csv(file, *result.table);
      } else {
        file << report.dump(2) << '\n';
      }
      out << report.dump(2) << '\n';
    } else if (result.csv_default && result.table) {
      write_csv(out, *result.table);
    } else {
      out << report.dump(2) << '\n';
    }
    return 0;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const ContractError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const Json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace varlex::cli
