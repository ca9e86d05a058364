#include "varlex/cli.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

using namespace varlex;
using Json = cli::Json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run call(std::vector<std::string> args) {
  args.insert(args.begin(), "varlex");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("every operation is reachable from a command") {
  const std::vector<std::string> ops = {
      "eval", "essential_bounds", "conjugate", "composition_exponent", "evaluate", "translate", "reflect", "sign_of",
      "phi", "modular", "luxemburg_norm", "holder_check", "embedding_check", "window_norm", "stepanov_norm",
      "c0_decay_test", "ergodic_mean_test", "epsilon_period_scan", "bochner_shift_test", "counterexample_divergence",
      "asymptotic_decompose", "g_kernel", "mittag_leffler", "resolvent_eval", "caputo_derivative", "weyl_derivative",
      "decay_check", "tail_constant_M", "m_t_series", "line_convolution", "finite_convolution", "solve_dfp",
      "ergodic_component_classify", "compose", "lipschitz_window_check", "composition_membership_test",
      "asymptotic_composition_test", "run", "reproduce"};
  std::set<std::string> reached;
  for (const auto& c : cli::dispatch_table()) reached.insert(c.operations.begin(), c.operations.end());
  for (const auto& op : ops) {
    CAPTURE(op);
    CHECK(reached.count(op) == 1);
  }
  std::set<std::string> names;
  for (const auto& c : cli::dispatch_table()) names.insert(c.name);
  for (const char* n : {"norm", "modular", "stepanov", "aa-test", "ap-scan", "counterexample", "convolve", "solve-dfp",
                        "ml", "compose-test"})
    CHECK(names.count(n) == 1);
}

TEST_CASE("ml prints the value") {
  const auto r = call({"ml", "--alpha", "1", "--beta", "1", "--z", "-1"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["schema_version"] == "1");
  CHECK(j["value"].get<double>() == doctest::Approx(std::exp(-1.0)));
  CHECK(j.contains("method"));
  CHECK(j.contains("error_estimate"));
}

TEST_CASE("counterexample reports divergence") {
  const auto r = call({"counterexample", "--lambda", "0.5"});
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["verdict"] == "divergent");
  const auto s = call({"counterexample", "--lambda", "0.8"});
  CHECK(Json::parse(s.out)["verdict"] == "convergent");
}

TEST_CASE("solve-dfp prints CSV matching the semigroup") {
  const auto r = call({"solve-dfp", "--gamma", "1", "--a", "1", "--x0", "1", "--f", "zero", "--grid", "0:10:0.01"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,u1,tail_bound");
  int rows = 0;
  double worst = 0.0;
  while (std::getline(in, line)) {
    double t = 0, u = 0;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &t, &u) == 2);
    worst = std::max(worst, std::abs(u - std::exp(-t)));
    ++rows;
  }
  CHECK(rows == 1001);
  CHECK(worst < 1e-8);
}

TEST_CASE("norm reads a config file") {
  const std::string cfg = "varlex_cli_norm.json";
  {
    std::ofstream out(cfg);
    out << R"({"function": "constant:2", "exponent": {"name": "one-minus-log", "domain": [0, 1]}})";
  }
  const auto r = call({"norm", "--config", cfg});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["value"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(j["bracket"].size() == 2);
  CHECK(j["iterations"].get<int>() > 0);
  std::remove(cfg.c_str());
}

TEST_CASE("modular emits a refinement trace") {
  const auto r = call({"modular", "--function", "constant:2", "--exponent", "one-minus-log"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["refinement_trace"].is_array());
  CHECK(j["refinement_trace"].size() > 0);
}

TEST_CASE("stepanov writes t,norm CSV") {
  const std::string path = "varlex_cli_series.csv";
  const auto r = call({"stepanov", "--function", "sin", "--exponent", "2", "--grid", "0:2:1", "--out", path});
  REQUIRE(r.code == 0);
  const std::string csv = slurp(path);
  CHECK(csv.rfind("t,norm\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  std::remove(path.c_str());
}

TEST_CASE("output is deterministic") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"check", "--seed", "42", "--cases", "4"},
           {"aa-test", "--function", "sign-of-two-sine", "--shifts", "almost-periods:5,4000", "--grid", "0:2:1"},
           {"convolve", "--mode", "decomposed", "--grid", "0:5:0.5"}}) {
    const auto a = call(args), b = call(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
  CHECK(call({"check", "--seed", "1", "--cases", "2"}).out != call({"check", "--seed", "2", "--cases", "2"}).out);
}

TEST_CASE("non-finite numbers serialize as strings") {
  const auto r = call({"counterexample", "--lambda", "0.5"});
  CHECK(Json::parse(r.out)["results"][0]["value"] == "inf");
}

TEST_CASE("verdicts are strings") {
  const auto r = call({"aa-test", "--function", "identity", "--exponent", "2"});
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["result"]["verdict"] == "false");
}

TEST_CASE("exponent sweep reports residuals without a verdict") {
  const auto r = call({"aa-test", "--test", "exponent-sweep", "--function", "sign-of-two-sine", "--shifts",
                       "almost-periods:5,4000", "--grid", "0:2:1", "--exponents", "[1, 2]"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  REQUIRE(j["sweep"].size() == 2);
  CHECK_FALSE(j.contains("verdict"));
  CHECK(j["sweep"][0]["tail_residual"].is_number());
}

TEST_CASE("exit codes") {
  auto r = call({"norm", "--function", "nosuch"});
  CHECK(r.code == 2);
  CHECK(r.err.find("'function'") != std::string::npos);
  CHECK(call({"norm", "--exponent", "mystery"}).code == 2);
  CHECK(call({"convolve", "--kernel", "Q:1"}).code == 2);
  CHECK(call({"convolve", "--grid", "0:1:-1"}).code == 2);
  CHECK(call({"norm", "--config", "does-not-exist.json"}).code == 2);
  CHECK(call({"nosuchcommand"}).code == 2);
  CHECK(call({"reproduce", "unknown-id"}).code == 2);
  CHECK(call({"convolve", "--mode", "tail-constant", "--kernel", "power:0.5"}).code == 3);
  CHECK(call({"ml", "--alpha", "1", "--z", "-1"}).code == 0);
  CHECK(call({"aa-test", "--function", "identity"}).code == 0);
}

TEST_CASE("reproduction recipes") {
  const auto a = call({"reproduce", "example-3-sign"});
  REQUIRE(a.code == 0);
  const Json ja = Json::parse(a.out);
  CHECK(ja["agrees_with_oracle"] == true);
  CHECK(ja["rows"].size() == 7);
  const auto b = call({"reproduce", "prop-5-1-exp-sin"});
  REQUIRE(b.code == 0);
  CHECK(Json::parse(b.out)["max_error"].get<double>() < 1e-6);
  const auto c = call({"reproduce", "example-5-4-mt-decay"});
  REQUIRE(c.code == 0);
  CHECK(Json::parse(c.out)["holds"] == true);
}

TEST_CASE("config value parsers") {
  CHECK(cli::parse_grid("0:1:0.25", "g").size() == 5);
  CHECK(cli::parse_grid(Json::array({1, 2, 3}), "g").size() == 3);
  CHECK(cli::parse_grid(Json{{"geometric", {1, 100, 3}}}, "g")[1] == doctest::Approx(10.0));
  CHECK(cli::parse_exponent(Json{{"conjugate", 2}}, "p")(0.5) == doctest::Approx(2.0));
  CHECK(std::isinf(cli::parse_exponent("inf", "p")(0.5)));
  CHECK(cli::parse_function(Json{{"translate", "sin"}, {"by", 1.0}}, "f")(0.0)[0] == doctest::Approx(std::sin(1.0)));
  CHECK(cli::parse_function(Json{{"sign", "sin"}}, "f")(-1.0)[0] == -1.0);
  CHECK(cli::parse_kernel("R:1,0.5", "k").gamma() == 0.5);
  CHECK(cli::parse_kernel(Json{{"kind", "S"}, {"a", {1, 2}}, {"gamma", 1}}, "k").dim() == 2);
  CHECK(cli::parse_shifts("periods:3", "s").size() == 3);
  CHECK(cli::parse_shifts("counterexample:2", "s").size() == 4);
  CHECK_THROWS_AS(cli::parse_function("sin:1,2,3,4", "f"), cli::ConfigError);
}

#ifdef VARLEX_BIN
TEST_CASE("the executable returns the documented exit codes") {
  const std::string bin = VARLEX_BIN;
  auto status = [&](const std::string& args) {
    const int s = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  CHECK(status("ml --alpha 0.5 --beta 1 --z -1") == 0);
  CHECK(status("norm --function nosuch") == 2);
  CHECK(status("convolve --mode tail-constant --kernel power:0.5") == 3);
  CHECK(status("--help") == 0);
}
#endif
