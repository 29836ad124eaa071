// bilateral: one subcommand per experiment.
//
// Exit status: 0 when every in-run check passes, 1 when a check fails or the
// computation raises an error, 2 for bad flags or configuration.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bilateral_tools/config.hpp"
#include "bilateral_tools/experiments.hpp"

namespace {

using namespace bilateral;
using namespace bilateral::tools;

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> side;
  std::optional<std::string> schedule;
  std::optional<double> beta;
  std::optional<int> grid;
  std::optional<std::string> method;
  std::vector<std::string> only;
};

RunConfig resolve(const std::string& experiment, const Flags& f) {
  RunConfig cfg;
  cfg.experiment = experiment;
  if (!f.config.empty()) apply_config_file(cfg, f.config);
  cfg.out_dir = f.out.empty() ? "out/" + experiment : f.out;
  if (f.seed) cfg.seed = *f.seed;
  if (f.grid) cfg.nx = cfg.ny = *f.grid;
  try {
    if (f.method) cfg.solve.method = parse_vi_method(*f.method);
    if (f.side) {
      const LimitSide side = parse_limit_side(*f.side);
      cfg.derivative_side = cfg.mosco_side = cfg.descent_side = side;
    }
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (f.schedule) cfg.schedule = parse_schedule(*f.schedule);
  if (f.beta) cfg.series.beta = *f.beta;
  if (!f.only.empty()) cfg.suites = f.only;
  validate(cfg);
  return cfg;
}

int run(const RunConfig& cfg) {
  const ExperimentOutput out = run_experiment(cfg);
  write_outputs(out, cfg.out_dir);
  std::cout << cfg.experiment << ": " << (out.passed() ? "PASS" : "FAIL") << '\n';
  for (const auto& name : out.failures) std::cout << "  failed: " << name << '\n';
  for (const auto& [name, text] : out.files) std::cout << "  wrote " << cfg.out_dir << '/' << name << '\n';
  return out.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bilateral obstacle problem experiments"};
  app.require_subcommand(1);
  Flags flags;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "Output directory (default out/<experiment>)");
    sub->add_option("--seed", flags.seed, "Seed for random instances and suites");
  };
  auto add_problem = [&](CLI::App* sub) {
    sub->add_option("--grid", flags.grid, "Interior nodes per axis")->check(CLI::PositiveNumber);
    sub->add_option("--method", flags.method, "VI solver")->check(CLI::IsMember({"psor", "pdas"}));
  };
  auto add_side = [&](CLI::App* sub) {
    sub->add_option("--side", flags.side, "Limit side")->check(CLI::IsMember({"lower", "upper"}));
  };

  CLI::App* solve = app.add_subcommand("solve", "Solve one obstacle problem and classify its contact sets");
  add_common(solve);
  add_problem(solve);
  CLI::App* derivative = app.add_subcommand("derivative", "Directional or generalized derivative of the solution map");
  add_common(derivative);
  add_problem(derivative);
  add_side(derivative);
  CLI::App* mosco = app.add_subcommand("mosco", "Limits of reduced derivatives along monotone control sequences");
  add_common(mosco);
  add_problem(mosco);
  add_side(mosco);
  mosco->add_option("--schedule", flags.schedule, "Powers of two a:b, e.g. 2:256");
  CLI::App* control = app.add_subcommand("control", "Subgradient descent on a tracking objective");
  add_common(control);
  add_problem(control);
  add_side(control);
  CLI::App* counter = app.add_subcommand("counterexample", "Series computations of the radial construction");
  add_common(counter);
  counter->add_option("--beta", flags.beta, "Exponent in (0, 1/2)");
  CLI::App* verify = app.add_subcommand("verify-all", "Run every property suite");
  add_common(verify);
  verify->add_option("--only", flags.only, "Run only the named suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string experiment = app.get_subcommands().front()->get_name();
  RunConfig cfg;
  try {
    cfg = resolve(experiment, flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  try {
    return run(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
