#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "bilateral_tools/config.hpp"
#include "bilateral_tools/experiments.hpp"
#include "bilateral_tools/report.hpp"
#include "bilateral_tools/suites.hpp"

namespace bilateral::tools {
namespace {

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

const std::string& file(const ExperimentOutput& out, const std::string& name) {
  for (const auto& [n, text] : out.files) {
    if (n == name) return text;
  }
  throw std::runtime_error("missing output " + name);
}

RunConfig small(const std::string& experiment) {
  RunConfig cfg;
  cfg.experiment = experiment;
  cfg.nx = cfg.ny = 12;
  return cfg;
}

TEST(Report, EmptySuiteListIsValid) {
  const Json j = suites_report("verify-all", 7, {});
  const Json parsed = Json::parse(j.dump());
  EXPECT_EQ(parsed["schema"], kSchemaName);
  EXPECT_EQ(parsed["schema_version"], kSchemaVersion);
  EXPECT_TRUE(parsed["passed"].get<bool>());
  EXPECT_TRUE(parsed["suites"].empty());
  EXPECT_TRUE(parsed["failures"].empty());
  EXPECT_EQ(suites_csv({}), "suite,criterion,check,relation,value,limit,passed\n");
}

TEST(Report, ChecksAndFailures) {
  SuiteResult s{"demo", 3, {}, Json::object()};
  s.add(check_le("small", 1.0, 2.0));
  s.add(check_ge("large", 1.0, 2.0));
  s.add(check_true("flag", true));
  s.add(check_le("inf", INFINITY, 1.0));
  EXPECT_FALSE(s.passed());
  EXPECT_EQ(s.failures(), (std::vector<std::string>{"demo/large", "demo/inf"}));
  const Json j = to_json(s);
  EXPECT_EQ(j["checks"][3]["value"], "inf");
  EXPECT_EQ(j["checks"][0]["relation"], "<=");
}

TEST(Config, DefaultsValidate) {
  RunConfig cfg;
  EXPECT_NO_THROW(validate(cfg));
  const Json j = cfg.to_json();
  EXPECT_EQ(j["solver"]["tol"], 1e-10);
}

TEST(Config, OverlayAndUnknownKeys) {
  RunConfig cfg;
  apply_config_json(cfg, Json::parse(R"({"seed": 3, "grid": {"n": 9}, "solver": {"method": "psor"}})"));
  EXPECT_EQ(cfg.seed, 3u);
  EXPECT_EQ(cfg.nx, 9);
  EXPECT_EQ(cfg.ny, 9);
  EXPECT_EQ(cfg.solve.method, ViMethod::psor);
  EXPECT_THROW(apply_config_json(cfg, Json::parse(R"({"grid": {"size": 9}})")), ConfigError);
  EXPECT_THROW(apply_config_json(cfg, Json::parse(R"({"gird": {}})")), ConfigError);
  EXPECT_THROW(apply_config_json(cfg, Json::parse(R"({"grid": {"n": "nine"}})")), ConfigError);
  EXPECT_THROW(apply_config_json(cfg, Json::parse(R"({"control": {"kind": "cubic"}})")), ConfigError);
}

TEST(Config, BetaOutsideRangeIsConfigError) {
  RunConfig cfg;
  cfg.series.beta = 0.6;
  EXPECT_THROW(validate(cfg), ConfigError);
}

TEST(Config, UnknownSuiteIsConfigError) {
  RunConfig cfg;
  cfg.suites = {"nonexistent"};
  EXPECT_THROW(validate(cfg), ConfigError);
}

TEST(Config, MissingFile) {
  RunConfig cfg;
  EXPECT_THROW(apply_config_file(cfg, "/nonexistent/config.json"), ConfigError);
}

TEST(Config, Schedule) {
  EXPECT_EQ(parse_schedule("2:256"), (std::vector<int>{2, 4, 8, 16, 32, 64, 128, 256}));
  EXPECT_EQ(parse_schedule("3:20"), (std::vector<int>{3, 6, 12}));
  EXPECT_THROW(parse_schedule("256:2"), ConfigError);
  EXPECT_THROW(parse_schedule("2-256"), ConfigError);
  EXPECT_THROW(parse_schedule("a:b"), ConfigError);
}

TEST(Experiments, SolveCsvSchema) {
  const ExperimentOutput out = run_experiment(small("solve"));
  EXPECT_TRUE(out.passed());
  EXPECT_EQ(out.files.front().first, "solve.json");
  const std::string& csv = file(out, "solution.csv");
  EXPECT_EQ(first_line(csv), "node,x,y,state,multiplier,psi,phi,xi_psi,xi_phi,active,strict");
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), 1u + 144u);
  EXPECT_EQ(out.report["schema_version"], kSchemaVersion);
  EXPECT_EQ(out.report["experiment"], "solve");
}

TEST(Experiments, OneDimensionalCsvHasNoYColumn) {
  RunConfig cfg = small("solve");
  cfg.dim = 1;
  const ExperimentOutput out = run_experiment(cfg);
  EXPECT_EQ(first_line(file(out, "solution.csv")).rfind("node,x,state,", 0), 0u);
}

TEST(Experiments, DerivativeDumpsDomainMask) {
  RunConfig cfg = small("derivative");
  for (const std::string v : {"directional", "gateaux_on_D", "generalized"}) {
    cfg.derivative_variant = v;
    const ExperimentOutput out = run_experiment(cfg);
    EXPECT_TRUE(out.passed()) << v;
    EXPECT_EQ(first_line(file(out, "derivative.csv")), "node,x,y,eta,h,D_used");
  }
}

TEST(Experiments, MoscoErrorColumnDecreases) {
  RunConfig cfg = small("mosco");
  cfg.nx = cfg.ny = 32;
  cfg.schedule = parse_schedule("2:256");
  const ExperimentOutput out = run_experiment(cfg);
  EXPECT_TRUE(out.passed());
  const Json& pts = out.report["results"]["points"];
  ASSERT_EQ(pts.size(), 8u);
  for (std::size_t k = 1; k < pts.size(); ++k) {
    EXPECT_LE(pts[k]["error"].get<double>(), pts[k - 1]["error"].get<double>());
  }
}

TEST(Experiments, ControlTraceSchema) {
  RunConfig cfg = small("control");
  cfg.instance.kind = InstanceKind::random;
  cfg.steps = 5;
  const ExperimentOutput out = run_experiment(cfg);
  EXPECT_TRUE(out.passed());
  EXPECT_EQ(first_line(file(out, "trace.csv")), "iter,objective,step,grad_norm,side");
  EXPECT_EQ(first_line(file(out, "control_final.csv")), "node,x,y,u,state,target");
}

TEST(Experiments, CounterexampleSeriesSchema) {
  RunConfig cfg;
  cfg.experiment = "counterexample";
  const ExperimentOutput out = run_experiment(cfg);
  EXPECT_EQ(first_line(file(out, "series.csv")), "K,S_bounded,S_unbounded,lower_bound,lnK");
  // The bounded tail at K = 1e4 is about 5.9e-5, above the 1e-6 target.
  EXPECT_EQ(out.failures, std::vector<std::string>{"bounded_tail_beyond_checkpoint"});
}

TEST(Experiments, UnknownExperiment) {
  RunConfig cfg;
  cfg.experiment = "plot";
  EXPECT_THROW(run_experiment(cfg), ConfigError);
}

TEST(Experiments, VerifyAllSelectionAndDeterminism) {
  RunConfig cfg;
  cfg.experiment = "verify-all";
  cfg.suites = {"reflection", "grid_core"};
  const ExperimentOutput a = run_experiment(cfg);
  const ExperimentOutput b = run_experiment(cfg);
  ASSERT_EQ(a.report["suites"].size(), 2u);
  // Registry order, not request order.
  EXPECT_EQ(a.report["suites"][0]["name"], "grid_core");
  EXPECT_EQ(a.files, b.files);
}

TEST(Experiments, WriteOutputs) {
  const std::string dir = ::testing::TempDir() + "bilateral_out/nested";
  std::filesystem::remove_all(dir);
  const ExperimentOutput out = run_experiment(small("solve"));
  write_outputs(out, dir);
  std::ifstream in(dir + "/solve.json", std::ios::binary);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(text.str(), out.files.front().second);
}

TEST(Suites, RegistryNamesAreUnique) {
  std::set<std::string> names;
  for (const auto& e : suite_registry()) EXPECT_TRUE(names.insert(e.name).second);
  EXPECT_THROW(run_suites(1, {"nope"}), InvalidSpec);
}

}  // namespace
}  // namespace bilateral::tools
