#include "bilateral_tools/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "bilateral_tools/suites.hpp"

namespace bilateral::tools {

namespace {

// Report layout shared by the single-run experiments.
ExperimentOutput finish(const std::string& experiment, const RunConfig& cfg,
                        const std::string& stem, const std::vector<Check>& checks, Json results,
                        std::vector<std::pair<std::string, std::string>> data_files) {
  ExperimentOutput out;
  out.experiment = experiment;
  for (const auto& c : checks) {
    if (!c.passed) out.failures.push_back(c.name);
  }
  Json report = report_header(experiment);
  report["seed"] = cfg.seed;
  report["passed"] = out.failures.empty();
  report["failures"] = out.failures;
  report["config"] = cfg.to_json();
  Json cj = Json::array();
  for (const auto& c : checks) cj.push_back(to_json(c));
  report["checks"] = cj;
  report["results"] = std::move(results);
  out.report = report;
  out.files.emplace_back(stem + ".json", report.dump(2) + "\n");
  for (auto& f : data_files) out.files.push_back(std::move(f));
  return out;
}

Json counts_json(const SetCounts& c) {
  return {{"active_lower", c.active_lower}, {"active_upper", c.active_upper},
          {"strict_lower", c.strict_lower}, {"strict_upper", c.strict_upper},
          {"weak_lower", c.weak_lower},     {"weak_upper", c.weak_upper},
          {"inactive", c.inactive}};
}

GridFunction signed_mask(const Grid& grid, const NodeMask& lower, const NodeMask& upper) {
  GridFunction out(grid);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = lower[i] ? -1.0 : (upper[i] ? 1.0 : 0.0);
  return out;
}

GridFunction direction(const RunConfig& cfg, const Grid& grid) {
  if (cfg.direction == "constant") return GridFunction::constant(grid, cfg.direction_scale);
  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  return random_field(grid, rng, cfg.direction_scale);
}

double max_off(const GridFunction& f, const NodeMask& mask) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!mask[i]) m = std::max(m, std::abs(f[i]));
  }
  return m;
}

std::string join_row(std::initializer_list<std::string> cells) {
  std::string row;
  for (const auto& c : cells) {
    if (!row.empty()) row += ',';
    row += c;
  }
  return row + '\n';
}

}  // namespace

ExperimentOutput run_solve(const RunConfig& cfg) {
  const BopProblem p = build_problem(cfg);
  const BopSolution s = solve_bop(p, cfg.solve);
  const ObstaclePair& ob = p.obstacles();
  const SetPartition part = classify_sets(s, ob, cfg.thresholds);
  const MultiplierSplit split = split_multiplier(s, ob, {cfg.thresholds.eps_active});
  const double tol = cfg.solve.tol > 0 ? cfg.solve.tol : default_tolerance(cfg.solve.method);

  std::vector<Check> checks;
  checks.push_back(check_le("solution_residual", solution_residual(p, s.y), tol));
  checks.push_back(check_le("split_reconstruction_error",
                            max_abs_diff(split.xi_psi - split.xi_phi, s.xi), 0.0));
  checks.push_back(
      check_le("partition_invariant_violations", part.invariant_violations().size(), 0));

  Json res;
  res["method"] = to_string(s.solver);
  res["iterations"] = s.iterations;
  res["residual_norm"] = s.residual_norm;
  res["natural_residual"] = solution_residual(p, s.y);
  res["state_max_abs"] = max_abs(s.y);
  res["multiplier_max_abs"] = max_abs(s.xi);
  res["set_counts"] = counts_json(count_sets(part));
  res["strictly_complementary"] = part.strictly_complementary();
  res["thresholds_stable"] = threshold_sensitivity(s, ob, cfg.thresholds).stable();

  const Grid& g = s.y.grid();
  std::string csv = nodal_csv(
      g, {column("state", s.y), column("multiplier", s.xi), column("psi", ob.psi()),
          column("phi", ob.phi()), column("xi_psi", split.xi_psi), column("xi_phi", split.xi_phi),
          column("active", signed_mask(g, part.active_lower, part.active_upper)),
          column("strict", signed_mask(g, part.strict_lower, part.strict_upper))});
  return finish("solve", cfg, "solve", checks, res, {{"solution.csv", std::move(csv)}});
}

ExperimentOutput run_derivative(const RunConfig& cfg) {
  const BopProblem p = build_problem(cfg);
  const Linearization lin = linearize(p, cfg.thresholds, cfg.solve);
  const Grid& g = lin.solution.y.grid();
  const GridFunction h = direction(cfg, g);

  const DerivativeResult d = [&] {
    if (cfg.derivative_variant == "directional") return directional_derivative(lin, h);
    if (cfg.derivative_variant == "gateaux_on_D") {
      return gateaux_derivative_on_D(lin, h, ~lin.partition.strict());
    }
    return generalized_derivative(lin, h, cfg.derivative_side);
  }();

  std::vector<Check> checks;
  checks.push_back(check_le("eta_off_D_max_abs", max_off(d.eta, d.D_used), 0.0));
  if (cfg.derivative_variant == "directional") {
    checks.push_back(check_true("eta_in_critical_cone", lin.cone().contains(d.eta)));
  }

  const DerivativeResult lower = generalized_derivative(lin, h, LimitSide::lower);
  const DerivativeResult upper = generalized_derivative(lin, h, LimitSide::upper);
  Json res;
  res["variant"] = cfg.derivative_variant;
  res["side"] = cfg.derivative_variant == "generalized" ? Json(to_string(cfg.derivative_side)) : Json();
  res["D_size"] = d.D_used.count();
  res["eta_max_abs"] = max_abs(d.eta);
  res["iterations"] = d.iterations;
  res["residual_norm"] = d.residual_norm;
  res["set_counts"] = counts_json(count_sets(lin.partition));
  res["strictly_complementary"] = lin.partition.strictly_complementary();
  res["sides_relative_gap"] = relative_max_error(upper.eta, lower.eta);

  std::string csv = nodal_csv(g, {column("eta", d.eta), column("h", h), column("D_used", d.D_used)});
  return finish("derivative", cfg, "derivative", checks, res, {{"derivative.csv", std::move(csv)}});
}

ExperimentOutput run_mosco(const RunConfig& cfg) {
  const BopProblem p = build_problem(cfg);
  const GridFunction h = direction(cfg, p.u().grid());
  MoscoOptions opt;
  opt.schedule = cfg.schedule;
  opt.thresholds = cfg.thresholds;
  opt.solve = cfg.solve;
  const MoscoReport m = mosco_convergence_experiment(p, h, cfg.mosco_side, opt);

  std::size_t sandwich = 0;
  for (const auto& pt : m.points) sandwich += pt.sandwich_violations;
  bool tail_nonincreasing = true;
  const std::size_t n = m.points.size();
  for (std::size_t k = n >= 4 ? n - 3 : 1; k < n; ++k) {
    tail_nonincreasing = tail_nonincreasing && m.points[k].error <= m.points[k - 1].error;
  }
  std::vector<Check> checks;
  checks.push_back(check_le("final_relative_error", m.points.back().error, 1e-4));
  checks.push_back(check_true("last_four_nonincreasing", tail_nonincreasing));
  checks.push_back(check_le("sandwich_violations", static_cast<double>(sandwich), 0));

  Json res;
  res["side"] = to_string(m.side);
  res["eta_inf_max_abs"] = m.eta_inf_norm;
  res["D_limit_size"] = m.d_limit_size;
  Json pts = Json::array();
  std::string csv = "n,error,abs_error,D_size,D_matches_limit,threshold_sensitive,sandwich_violations\n";
  for (const auto& pt : m.points) {
    pts.push_back({{"n", pt.n},
                   {"error", pt.error},
                   {"abs_error", pt.abs_error},
                   {"D_size", pt.d_size},
                   {"D_matches_limit", pt.d_matches_limit},
                   {"threshold_sensitive", pt.threshold_sensitive},
                   {"sandwich_violations", pt.sandwich_violations},
                   {"set_counts", counts_json(pt.counts)}});
    csv += join_row({std::to_string(pt.n), format_double(pt.error), format_double(pt.abs_error),
                     std::to_string(pt.d_size), pt.d_matches_limit ? "1" : "0",
                     pt.threshold_sensitive ? "1" : "0", std::to_string(pt.sandwich_violations)});
  }
  res["points"] = pts;
  return finish("mosco", cfg, "mosco", checks, res, {{"mosco.csv", std::move(csv)}});
}

ExperimentOutput run_control(const RunConfig& cfg) {
  const BopProblem p = build_problem(cfg);
  const Grid& g = p.u().grid();
  const GridFunction y_d = cfg.target == "attainable" ? solve_bop(p, cfg.solve).y : GridFunction(g);
  const ControlProblem cp(p, y_d, cfg.alpha);
  DescentOptions opt;
  opt.steps = cfg.steps;
  opt.thresholds = cfg.thresholds;
  opt.solve = cfg.solve;
  const DescentTrace tr = descent_loop(cp, GridFunction(g), cfg.descent_side, opt);

  bool decreasing = true;
  std::string csv = "iter,objective,step,grad_norm,side\n";
  Json its = Json::array();
  for (std::size_t k = 0; k < tr.iterates.size(); ++k) {
    const DescentIterate& it = tr.iterates[k];
    if (k > 0) decreasing = decreasing && it.objective < tr.iterates[k - 1].objective;
    csv += join_row({std::to_string(it.iter), format_double(it.objective), format_double(it.step),
                     format_double(it.grad_norm), to_string(tr.side)});
    its.push_back({{"iter", it.iter}, {"objective", it.objective}, {"step", it.step},
                   {"grad_norm", it.grad_norm}});
  }
  std::vector<Check> checks;
  checks.push_back(check_true("objective_strictly_decreases", decreasing));

  Json res;
  res["side"] = to_string(tr.side);
  res["accepted_steps"] = tr.iterates.size() - 1;
  res["initial_objective"] = tr.iterates.front().objective;
  res["final_objective"] = tr.iterates.back().objective;
  res["line_search_failed"] = tr.line_search_failed;
  res["stop_reason"] = tr.stop_reason;
  res["iterates"] = its;

  std::string final_csv =
      nodal_csv(g, {column("u", tr.u_final), column("state", tr.y_final), column("target", y_d)});
  return finish("control", cfg, "control", checks, res,
                {{"trace.csv", std::move(csv)}, {"control_final.csv", std::move(final_csv)}});
}

ExperimentOutput run_counterexample(const RunConfig& cfg) {
  using namespace series;
  const CounterexampleConfig& sc = cfg.series;
  std::vector<Check> checks;
  Json res;

  const BoundedSeriesReport b = bounded_series_report(sc, RadialProfile::oscillating(sc.beta), cfg.checkpoint);
  checks.push_back(check_le("bounded_tail_beyond_checkpoint", b.tail_at_checkpoint, 1e-6));
  checks.push_back(check_true("bounded_tail_bound_decreasing", b.tail_bound_decreasing));
  checks.push_back(check_le("bounded_tail_within_bound", b.tail_at_checkpoint, b.tail_bound_at_checkpoint));
  res["bounded"] = {{"checkpoint", b.checkpoint},
                    {"limit_estimate", b.limit_estimate},
                    {"tail_at_checkpoint", b.tail_at_checkpoint},
                    {"tail_bound_at_checkpoint", b.tail_bound_at_checkpoint}};

  std::vector<std::int64_t> cps;
  for (std::int64_t k : cfg.divergence_checkpoints) {
    if (k >= 2 && k <= sc.k_max) cps.push_back(k);
  }
  if (cps.size() >= 2) {
    const DivergenceReport d = divergence_report(sc, cps);
    checks.push_back(check_true("unbounded_dominates_lower_bound_chain", d.dominates_lower_bound));
    Json dj;
    dj["checkpoints"] = d.checkpoints;
    dj["upper_sums"] = d.upper_sums;
    dj["fitted_growth"] = d.fitted_growth;
    if (d.reference_growth) {
      checks.push_back(check_le("fitted_growth_relative_deviation",
                                std::abs(d.fitted_growth / *d.reference_growth - 1.0), 0.25));
      checks.push_back(check_true("c0_finite", std::isfinite(d.c0)));
      dj["reference_growth"] = *d.reference_growth;
      dj["c0"] = d.c0;
    }
    res["divergence"] = dj;
  }

  Json h1 = Json::array();
  for (const RadialProfile& w : {RadialProfile::oscillating(sc.beta), RadialProfile::log_power(sc.beta),
                                 RadialProfile::polynomial(sc.beta)}) {
    const H1BoundReport h = h1_norm_bound_check(sc, w);
    checks.push_back(check_true("h1_bound_every_K_" + h.profile, h.holds_every_K));
    h1.push_back({{"profile", h.profile}, {"gradient_norm", h.gradient_norm}, {"bound", h.bound},
                  {"max_abs_partial", h.max_abs_partial}});
  }
  res["h1"] = h1;

  // Plot-ready partial sums at log-spaced K >= 2.
  std::vector<std::int64_t> grid_k;
  for (int i = 0; i <= 100; ++i) {
    const auto k = static_cast<std::int64_t>(
        std::llround(std::pow(static_cast<double>(sc.k_max), i / 100.0)));
    if (k >= 2 && (grid_k.empty() || k > grid_k.back())) grid_k.push_back(k);
  }
  const PartialSums bounded = pair_with_radial(sc, RadialProfile::oscillating(sc.beta));
  const DivergenceReport curve = divergence_report(sc, grid_k);
  std::string csv = "K,S_bounded,S_unbounded,lower_bound,lnK\n";
  for (std::size_t j = 0; j < curve.checkpoints.size(); ++j) {
    const std::int64_t k = curve.checkpoints[j];
    csv += join_row({std::to_string(k), format_double(bounded.total[static_cast<std::size_t>(k - 1)]),
                     format_double(curve.upper_sums[j]), format_double(curve.lower_bound_sums[j]),
                     format_double(std::log(static_cast<double>(k)))});
  }
  return finish("counterexample", cfg, "counterexample", checks, res, {{"series.csv", std::move(csv)}});
}

ExperimentOutput run_verify_all(const RunConfig& cfg) {
  const std::vector<SuiteResult> suites = run_suites(cfg.seed, cfg.suites);
  ExperimentOutput out;
  out.experiment = "verify-all";
  out.report = suites_report("verify-all", cfg.seed, suites);
  for (const auto& s : suites) {
    for (auto& f : s.failures()) out.failures.push_back(std::move(f));
  }
  out.files.emplace_back("verify_all.json", out.report.dump(2) + "\n");
  out.files.emplace_back("verify_all.csv", suites_csv(suites));
  return out;
}

ExperimentOutput run_experiment(const RunConfig& cfg) {
  if (cfg.experiment == "solve") return run_solve(cfg);
  if (cfg.experiment == "derivative") return run_derivative(cfg);
  if (cfg.experiment == "mosco") return run_mosco(cfg);
  if (cfg.experiment == "control") return run_control(cfg);
  if (cfg.experiment == "counterexample") return run_counterexample(cfg);
  if (cfg.experiment == "verify-all") return run_verify_all(cfg);
  throw ConfigError("unknown experiment '" + cfg.experiment + "'");
}

void write_outputs(const ExperimentOutput& output, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  for (const auto& [name, text] : output.files) {
    write_text((std::filesystem::path(dir) / name).string(), text);
  }
}

}  // namespace bilateral::tools
