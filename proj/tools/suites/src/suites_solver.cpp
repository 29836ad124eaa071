#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "bilateral_tools/oracle.hpp"
#include "bilateral_tools/suites.hpp"
#include "common.hpp"

namespace bilateral::tools {

using detail::relative_diff;
using detail::track_max;

namespace {

std::shared_ptr<const AssembledOperator> laplacian_on(const Grid& grid) {
  return std::make_shared<const AssembledOperator>(assemble({}, grid));
}

GridFunction uniform_noise(const Grid& grid, Rng& rng, double amplitude) {
  GridFunction w(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) w[i] = rng.uniform(-amplitude, amplitude);
  return w;
}

NodeMask contact_mask(const Vector& y, const Vector& obstacle, double eps, int sign) {
  NodeMask m(static_cast<std::size_t>(y.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double gap = sign < 0 ? y[i] - obstacle[i] : obstacle[i] - y[i];
    m.set(static_cast<std::size_t>(i), gap <= eps);
  }
  return m;
}

// The four manufactured instances on a square grid: {strict, biactive} x
// {identity, superposition}.
std::vector<ManufacturedInstance> manufactured_set(int n) {
  auto op = laplacian_on(Grid::square(n));
  std::vector<ManufacturedInstance> out;
  for (auto structure : {ContactStructure::strict, ContactStructure::biactive}) {
    out.push_back(manufactured_instance(op, ControlOperator::identity(), structure));
    out.push_back(manufactured_instance(op, ControlOperator::superposition(), structure));
  }
  return out;
}

}  // namespace

SuiteResult grid_core_suite(std::uint64_t seed) {
  SuiteResult r{"grid_core", 0, {}, Json::object()};
  Rng rng = detail::suite_rng(seed, r.name);

  {
    const AssembledOperator a = assemble({}, Grid::line(3));
    const Eigen::MatrixXd d(a.matrix());
    Eigen::MatrixXd expect(3, 3);
    expect << 32, -16, 0, -16, 32, -16, 0, -16, 32;
    r.add(check_le("stencil_1d_n3", (d - expect).cwiseAbs().maxCoeff(), 1e-12));
  }
  {
    const AssembledOperator a = assemble({}, Grid::square(2));
    const Eigen::MatrixXd d(a.matrix());
    Eigen::MatrixXd expect(4, 4);
    expect << 36, -9, -9, 0, -9, 36, 0, -9, -9, 0, 36, -9, 0, -9, -9, 36;
    r.add(check_le("stencil_2d_n2", (d - expect).cwiseAbs().maxCoeff(), 1e-12));
  }
  {
    OperatorSpec spec;
    spec.kind = OperatorKind::laplacian_plus_convection;
    const Grid g = Grid::line(9);
    spec.convection = {2.5 / g.h(0), 0.0};
    bool rejected = false;
    try {
      assemble(spec, g);
    } catch (const InvalidSpec&) {
      rejected = true;
    }
    r.add(check_true("strong_convection_rejected", rejected));
  }

  int sign_failures = 0;
  int transpose_failures = 0;
  double min_eig = INFINITY;
  for (int i = 0; i < 20; ++i) {
    const Grid g = i % 2 == 0 ? Grid::line(rng.uniform_int(1, 40))
                              : Grid::rectangle(rng.uniform_int(1, 8), rng.uniform_int(1, 8));
    const auto op = detail::random_operator(g, rng);
    if (!is_m_matrix(op->matrix())) ++sign_failures;
    const SparseMatrix t = op->matrix().transpose();
    if (!(Eigen::MatrixXd(t) - Eigen::MatrixXd(op->adjoint_matrix())).isZero(0.0)) {
      ++transpose_failures;
    }
    const Eigen::MatrixXd dense(op->matrix());
    const Eigen::MatrixXd sym = 0.5 * (dense + dense.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    // Scaled by the diagonal so that grids of different spacing compare.
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff() / dense.diagonal().maxCoeff());
  }
  r.add(check_le("m_matrix_sign_failures", sign_failures, 0));
  r.add(check_le("adjoint_transpose_failures", transpose_failures, 0));
  r.add(check_ge("min_scaled_symmetric_eigenvalue", min_eig, 1e-6));

  const Grid g2 = Grid::square(12);
  const double m = g2.mass_weight();
  {
    const GridFunction one = GridFunction::constant(g2, 1.0);
    const GridFunction f1 = ControlOperator::superposition().apply(one);
    const double expect = (1.0 + std::numbers::pi / 4.0) * m;
    r.add(check_le("superposition_at_one", max_abs_diff(f1, GridFunction::constant(g2, expect)),
                   1e-15));
    const GridFunction zero(g2);
    const GridFunction d0 = ControlOperator::superposition().derivative(zero, one);
    r.add(check_le("superposition_derivative_at_zero",
                   max_abs_diff(d0, GridFunction::constant(g2, 2.0 * m)), 1e-15));
  }

  int monotone_failures = 0;
  double linear_fd = 0.0;
  double min_order = INFINITY;
  Json orders = Json::array();
  for (int kind = 0; kind < 3; ++kind) {
    for (int pair = 0; pair < 100; ++pair) {
      const ControlOperator f = kind == 0   ? ControlOperator::identity()
                                : kind == 1 ? ControlOperator::superposition(rng.uniform(0.5, 2))
                                            : ControlOperator::affine(rng.uniform(0.5, 1.5),
                                                                      rng.uniform(0.0, 0.5),
                                                                      rng.uniform(-1, 1));
      const GridFunction u2 = random_field(g2, rng, rng.uniform(1.0, 10.0));
      GridFunction bump = uniform_noise(g2, rng, 1.0);
      for (std::size_t i = 0; i < bump.size(); ++i) bump[i] = std::abs(bump[i]);
      const GridFunction u1 = u2 + bump;
      if (!dominates(f.apply(u1), f.apply(u2))) ++monotone_failures;
    }
    for (int trial = 0; trial < 5; ++trial) {
      const ControlOperator f = kind == 0   ? ControlOperator::identity()
                                : kind == 1 ? ControlOperator::superposition()
                                            : ControlOperator::affine(1.0, 0.3, 0.5);
      const GridFunction u = random_field(g2, rng, 5.0);
      const GridFunction h = random_field(g2, rng, 1.0);
      const GridFunction exact = f.derivative(u, h);
      std::vector<double> errs;
      for (double t : {1e-3, 1e-4, 1e-5}) {
        const GridFunction q = (1.0 / t) * (f.apply(u + t * h) - f.apply(u));
        errs.push_back(max_abs_diff(q, exact) / max_abs(exact));
      }
      if (kind == 1) {
        for (std::size_t k = 0; k + 1 < errs.size(); ++k) {
          const double order = std::log10(errs[k] / errs[k + 1]);
          min_order = std::min(min_order, order);
          orders.push_back(order);
        }
      } else {
        for (double e : errs) track_max(linear_fd, e);
      }
    }
  }
  r.add(check_le("control_monotonicity_failures", monotone_failures, 0));
  r.add(check_ge("superposition_fd_min_order", min_order, 0.9));
  r.add(check_le("linear_control_fd_error", linear_fd, 1e-8));
  r.metrics["superposition_fd_orders"] = orders;
  return r;
}

SuiteResult brute_force_suite(std::uint64_t seed) {
  SuiteResult r{"brute_force", 1, {}, Json::object()};
  Rng rng = detail::suite_rng(seed, r.name);

  double worst_pdas = 0.0;
  double worst_psor = 0.0;
  double worst_cross = 0.0;
  double worst_spread = 0.0;
  int pattern_mismatches = 0;
  int random_instances = 0;
  Json instances = Json::array();

  SolveOptions psor;
  psor.method = ViMethod::psor;
  psor.tol = 1e-10;

  auto run = [&](const std::string& label, const BopProblem& p) {
    const Eigen::MatrixXd a(p.op().matrix());
    const Vector& lo = p.obstacles().psi().values();
    const Vector& up = p.obstacles().phi().values();
    const PatternOracle oracle = enumerate_patterns(a, p.load().values(), lo, up);

    const BopSolution s_pdas = solve_bop(p);
    const BopSolution s_psor = solve_bop(p, psor);
    const double e_pdas = (s_pdas.y.values() - oracle.y).cwiseAbs().maxCoeff();
    const double e_psor = (s_psor.y.values() - oracle.y).cwiseAbs().maxCoeff();
    track_max(worst_pdas, e_pdas);
    track_max(worst_psor, e_psor);
    track_max(worst_cross, max_abs_diff(s_pdas.y, s_psor.y));
    track_max(worst_spread, oracle.spread);

    // A unique accepted pattern is the active pattern; degenerate problems
    // with several accepted patterns fall back to thresholding the oracle y.
    const SetThresholds th;
    NodeMask lower(oracle.pattern.size());
    NodeMask upper(oracle.pattern.size());
    if (oracle.accepted == 1) {
      for (std::size_t i = 0; i < oracle.pattern.size(); ++i) {
        lower.set(i, oracle.pattern[i] < 0);
        upper.set(i, oracle.pattern[i] > 0);
      }
    } else {
      lower = contact_mask(oracle.y, lo, th.eps_active, -1);
      upper = contact_mask(oracle.y, up, th.eps_active, +1);
    }
    for (const BopSolution* s : {&s_pdas, &s_psor}) {
      const SetPartition part = classify_sets(*s, p.obstacles(), th);
      if (part.active_lower != lower || part.active_upper != upper) ++pattern_mismatches;
    }

    Json j;
    j["label"] = label;
    j["n"] = p.grid().size();
    j["accepted_patterns"] = oracle.accepted;
    j["lower_contacts"] = lower.count();
    j["upper_contacts"] = upper.count();
    j["pdas_error"] = e_pdas;
    j["psor_error"] = e_psor;
    instances.push_back(j);
  };

  {
    const Grid g = Grid::line(5);
    BopProblem p(laplacian_on(g), ControlOperator::identity(),
                 ObstaclePair(GridFunction(g), GridFunction::constant(g, 0.1)),
                 GridFunction::constant(g, 100.0));
    run("n5_constant_source", p);
  }
  for (int i = 0; i < 20; ++i) {
    const Grid g = Grid::line(1 + i % 8);
    run("random_" + std::to_string(i), detail::random_instance(g, rng));
    ++random_instances;
  }

  r.add(check_ge("random_instances", random_instances, 20));
  r.add(check_le("pdas_max_error", worst_pdas, 1e-8));
  r.add(check_le("psor_max_error", worst_psor, 1e-8));
  r.add(check_le("psor_pdas_max_difference", worst_cross, 10 * psor.tol));
  r.add(check_le("active_pattern_mismatches", pattern_mismatches, 0));
  r.metrics["oracle_max_spread"] = worst_spread;
  r.metrics["instances"] = instances;
  return r;
}

SuiteResult monotonicity_suite(std::uint64_t seed) {
  SuiteResult r{"monotonicity", 2, {}, Json::object()};
  Rng rng = detail::suite_rng(seed, r.name);
  const Grid grid = Grid::square(32);
  constexpr int kPairs = 50;
  constexpr double kTol = 1e-10;

  auto control_pair = [&](const BopProblem& p) {
    const double amp = max_abs(p.u()) * rng.uniform(0.05, 0.5);
    return p.u() + random_bump(grid, rng, amp);
  };

  // Order in u.
  std::size_t u_violations = 0;
  double u_worst = 0.0;
  for (int k = 0; k < kPairs; ++k) {
    const BopProblem p = detail::random_instance(grid, rng);
    const GridFunction u1 = control_pair(p);
    const BopSolution s1 = solve_bop(p.with_control(u1));
    const BopSolution s2 = solve_bop(p);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double v = s2.y[i] - s1.y[i];
      track_max(u_worst, v);
      if (v > kTol) ++u_violations;
    }
  }
  r.add(check_le("control_order_violations", static_cast<double>(u_violations), 0));
  r.metrics["control_order_worst"] = u_worst;

  // Order in the lower obstacle.
  std::size_t psi_violations = 0;
  double psi_worst = 0.0;
  for (int k = 0; k < kPairs; ++k) {
    const BopProblem p = detail::random_instance(grid, rng);
    const double amp = max_abs(p.obstacles().psi()) * rng.uniform(0.05, 0.5);
    const GridFunction psi2 = p.obstacles().psi() - random_bump(grid, rng, amp);
    const BopSolution s1 = solve_bop(p);
    const BopSolution s2 = solve_bop_with_obstacles(p, psi2);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double v = s2.y[i] - s1.y[i];
      track_max(psi_worst, v);
      if (v > kTol) ++psi_violations;
    }
  }
  r.add(check_le("obstacle_order_violations", static_cast<double>(psi_violations), 0));
  r.metrics["obstacle_order_worst"] = psi_worst;

  // Contact sets, then strictly active sets, each on fresh pairs.
  std::size_t active_violations = 0;
  for (int k = 0; k < kPairs; ++k) {
    const BopProblem p = detail::random_instance(grid, rng);
    const auto rep = verify_strict_set_monotonicity(p, control_pair(p), p.u());
    active_violations += rep.active_lower_violations.size() + rep.active_upper_violations.size();
  }
  r.add(check_le("active_set_inclusion_violations", static_cast<double>(active_violations), 0));

  std::size_t strict_violations = 0;
  int reflection_checked = 0;
  int reflection_disagreements = 0;
  for (int k = 0; k < kPairs; ++k) {
    const BopProblem p = detail::random_instance(grid, rng);
    const auto rep = verify_strict_set_monotonicity(p, control_pair(p), p.u());
    strict_violations += rep.strict_lower_violations.size() + rep.strict_upper_violations.size();
    if (rep.strict_upper_via_reflection) {
      ++reflection_checked;
      if (*rep.strict_upper_via_reflection != rep.strict_upper_violations) {
        ++reflection_disagreements;
      }
    }
  }
  r.add(check_le("strict_set_inclusion_violations", static_cast<double>(strict_violations), 0));
  r.add(check_le("reflection_path_disagreements", reflection_disagreements, 0));
  r.metrics["pairs_per_property"] = kPairs;
  r.metrics["reflection_cross_checks"] = reflection_checked;
  return r;
}

SuiteResult invariance_suite(std::uint64_t seed) {
  SuiteResult r{"invariance", 3, {}, Json::object()};
  Rng rng = detail::suite_rng(seed, r.name);
  const Grid grid = Grid::square(32);

  std::vector<BopProblem> problems;
  for (auto& mi : manufactured_set(32)) problems.push_back(mi.problem);
  while (problems.size() < 20) problems.push_back(detail::random_instance(grid, rng));

  double worst_change = 0.0;
  double teeth = 0.0;
  int weak_nodes_lowered = 0;
  for (const BopProblem& p : problems) {
    const BopSolution s = solve_bop(p);
    const SetPartition part = classify_sets(s, p.obstacles());
    const double amp = rng.uniform(0.1, 1.0) * max_abs(p.obstacles().psi());
    GridFunction v = random_bump(grid, rng, amp);
    // Constant lift on top of the bump so v reaches every node off the strict set.
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = part.strict_lower[i] ? 0.0 : v[i] + 0.05 * amp;
      if (part.weak_lower[i]) ++weak_nodes_lowered;
    }
    const BopSolution s2 = solve_bop_with_obstacles(p, p.obstacles().psi() - v);
    track_max(worst_change, max_abs_diff(s.y, s2.y));

    if (!part.strict_lower.none()) {
      GridFunction w(grid);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = part.strict_lower[i] ? 0.05 * amp : 0.0;
      const BopSolution s3 = solve_bop_with_obstacles(p, p.obstacles().psi() - w);
      track_max(teeth, max_abs_diff(s.y, s3.y));
    }
  }
  r.add(check_le("max_solution_change", worst_change, 1e-9));
  // Lowering psi on the strict set itself must move y, or the test above is vacuous.
  r.add(check_ge("max_change_when_strict_set_lowered", teeth, 1e-6));
  r.metrics["instances"] = problems.size();
  r.metrics["weakly_active_nodes_lowered"] = weak_nodes_lowered;
  return r;
}

SuiteResult reflection_suite(std::uint64_t seed) {
  SuiteResult r{"reflection", 4, {}, Json::object()};
  Rng rng = detail::suite_rng(seed, r.name);
  const Grid grid = Grid::square(32);

  std::vector<BopProblem> problems;
  for (auto s : {ContactStructure::strict, ContactStructure::biactive}) {
    problems.push_back(manufactured_instance(laplacian_on(grid), ControlOperator::identity(), s).problem);
    problems.push_back(
        manufactured_instance(detail::random_operator(grid, rng), ControlOperator::identity(), s)
            .problem);
  }
  while (problems.size() < 20) {
    problems.push_back(random_problem(detail::random_operator(grid, rng),
                                      ControlOperator::identity(), rng, rng.uniform(2.0, 20.0)));
  }

  double worst = 0.0;
  int set_mismatches = 0;
  int double_mismatches = 0;
  std::size_t contacts = 0;
  for (const BopProblem& p : problems) {
    const BopProblem q = reflect_problem(p);
    const BopSolution s = solve_bop(p);
    const BopSolution sq = solve_bop(q);
    track_max(worst, max_abs_diff(sq.y, -s.y));
    const SetPartition a = classify_sets(s, p.obstacles());
    const SetPartition b = classify_sets(sq, q.obstacles());
    contacts += a.active().count();
    if (a.active_lower != b.active_upper || a.active_upper != b.active_lower ||
        a.strict_lower != b.strict_upper || a.strict_upper != b.strict_lower ||
        a.weak_lower != b.weak_upper || a.weak_upper != b.weak_lower || a.inactive != b.inactive) {
      ++set_mismatches;
    }
    const BopProblem qq = reflect_problem(q);
    if (max_abs_diff(qq.u(), p.u()) != 0.0 ||
        max_abs_diff(qq.obstacles().psi(), p.obstacles().psi()) != 0.0 ||
        max_abs_diff(qq.obstacles().phi(), p.obstacles().phi()) != 0.0) {
      ++double_mismatches;
    }
  }
  r.add(check_le("max_reflection_error", worst, 1e-10));
  r.add(check_le("set_swap_mismatches", set_mismatches, 0));
  r.add(check_le("double_reflection_mismatches", double_mismatches, 0));
  r.metrics["instances"] = problems.size();
  r.metrics["total_contact_nodes"] = contacts;
  return r;
}

SuiteResult multiplier_split_suite(std::uint64_t seed) {
  SuiteResult r{"multiplier_split", 5, {}, Json::object()};
  Rng rng = detail::suite_rng(seed, r.name);
  const Grid grid = Grid::square(32);
  const SetThresholds th;

  std::vector<BopProblem> problems;
  for (auto& mi : manufactured_set(32)) problems.push_back(mi.problem);
  while (problems.size() < 20) problems.push_back(detail::random_instance(grid, rng));

  double reconstruction = 0.0;
  double min_part = INFINITY;
  double pairing = 0.0;
  double nodewise = 0.0;
  std::size_t support_violations = 0;
  for (const BopProblem& p : problems) {
    const BopSolution s = solve_bop(p);
    const MultiplierSplit split = split_multiplier(s, p.obstacles());
    track_max(reconstruction, max_abs_diff(s.xi, split.xi_psi - split.xi_phi));
    min_part = std::min({min_part, split.xi_psi.values().minCoeff(), split.xi_phi.values().minCoeff()});

    const SetPartition part = classify_sets(s, p.obstacles(), th);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (split.xi_psi[i] > th.eps_mult && !part.active_lower[i]) ++support_violations;
      if (split.xi_phi[i] > th.eps_mult && !part.active_upper[i]) ++support_violations;
    }

    const GridFunction v = contact_weight(s.y, p.obstacles());
    const double xi_scale = max_abs(s.xi);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double lower = s.xi[i] * (1.0 - v[i]) - split.xi_psi[i];
      const double upper = -s.xi[i] * v[i] - split.xi_phi[i];
      if (xi_scale > 0.0) track_max(nodewise, std::max(std::abs(lower), std::abs(upper)) / xi_scale);
    }
    for (int k = 0; k < 20; ++k) {
      const GridFunction w = uniform_noise(grid, rng, 1.0);
      double lhs_lower = 0.0, rhs_lower = 0.0, lhs_upper = 0.0, rhs_upper = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        lhs_lower += s.xi[i] * (1.0 - v[i]) * w[i];
        rhs_lower += split.xi_psi[i] * w[i];
        lhs_upper += -s.xi[i] * v[i] * w[i];
        rhs_upper += split.xi_phi[i] * w[i];
        scale += std::abs(s.xi[i] * w[i]);
      }
      if (scale > 0.0) {
        track_max(pairing, std::abs(lhs_lower - rhs_lower) / scale);
        track_max(pairing, std::abs(lhs_upper - rhs_upper) / scale);
      }
    }
  }
  r.add(check_le("reconstruction_error", reconstruction, 0.0));
  r.add(check_ge("min_split_entry", min_part, 0.0));
  r.add(check_le("weighted_pairing_relative_error", pairing, 1e-8));
  r.add(check_le("weighted_nodewise_relative_error", nodewise, 1e-8));
  r.add(check_le("support_violations", static_cast<double>(support_violations), 0));
  r.metrics["instances"] = problems.size();
  r.metrics["test_vectors_per_instance"] = 20;
  return r;
}

SuiteResult solver_properties_suite(std::uint64_t seed) {
  SuiteResult r{"solver_properties", 0, {}, Json::object()};
  Rng rng = detail::suite_rng(seed, r.name);
  const Grid grid = Grid::square(32);

  SolveOptions psor;
  psor.method = ViMethod::psor;
  const double psor_tol = default_tolerance(ViMethod::psor);
  std::vector<BopProblem> problems;
  for (auto& mi : manufactured_set(32)) problems.push_back(mi.problem);
  while (problems.size() < 12) problems.push_back(detail::random_instance(grid, rng));
  double cross = 0.0;
  int psor_max_sweeps = 0;
  for (const BopProblem& p : problems) {
    const BopSolution a = solve_bop(p);
    const BopSolution b = solve_bop(p, psor);
    track_max(cross, max_abs_diff(a.y, b.y));
    psor_max_sweeps = std::max(psor_max_sweeps, b.iterations);
  }
  r.add(check_le("psor_pdas_difference", cross, 10.0 * psor_tol));
  r.metrics["psor_max_sweeps"] = psor_max_sweeps;

  // ||y1 - y2||_inf <= ||L^{-1}||_inf Lip(f) ||u1 - u2||_inf.
  double worst_ratio = 0.0;
  for (int k = 0; k < 5; ++k) {
    const BopProblem p = detail::random_instance(grid, rng);
    const double c = inverse_max_norm(p.op()) * detail::control_lipschitz(p.control(), grid);
    const BopSolution s1 = solve_bop(p);
    for (int j = 0; j < 10; ++j) {
      const GridFunction u2 = p.u() + random_field(grid, rng, rng.uniform(0.1, 5.0));
      const BopSolution s2 = solve_bop(p.with_control(u2));
      track_max(worst_ratio, max_abs_diff(s1.y, s2.y) / (c * max_abs_diff(p.u(), u2)));
    }
  }
  r.add(check_le("lipschitz_ratio", worst_ratio, 1.0 + 1e-9));

  {
    const Grid g = Grid::line(20);
    BopProblem p(laplacian_on(g), ControlOperator::identity(),
                 ObstaclePair(GridFunction::constant(g, -1.0), GridFunction::constant(g, 1.0)),
                 GridFunction(g));
    const BopSolution s = solve_bop(p);
    r.add(check_le("zero_load_solution", max_abs(s.y) + max_abs(s.xi), 0.0));
    r.add(check_le("zero_load_pdas_iterations", s.iterations, 0));
  }
  return r;
}

}  // namespace bilateral::tools
