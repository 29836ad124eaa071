#include <algorithm>
#include <cmath>

#include "bilateral_tools/suites.hpp"
#include "common.hpp"

namespace bilateral::tools {

using detail::track_max;

namespace {

double euclid_dot(const GridFunction& a, const GridFunction& b) {
  return a.values().dot(b.values());
}

double abs_dot(const GridFunction& a, const GridFunction& b) {
  return a.values().cwiseAbs().dot(b.values().cwiseAbs());
}

}  // namespace

SuiteResult control_suite(std::uint64_t seed) {
  SuiteResult r{"control", 8, {}, Json::object()};
  Rng rng = detail::suite_rng(seed, r.name);
  const Grid grid = Grid::square(16);

  // <f'(u)^* q, w> = <q, f'(u) w> and <L^T q, w> = <q, L w>.
  double adjoint = 0.0;
  double transpose = 0.0;
  for (int k = 0; k < 30; ++k) {
    const ControlOperator f = k % 3 == 0   ? ControlOperator::identity()
                              : k % 3 == 1 ? ControlOperator::superposition(rng.uniform(0.5, 2.0))
                                           : ControlOperator::affine(rng.uniform(0.5, 1.5),
                                                                     rng.uniform(0.0, 0.5));
    const GridFunction u = random_field(grid, rng, 5.0);
    const GridFunction q = random_field(grid, rng, 1.0);
    const GridFunction w = random_field(grid, rng, 1.0);
    const GridFunction fw = f.derivative(u, w);
    track_max(adjoint, std::abs(euclid_dot(f.adjoint_derivative(u, q), w) - euclid_dot(q, fw)) /
                           abs_dot(q, fw));
    const auto op = detail::random_operator(grid, rng);
    const GridFunction lw = op->apply(w);
    track_max(transpose,
              std::abs(euclid_dot(op->apply_adjoint(q), w) - euclid_dot(q, lw)) / abs_dot(q, lw));
  }
  r.add(check_le("adjoint_identity_error", adjoint, 1e-12));
  r.add(check_le("transpose_identity_error", transpose, 1e-12));

  // Gradient against central differences of the reduced objective. A control
  // counts as generic when no stencil point u +- t e_j changes the partition,
  // so the reduced objective is smooth on the whole stencil.
  constexpr double t = 1e-3;
  constexpr int kControls = 10;
  int accepted = 0;
  int rejected = 0;
  double grad_err = 0.0;
  double side_diff = 0.0;
  while (accepted < kControls) {
    const BopProblem p = detail::strictly_complementary_instance(grid, rng);
    const BopSolution s0 = solve_bop(p);
    const ControlProblem cp(p, random_field(grid, rng, max_abs(s0.y)), 1e-6);
    const SetPartition part0 = classify_sets(s0, p.obstacles());
    const Subgradient g = adjoint_subgradient(cp, p.u(), LimitSide::lower);
    const Subgradient gu = adjoint_subgradient(cp, p.u(), LimitSide::upper);

    GridFunction gcd(grid);
    bool generic = true;
    for (std::size_t j = 0; j < grid.size() && generic; ++j) {
      double jv[2];
      for (int s = 0; s < 2; ++s) {
        GridFunction uj = p.u();
        uj[j] += s == 0 ? t : -t;
        const BopSolution sj = solve_bop(p.with_control(uj));
        if (!(classify_sets(sj, p.obstacles()) == part0)) generic = false;
        jv[s] = cp.tracking_value(sj.y, uj);
      }
      gcd[j] = (jv[0] - jv[1]) / (2.0 * t);
    }
    if (!generic) {
      ++rejected;
      continue;
    }
    ++accepted;
    track_max(grad_err, max_abs_diff(g.g, gcd) / max_abs(g.g));
    track_max(side_diff, relative_max_error(g.g, gu.g));
  }
  r.add(check_le("gradient_vs_central_difference", grad_err, 1e-4));
  r.add(check_le("generic_sides_difference", side_diff, 1e-12));
  r.metrics["generic_controls"] = accepted;
  r.metrics["rejected_nongeneric_draws"] = rejected;
  r.metrics["central_difference_step"] = t;

  // Biactive point: the two sides give different subgradients and each stays
  // below the larger one-sided difference quotient along sampled directions.
  {
    const auto op = std::make_shared<const AssembledOperator>(assemble({}, grid));
    const BopProblem p =
        manufactured_instance(op, ControlOperator::identity(), ContactStructure::biactive).problem;
    const BopSolution s0 = solve_bop(p);
    const ControlProblem cp(p, random_field(grid, rng, max_abs(s0.y)), 0.0);
    const Subgradient gl = adjoint_subgradient(cp, p.u(), LimitSide::lower);
    const Subgradient gu = adjoint_subgradient(cp, p.u(), LimitSide::upper);
    r.add(check_ge("biactive_sides_relative_difference", relative_max_error(gl.g, gu.g), 1e-3));

    const double step = 1e-6;
    const double j0 = gl.objective;
    double worst = -INFINITY;
    for (int k = 0; k < 20; ++k) {
      const GridFunction dir = random_field(grid, rng, max_abs(p.u()));
      const double plus = (objective(cp, p.u() + step * dir) - j0) / step;
      const double minus = (j0 - objective(cp, p.u() - step * dir)) / step;
      const double scale = abs_dot(gl.g, dir) + abs_dot(gu.g, dir);
      for (const Subgradient* g : {&gl, &gu}) {
        track_max(worst, (euclid_dot(g->g, dir) - std::max(plus, minus)) / scale);
      }
    }
    r.add(check_le("biactive_subgradient_excess_over_difference_quotients", worst, 1e-4));
  }

  // Descent on an attainable tracking target from both sides.
  {
    const Grid g32 = Grid::square(32);
    const BopProblem truth =
        random_problem(std::make_shared<const AssembledOperator>(assemble({}, g32)),
                       ControlOperator::identity(), rng, 10.0);
    const BopSolution target = solve_bop(truth);
    const ControlProblem cp(truth, target.y, 0.0);
    const GridFunction u0(g32);
    const double j0 = objective(cp, u0);
    double finals[2] = {0.0, 0.0};
    Json traces = Json::object();
    DescentOptions opts;
    opts.steps = 50;
    opts.grad_tol = 0.0;
    opts.grad_rtol = 0.0;
    for (LimitSide side : {LimitSide::lower, LimitSide::upper}) {
      const DescentTrace tr = descent_loop(cp, u0, side, opts);
      bool decreasing = true;
      for (std::size_t k = 1; k < tr.iterates.size(); ++k) {
        decreasing = decreasing && tr.iterates[k].objective < tr.iterates[k - 1].objective;
      }
      const std::string tag = "descent_" + to_string(side);
      r.add(check_true(tag + "_strict_decrease", decreasing));
      r.add(check_ge(tag + "_accepted_steps", static_cast<double>(tr.iterates.size()) - 1.0, 1));
      finals[side == LimitSide::lower ? 0 : 1] = tr.iterates.back().objective;
      Json j;
      j["accepted_steps"] = tr.iterates.size() - 1;
      j["final_objective"] = tr.iterates.back().objective;
      j["line_search_failed"] = tr.line_search_failed;
      j["stop_reason"] = tr.stop_reason;
      traces[to_string(side)] = j;
    }
    traces["initial_objective"] = j0;
    r.metrics["descent"] = traces;
    r.add(check_le("descent_sides_objective_gap", std::abs(finals[0] - finals[1]), 1e-6));
    r.add(check_le("descent_worst_final_over_initial", std::max(finals[0], finals[1]) / j0, 1e-3));
    r.metrics["descent_sides_gap_over_initial"] = std::abs(finals[0] - finals[1]) / j0;
  }
  return r;
}

}  // namespace bilateral::tools
