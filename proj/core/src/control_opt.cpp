#include "bilateral/control_opt.hpp"

#include <cmath>

#include "bilateral/errors.hpp"
#include "bilateral/linalg.hpp"

namespace bilateral {

ControlProblem::ControlProblem(BopProblem bop, GridFunction y_d, double alpha)
    : bop_(std::move(bop)), y_d_(std::move(y_d)), alpha_(alpha) {
  require_same_grid(bop_.grid(), y_d_.grid(), "ControlProblem target");
  if (!(alpha_ >= 0.0) || !std::isfinite(alpha_)) {
    throw InvalidSpec("Tikhonov weight must be finite and nonnegative");
  }
}

double ControlProblem::tracking_value(const GridFunction& y, const GridFunction& u) const {
  const GridFunction dy = y - y_d_;
  return 0.5 * mass_dot(dy, dy) + 0.5 * alpha_ * mass_dot(u, u);
}

double objective(const ControlProblem& cp, const GridFunction& u, const SolveOptions& options) {
  const BopSolution s = solve_bop(cp.bop().with_control(u), options);
  return cp.tracking_value(s.y, u);
}

Subgradient adjoint_subgradient(const ControlProblem& cp, const GridFunction& u,
                                LimitSide side, const SetThresholds& thresholds,
                                const SolveOptions& options) {
  const Linearization lin = linearize(cp.bop().with_control(u), thresholds, options);
  const auto broken = lin.partition.invariant_violations();
  if (!broken.empty()) throw InvalidPartition("set partition is inconsistent: " + broken.front());

  const BopProblem& p = lin.problem;
  const Grid& grid = p.grid();
  const double m = grid.mass_weight();
  const NodeMask D = generalized_domain(lin.partition, side);
  const Vector j_y = m * (lin.solution.y.values() - cp.y_d().values());

  GridFunction q(grid);
  if (!D.none()) {
    q = GridFunction(grid, solve_restricted(p.op().adjoint_matrix(), D, j_y, p.op().symmetric()));
  }
  GridFunction g = p.control().adjoint_derivative(u, q);
  g.values() += cp.alpha() * m * u.values();

  return Subgradient{std::move(g), std::move(q), D, side, lin.solution.y,
                     cp.tracking_value(lin.solution.y, u)};
}

DescentTrace descent_loop(const ControlProblem& cp, const GridFunction& u0, LimitSide side,
                          const DescentOptions& options) {
  if (options.steps < 1) throw InvalidSpec("descent loop needs at least one step");
  if (!(options.initial_step > 0.0) || !(options.shrink > 0.0 && options.shrink < 1.0) ||
      !(options.armijo_c > 0.0 && options.armijo_c < 1.0)) {
    throw InvalidSpec("invalid Armijo parameters");
  }

  const double m = u0.grid().mass_weight();
  const auto riesz_norm = [m](const GridFunction& g) { return g.values().norm() / std::sqrt(m); };

  DescentTrace trace{side, {}, u0, u0, false, {}};
  GridFunction u = u0;
  Subgradient sg = adjoint_subgradient(cp, u, side, options.thresholds, options.solve);
  trace.iterates.push_back({0, sg.objective, 0.0, riesz_norm(sg.g)});

  GridFunction prev_u = u;
  GridFunction prev_r = sg.g;
  bool have_prev = false;

  const double stop_norm =
      std::max(options.grad_tol, options.grad_rtol * trace.iterates.front().grad_norm);
  for (int k = 1; k <= options.steps; ++k) {
    const double gnorm = riesz_norm(sg.g);
    if (gnorm < stop_norm) {
      trace.stop_reason = "gradient below tolerance";
      break;
    }
    // Riesz representative of g in the mass inner product.
    const GridFunction r(u.grid(), sg.g.values() / m);
    const double slope = -sg.g.values().dot(r.values());

    double s = options.initial_step;
    if (options.bb_step && have_prev) {
      const Vector du = u.values() - prev_u.values();
      const Vector dr = r.values() - prev_r.values();
      const double curv = du.dot(dr);
      if (curv > 0.0) s = du.dot(du) / curv;
    }

    bool accepted = false;
    double f_trial = 0.0;
    GridFunction u_trial = u;
    for (int b = 0; b <= options.max_backtracks; ++b) {
      u_trial = u - s * r;
      f_trial = objective(cp, u_trial, options.solve);
      if (f_trial <= sg.objective + options.armijo_c * s * slope && f_trial < sg.objective) {
        accepted = true;
        break;
      }
      s *= options.shrink;
    }
    if (!accepted) {
      trace.line_search_failed = true;
      trace.stop_reason = "line search failed";
      break;
    }

    prev_u = u;
    prev_r = r;
    have_prev = true;
    u = u_trial;
    sg = adjoint_subgradient(cp, u, side, options.thresholds, options.solve);
    trace.iterates.push_back({k, sg.objective, s, riesz_norm(sg.g)});
  }
  if (trace.stop_reason.empty()) trace.stop_reason = "step budget exhausted";
  trace.u_final = u;
  trace.y_final = sg.y;
  return trace;
}

}  // namespace bilateral
