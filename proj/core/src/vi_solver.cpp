#include "bilateral/vi_solver.hpp"

#include <utility>

#include "bilateral/errors.hpp"

namespace bilateral {

ObstaclePair::ObstaclePair(GridFunction psi, GridFunction phi)
    : psi_(std::move(psi)), phi_(std::move(phi)), separation_(0.0) {
  require_same_grid(psi_.grid(), phi_.grid(), "ObstaclePair");
  separation_ = (phi_.values() - psi_.values()).minCoeff();
  if (!(separation_ > 0.0)) {
    throw InfeasibleObstacles("obstacles must satisfy phi - psi > 0 at every node (min gap " +
                              std::to_string(separation_) + ")");
  }
}

BopProblem::BopProblem(std::shared_ptr<const AssembledOperator> op, ControlOperator control,
                       ObstaclePair obstacles, GridFunction u)
    : op_(std::move(op)), control_(control), obstacles_(std::move(obstacles)), u_(std::move(u)) {
  if (!op_) throw InvalidSpec("BopProblem needs an operator");
  require_same_grid(op_->grid(), obstacles_.grid(), "BopProblem obstacles");
  require_same_grid(op_->grid(), u_.grid(), "BopProblem control");
}

BopProblem BopProblem::with_control(GridFunction u) const {
  return BopProblem(op_, control_, obstacles_, std::move(u));
}

BopProblem BopProblem::with_obstacles(ObstaclePair obstacles) const {
  return BopProblem(op_, control_, std::move(obstacles), u_);
}

namespace {

BoxViOptions box_options(const Grid& grid, const SolveOptions& options) {
  BoxViOptions out;
  out.method = options.method;
  out.tol = options.tol > 0.0 ? options.tol : default_tolerance(options.method);
  out.max_iter = options.max_iter;
  out.omega = options.omega;
  const double h = grid.h_min();
  out.pdas_c = options.pdas_c > 0.0 ? options.pdas_c : 1.0 / (h * h);
  return out;
}

BopSolution solve_between(const BopProblem& problem, const GridFunction& psi,
                          const GridFunction& phi, const SolveOptions& options) {
  const Grid& grid = problem.grid();
  const GridFunction load = problem.load();
  const BoxViResult r =
      solve_box_vi(problem.op().matrix(), problem.op().symmetric(), load.values(), psi.values(),
                   phi.values(), box_options(grid, options));
  BopSolution out{GridFunction(grid, r.x), GridFunction(grid, r.residual), options.method,
                  r.iterations, r.residual_norm};
  return out;
}

}  // namespace

BopSolution solve_bop(const BopProblem& problem, const SolveOptions& options) {
  return solve_between(problem, problem.obstacles().psi(), problem.obstacles().phi(), options);
}

BopSolution solve_bop_with_obstacles(const BopProblem& problem,
                                     const GridFunction& psi_override,
                                     const SolveOptions& options) {
  require_same_grid(problem.grid(), psi_override.grid(), "solve_bop_with_obstacles");
  const GridFunction& phi = problem.obstacles().phi();
  if (!dominates(phi, psi_override)) {
    throw InfeasibleObstacles("overridden lower obstacle exceeds the upper obstacle");
  }
  return solve_between(problem, psi_override, phi, options);
}

BopProblem reflect_problem(const BopProblem& problem) {
  if (problem.control().kind() != ControlKind::identity) {
    throw UnsupportedControlKind("reflection is only defined for the identity control");
  }
  const ObstaclePair& ob = problem.obstacles();
  return BopProblem(problem.op_ptr(), problem.control(), ObstaclePair(-ob.phi(), -ob.psi()),
                    -problem.u());
}

double solution_residual(const BopProblem& problem, const GridFunction& y) {
  require_same_grid(problem.grid(), y.grid(), "solution_residual");
  const Vector r = problem.op().matrix() * y.values() - problem.load().values();
  return natural_residual(problem.op().matrix(), y.values(), r,
                          problem.obstacles().psi().values(),
                          problem.obstacles().phi().values());
}

}  // namespace bilateral
