#pragma once

#include <memory>

#include "bilateral/box_vi.hpp"
#include "bilateral/control.hpp"
#include "bilateral/grid.hpp"
#include "bilateral/operator.hpp"

namespace bilateral {

/// Lower and upper obstacle with phi - psi >= separation > 0 at every node.
class ObstaclePair {
 public:
  /// Throws InfeasibleObstacles when min(phi - psi) <= 0.
  ObstaclePair(GridFunction psi, GridFunction phi);

  const GridFunction& psi() const noexcept { return psi_; }
  const GridFunction& phi() const noexcept { return phi_; }
  double separation() const noexcept { return separation_; }
  const Grid& grid() const noexcept { return psi_.grid(); }

 private:
  GridFunction psi_;
  GridFunction phi_;
  double separation_;
};

/// Find psi <= y <= phi with <L y - f(u), z - y> >= 0 for all admissible z.
class BopProblem {
 public:
  BopProblem(std::shared_ptr<const AssembledOperator> op, ControlOperator control,
             ObstaclePair obstacles, GridFunction u);

  const AssembledOperator& op() const noexcept { return *op_; }
  const std::shared_ptr<const AssembledOperator>& op_ptr() const noexcept { return op_; }
  const ControlOperator& control() const noexcept { return control_; }
  const ObstaclePair& obstacles() const noexcept { return obstacles_; }
  const GridFunction& u() const noexcept { return u_; }
  const Grid& grid() const noexcept { return op_->grid(); }

  /// f(u) as a nodal load vector.
  GridFunction load() const { return control_.apply(u_); }

  BopProblem with_control(GridFunction u) const;
  BopProblem with_obstacles(ObstaclePair obstacles) const;

 private:
  std::shared_ptr<const AssembledOperator> op_;
  ControlOperator control_;
  ObstaclePair obstacles_;
  GridFunction u_;
};

struct SolveOptions {
  ViMethod method = ViMethod::pdas;
  double tol = 0.0;     ///< 0 selects default_tolerance(method).
  int max_iter = 0;     ///< 0 selects the method default.
  double omega = 1.5;
  double pdas_c = 0.0;  ///< 0 selects 1 / h_min^2.
};

struct BopSolution {
  GridFunction y;
  GridFunction xi;  ///< L y - f(u)
  ViMethod solver = ViMethod::pdas;
  int iterations = 0;
  double residual_norm = 0.0;
};

BopSolution solve_bop(const BopProblem& problem, const SolveOptions& options = {});

/// Solves with the lower obstacle replaced. The override only needs
/// psi_override <= phi; nodes where the two meet are pinned.
BopSolution solve_bop_with_obstacles(const BopProblem& problem,
                                     const GridFunction& psi_override,
                                     const SolveOptions& options = {});

/// Problem with obstacles (-phi, -psi), control -u and the same operator. Its
/// solution is the negative of the original one.
///
/// Throws UnsupportedControlKind unless the control is the identity.
BopProblem reflect_problem(const BopProblem& problem);

/// Natural residual of a candidate solution of `problem`, in state units.
double solution_residual(const BopProblem& problem, const GridFunction& y);

}  // namespace bilateral
