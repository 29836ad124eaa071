#pragma once

#include <string>
#include <vector>

#include "bilateral/derivatives.hpp"
#include "bilateral/vi_solver.hpp"

namespace bilateral {

/// Tracking problem J(y, u) = 1/2 |y - y_d|^2 + alpha/2 |u|^2 in the mass
/// norm, reduced to u by y = S(u).
class ControlProblem {
 public:
  /// The control stored in `bop` is ignored.
  ControlProblem(BopProblem bop, GridFunction y_d, double alpha);

  const BopProblem& bop() const noexcept { return bop_; }
  const GridFunction& y_d() const noexcept { return y_d_; }
  double alpha() const noexcept { return alpha_; }

  /// J evaluated at an already computed state.
  double tracking_value(const GridFunction& y, const GridFunction& u) const;

 private:
  BopProblem bop_;
  GridFunction y_d_;
  double alpha_;
};

double objective(const ControlProblem& cp, const GridFunction& u,
                 const SolveOptions& options = {});

struct Subgradient {
  GridFunction g;
  GridFunction q;  ///< adjoint state, zero off D_used
  NodeMask D_used;
  LimitSide side = LimitSide::lower;
  GridFunction y;  ///< state at u
  double objective = 0.0;
};

/// g = f'(u)^* q + alpha m u, where (L_DD)^T q_D = (m (y - y_d))_D and D is
/// the generalized-derivative domain of `side`.
Subgradient adjoint_subgradient(const ControlProblem& cp, const GridFunction& u,
                                LimitSide side, const SetThresholds& thresholds = {},
                                const SolveOptions& options = {});

struct DescentOptions {
  int steps = 50;
  double initial_step = 1.0;
  double armijo_c = 1e-4;
  double shrink = 0.5;
  int max_backtracks = 60;
  /// Stop once the gradient norm drops below max(grad_tol, grad_rtol * initial norm).
  double grad_tol = 1e-14;
  double grad_rtol = 1e-8;
  /// Try a Barzilai-Borwein step before backtracking from iteration 1 on.
  bool bb_step = true;
  SetThresholds thresholds;
  SolveOptions solve;
};

struct DescentIterate {
  int iter = 0;
  double objective = 0.0;
  double step = 0.0;       ///< step that produced this iterate; 0 for the start
  double grad_norm = 0.0;  ///< mass norm of the Riesz representative g / m
};

struct DescentTrace {
  LimitSide side = LimitSide::lower;
  std::vector<DescentIterate> iterates;
  GridFunction u_final;
  GridFunction y_final;
  bool line_search_failed = false;
  std::string stop_reason;
};

/// Steepest descent u_{k+1} = u_k - s_k g_k / m with Armijo backtracking.
/// Stops after `steps` accepted steps, when the gradient norm drops below
/// the grad_tol/grad_rtol threshold, or when backtracking fails.
DescentTrace descent_loop(const ControlProblem& cp, const GridFunction& u0, LimitSide side,
                          const DescentOptions& options = {});

}  // namespace bilateral
