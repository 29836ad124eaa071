#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bilateral/multiplier_sets.hpp"
#include "bilateral/vi_solver.hpp"

namespace bilateral {

/// Base point of a derivative computation: the problem, its solution and the
/// classified sets.
struct Linearization {
  BopProblem problem;
  BopSolution solution;
  SetPartition partition;

  CriticalCone cone() const { return CriticalCone(partition); }
};

Linearization linearize(const BopProblem& problem, const SetThresholds& thresholds = {},
                        const SolveOptions& options = {});

/// Which limit of derivatives to take.
///
/// lower: along the increasing controls u - e/n, with D = I u A_w^phi.
/// upper: along the decreasing controls u + e/n, with D = I u A_psi^w.
enum class LimitSide { lower, upper };

std::string to_string(LimitSide side);
LimitSide parse_limit_side(std::string_view name);

/// Domain D of the reduced system for the given side.
NodeMask generalized_domain(const SetPartition& partition, LimitSide side);

struct DerivativeResult {
  GridFunction eta;
  NodeMask D_used;
  int iterations = 0;
  double residual_norm = 0.0;
};

struct DirectionalOptions {
  ViMethod method = ViMethod::psor;
  /// Error-bound target relative to the size of the unconstrained
  /// derivative L^{-1} f'(u) h.
  double rel_tol = 1e-12;
  int max_iter = 0;
  double omega = 1.5;
};

/// Solves the VI over the critical cone: eta in C with
/// <L eta - f'(u) h, z - eta> >= 0 for every z in C.
///
/// D_used is the set of nodes where the cone is not pinned to zero.
DerivativeResult directional_derivative(const Linearization& lin, const GridFunction& h,
                                        const DirectionalOptions& options = {});

/// Solves L_DD eta_D = (f'(u) h)_D with eta = 0 off D.
///
/// Throws InvalidD unless I subset D subset (complement of the strict sets).
DerivativeResult gateaux_derivative_on_D(const Linearization& lin, const GridFunction& h,
                                         const NodeMask& D);

/// Reduced solve on generalized_domain(partition, side).
///
/// Throws InvalidPartition when the partition identities do not hold.
DerivativeResult generalized_derivative(const Linearization& lin, const GridFunction& h,
                                        LimitSide side);

struct SandwichReport {
  std::vector<std::size_t> active_lower;
  std::vector<std::size_t> active_upper;
  std::vector<std::size_t> strict_lower;
  std::vector<std::size_t> strict_upper;

  std::size_t total() const {
    return active_lower.size() + active_upper.size() + strict_lower.size() + strict_upper.size();
  }
  bool ok() const { return total() == 0; }
};

/// Checks the set inclusions between a sequence point and the limit.
///
/// lower side (u_n <= u): A_psi(u) in A_psi(u_n), A^phi(u_n) in A^phi(u),
/// and the same for the strict sets. The upper side mirrors every inclusion.
SandwichReport verify_set_sandwich(const SetPartition& partition_n,
                                   const SetPartition& partition_limit, LimitSide side);

struct MoscoOptions {
  std::vector<int> schedule{2, 4, 8, 16, 32, 64, 128, 256};
  /// Positive perturbation direction; the constant 1 function when empty.
  std::optional<GridFunction> e;
  SetThresholds thresholds;
  SolveOptions solve;
};

struct MoscoPoint {
  int n = 0;
  /// ||eta_n - eta_inf||_inf / ||eta_inf||_inf (absolute when eta_inf = 0).
  double error = 0.0;
  double abs_error = 0.0;
  SetCounts counts;
  /// Sizes of D_n and D.
  std::size_t d_size = 0;
  bool d_matches_limit = false;
  /// Classification changes when the thresholds move by a factor of 10.
  bool threshold_sensitive = false;
  std::size_t sandwich_violations = 0;
};

struct MoscoReport {
  LimitSide side = LimitSide::lower;
  double eta_inf_norm = 0.0;
  std::size_t d_limit_size = 0;
  std::vector<MoscoPoint> points;
};

/// For each n: solves at u_n = u -/+ e/n, computes the reduced derivative on
/// D_n built from the sets at u_n and compares it with the generalized
/// derivative at u.
MoscoReport mosco_convergence_experiment(const BopProblem& problem, const GridFunction& h,
                                         LimitSide side, const MoscoOptions& options = {});

/// Relative max-norm distance ||a - b||_inf / ||b||_inf, or the absolute
/// distance when b = 0.
double relative_max_error(const GridFunction& a, const GridFunction& b);

}  // namespace bilateral
