#pragma once

#include <string>
#include <string_view>

#include "bilateral/grid.hpp"
#include "bilateral/operator.hpp"

namespace bilateral {

enum class ViMethod { psor, pdas };

std::string to_string(ViMethod method);
ViMethod parse_vi_method(std::string_view name);

/// Default stopping tolerance per method.
double default_tolerance(ViMethod method);

struct BoxViOptions {
  ViMethod method = ViMethod::pdas;
  double tol = 1e-10;
  /// 0 picks 200 for PDAS and 200000 sweeps for PSOR. The PSOR fallback of
  /// PDAS always gets the PSOR default.
  int max_iter = 0;
  double omega = 1.5;
  double pdas_c = 1.0;
};

struct BoxViResult {
  Vector x;
  Vector residual;  ///< A x - b
  int iterations = 0;
  /// kappa * natural_residual, with kappa = max(1, ||A^{-1} diag(A)||_inf):
  /// a bound on the max-norm distance to the exact solution.
  double residual_norm = 0.0;
};

/// Finds lo <= x <= up with A x - b >= 0 where x = lo, <= 0 where x = up and
/// = 0 in between. Bounds may be infinite; lo_i == up_i pins node i.
///
/// A must be an M-matrix. PSOR projects each relaxed Gauss-Seidel update onto
/// [lo_i, up_i]. PDAS starts from the unconstrained solve and alternates
/// active-set estimation with a reduced linear solve; if an active set repeats
/// or max_iter runs out it hands its best iterate to PSOR. Both stop once
/// residual_norm, an error bound in the units of x, drops below tol.
///
/// Throws NoConvergence after max_iter iterations.
BoxViResult solve_box_vi(const SparseMatrix& a, bool symmetric, const Vector& b,
                         const Vector& lo, const Vector& up, const BoxViOptions& options,
                         const Vector* warm_start = nullptr);

/// max_i |x_i - clamp(x_i - r_i / A_ii, lo_i, up_i)| with r = A x - b.
///
/// Zero exactly at solutions. Measures bound violation, multiplier sign errors
/// and the interior residual in one number, in the units of x.
double natural_residual(const SparseMatrix& a, const Vector& x, const Vector& r,
                        const Vector& lo, const Vector& up);

}  // namespace bilateral
