#pragma once

#include <cstddef>

#include "bilateral/grid.hpp"
#include "bilateral/operator.hpp"

namespace bilateral {

/// Systems with at most this many unknowns are factorized directly.
inline constexpr std::size_t kDirectSolveLimit = 100000;

/// Relative residual target of the Krylov fallback for larger systems.
inline constexpr double kKrylovTolerance = 1e-12;

/// Solves A_DD x_D = rhs_D and returns the full-length vector with x = 0
/// off D. Rows and columns outside D are ignored.
///
/// Direct sparse factorization (LDLT when `symmetric`, LU otherwise) up to
/// kDirectSolveLimit unknowns; CG or BiCGSTAB beyond that.
Vector solve_restricted(const SparseMatrix& a, const NodeMask& domain, const Vector& rhs,
                        bool symmetric);

}  // namespace bilateral
