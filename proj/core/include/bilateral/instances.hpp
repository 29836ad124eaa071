#pragma once

#include <memory>

#include "bilateral/control.hpp"
#include "bilateral/grid.hpp"
#include "bilateral/operator.hpp"
#include "bilateral/rng.hpp"
#include "bilateral/vi_solver.hpp"

namespace bilateral {

/// Smooth random field: a few random low sine modes, scaled so that the max
/// over the grid equals `amplitude`.
GridFunction random_field(const Grid& grid, Rng& rng, double amplitude, int modes = 4);

/// Nonnegative random bump with a positive peak of height `amplitude`.
GridFunction random_bump(const Grid& grid, Rng& rng, double amplitude);

/// Random obstacle problem with a control of size u_amp. The obstacles sit at
/// 40-60% of the unconstrained state's extremes on each side, so contact
/// happens wherever that state has a pronounced peak or trough.
BopProblem random_problem(std::shared_ptr<const AssembledOperator> op,
                          const ControlOperator& control, Rng& rng, double u_amp = 5.0);

/// Which contact structure a manufactured instance should have.
enum class ContactStructure {
  strict,    ///< every contact node carries a nonzero multiplier
  biactive,  ///< part of each contact region has zero multiplier
};

/// Problem built backwards from a chosen state and multiplier, so its exact
/// solution and contact sets are known.
struct ManufacturedInstance {
  BopProblem problem;
  GridFunction y;   ///< exact solution
  GridFunction xi;  ///< exact multiplier L y - f(u)
  NodeMask lower_contact;
  NodeMask upper_contact;
  NodeMask weak_lower;  ///< contact nodes with zero multiplier
  NodeMask weak_upper;
};

/// Places a lower contact patch in the right half and an upper contact patch
/// in the left half. Off contact the state keeps a distance of at least 5% of
/// the obstacle gap. u is recovered nodewise from f(u) = L y - xi, then the
/// construction is scaled so that ||u||_inf is about `u_target`.
///
/// Needs a diagonal control kind (identity or superposition).
ManufacturedInstance manufactured_instance(std::shared_ptr<const AssembledOperator> op,
                                           const ControlOperator& control,
                                           ContactStructure structure, double u_target = 10.0);

}  // namespace bilateral
