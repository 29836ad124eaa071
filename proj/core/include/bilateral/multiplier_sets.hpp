#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bilateral/grid.hpp"
#include "bilateral/vi_solver.hpp"

namespace bilateral {

/// xi = xi_psi - xi_phi with both parts nonnegative and disjointly supported.
struct MultiplierSplit {
  GridFunction xi_psi;
  GridFunction xi_phi;
};

struct SplitOptions {
  /// Gap below which a node counts as touching an obstacle.
  double eps_active = 1e-8;
  /// Largest multiplier of the wrong sign tolerated, in load units.
  double tol = 1e-6;
};

/// Throws ComplementarityViolated when y leaves [psi, phi] by more than
/// eps_active, or the multiplier has the wrong sign by more than tol on a
/// node that does not touch the matching obstacle.
MultiplierSplit split_multiplier(const BopSolution& solution, const ObstaclePair& obstacles,
                                 const SplitOptions& options = {});

/// v = (y - psi) / (phi - psi): 0 on lower contact, 1 on upper contact.
GridFunction contact_weight(const GridFunction& y, const ObstaclePair& obstacles);

struct SetThresholds {
  double eps_active = 1e-8;
  double eps_mult = 1e-7;
};

struct SetPartition {
  NodeMask active_lower;
  NodeMask active_upper;
  NodeMask strict_lower;
  NodeMask strict_upper;
  NodeMask weak_lower;
  NodeMask weak_upper;
  NodeMask inactive;

  NodeMask active() const { return active_lower | active_upper; }
  NodeMask strict() const { return strict_lower | strict_upper; }
  NodeMask weak() const { return weak_lower | weak_upper; }
  bool strictly_complementary() const { return weak().none(); }

  /// Empty when every partition identity holds; otherwise one message per
  /// broken identity.
  std::vector<std::string> invariant_violations() const;

  bool operator==(const SetPartition&) const = default;
};

SetPartition classify_sets(const BopSolution& solution, const ObstaclePair& obstacles,
                           const SetThresholds& thresholds = {});

struct SetCounts {
  std::size_t active_lower = 0;
  std::size_t active_upper = 0;
  std::size_t strict_lower = 0;
  std::size_t strict_upper = 0;
  std::size_t weak_lower = 0;
  std::size_t weak_upper = 0;
  std::size_t inactive = 0;

  bool operator==(const SetCounts&) const = default;
};

SetCounts count_sets(const SetPartition& partition);

/// Set sizes with both thresholds scaled by 0.1, 1 and 10.
struct ThresholdSensitivity {
  std::array<double, 3> factors{0.1, 1.0, 10.0};
  std::array<SetCounts, 3> counts;

  /// True when all three classifications have the same sizes.
  bool stable() const { return counts[0] == counts[1] && counts[1] == counts[2]; }
};

ThresholdSensitivity threshold_sensitivity(const BopSolution& solution,
                                           const ObstaclePair& obstacles,
                                           const SetThresholds& thresholds = {});

enum class ConeClass : std::uint8_t { free, nonneg, nonpos, zero };

/// Critical cone of the admissible set at (y, xi): free on the inactive set,
/// z >= 0 on weakly active lower nodes, z <= 0 on weakly active upper nodes and
/// z = 0 on strictly active nodes.
class CriticalCone {
 public:
  explicit CriticalCone(SetPartition partition);

  const SetPartition& partition() const noexcept { return partition_; }
  ConeClass class_of(std::size_t node) const { return classes_.at(node); }
  std::size_t size() const noexcept { return classes_.size(); }

  bool contains(const GridFunction& z, double tol = 0.0) const;

  /// Componentwise box describing the cone: -inf/0 lower, 0/+inf upper.
  Vector lower_bounds() const;
  Vector upper_bounds() const;

 private:
  SetPartition partition_;
  std::vector<ConeClass> classes_;
};

struct SetMonotonicityReport {
  /// A_psi(u1) must be inside A_psi(u2).
  std::vector<std::size_t> active_lower_violations;
  /// A^phi(u2) must be inside A^phi(u1).
  std::vector<std::size_t> active_upper_violations;
  /// Strict lower set of u1 must be inside that of u2.
  std::vector<std::size_t> strict_lower_violations;
  /// Strict upper set of u2 must be inside that of u1.
  std::vector<std::size_t> strict_upper_violations;
  /// Upper violations recomputed as lower violations of the reflected pair
  /// (-u2 >= -u1). Present only for the identity control.
  std::optional<std::vector<std::size_t>> strict_upper_via_reflection;

  bool ok() const {
    return active_lower_violations.empty() && active_upper_violations.empty() &&
           strict_lower_violations.empty() && strict_upper_violations.empty() &&
           (!strict_upper_via_reflection ||
            *strict_upper_via_reflection == strict_upper_violations);
  }
};

/// Solves at u1 and u2 and checks that active and strictly active sets move
/// monotonically with the control.
///
/// Throws NotMonotonePair unless u1 >= u2 nodewise.
SetMonotonicityReport verify_strict_set_monotonicity(const BopProblem& problem,
                                                     const GridFunction& u1,
                                                     const GridFunction& u2,
                                                     const SetThresholds& thresholds = {},
                                                     const SolveOptions& options = {});

}  // namespace bilateral
