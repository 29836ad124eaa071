#include <gtest/gtest.h>

#include "bilateral/bilateral.hpp"

namespace bilateral {
namespace {

std::shared_ptr<const AssembledOperator> laplacian(const Grid& g) {
  return std::make_shared<const AssembledOperator>(assemble({}, g));
}

BopProblem problem(const Grid& g, GridFunction u, double psi, double phi) {
  return BopProblem(laplacian(g), ControlOperator::identity(),
                    ObstaclePair(GridFunction::constant(g, psi), GridFunction::constant(g, phi)),
                    std::move(u));
}

TEST(Split, ZeroMultiplier) {
  const Grid g = Grid::line(6);
  const BopProblem p = problem(g, GridFunction(g), -1.0, 1.0);
  const MultiplierSplit s = split_multiplier(solve_bop(p), p.obstacles());
  EXPECT_EQ(max_abs(s.xi_psi), 0.0);
  EXPECT_EQ(max_abs(s.xi_phi), 0.0);
}

TEST(Split, OneSidedContact) {
  // A strong negative load presses the state onto psi only.
  const Grid g = Grid::square(8);
  const BopProblem p = problem(g, GridFunction::constant(g, -500.0), -1e-3, 10.0);
  const BopSolution sol = solve_bop(p);
  const MultiplierSplit s = split_multiplier(sol, p.obstacles());
  EXPECT_EQ(max_abs(s.xi_phi), 0.0);
  EXPECT_EQ(max_abs_diff(s.xi_psi, sol.xi), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_GE(sol.xi[i], 0.0);
}

TEST(Split, ReconstructionAndSupports) {
  const Grid g = Grid::square(16);
  Rng rng(12);
  const BopProblem p = random_problem(laplacian(g), ControlOperator::identity(), rng, 10.0);
  const BopSolution sol = solve_bop(p);
  const MultiplierSplit s = split_multiplier(sol, p.obstacles());
  EXPECT_EQ(max_abs_diff(s.xi_psi - s.xi_phi, sol.xi), 0.0);
  const SetPartition part = classify_sets(sol, p.obstacles());
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_GE(s.xi_psi[i], 0.0);
    EXPECT_GE(s.xi_phi[i], 0.0);
    EXPECT_FALSE(s.xi_psi[i] > 0.0 && s.xi_phi[i] > 0.0);
    if (s.xi_psi[i] > 1e-7) EXPECT_TRUE(part.active_lower[i]);
    if (s.xi_phi[i] > 1e-7) EXPECT_TRUE(part.active_upper[i]);
  }
}

TEST(Split, WrongSignMultiplierRejected) {
  const Grid g = Grid::line(4);
  const BopProblem p = problem(g, GridFunction(g), -1.0, 1.0);
  BopSolution fake = solve_bop(p);
  fake.xi[1] = 1.0;  // positive multiplier off the lower obstacle
  EXPECT_THROW(split_multiplier(fake, p.obstacles()), ComplementarityViolated);
}

TEST(Split, WeightedPairingIdentity) {
  // With v = (y - psi) / (phi - psi): <xi, v w> = -<xi_phi, w> since v = 0 on
  // lower contact and 1 on upper contact.
  const Grid g = Grid::square(16);
  Rng rng(2);
  const BopProblem p = random_problem(laplacian(g), ControlOperator::identity(), rng, 10.0);
  const BopSolution sol = solve_bop(p);
  const MultiplierSplit s = split_multiplier(sol, p.obstacles());
  const GridFunction v = contact_weight(sol.y, p.obstacles());
  for (int k = 0; k < 20; ++k) {
    const GridFunction w = random_field(g, rng, 1.0);
    double lhs = 0.0;
    double rhs = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      lhs += sol.xi[i] * v[i] * w[i];
      rhs -= s.xi_phi[i] * w[i];
      scale += std::abs(sol.xi[i] * w[i]);
    }
    EXPECT_LE(std::abs(lhs - rhs), 1e-8 * scale);
  }
}

TEST(Classify, UnconstrainedIsAllInactive) {
  const Grid g = Grid::square(6);
  const BopProblem p = problem(g, GridFunction::constant(g, 1.0), -1e3, 1e3);
  const SetPartition part = classify_sets(solve_bop(p), p.obstacles());
  EXPECT_EQ(part.inactive.count(), g.size());
  EXPECT_TRUE(part.invariant_violations().empty());
  EXPECT_TRUE(part.strictly_complementary());
}

TEST(Classify, ManufacturedSetsRecovered) {
  const Grid g = Grid::square(24);
  const ManufacturedInstance mi =
      manufactured_instance(laplacian(g), ControlOperator::identity(), ContactStructure::biactive);
  const BopSolution sol = solve_bop(mi.problem);
  EXPECT_LE(max_abs_diff(sol.y, mi.y), 1e-10);
  const SetPartition part = classify_sets(sol, mi.problem.obstacles());
  EXPECT_EQ(part.active_lower, mi.lower_contact);
  EXPECT_EQ(part.active_upper, mi.upper_contact);
  EXPECT_EQ(part.weak_lower, mi.weak_lower);
  EXPECT_EQ(part.weak_upper, mi.weak_upper);
  EXPECT_FALSE(part.weak_lower.none());
  EXPECT_FALSE(part.weak_upper.none());
  EXPECT_TRUE(threshold_sensitivity(sol, mi.problem.obstacles()).stable());
}

TEST(Classify, SensitivityReportsThreeFactors) {
  const Grid g = Grid::square(6);
  const BopProblem p = problem(g, GridFunction::constant(g, 1.0), -1e3, 1e3);
  const ThresholdSensitivity t = threshold_sensitivity(solve_bop(p), p.obstacles());
  EXPECT_DOUBLE_EQ(t.factors[0], 0.1);
  EXPECT_DOUBLE_EQ(t.factors[2], 10.0);
  EXPECT_TRUE(t.stable());
}

TEST(StrictMonotonicity, EqualControlsHaveNoViolations) {
  const Grid g = Grid::square(12);
  Rng rng(6);
  const BopProblem p = random_problem(laplacian(g), ControlOperator::identity(), rng, 10.0);
  const SetMonotonicityReport r = verify_strict_set_monotonicity(p, p.u(), p.u());
  EXPECT_TRUE(r.ok());
  ASSERT_TRUE(r.strict_upper_via_reflection.has_value());
}

TEST(StrictMonotonicity, RandomPairs) {
  const Grid g = Grid::square(12);
  Rng rng(7);
  for (int k = 0; k < 10; ++k) {
    const BopProblem p = random_problem(laplacian(g), ControlOperator::identity(), rng, 10.0);
    const GridFunction u1 = p.u() + random_bump(g, rng, 4.0);
    EXPECT_TRUE(verify_strict_set_monotonicity(p, u1, p.u()).ok());
  }
}

TEST(StrictMonotonicity, UnorderedPairRejected) {
  const Grid g = Grid::line(5);
  const BopProblem p = problem(g, GridFunction(g), -1.0, 1.0);
  EXPECT_THROW(verify_strict_set_monotonicity(p, GridFunction::constant(g, -1.0), GridFunction(g)),
               NotMonotonePair);
}

TEST(CriticalCone, BoxMatchesClasses) {
  const Grid g = Grid::square(24);
  const ManufacturedInstance mi =
      manufactured_instance(laplacian(g), ControlOperator::identity(), ContactStructure::biactive);
  const BopSolution sol = solve_bop(mi.problem);
  const CriticalCone cone(classify_sets(sol, mi.problem.obstacles()));
  const Vector lo = cone.lower_bounds();
  const Vector up = cone.upper_bounds();
  for (std::size_t i = 0; i < cone.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    switch (cone.class_of(i)) {
      case ConeClass::free: EXPECT_TRUE(std::isinf(lo[k]) && std::isinf(up[k])); break;
      case ConeClass::nonneg: EXPECT_TRUE(lo[k] == 0.0 && std::isinf(up[k])); break;
      case ConeClass::nonpos: EXPECT_TRUE(std::isinf(lo[k]) && up[k] == 0.0); break;
      case ConeClass::zero: EXPECT_TRUE(lo[k] == 0.0 && up[k] == 0.0); break;
    }
  }
  EXPECT_TRUE(cone.contains(GridFunction(g)));
}

}  // namespace
}  // namespace bilateral
