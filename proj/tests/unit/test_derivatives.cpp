#include <gtest/gtest.h>

#include "bilateral/bilateral.hpp"

namespace bilateral {
namespace {

std::shared_ptr<const AssembledOperator> laplacian(const Grid& g) {
  return std::make_shared<const AssembledOperator>(assemble({}, g));
}

BopProblem unconstrained(const Grid& g) {
  return BopProblem(laplacian(g), ControlOperator::identity(),
                    ObstaclePair(GridFunction::constant(g, -1e3), GridFunction::constant(g, 1e3)),
                    GridFunction::constant(g, 1.0));
}

ManufacturedInstance biactive(const Grid& g) {
  return manufactured_instance(laplacian(g), ControlOperator::identity(), ContactStructure::biactive);
}

TEST(Directional, UnconstrainedIsFullSolve) {
  const Grid g = Grid::square(10);
  Rng rng(1);
  const Linearization lin = linearize(unconstrained(g));
  const GridFunction h = random_field(g, rng, 1.0);
  const GridFunction full(g, solve_restricted(lin.problem.op().matrix(), NodeMask::all(g.size()),
                                              lin.problem.control().derivative(lin.problem.u(), h).values(),
                                              true));
  EXPECT_LE(relative_max_error(directional_derivative(lin, h).eta, full), 1e-10);
  EXPECT_LE(relative_max_error(gateaux_derivative_on_D(lin, h, NodeMask::all(g.size())).eta, full), 1e-12);
}

TEST(Directional, FullyStrictlyActiveGivesZero) {
  const Grid g = Grid::square(6);
  const BopProblem p(laplacian(g), ControlOperator::identity(),
                     ObstaclePair(GridFunction(g), GridFunction::constant(g, 1.0)),
                     GridFunction::constant(g, -1000.0));
  const Linearization lin = linearize(p);
  ASSERT_EQ(lin.partition.strict_lower.count(), g.size());
  const GridFunction h = GridFunction::constant(g, 1.0);
  EXPECT_EQ(max_abs(directional_derivative(lin, h).eta), 0.0);
  EXPECT_EQ(max_abs(generalized_derivative(lin, h, LimitSide::lower).eta), 0.0);
  EXPECT_EQ(generalized_derivative(lin, h, LimitSide::upper).D_used.count(), 0u);
}

TEST(Directional, LiesInConeAndIsHomogeneous) {
  const Grid g = Grid::square(16);
  const ManufacturedInstance mi = biactive(g);
  const Linearization lin = linearize(mi.problem);
  Rng rng(4);
  const GridFunction h = random_field(g, rng, 1.0);
  const GridFunction eta = directional_derivative(lin, h).eta;
  EXPECT_TRUE(lin.cone().contains(eta, 1e-12 * max_abs(eta)));
  const GridFunction eta3 = directional_derivative(lin, 3.0 * h).eta;
  EXPECT_LE(relative_max_error(eta3, 3.0 * eta), 1e-9);
}

TEST(Generalized, SidesDifferOnBiactiveInstance) {
  const Grid g = Grid::square(16);
  const Linearization lin = linearize(biactive(g).problem);
  const GridFunction h = GridFunction::constant(g, 1.0);
  const DerivativeResult lo = generalized_derivative(lin, h, LimitSide::lower);
  const DerivativeResult up = generalized_derivative(lin, h, LimitSide::upper);
  EXPECT_GT(relative_max_error(lo.eta, up.eta), 1e-3);
  EXPECT_EQ(lo.D_used, generalized_domain(lin.partition, LimitSide::lower));
  EXPECT_EQ(lo.D_used, lin.partition.inactive | lin.partition.weak_upper);
  EXPECT_EQ(up.D_used, lin.partition.inactive | lin.partition.weak_lower);
}

TEST(Generalized, LinearInDirection) {
  const Grid g = Grid::square(12);
  const Linearization lin = linearize(biactive(g).problem);
  Rng rng(5);
  const GridFunction a = random_field(g, rng, 1.0);
  const GridFunction b = random_field(g, rng, 1.0);
  const GridFunction lhs = generalized_derivative(lin, a - 2.0 * b, LimitSide::upper).eta;
  const GridFunction rhs = generalized_derivative(lin, a, LimitSide::upper).eta -
                           2.0 * generalized_derivative(lin, b, LimitSide::upper).eta;
  EXPECT_LE(relative_max_error(lhs, rhs), 1e-10);
}

TEST(Gateaux, InvalidDomainRejected) {
  const Grid g = Grid::square(12);
  const Linearization lin = linearize(biactive(g).problem);
  const GridFunction h = GridFunction::constant(g, 1.0);
  EXPECT_THROW(gateaux_derivative_on_D(lin, h, NodeMask(g.size())), InvalidD);
  EXPECT_THROW(gateaux_derivative_on_D(lin, h, NodeMask::all(g.size())), InvalidD);
}

TEST(Gateaux, StrictComplementarityMatchesCone) {
  const Grid g = Grid::square(16);
  const ManufacturedInstance mi =
      manufactured_instance(laplacian(g), ControlOperator::identity(), ContactStructure::strict);
  const Linearization lin = linearize(mi.problem);
  ASSERT_TRUE(lin.partition.strictly_complementary());
  Rng rng(8);
  const GridFunction h = random_field(g, rng, 1.0);
  for (double sign : {1.0, -1.0}) {
    const GridFunction reduced = gateaux_derivative_on_D(lin, sign * h, lin.partition.inactive).eta;
    EXPECT_LE(relative_max_error(directional_derivative(lin, sign * h).eta, reduced), 1e-9);
    EXPECT_LE(relative_max_error(generalized_derivative(lin, sign * h, LimitSide::lower).eta, reduced), 1e-12);
    EXPECT_LE(relative_max_error(generalized_derivative(lin, sign * h, LimitSide::upper).eta, reduced), 1e-12);
    EXPECT_LE(relative_max_error(gateaux_derivative_on_D(lin, sign * h, ~lin.partition.strict()).eta, reduced),
              1e-12);
  }
}

TEST(Sandwich, IdenticalPartitionsPass) {
  const Grid g = Grid::square(12);
  const Linearization lin = linearize(biactive(g).problem);
  EXPECT_TRUE(verify_set_sandwich(lin.partition, lin.partition, LimitSide::lower).ok());
  EXPECT_TRUE(verify_set_sandwich(lin.partition, lin.partition, LimitSide::upper).ok());
}

TEST(Sandwich, DetectsBrokenInclusion) {
  const Grid g = Grid::square(12);
  const Linearization lin = linearize(biactive(g).problem);
  SetPartition shrunk = lin.partition;
  const std::size_t node = lin.partition.active_lower.indices().front();
  shrunk.active_lower.set(node, false);
  // Lower side needs A_psi(u) inside A_psi(u_n).
  EXPECT_EQ(verify_set_sandwich(shrunk, lin.partition, LimitSide::lower).active_lower.size(), 1u);
}

TEST(Mosco, UnconstrainedHasNoError) {
  const Grid g = Grid::square(8);
  MoscoOptions o;
  o.schedule = {2, 4, 8};
  const MoscoReport r = mosco_convergence_experiment(unconstrained(g), GridFunction::constant(g, 1.0),
                                                     LimitSide::lower, o);
  ASSERT_EQ(r.points.size(), 3u);
  for (const auto& pt : r.points) EXPECT_LE(pt.error, 1e-14);
}

TEST(Mosco, BiactiveLimitBothSides) {
  const Grid g = Grid::square(16);
  const BopProblem p = biactive(g).problem;
  for (LimitSide side : {LimitSide::lower, LimitSide::upper}) {
    const MoscoReport r = mosco_convergence_experiment(p, GridFunction::constant(g, 1.0), side);
    EXPECT_LE(r.points.back().error, 1e-4);
    for (const auto& pt : r.points) EXPECT_EQ(pt.sandwich_violations, 0u);
  }
}

TEST(Mosco, SideNamesRoundTrip) {
  EXPECT_EQ(parse_limit_side("lower"), LimitSide::lower);
  EXPECT_EQ(parse_limit_side(to_string(LimitSide::upper)), LimitSide::upper);
  EXPECT_THROW(parse_limit_side("left"), InvalidSpec);
}

}  // namespace
}  // namespace bilateral
