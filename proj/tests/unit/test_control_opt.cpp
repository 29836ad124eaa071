#include <cmath>

#include <gtest/gtest.h>

#include "bilateral/bilateral.hpp"

namespace bilateral {
namespace {

std::shared_ptr<const AssembledOperator> laplacian(const Grid& g) {
  return std::make_shared<const AssembledOperator>(assemble({}, g));
}

BopProblem unconstrained(const Grid& g, GridFunction u) {
  return BopProblem(laplacian(g), ControlOperator::identity(),
                    ObstaclePair(GridFunction::constant(g, -1e3), GridFunction::constant(g, 1e3)),
                    std::move(u));
}

TEST(Objective, AttainableTargetGivesZero) {
  const Grid g = Grid::square(8);
  Rng rng(1);
  const BopProblem p = random_problem(laplacian(g), ControlOperator::identity(), rng, 10.0);
  const ControlProblem cp(p, solve_bop(p).y, 0.0);
  EXPECT_EQ(objective(cp, p.u()), 0.0);
}

TEST(Objective, ZeroControlZeroTarget) {
  const Grid g = Grid::square(8);
  const ControlProblem cp(unconstrained(g, GridFunction(g)), GridFunction(g), 0.5);
  EXPECT_EQ(objective(cp, GridFunction(g)), 0.0);
}

TEST(Objective, MatchesRecomputationFromCsv) {
  const Grid g = Grid::square(8);
  Rng rng(2);
  const BopProblem p = random_problem(laplacian(g), ControlOperator::identity(), rng, 10.0);
  const GridFunction y_d = random_field(g, rng, 1e-4);
  const ControlProblem cp(p, y_d, 1e-3);
  const BopSolution s = solve_bop(p);
  const std::string csv = nodal_csv(g, {column("state", s.y)});
  const std::string path = ::testing::TempDir() + "objective_state.csv";
  write_nodal_csv(path, g, {column("state", s.y)});
  const GridFunction y = read_nodal_column(path, g, "state");
  double expected = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    expected += 0.5 * g.mass_weight() * ((y[i] - y_d[i]) * (y[i] - y_d[i]) + 1e-3 * p.u()[i] * p.u()[i]);
  }
  EXPECT_NEAR(objective(cp, p.u()), expected, 1e-14 * expected);
}

TEST(Subgradient, UnconstrainedMatchesSmoothGradient) {
  const Grid g = Grid::square(10);
  Rng rng(3);
  const GridFunction u = random_field(g, rng, 5.0);
  const GridFunction y_d = random_field(g, rng, 1e-3);
  const double alpha = 1e-4;
  const ControlProblem cp(unconstrained(g, u), y_d, alpha);
  const Subgradient sg = adjoint_subgradient(cp, u, LimitSide::lower);
  const double m = g.mass_weight();
  const SparseMatrix a = cp.bop().op().matrix();
  const Vector q = solve_restricted(a, NodeMask::all(g.size()), (m * (sg.y - y_d)).values(), true);
  const GridFunction expected(g, m * q + alpha * m * u.values());
  EXPECT_LE(relative_max_error(sg.g, expected), 1e-10);

  const GridFunction w = random_field(g, rng, 1.0);
  const double slope = sg.g.values().dot(w.values());
  double prev = INFINITY;
  for (double t : {1e-2, 1e-3, 1e-4}) {
    const double fd = (objective(cp, u + t * w) - objective(cp, u)) / t;
    const double err = std::abs(fd - slope);
    EXPECT_LT(err, prev);
    prev = err;
  }
}

TEST(Subgradient, StrictlyActiveEverywhereLeavesOnlyTikhonovTerm) {
  const Grid g = Grid::square(6);
  const BopProblem p(laplacian(g), ControlOperator::identity(),
                     ObstaclePair(GridFunction(g), GridFunction::constant(g, 1.0)),
                     GridFunction::constant(g, -1000.0));
  const double alpha = 0.1;
  const ControlProblem cp(p, GridFunction::constant(g, 0.5), alpha);
  const Subgradient sg = adjoint_subgradient(cp, p.u(), LimitSide::lower);
  EXPECT_EQ(max_abs(sg.q), 0.0);
  EXPECT_LE(max_abs_diff(sg.g, alpha * g.mass_weight() * p.u()), 1e-15 * max_abs(sg.g));
}

TEST(Subgradient, BiactiveSidesAreConsistentWithOneSidedQuotients) {
  const Grid g = Grid::square(16);
  const ManufacturedInstance mi =
      manufactured_instance(laplacian(g), ControlOperator::identity(), ContactStructure::biactive);
  Rng rng(5);
  const ControlProblem cp(mi.problem, random_field(g, rng, max_abs(mi.y)), 0.0);
  const Subgradient lo = adjoint_subgradient(cp, mi.problem.u(), LimitSide::lower);
  const Subgradient up = adjoint_subgradient(cp, mi.problem.u(), LimitSide::upper);
  EXPECT_GT(relative_max_error(lo.g, up.g), 1e-3);
  const double t = 1e-6;
  const double j0 = lo.objective;
  for (int k = 0; k < 10; ++k) {
    const GridFunction h = random_field(g, rng, max_abs(mi.problem.u()));
    const double plus = (objective(cp, mi.problem.u() + t * h) - j0) / t;
    const double minus = (j0 - objective(cp, mi.problem.u() - t * h)) / t;
    const double bound = std::max(plus, minus);
    const double scale = lo.g.values().cwiseAbs().dot(h.values().cwiseAbs());
    EXPECT_LE(lo.g.values().dot(h.values()), bound + 1e-4 * scale);
    EXPECT_LE(up.g.values().dot(h.values()), bound + 1e-4 * scale);
  }
}

TEST(Descent, StartAtUnconstrainedMinimizerStopsImmediately) {
  const Grid g = Grid::square(8);
  Rng rng(6);
  const GridFunction u = random_field(g, rng, 2.0);
  const BopProblem p = unconstrained(g, u);
  const ControlProblem cp(p, solve_bop(p).y, 0.0);
  DescentOptions o;
  o.grad_tol = 1e-12;
  const DescentTrace tr = descent_loop(cp, u, LimitSide::lower, o);
  EXPECT_EQ(tr.iterates.size(), 1u);
  EXPECT_EQ(tr.stop_reason, "gradient below tolerance");
  EXPECT_LT(tr.iterates.front().grad_norm, o.grad_tol);
}

TEST(Descent, AttainableTargetDecreasesStrictly) {
  const Grid g = Grid::square(16);
  Rng rng(7);
  const BopProblem p = random_problem(laplacian(g), ControlOperator::identity(), rng, 10.0);
  const ControlProblem cp(p, solve_bop(p).y, 0.0);
  DescentOptions o;
  o.steps = 50;
  for (LimitSide side : {LimitSide::lower, LimitSide::upper}) {
    const DescentTrace tr = descent_loop(cp, GridFunction(g), side, o);
    ASSERT_GE(tr.iterates.size(), 2u);
    for (std::size_t k = 1; k < tr.iterates.size(); ++k) {
      EXPECT_LT(tr.iterates[k].objective, tr.iterates[k - 1].objective);
      EXPECT_GT(tr.iterates[k].step, 0.0);
    }
    EXPECT_LE(tr.iterates.back().objective, 1e-3 * tr.iterates.front().objective);
  }
}

TEST(Descent, RejectsBadArmijoParameters) {
  const Grid g = Grid::square(4);
  const ControlProblem cp(unconstrained(g, GridFunction(g)), GridFunction(g), 0.0);
  DescentOptions o;
  o.shrink = 1.5;
  EXPECT_THROW(descent_loop(cp, GridFunction(g), LimitSide::lower, o), InvalidSpec);
}

}  // namespace
}  // namespace bilateral
