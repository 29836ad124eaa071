#include <gtest/gtest.h>

#include "bilateral/bilateral.hpp"
#include "bilateral_tools/oracle.hpp"

namespace bilateral {
namespace {

std::shared_ptr<const AssembledOperator> laplacian(const Grid& g) {
  return std::make_shared<const AssembledOperator>(assemble({}, g));
}

BopProblem constant_problem(const Grid& g, double u, double psi, double phi) {
  return BopProblem(laplacian(g), ControlOperator::identity(),
                    ObstaclePair(GridFunction::constant(g, psi), GridFunction::constant(g, phi)),
                    GridFunction::constant(g, u));
}

TEST(Solve, ZeroLoadGivesZero) {
  const BopProblem p = constant_problem(Grid::line(7), 0.0, -1.0, 1.0);
  const BopSolution s = solve_bop(p);
  EXPECT_EQ(max_abs(s.y), 0.0);
  EXPECT_EQ(max_abs(s.xi), 0.0);
  EXPECT_EQ(s.iterations, 0);
}

TEST(Solve, MatchesPatternOracle) {
  const Grid g = Grid::line(5);
  const BopProblem p = constant_problem(g, 100.0, 0.0, 0.1);
  const auto oracle = tools::enumerate_patterns(Eigen::MatrixXd(p.op().matrix()), p.load().values(),
                                                p.obstacles().psi().values(),
                                                p.obstacles().phi().values());
  for (ViMethod m : {ViMethod::pdas, ViMethod::psor}) {
    SolveOptions o;
    o.method = m;
    o.tol = 1e-12;
    const BopSolution s = solve_bop(p, o);
    EXPECT_LE((s.y.values() - oracle.y).cwiseAbs().maxCoeff(), 1e-10) << to_string(m);
    const SetPartition part = classify_sets(s, p.obstacles());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const int code = part.active_lower[i] ? -1 : (part.active_upper[i] ? 1 : 0);
      EXPECT_EQ(code, oracle.pattern[i]);
    }
  }
}

TEST(Solve, OracleRejectsLargeProblems) {
  const Eigen::Index n = 13;
  EXPECT_THROW(tools::enumerate_patterns(Eigen::MatrixXd::Identity(n, n), Vector::Zero(n),
                                         Vector::Constant(n, -1.0), Vector::Constant(n, 1.0)),
               InvalidSpec);
}

TEST(Solve, ControlOrderIsPreserved) {
  const Grid g = Grid::square(12);
  Rng rng(21);
  for (int k = 0; k < 5; ++k) {
    const BopProblem p = random_problem(laplacian(g), ControlOperator::identity(), rng, 10.0);
    const GridFunction u1 = p.u() + random_bump(g, rng, 3.0);
    EXPECT_TRUE(dominates(solve_bop(p.with_control(u1)).y, solve_bop(p).y, 1e-10));
  }
}

TEST(Solve, ObstacleOverride) {
  const Grid g = Grid::square(10);
  Rng rng(4);
  const BopProblem p = random_problem(laplacian(g), ControlOperator::identity(), rng, 10.0);
  const BopSolution s = solve_bop(p);
  EXPECT_LE(max_abs_diff(solve_bop_with_obstacles(p, p.obstacles().psi()).y, s.y), 1e-12);
  const GridFunction lower_psi = p.obstacles().psi() - random_bump(g, rng, 1.0);
  EXPECT_TRUE(dominates(s.y, solve_bop_with_obstacles(p, lower_psi).y, 1e-10));
}

TEST(Solve, ReflectionNegatesAndIsAnInvolution) {
  const Grid g = Grid::square(10);
  Rng rng(8);
  const BopProblem p = random_problem(laplacian(g), ControlOperator::identity(), rng, 10.0);
  const BopSolution s = solve_bop(p);
  const BopProblem r = reflect_problem(p);
  EXPECT_LE(max_abs_diff(solve_bop(r).y, -s.y), 1e-10);
  const BopProblem rr = reflect_problem(r);
  EXPECT_EQ(rr.u().values(), p.u().values());
  EXPECT_EQ(rr.obstacles().psi().values(), p.obstacles().psi().values());
  EXPECT_EQ(rr.obstacles().phi().values(), p.obstacles().phi().values());
}

TEST(Solve, ReflectionNeedsIdentityControl) {
  const Grid g = Grid::line(4);
  const BopProblem p(laplacian(g), ControlOperator::superposition(),
                     ObstaclePair(GridFunction::constant(g, -1.0), GridFunction::constant(g, 1.0)),
                     GridFunction(g));
  EXPECT_THROW(reflect_problem(p), UnsupportedControlKind);
}

TEST(Solve, InfeasibleObstaclesRejected) {
  const Grid g = Grid::line(4);
  EXPECT_THROW(ObstaclePair(GridFunction::constant(g, 1.0), GridFunction::constant(g, 1.0)),
               InfeasibleObstacles);
}

TEST(Solve, PsorAndPdasAgreeOnConvection) {
  const Grid g = Grid::square(16);
  OperatorSpec spec;
  spec.kind = OperatorKind::laplacian_plus_convection;
  spec.convection = {10.0, -6.0};
  Rng rng(31);
  const BopProblem p = random_problem(std::make_shared<const AssembledOperator>(assemble(spec, g)),
                                      ControlOperator::identity(), rng, 10.0);
  SolveOptions psor;
  psor.method = ViMethod::psor;
  const BopSolution a = solve_bop(p, psor);
  const BopSolution b = solve_bop(p);
  EXPECT_LE(max_abs_diff(a.y, b.y), 10.0 * default_tolerance(ViMethod::psor));
  EXPECT_LE(solution_residual(p, b.y), 1e-10);
}

TEST(BoxVi, NoConvergenceWhenBudgetTooSmall) {
  const Grid g = Grid::square(10);
  Rng rng(3);
  const BopProblem p = random_problem(laplacian(g), ControlOperator::identity(), rng, 10.0);
  SolveOptions o;
  o.method = ViMethod::psor;
  o.max_iter = 1;
  EXPECT_THROW(solve_bop(p, o), NoConvergence);
}

TEST(BoxVi, RejectsBadOptions) {
  const Grid g = Grid::line(3);
  const BopProblem p = constant_problem(g, 1.0, -1.0, 1.0);
  SolveOptions o;
  o.method = ViMethod::psor;
  o.omega = 2.5;
  EXPECT_THROW(solve_bop(p, o), InvalidSpec);
  EXPECT_THROW(parse_vi_method("newton"), InvalidSpec);
}

}  // namespace
}  // namespace bilateral
