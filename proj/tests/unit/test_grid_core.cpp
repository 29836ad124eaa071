#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "bilateral/bilateral.hpp"

namespace bilateral {
namespace {

Eigen::MatrixXd dense(const AssembledOperator& op) { return Eigen::MatrixXd(op.matrix()); }

TEST(Grid, LineSpacingAndMass) {
  const Grid g = Grid::line(3);
  EXPECT_EQ(g.size(), 3u);
  EXPECT_DOUBLE_EQ(g.h(0), 0.25);
  EXPECT_DOUBLE_EQ(g.mass_weight(), 0.25);
  EXPECT_DOUBLE_EQ(g.coords(0)[0], 0.25);
}

TEST(Grid, RejectsEmptyGrids) {
  EXPECT_THROW(Grid::line(0), InvalidGrid);
  EXPECT_THROW(Grid::rectangle(3, 0), InvalidGrid);
}

TEST(Grid, MismatchedFunctionsThrow) {
  const GridFunction a(Grid::line(3));
  const GridFunction b(Grid::line(4));
  EXPECT_THROW(a + b, GridMismatch);
}

TEST(Operator, OneDimensionalStencil) {
  const Eigen::MatrixXd a = dense(assemble({}, Grid::line(3)));
  Eigen::MatrixXd expected(3, 3);
  expected << 32, -16, 0, -16, 32, -16, 0, -16, 32;
  EXPECT_EQ((a - expected).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Operator, TwoDimensionalStencil) {
  const Grid g = Grid::square(2);
  const Eigen::MatrixXd a = dense(assemble({}, g));
  ASSERT_EQ(a.rows(), 4);
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(a(i, i), 36.0, 1e-12);
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      const auto pi = g.ij(static_cast<std::size_t>(i));
      const auto pj = g.ij(static_cast<std::size_t>(j));
      const bool neighbour = std::abs(pi[0] - pj[0]) + std::abs(pi[1] - pj[1]) == 1;
      EXPECT_NEAR(a(i, j), neighbour ? -9.0 : 0.0, 1e-12);
    }
  }
}

TEST(Operator, StrongConvectionRejected) {
  OperatorSpec spec;
  spec.kind = OperatorKind::laplacian_plus_convection;
  spec.convection = {100.0, 0.0};  // h = 0.25: h |b| / 2 = 12.5
  EXPECT_THROW(assemble(spec, Grid::line(3)), InvalidSpec);
}

TEST(Operator, ReactionAndConvectionStayMMatrices) {
  OperatorSpec spec;
  spec.kind = OperatorKind::laplacian_plus_convection;
  spec.convection = {15.0, -12.0};  // h |b| / 2 <= 0.84 on the 8x8 grid
  const AssembledOperator op = assemble(spec, Grid::square(8));
  EXPECT_TRUE(is_m_matrix(op.matrix()));
  EXPECT_FALSE(op.symmetric());
  const Eigen::MatrixXd a = dense(op);
  EXPECT_EQ((Eigen::MatrixXd(op.adjoint_matrix()) - a.transpose()).cwiseAbs().maxCoeff(), 0.0);
  // Coercivity: the symmetric part is positive definite.
  const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym).eigenvalues().minCoeff(), 0.0);

  spec = {};
  spec.kind = OperatorKind::laplacian_plus_reaction;
  spec.reaction = 5.0;
  EXPECT_TRUE(is_m_matrix(assemble(spec, Grid::square(4)).matrix()));
}

TEST(Operator, KindNamesRoundTrip) {
  for (OperatorKind k : {OperatorKind::laplacian, OperatorKind::laplacian_plus_reaction,
                         OperatorKind::laplacian_plus_convection}) {
    EXPECT_EQ(parse_operator_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_operator_kind("biharmonic"), InvalidSpec);
}

TEST(Control, IdentityOfZeroIsZero) {
  const Grid g = Grid::square(4);
  EXPECT_EQ(max_abs(ControlOperator::identity().apply(GridFunction(g))), 0.0);
}

TEST(Control, SuperpositionClosedForm) {
  const Grid g = Grid::square(4);
  const auto f = ControlOperator::superposition();
  const GridFunction v = f.apply(GridFunction::constant(g, 1.0));
  const double expected = (1.0 + std::numbers::pi / 4.0) * g.mass_weight();
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(v[i], expected, 1e-15);

  const GridFunction h = GridFunction::constant(g, 3.0);
  const GridFunction d = f.derivative(GridFunction(g), h);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(d[i], 6.0 * g.mass_weight(), 1e-15);
}

TEST(Control, IdentityDerivativeIsMassWeighted) {
  const Grid g = Grid::line(5);
  Rng rng(3);
  const GridFunction h = random_field(g, rng, 1.0);
  const GridFunction d = ControlOperator::identity().derivative(random_field(g, rng, 2.0), h);
  EXPECT_LE(max_abs_diff(d, g.mass_weight() * h), 1e-15);
}

TEST(Control, AffineIsMonotone) {
  const Grid g = Grid::square(6);
  Rng rng(5);
  const auto f = ControlOperator::affine(1.2, 0.3, 0.5);
  for (int k = 0; k < 100; ++k) {
    const GridFunction u2 = random_field(g, rng, 4.0);
    const GridFunction u1 = u2 + random_bump(g, rng, 1.0);
    EXPECT_TRUE(dominates(f.apply(u1), f.apply(u2)));
  }
}

TEST(Control, DerivativeMatchesDifferenceQuotients) {
  const Grid g = Grid::square(5);
  Rng rng(9);
  const auto f = ControlOperator::superposition(1.5);
  const GridFunction u = random_field(g, rng, 3.0);
  const GridFunction h = random_field(g, rng, 1.0);
  const GridFunction d = f.derivative(u, h);
  double prev = INFINITY;
  for (double t : {1e-3, 1e-4, 1e-5}) {
    const GridFunction q = (1.0 / t) * (f.apply(u + t * h) - f.apply(u));
    const double err = max_abs_diff(q, d);
    EXPECT_LT(err, prev);
    EXPECT_LE(err, 10.0 * t * g.mass_weight());
    prev = err;
  }
}

TEST(Control, AdjointIdentity) {
  const Grid g = Grid::square(6);
  Rng rng(13);
  const auto f = ControlOperator::affine(0.8, 0.4);
  const GridFunction u = random_field(g, rng, 2.0);
  const GridFunction q = random_field(g, rng, 1.0);
  const GridFunction w = random_field(g, rng, 1.0);
  const double lhs = f.adjoint_derivative(u, q).values().dot(w.values());
  const double rhs = q.values().dot(f.derivative(u, w).values());
  EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(rhs));
}

TEST(Control, PreimageInvertsApply) {
  const Grid g = Grid::square(5);
  Rng rng(17);
  for (const auto& f : {ControlOperator::identity(), ControlOperator::superposition(2.0)}) {
    const GridFunction u = random_field(g, rng, 4.0);
    EXPECT_LE(max_abs_diff(f.preimage(f.apply(u)), u), 1e-10);
  }
}

TEST(NodeMask, SetAlgebra) {
  NodeMask a(5);
  a.set(1);
  a.set(3);
  NodeMask b(5);
  b.set(3);
  EXPECT_EQ((a | b).count(), 2u);
  EXPECT_EQ((a & b).count(), 1u);
  EXPECT_EQ((~a).count(), 3u);
  EXPECT_TRUE(b.subset_of(a));
  EXPECT_FALSE(a.subset_of(b));
  EXPECT_EQ(a.minus(b).indices(), std::vector<std::size_t>{1});
}

}  // namespace
}  // namespace bilateral
