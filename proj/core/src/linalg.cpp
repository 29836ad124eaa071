#include "bilateral/linalg.hpp"

#include <string>
#include <vector>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "bilateral/errors.hpp"

namespace bilateral {

namespace {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

template <typename Solver>
Vector factor_and_solve(Solver& solver, const ColMatrix& a, const Vector& b) {
  solver.compute(a);
  if (solver.info() != Eigen::Success) {
    throw Error("sparse factorization of restricted operator failed");
  }
  Vector x = solver.solve(b);
  if (solver.info() != Eigen::Success) {
    throw Error("sparse solve of restricted operator failed");
  }
  return x;
}

}  // namespace

Vector solve_restricted(const SparseMatrix& a, const NodeMask& domain, const Vector& rhs,
                        bool symmetric) {
  const auto n = static_cast<std::size_t>(a.rows());
  if (domain.size() != n || static_cast<std::size_t>(rhs.size()) != n) {
    throw GridMismatch("solve_restricted: mask, matrix and rhs sizes differ");
  }

  std::vector<Eigen::Index> local(n, -1);
  std::vector<Eigen::Index> global;
  global.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (domain[i]) {
      local[i] = static_cast<Eigen::Index>(global.size());
      global.push_back(static_cast<Eigen::Index>(i));
    }
  }
  Vector out = Vector::Zero(static_cast<Eigen::Index>(n));
  const auto m = static_cast<Eigen::Index>(global.size());
  if (m == 0) return out;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(m) * 5);
  Vector b(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const Eigen::Index row = global[static_cast<std::size_t>(r)];
    b[r] = rhs[row];
    for (SparseMatrix::InnerIterator it(a, row); it; ++it) {
      const Eigen::Index c = local[static_cast<std::size_t>(it.col())];
      if (c >= 0) triplets.emplace_back(r, c, it.value());
    }
  }
  ColMatrix reduced(m, m);
  reduced.setFromTriplets(triplets.begin(), triplets.end());

  Vector x;
  if (static_cast<std::size_t>(m) <= kDirectSolveLimit) {
    if (symmetric) {
      Eigen::SimplicialLDLT<ColMatrix> solver;
      x = factor_and_solve(solver, reduced, b);
    } else {
      Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> solver;
      x = factor_and_solve(solver, reduced, b);
    }
  } else if (symmetric) {
    Eigen::ConjugateGradient<ColMatrix, Eigen::Lower | Eigen::Upper> solver;
    solver.setTolerance(kKrylovTolerance);
    solver.setMaxIterations(static_cast<Eigen::Index>(10 * m));
    x = factor_and_solve(solver, reduced, b);
  } else {
    Eigen::BiCGSTAB<ColMatrix, Eigen::IncompleteLUT<double>> solver;
    solver.setTolerance(kKrylovTolerance);
    solver.setMaxIterations(static_cast<Eigen::Index>(10 * m));
    x = factor_and_solve(solver, reduced, b);
  }

  for (Eigen::Index r = 0; r < m; ++r) out[global[static_cast<std::size_t>(r)]] = x[r];
  return out;
}

}  // namespace bilateral
