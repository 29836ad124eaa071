#include "bilateral/operator.hpp"

#include <cmath>
#include <vector>

#include "bilateral/errors.hpp"
#include "bilateral/linalg.hpp"

namespace bilateral {

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::laplacian:
      return "laplacian";
    case OperatorKind::laplacian_plus_reaction:
      return "laplacian_plus_reaction";
    case OperatorKind::laplacian_plus_convection:
      return "laplacian_plus_convection";
  }
  return "unknown";
}

OperatorKind parse_operator_kind(std::string_view name) {
  if (name == "laplacian") return OperatorKind::laplacian;
  if (name == "laplacian_plus_reaction") return OperatorKind::laplacian_plus_reaction;
  if (name == "laplacian_plus_convection") return OperatorKind::laplacian_plus_convection;
  throw InvalidSpec("unknown operator kind '" + std::string(name) + "'");
}

AssembledOperator::AssembledOperator(Grid grid, SparseMatrix matrix)
    : grid_(grid), matrix_(std::move(matrix)) {
  if (static_cast<std::size_t>(matrix_.rows()) != grid_.size() ||
      matrix_.rows() != matrix_.cols()) {
    throw GridMismatch("operator matrix does not match grid size");
  }
  matrix_.makeCompressed();
  adjoint_ = SparseMatrix(matrix_.transpose());
  adjoint_.makeCompressed();
  symmetric_ = (SparseMatrix(matrix_ - adjoint_)).norm() == 0.0;
}

GridFunction AssembledOperator::apply(const GridFunction& y) const {
  require_same_grid(grid_, y.grid(), "AssembledOperator::apply");
  return GridFunction(grid_, matrix_ * y.values());
}

GridFunction AssembledOperator::apply_adjoint(const GridFunction& q) const {
  require_same_grid(grid_, q.grid(), "AssembledOperator::apply_adjoint");
  return GridFunction(grid_, adjoint_ * q.values());
}

AssembledOperator assemble(const OperatorSpec& spec, const Grid& grid) {
  double reaction = 0.0;
  std::array<double, 2> b{0.0, 0.0};
  switch (spec.kind) {
    case OperatorKind::laplacian:
      break;
    case OperatorKind::laplacian_plus_reaction:
      reaction = spec.reaction;
      if (!(reaction >= 0.0) || !std::isfinite(reaction)) {
        throw InvalidSpec("reaction coefficient must be finite and nonnegative");
      }
      break;
    case OperatorKind::laplacian_plus_convection:
      b = spec.convection;
      break;
  }

  for (int a = 0; a < grid.dim(); ++a) {
    if (!std::isfinite(b[a])) throw InvalidSpec("convection must be finite");
    const double cell_peclet = grid.h(a) * std::abs(b[a]) / 2.0;
    if (cell_peclet > 1.0) {
      throw InvalidSpec("central convection breaks the M-matrix sign pattern: h*|b|/2 = " +
                        std::to_string(cell_peclet) + " > 1 on axis " + std::to_string(a));
    }
  }
  if (grid.dim() == 1 && b[1] != 0.0) {
    throw InvalidSpec("1D grid cannot carry a y-convection component");
  }

  const auto n = static_cast<Eigen::Index>(grid.size());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n) * (1 + 2 * grid.dim()));

  for (std::size_t node = 0; node < grid.size(); ++node) {
    const auto [i, j] = grid.ij(node);
    const auto row = static_cast<Eigen::Index>(node);
    double diag = reaction;
    for (int a = 0; a < grid.dim(); ++a) {
      const double h = grid.h(a);
      const double inv_h2 = 1.0 / (h * h);
      diag += 2.0 * inv_h2;
      // Neighbor at -h gets -1/h^2 - b/(2h); neighbor at +h gets -1/h^2 + b/(2h).
      const double w_minus = -inv_h2 - b[a] / (2.0 * h);
      const double w_plus = -inv_h2 + b[a] / (2.0 * h);
      const int pos = a == 0 ? i : j;
      const int count = grid.n(a);
      if (pos > 0) {
        const auto col = a == 0 ? grid.index(i - 1, j) : grid.index(i, j - 1);
        if (w_minus != 0.0) triplets.emplace_back(row, static_cast<Eigen::Index>(col), w_minus);
      }
      if (pos + 1 < count) {
        const auto col = a == 0 ? grid.index(i + 1, j) : grid.index(i, j + 1);
        if (w_plus != 0.0) triplets.emplace_back(row, static_cast<Eigen::Index>(col), w_plus);
      }
    }
    triplets.emplace_back(row, row, diag);
  }

  SparseMatrix matrix(n, n);
  matrix.setFromTriplets(triplets.begin(), triplets.end());
  if (!is_m_matrix(matrix)) {
    throw InvalidSpec("assembled operator is not an M-matrix");
  }
  return AssembledOperator(grid, std::move(matrix));
}

bool is_m_matrix(const SparseMatrix& a) {
  for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
    double diag = 0.0;
    double off = 0.0;
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
      if (it.col() == r) {
        diag = it.value();
      } else {
        if (it.value() > 0.0) return false;
        off += -it.value();
      }
    }
    if (!(diag > 0.0)) return false;
    // Relative slack for the rounding in 2/h^2 versus two copies of 1/h^2.
    if (off > diag * (1.0 + 1e-14)) return false;
  }
  return true;
}

double inverse_max_norm(const AssembledOperator& op) {
  const Vector ones = Vector::Ones(static_cast<Eigen::Index>(op.grid().size()));
  const Vector w = solve_restricted(op.matrix(), NodeMask::all(op.grid().size()), ones,
                                    op.symmetric());
  return w.maxCoeff();
}

}  // namespace bilateral
