#pragma once

#include <array>
#include <string>
#include <string_view>

#include <Eigen/SparseCore>

#include "bilateral/grid.hpp"

namespace bilateral {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class OperatorKind { laplacian, laplacian_plus_reaction, laplacian_plus_convection };

std::string to_string(OperatorKind kind);
OperatorKind parse_operator_kind(std::string_view name);

/// Description of the elliptic operator L = -Laplace + b.grad + c.
///
/// `reaction` is read only for laplacian_plus_reaction, `convection` only for
/// laplacian_plus_convection.
struct OperatorSpec {
  OperatorKind kind = OperatorKind::laplacian;
  double reaction = 0.0;
  std::array<double, 2> convection{0.0, 0.0};
};

/// Sparse finite-difference matrix of L together with its exact transpose.
class AssembledOperator {
 public:
  AssembledOperator(Grid grid, SparseMatrix matrix);

  const Grid& grid() const noexcept { return grid_; }
  const SparseMatrix& matrix() const noexcept { return matrix_; }
  const SparseMatrix& adjoint_matrix() const noexcept { return adjoint_; }
  bool symmetric() const noexcept { return symmetric_; }

  GridFunction apply(const GridFunction& y) const;
  GridFunction apply_adjoint(const GridFunction& q) const;

 private:
  Grid grid_;
  SparseMatrix matrix_;
  SparseMatrix adjoint_;
  bool symmetric_;
};

/// Five-point (three-point in 1D) central-difference assembly with 1/h^2
/// scaling.
///
/// Throws InvalidSpec when the result would not be an M-matrix: negative
/// reaction, or h * |b| / 2 > 1 on some axis.
AssembledOperator assemble(const OperatorSpec& spec, const Grid& grid);

/// Positive diagonal, nonpositive off-diagonals, weak row diagonal dominance.
bool is_m_matrix(const SparseMatrix& a);

/// ||L^{-1}||_inf, i.e. max_i (L^{-1} 1)_i for an M-matrix. Controls the
/// Lipschitz modulus of the obstacle solution map in the max norm.
double inverse_max_norm(const AssembledOperator& op);

}  // namespace bilateral
