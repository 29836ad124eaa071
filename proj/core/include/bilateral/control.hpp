#pragma once

#include <string>
#include <string_view>

#include "bilateral/grid.hpp"

namespace bilateral {

enum class ControlKind { identity, affine_monotone, smooth_monotone_superposition };

std::string to_string(ControlKind kind);
ControlKind parse_control_kind(std::string_view name);

/// Increasing, continuously differentiable map f from controls to nodal loads.
///
/// Loads are dual objects: every kind multiplies by the node mass weight h^dim
/// so that <f(u), z> approximates the integral of f(u) z.
///
///   identity:                      f(u) = m u
///   affine_monotone:               f(u) = m (K u + offset), K = d I + c S
///   smooth_monotone_superposition: f(u) = m (u + g atan(u))
///
/// S shifts to the +x neighbor ((S u)_i = u_{i+1}, zero past the boundary), so
/// K is entrywise nonnegative but not symmetric when c > 0.
class ControlOperator {
 public:
  static ControlOperator identity();
  static ControlOperator affine(double diagonal, double coupling, double offset = 0.0);
  static ControlOperator superposition(double gain = 1.0);

  ControlKind kind() const noexcept { return kind_; }
  double diagonal() const noexcept { return diagonal_; }
  double coupling() const noexcept { return coupling_; }
  double offset() const noexcept { return offset_; }
  double gain() const noexcept { return gain_; }

  /// f(-u) = -f(u) for every u.
  bool is_odd() const noexcept;

  GridFunction apply(const GridFunction& u) const;
  /// f'(u) h.
  GridFunction derivative(const GridFunction& u, const GridFunction& h) const;
  /// f'(u)^* q, the transpose of the derivative in the Euclidean nodal pairing.
  GridFunction adjoint_derivative(const GridFunction& u, const GridFunction& q) const;

  /// Solves f(u) = load nodewise. Only for the diagonal kinds (identity and
  /// superposition); throws UnsupportedControlKind otherwise.
  GridFunction preimage(const GridFunction& load) const;

 private:
  ControlOperator(ControlKind kind, double diagonal, double coupling, double offset,
                  double gain)
      : kind_(kind), diagonal_(diagonal), coupling_(coupling), offset_(offset), gain_(gain) {}

  ControlKind kind_;
  double diagonal_;
  double coupling_;
  double offset_;
  double gain_;
};

GridFunction apply_control(const ControlOperator& f, const GridFunction& u);
GridFunction apply_control_derivative(const ControlOperator& f, const GridFunction& u,
                                      const GridFunction& h);
GridFunction apply_control_adjoint(const ControlOperator& f, const GridFunction& u,
                                   const GridFunction& q);

}  // namespace bilateral
