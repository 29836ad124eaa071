#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace bilateral {

using Vector = Eigen::VectorXd;

/// Uniform structured grid of the interior nodes of an interval (dim 1) or a
/// rectangle (dim 2). Boundary nodes carry homogeneous Dirichlet data and are
/// not stored.
///
/// Nodes are numbered row-major: node = j * n(0) + i, with i running along x.
class Grid {
 public:
  static Grid line(int n, double x_lo = 0.0, double x_hi = 1.0);
  static Grid rectangle(int nx, int ny, std::array<double, 2> lo = {0.0, 0.0},
                        std::array<double, 2> hi = {1.0, 1.0});
  static Grid square(int n) { return rectangle(n, n); }

  int dim() const noexcept { return dim_; }
  int n(int axis) const { return n_.at(axis); }
  double lo(int axis) const { return lo_.at(axis); }
  double hi(int axis) const { return hi_.at(axis); }
  double length(int axis) const { return hi_.at(axis) - lo_.at(axis); }

  /// Mesh spacing, side_length / (n + 1).
  double h(int axis) const { return length(axis) / (n_.at(axis) + 1); }
  double h_min() const;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(n_[0]) * static_cast<std::size_t>(n_[1]);
  }

  /// Product of the spacings; the quadrature weight of one node.
  double mass_weight() const;

  std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n_[0]) +
           static_cast<std::size_t>(i);
  }
  std::array<int, 2> ij(std::size_t node) const {
    return {static_cast<int>(node % n_[0]), static_cast<int>(node / n_[0])};
  }
  /// Physical coordinates of a node; the y entry is 0 in 1D.
  std::array<double, 2> coords(std::size_t node) const;

  bool operator==(const Grid&) const = default;

 private:
  Grid(int dim, std::array<int, 2> n, std::array<double, 2> lo,
       std::array<double, 2> hi);

  int dim_;
  std::array<int, 2> n_;
  std::array<double, 2> lo_;
  std::array<double, 2> hi_;
};

/// Nodal values on a grid. Ordered nodewise: a >= b iff a_i >= b_i for all i.
class GridFunction {
 public:
  explicit GridFunction(Grid grid);
  GridFunction(Grid grid, Vector values);

  static GridFunction constant(const Grid& grid, double value);
  static GridFunction from(const Grid& grid,
                           const std::function<double(double, double)>& f);

  const Grid& grid() const noexcept { return grid_; }
  const Vector& values() const noexcept { return values_; }
  Vector& values() noexcept { return values_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }

  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
  double& operator[](std::size_t i) { return values_[static_cast<Eigen::Index>(i)]; }

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double s);

  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(double s, GridFunction a) { return a *= s; }
  friend GridFunction operator-(GridFunction a) { return a *= -1.0; }

 private:
  Grid grid_;
  Vector values_;
};

/// Throws GridMismatch naming `what` when the two functions live on different grids.
void require_same_grid(const Grid& a, const Grid& b, std::string_view what);

/// a >= b - tol at every node.
bool dominates(const GridFunction& a, const GridFunction& b, double tol = 0.0);

double max_abs(const GridFunction& f);
double max_abs_diff(const GridFunction& a, const GridFunction& b);

/// Mass-weighted inner product sum_i h^dim a_i b_i.
double mass_dot(const GridFunction& a, const GridFunction& b);

/// Set of grid nodes.
class NodeMask {
 public:
  NodeMask() = default;
  explicit NodeMask(std::size_t size, bool value = false)
      : bits_(size, value ? 1 : 0) {}

  static NodeMask all(std::size_t size) { return NodeMask(size, true); }

  std::size_t size() const noexcept { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool value = true) { bits_[i] = value ? 1 : 0; }

  std::size_t count() const;
  bool none() const { return count() == 0; }

  NodeMask operator|(const NodeMask& other) const;
  NodeMask operator&(const NodeMask& other) const;
  NodeMask operator~() const;
  /// Nodes in *this but not in other.
  NodeMask minus(const NodeMask& other) const;

  bool subset_of(const NodeMask& other) const { return minus(other).none(); }
  std::vector<std::size_t> indices() const;

  bool operator==(const NodeMask&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

}  // namespace bilateral
