#include "bilateral/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bilateral/errors.hpp"

namespace bilateral {

Grid::Grid(int dim, std::array<int, 2> n, std::array<double, 2> lo,
           std::array<double, 2> hi)
    : dim_(dim), n_(n), lo_(lo), hi_(hi) {
  if (dim != 1 && dim != 2) {
    throw InvalidGrid("grid dimension must be 1 or 2");
  }
  for (int a = 0; a < dim; ++a) {
    if (n_[a] < 1) {
      throw InvalidGrid("grid needs at least one interior node per axis");
    }
    if (!(hi_[a] > lo_[a]) || !std::isfinite(hi_[a] - lo_[a])) {
      throw InvalidGrid("grid extent must satisfy lo < hi");
    }
  }
}

Grid Grid::line(int n, double x_lo, double x_hi) {
  return Grid(1, {n, 1}, {x_lo, 0.0}, {x_hi, 1.0});
}

Grid Grid::rectangle(int nx, int ny, std::array<double, 2> lo,
                     std::array<double, 2> hi) {
  return Grid(2, {nx, ny}, lo, hi);
}

double Grid::h_min() const {
  return dim_ == 1 ? h(0) : std::min(h(0), h(1));
}

double Grid::mass_weight() const {
  return dim_ == 1 ? h(0) : h(0) * h(1);
}

std::array<double, 2> Grid::coords(std::size_t node) const {
  const auto [i, j] = ij(node);
  const double x = lo_[0] + (i + 1) * h(0);
  const double y = dim_ == 2 ? lo_[1] + (j + 1) * h(1) : 0.0;
  return {x, y};
}

GridFunction::GridFunction(Grid grid)
    : grid_(grid), values_(Vector::Zero(static_cast<Eigen::Index>(grid.size()))) {}

GridFunction::GridFunction(Grid grid, Vector values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != grid_.size()) {
    throw GridMismatch("grid function has " + std::to_string(values_.size()) +
                       " values, grid has " + std::to_string(grid_.size()) +
                       " nodes");
  }
}

GridFunction GridFunction::constant(const Grid& grid, double value) {
  return GridFunction(grid, Vector::Constant(static_cast<Eigen::Index>(grid.size()), value));
}

GridFunction GridFunction::from(const Grid& grid,
                                const std::function<double(double, double)>& f) {
  GridFunction out(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto [x, y] = grid.coords(k);
    out[k] = f(x, y);
  }
  return out;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  require_same_grid(grid_, other.grid_, "operator+=");
  values_ += other.values_;
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  require_same_grid(grid_, other.grid_, "operator-=");
  values_ -= other.values_;
  return *this;
}

GridFunction& GridFunction::operator*=(double s) {
  values_ *= s;
  return *this;
}

void require_same_grid(const Grid& a, const Grid& b, std::string_view what) {
  if (!(a == b)) {
    throw GridMismatch(std::string(what) + ": grid functions live on different grids");
  }
}

bool dominates(const GridFunction& a, const GridFunction& b, double tol) {
  require_same_grid(a.grid(), b.grid(), "dominates");
  return ((a.values() - b.values()).array() >= -tol).all();
}

double max_abs(const GridFunction& f) {
  return f.size() == 0 ? 0.0 : f.values().cwiseAbs().maxCoeff();
}

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a.grid(), b.grid(), "max_abs_diff");
  return a.size() == 0 ? 0.0 : (a.values() - b.values()).cwiseAbs().maxCoeff();
}

double mass_dot(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a.grid(), b.grid(), "mass_dot");
  return a.grid().mass_weight() * a.values().dot(b.values());
}

std::size_t NodeMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

NodeMask NodeMask::operator|(const NodeMask& other) const {
  NodeMask out(size());
  for (std::size_t i = 0; i < size(); ++i) out.bits_[i] = bits_[i] | other.bits_.at(i);
  return out;
}

NodeMask NodeMask::operator&(const NodeMask& other) const {
  NodeMask out(size());
  for (std::size_t i = 0; i < size(); ++i) out.bits_[i] = bits_[i] & other.bits_.at(i);
  return out;
}

NodeMask NodeMask::operator~() const {
  NodeMask out(size());
  for (std::size_t i = 0; i < size(); ++i) out.bits_[i] = bits_[i] ? 0 : 1;
  return out;
}

NodeMask NodeMask::minus(const NodeMask& other) const {
  NodeMask out(size());
  for (std::size_t i = 0; i < size(); ++i) {
    out.bits_[i] = (bits_[i] && !other.bits_.at(i)) ? 1 : 0;
  }
  return out;
}

std::vector<std::size_t> NodeMask::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (bits_[i]) out.push_back(i);
  }
  return out;
}

}  // namespace bilateral
