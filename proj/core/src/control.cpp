#include "bilateral/control.hpp"

#include <cmath>

#include "bilateral/errors.hpp"

namespace bilateral {

std::string to_string(ControlKind kind) {
  switch (kind) {
    case ControlKind::identity:
      return "identity";
    case ControlKind::affine_monotone:
      return "affine_monotone";
    case ControlKind::smooth_monotone_superposition:
      return "smooth_monotone_superposition";
  }
  return "unknown";
}

ControlKind parse_control_kind(std::string_view name) {
  if (name == "identity") return ControlKind::identity;
  if (name == "affine_monotone") return ControlKind::affine_monotone;
  if (name == "smooth_monotone_superposition") return ControlKind::smooth_monotone_superposition;
  throw InvalidSpec("unknown control kind '" + std::string(name) + "'");
}

ControlOperator ControlOperator::identity() {
  return ControlOperator(ControlKind::identity, 1.0, 0.0, 0.0, 0.0);
}

ControlOperator ControlOperator::affine(double diagonal, double coupling, double offset) {
  if (!(diagonal >= 0.0) || !(coupling >= 0.0) || !std::isfinite(diagonal + coupling + offset)) {
    throw InvalidSpec("affine control kernel must be finite and entrywise nonnegative");
  }
  return ControlOperator(ControlKind::affine_monotone, diagonal, coupling, offset, 0.0);
}

ControlOperator ControlOperator::superposition(double gain) {
  if (!(gain >= 0.0) || !std::isfinite(gain)) {
    throw InvalidSpec("superposition gain must be finite and nonnegative");
  }
  return ControlOperator(ControlKind::smooth_monotone_superposition, 1.0, 0.0, 0.0, gain);
}

bool ControlOperator::is_odd() const noexcept {
  return kind_ != ControlKind::affine_monotone || offset_ == 0.0;
}

namespace {

// (S v)_i = v at the +x neighbor of node i, 0 on the last column.
Vector shift_forward(const Grid& grid, const Vector& v) {
  Vector out = Vector::Zero(v.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto [i, j] = grid.ij(k);
    if (i + 1 < grid.n(0)) out[static_cast<Eigen::Index>(k)] = v[static_cast<Eigen::Index>(grid.index(i + 1, j))];
  }
  return out;
}

// S^T v: node i+1 receives v_i.
Vector shift_forward_transpose(const Grid& grid, const Vector& v) {
  Vector out = Vector::Zero(v.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto [i, j] = grid.ij(k);
    if (i + 1 < grid.n(0)) out[static_cast<Eigen::Index>(grid.index(i + 1, j))] += v[static_cast<Eigen::Index>(k)];
  }
  return out;
}

}  // namespace

GridFunction ControlOperator::apply(const GridFunction& u) const {
  const Grid& grid = u.grid();
  const double m = grid.mass_weight();
  const Vector& x = u.values();
  switch (kind_) {
    case ControlKind::identity:
      return GridFunction(grid, m * x);
    case ControlKind::affine_monotone: {
      Vector k = diagonal_ * x + coupling_ * shift_forward(grid, x);
      return GridFunction(grid, m * (k.array() + offset_).matrix());
    }
    case ControlKind::smooth_monotone_superposition:
      return GridFunction(grid, m * (x.array() + gain_ * x.array().atan()).matrix());
  }
  throw UnsupportedControlKind("unknown control kind");
}

GridFunction ControlOperator::derivative(const GridFunction& u, const GridFunction& h) const {
  require_same_grid(u.grid(), h.grid(), "control derivative");
  const Grid& grid = u.grid();
  const double m = grid.mass_weight();
  switch (kind_) {
    case ControlKind::identity:
      return GridFunction(grid, m * h.values());
    case ControlKind::affine_monotone:
      return GridFunction(grid, m * (diagonal_ * h.values() +
                                     coupling_ * shift_forward(grid, h.values())));
    case ControlKind::smooth_monotone_superposition: {
      const auto slope = 1.0 + gain_ / (1.0 + u.values().array().square());
      return GridFunction(grid, m * (slope * h.values().array()).matrix());
    }
  }
  throw UnsupportedControlKind("unknown control kind");
}

GridFunction ControlOperator::adjoint_derivative(const GridFunction& u,
                                                 const GridFunction& q) const {
  require_same_grid(u.grid(), q.grid(), "control adjoint");
  const Grid& grid = u.grid();
  const double m = grid.mass_weight();
  switch (kind_) {
    case ControlKind::identity:
      return GridFunction(grid, m * q.values());
    case ControlKind::affine_monotone:
      return GridFunction(grid, m * (diagonal_ * q.values() +
                                     coupling_ * shift_forward_transpose(grid, q.values())));
    case ControlKind::smooth_monotone_superposition: {
      const auto slope = 1.0 + gain_ / (1.0 + u.values().array().square());
      return GridFunction(grid, m * (slope * q.values().array()).matrix());
    }
  }
  throw UnsupportedControlKind("unknown control kind");
}

GridFunction ControlOperator::preimage(const GridFunction& load) const {
  const Grid& grid = load.grid();
  const double m = grid.mass_weight();
  switch (kind_) {
    case ControlKind::identity:
      return GridFunction(grid, load.values() / m);
    case ControlKind::smooth_monotone_superposition: {
      GridFunction u(grid);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        // s + g atan(s) = target is strictly increasing in s; Newton from the
        // linear guess converges because the map is convex on each side of 0.
        const double target = load[i] / m;
        double s = target / (1.0 + gain_);
        for (int it = 0; it < 100; ++it) {
          const double r = s + gain_ * std::atan(s) - target;
          const double step = r / (1.0 + gain_ / (1.0 + s * s));
          s -= step;
          if (std::abs(step) <= 1e-15 * (1.0 + std::abs(s))) break;
        }
        u[i] = s;
      }
      return u;
    }
    case ControlKind::affine_monotone:
      break;
  }
  throw UnsupportedControlKind("preimage is only available for diagonal control kinds");
}

GridFunction apply_control(const ControlOperator& f, const GridFunction& u) {
  return f.apply(u);
}

GridFunction apply_control_derivative(const ControlOperator& f, const GridFunction& u,
                                      const GridFunction& h) {
  return f.derivative(u, h);
}

GridFunction apply_control_adjoint(const ControlOperator& f, const GridFunction& u,
                                   const GridFunction& q) {
  return f.adjoint_derivative(u, q);
}

}  // namespace bilateral
