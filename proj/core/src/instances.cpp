#include "bilateral/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bilateral/errors.hpp"
#include "bilateral/linalg.hpp"

namespace bilateral {

namespace {

constexpr double pi = std::numbers::pi;

// Node coordinates mapped to the unit square.
std::array<double, 2> unit_coords(const Grid& grid, std::size_t node) {
  const auto [x, y] = grid.coords(node);
  const double xs = (x - grid.lo(0)) / grid.length(0);
  const double ys = grid.dim() == 2 ? (y - grid.lo(1)) / grid.length(1) : 0.5;
  return {xs, ys};
}

}  // namespace

GridFunction random_field(const Grid& grid, Rng& rng, double amplitude, int modes) {
  GridFunction out(grid);
  for (int m = 0; m < modes; ++m) {
    const int kx = rng.uniform_int(1, 3);
    const int ky = rng.uniform_int(1, 3);
    const double px = rng.uniform(0.0, 2.0 * pi);
    const double py = rng.uniform(0.0, 2.0 * pi);
    const double a = rng.uniform(-1.0, 1.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto [x, y] = unit_coords(grid, i);
      const double sy = grid.dim() == 2 ? std::sin(ky * pi * y + py) : 1.0;
      out[i] += a * std::sin(kx * pi * x + px) * sy;
    }
  }
  const double peak = max_abs(out);
  if (peak > 0.0) out *= amplitude / peak;
  return out;
}

GridFunction random_bump(const Grid& grid, Rng& rng, double amplitude) {
  const double cx = rng.uniform(0.2, 0.8);
  const double cy = rng.uniform(0.2, 0.8);
  const double sigma = rng.uniform(0.1, 0.3);
  GridFunction out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto [x, y] = unit_coords(grid, i);
    const double d2 = (x - cx) * (x - cx) + (grid.dim() == 2 ? (y - cy) * (y - cy) : 0.0);
    out[i] = amplitude * std::exp(-d2 / (2.0 * sigma * sigma));
  }
  return out;
}

BopProblem random_problem(std::shared_ptr<const AssembledOperator> op,
                          const ControlOperator& control, Rng& rng, double u_amp) {
  const Grid& grid = op->grid();
  GridFunction u = random_field(grid, rng, u_amp);
  const Vector free_state = solve_restricted(op->matrix(), NodeMask::all(grid.size()),
                                             control.apply(u).values(), op->symmetric());
  const double peak = free_state.cwiseAbs().maxCoeff();
  const double below = std::max(-free_state.minCoeff(), 0.1 * peak);
  const double above = std::max(free_state.maxCoeff(), 0.1 * peak);
  GridFunction r1 = random_field(grid, rng, 1.0);
  GridFunction r2 = random_field(grid, rng, 1.0);
  GridFunction psi(grid);
  GridFunction phi(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    psi[i] = -below * (0.5 + 0.1 * r1[i]);
    phi[i] = above * (0.5 + 0.1 * r2[i]);
  }
  return BopProblem(std::move(op), control, ObstaclePair(std::move(psi), std::move(phi)),
                    std::move(u));
}

ManufacturedInstance manufactured_instance(std::shared_ptr<const AssembledOperator> op,
                                           const ControlOperator& control,
                                           ContactStructure structure, double u_target) {
  if (control.kind() == ControlKind::affine_monotone) {
    throw UnsupportedControlKind("manufactured instances need a diagonal control");
  }
  if (!(u_target > 0.0)) throw InvalidSpec("target control size must be positive");
  const Grid& grid = op->grid();
  const std::size_t n = grid.size();
  const bool two_d = grid.dim() == 2;

  // Shape in units of the obstacle scale A, fixed below.
  GridFunction psi(grid), phi(grid), y(grid), xi(grid);
  NodeMask lower(n), upper(n), weak_lower(n), weak_upper(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [x, s] = unit_coords(grid, i);
    phi[i] = 0.5 + 0.1 * x;
    psi[i] = -(0.5 + 0.1 * (two_d ? s : 1.0 - x));
    const double raw = 1.6 * std::sin(2.0 * pi * x) * (two_d ? std::sin(pi * s) : 1.0);
    const double delta = 0.05 * (phi[i] - psi[i]);
    if (raw >= phi[i]) {
      y[i] = phi[i];
      upper.set(i);
      if (structure == ContactStructure::biactive && (two_d ? s < 0.5 : x < 0.25)) {
        weak_upper.set(i);
      }
    } else if (raw <= psi[i]) {
      y[i] = psi[i];
      lower.set(i);
      if (structure == ContactStructure::biactive && (two_d ? s > 0.5 : x > 0.75)) {
        weak_lower.set(i);
      }
    } else {
      y[i] = std::clamp(raw, psi[i] + delta, phi[i] - delta);
    }
  }

  const GridFunction ly = op->apply(y);
  const double mu = 0.25 * max_abs(ly);
  for (std::size_t i = 0; i < n; ++i) {
    if (lower[i] && !weak_lower[i]) xi[i] = mu;
    if (upper[i] && !weak_upper[i]) xi[i] = -mu;
  }
  GridFunction load = ly - xi;

  const double peak = max_abs(load);
  if (!(peak > 0.0)) throw InvalidSpec("manufactured load vanished");
  const double a = u_target * grid.mass_weight() / peak;
  psi *= a;
  phi *= a;
  y *= a;
  xi *= a;
  load *= a;

  GridFunction u = control.preimage(load);
  BopProblem problem(std::move(op), control, ObstaclePair(psi, phi), std::move(u));
  return ManufacturedInstance{std::move(problem), std::move(y), std::move(xi),
                              std::move(lower), std::move(upper), std::move(weak_lower),
                              std::move(weak_upper)};
}

}  // namespace bilateral
