#include "common.hpp"

#include <algorithm>
#include <cmath>

namespace bilateral::tools::detail {

Rng suite_rng(std::uint64_t seed, std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return Rng(seed ^ h);
}

std::shared_ptr<const AssembledOperator> random_operator(const Grid& grid, Rng& rng) {
  OperatorSpec spec;
  switch (rng.uniform_int(0, 2)) {
    case 0:
      spec.kind = OperatorKind::laplacian;
      break;
    case 1:
      spec.kind = OperatorKind::laplacian_plus_reaction;
      spec.reaction = rng.uniform(0.0, 20.0);
      break;
    default: {
      spec.kind = OperatorKind::laplacian_plus_convection;
      // Half of the largest speed the central-difference guard accepts.
      double vmax = 1.0 / grid.h(0);
      if (grid.dim() == 2) vmax = std::min(vmax, 1.0 / grid.h(1));
      spec.convection = {rng.uniform(-vmax, vmax), grid.dim() == 2 ? rng.uniform(-vmax, vmax) : 0.0};
      break;
    }
  }
  return std::make_shared<const AssembledOperator>(assemble(spec, grid));
}

ControlOperator random_control(Rng& rng, bool allow_affine) {
  const int kind = rng.uniform_int(0, allow_affine ? 2 : 1);
  if (kind == 0) return ControlOperator::identity();
  if (kind == 1) return ControlOperator::superposition(rng.uniform(0.5, 2.0));
  return ControlOperator::affine(rng.uniform(0.5, 1.5), rng.uniform(0.0, 0.5),
                                 rng.uniform(-1.0, 1.0));
}

double control_lipschitz(const ControlOperator& f, const Grid& grid) {
  const double m = grid.mass_weight();
  switch (f.kind()) {
    case ControlKind::identity: return m;
    case ControlKind::affine_monotone: return m * (f.diagonal() + f.coupling());
    case ControlKind::smooth_monotone_superposition: return m * (1.0 + f.gain());
  }
  return m;
}

BopProblem random_instance(const Grid& grid, Rng& rng, bool allow_affine) {
  auto op = random_operator(grid, rng);
  const ControlOperator f = random_control(rng, allow_affine);
  return random_problem(op, f, rng, rng.uniform(2.0, 20.0));
}

BopProblem strictly_complementary_instance(const Grid& grid, Rng& rng,
                                           const std::optional<ControlOperator>& control) {
  for (;;) {
    BopProblem p = control ? random_problem(random_operator(grid, rng), *control, rng,
                                            rng.uniform(2.0, 20.0))
                           : random_instance(grid, rng);
    const BopSolution s = solve_bop(p);
    const ThresholdSensitivity sens = threshold_sensitivity(s, p.obstacles());
    bool weak_free = true;
    for (const auto& c : sens.counts) weak_free = weak_free && c.weak_lower == 0 && c.weak_upper == 0;
    if (weak_free && sens.stable()) return p;
  }
}

double relative_diff(const Vector& a, const Vector& b) {
  const double diff = (a - b).cwiseAbs().maxCoeff();
  const double scale = b.cwiseAbs().maxCoeff();
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace bilateral::tools::detail
