#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>

#include "bilateral/bilateral.hpp"
#include "bilateral_tools/report.hpp"

namespace bilateral::tools::detail {

/// Independent stream per suite: the seed mixed with a hash of the suite name.
Rng suite_rng(std::uint64_t seed, std::string_view name);

/// Random operator of a random kind whose convection keeps the M-matrix
/// property on `grid`.
std::shared_ptr<const AssembledOperator> random_operator(const Grid& grid, Rng& rng);

/// Random control; affine kinds only when `allow_affine`.
ControlOperator random_control(Rng& rng, bool allow_affine = true);

/// Lipschitz constant of f in the max norm.
double control_lipschitz(const ControlOperator& f, const Grid& grid);

/// Random problem with random operator and control on `grid`.
BopProblem random_instance(const Grid& grid, Rng& rng, bool allow_affine = true);

/// Random instance whose partition has no weakly active nodes at thresholds
/// scaled by 0.1, 1 and 10. Draws until one is found; the control is random
/// unless given.
BopProblem strictly_complementary_instance(const Grid& grid, Rng& rng,
                                           const std::optional<ControlOperator>& control = {});

double relative_diff(const Vector& a, const Vector& b);

/// Running maximum helper for metrics.
inline void track_max(double& acc, double v) {
  if (v > acc) acc = v;
}

}  // namespace bilateral::tools::detail
