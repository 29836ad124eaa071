#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace bilateral::tools {

/// Outcome of the exhaustive complementarity-pattern search.
struct PatternOracle {
  Eigen::VectorXd y;
  /// -1 lower contact, 0 free, +1 upper contact, for the first accepted pattern.
  std::vector<std::int8_t> pattern;
  int accepted = 0;
  /// Largest max-norm distance between the solutions of accepted patterns.
  double spread = 0.0;
};

/// Tries all 3^n assignments of each node to {lower bound, free, upper bound}.
/// Each assignment fixes x on its bound nodes, solves the dense free block and
/// is accepted when the free values stay within the bounds and the residual
/// A x - b has the right sign on the bound nodes.
///
/// Meant as an independent reference for tiny problems; throws InvalidSpec
/// for n > 12 and when no pattern is accepted.
PatternOracle enumerate_patterns(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                 const Eigen::VectorXd& lo, const Eigen::VectorXd& up);

}  // namespace bilateral::tools
