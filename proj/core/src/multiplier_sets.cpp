#include "bilateral/multiplier_sets.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "bilateral/errors.hpp"

namespace bilateral {

MultiplierSplit split_multiplier(const BopSolution& solution, const ObstaclePair& obstacles,
                                 const SplitOptions& options) {
  const GridFunction& y = solution.y;
  const GridFunction& xi = solution.xi;
  require_same_grid(y.grid(), obstacles.grid(), "split_multiplier");
  require_same_grid(xi.grid(), obstacles.grid(), "split_multiplier");

  for (std::size_t i = 0; i < y.size(); ++i) {
    const double gap_lo = y[i] - obstacles.psi()[i];
    const double gap_up = obstacles.phi()[i] - y[i];
    if (gap_lo < -options.eps_active || gap_up < -options.eps_active) {
      throw ComplementarityViolated("state leaves the obstacle band at node " +
                                    std::to_string(i));
    }
    if ((gap_lo > options.eps_active && xi[i] > options.tol) ||
        (gap_up > options.eps_active && xi[i] < -options.tol)) {
      throw ComplementarityViolated("multiplier sign does not match contact at node " +
                                    std::to_string(i) + " (xi = " + std::to_string(xi[i]) + ")");
    }
  }

  const Grid& grid = xi.grid();
  return MultiplierSplit{GridFunction(grid, xi.values().cwiseMax(0.0)),
                         GridFunction(grid, (-xi.values()).cwiseMax(0.0))};
}

GridFunction contact_weight(const GridFunction& y, const ObstaclePair& obstacles) {
  require_same_grid(y.grid(), obstacles.grid(), "contact_weight");
  const Vector& psi = obstacles.psi().values();
  const Vector& phi = obstacles.phi().values();
  return GridFunction(y.grid(), ((y.values() - psi).array() / (phi - psi).array()).matrix());
}

std::vector<std::string> SetPartition::invariant_violations() const {
  std::vector<std::string> out;
  if (!(active_lower & active_upper).none()) out.emplace_back("lower and upper active sets meet");
  if (!strict_lower.subset_of(active_lower)) out.emplace_back("strict lower set not active");
  if (!strict_upper.subset_of(active_upper)) out.emplace_back("strict upper set not active");
  if (!(weak_lower == active_lower.minus(strict_lower))) out.emplace_back("weak lower set wrong");
  if (!(weak_upper == active_upper.minus(strict_upper))) out.emplace_back("weak upper set wrong");
  if (!(inactive == ~active())) out.emplace_back("inactive set is not the complement");
  return out;
}

SetPartition classify_sets(const BopSolution& solution, const ObstaclePair& obstacles,
                           const SetThresholds& thresholds) {
  const GridFunction& y = solution.y;
  const GridFunction& xi = solution.xi;
  require_same_grid(y.grid(), obstacles.grid(), "classify_sets");
  require_same_grid(xi.grid(), obstacles.grid(), "classify_sets");
  if (!(thresholds.eps_active > 0.0) || !(thresholds.eps_mult > 0.0)) {
    throw InvalidSpec("classification thresholds must be positive");
  }

  const std::size_t n = y.size();
  SetPartition p{NodeMask(n), NodeMask(n), NodeMask(n), NodeMask(n),
                 NodeMask(n), NodeMask(n), NodeMask(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double gap_lo = y[i] - obstacles.psi()[i];
    const double gap_up = obstacles.phi()[i] - y[i];
    // Separation keeps the two tests exclusive unless eps_active exceeds half
    // the obstacle gap; prefer the nearer obstacle then.
    if (gap_lo <= thresholds.eps_active && gap_lo <= gap_up) {
      p.active_lower.set(i);
      if (xi[i] >= thresholds.eps_mult) p.strict_lower.set(i);
    } else if (gap_up <= thresholds.eps_active) {
      p.active_upper.set(i);
      if (-xi[i] >= thresholds.eps_mult) p.strict_upper.set(i);
    } else {
      p.inactive.set(i);
    }
  }
  p.weak_lower = p.active_lower.minus(p.strict_lower);
  p.weak_upper = p.active_upper.minus(p.strict_upper);
  return p;
}

SetCounts count_sets(const SetPartition& p) {
  return SetCounts{p.active_lower.count(), p.active_upper.count(), p.strict_lower.count(),
                   p.strict_upper.count(), p.weak_lower.count(),   p.weak_upper.count(),
                   p.inactive.count()};
}

ThresholdSensitivity threshold_sensitivity(const BopSolution& solution,
                                           const ObstaclePair& obstacles,
                                           const SetThresholds& thresholds) {
  ThresholdSensitivity out;
  for (std::size_t k = 0; k < out.factors.size(); ++k) {
    const SetThresholds scaled{thresholds.eps_active * out.factors[k],
                               thresholds.eps_mult * out.factors[k]};
    out.counts[k] = count_sets(classify_sets(solution, obstacles, scaled));
  }
  return out;
}

CriticalCone::CriticalCone(SetPartition partition)
    : partition_(std::move(partition)), classes_(partition_.inactive.size(), ConeClass::free) {
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (partition_.strict_lower[i] || partition_.strict_upper[i]) {
      classes_[i] = ConeClass::zero;
    } else if (partition_.weak_lower[i]) {
      classes_[i] = ConeClass::nonneg;
    } else if (partition_.weak_upper[i]) {
      classes_[i] = ConeClass::nonpos;
    }
  }
}

bool CriticalCone::contains(const GridFunction& z, double tol) const {
  if (z.size() != classes_.size()) throw GridMismatch("critical cone: size mismatch");
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    switch (classes_[i]) {
      case ConeClass::free:
        break;
      case ConeClass::nonneg:
        if (z[i] < -tol) return false;
        break;
      case ConeClass::nonpos:
        if (z[i] > tol) return false;
        break;
      case ConeClass::zero:
        if (std::abs(z[i]) > tol) return false;
        break;
    }
  }
  return true;
}

Vector CriticalCone::lower_bounds() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Vector lo(static_cast<Eigen::Index>(classes_.size()));
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    const auto c = classes_[i];
    lo[static_cast<Eigen::Index>(i)] = (c == ConeClass::nonneg || c == ConeClass::zero) ? 0.0 : -inf;
  }
  return lo;
}

Vector CriticalCone::upper_bounds() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Vector up(static_cast<Eigen::Index>(classes_.size()));
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    const auto c = classes_[i];
    up[static_cast<Eigen::Index>(i)] = (c == ConeClass::nonpos || c == ConeClass::zero) ? 0.0 : inf;
  }
  return up;
}

namespace {

std::vector<std::size_t> outside(const NodeMask& subset, const NodeMask& superset) {
  return subset.minus(superset).indices();
}

}  // namespace

SetMonotonicityReport verify_strict_set_monotonicity(const BopProblem& problem,
                                                     const GridFunction& u1,
                                                     const GridFunction& u2,
                                                     const SetThresholds& thresholds,
                                                     const SolveOptions& options) {
  if (!dominates(u1, u2)) throw NotMonotonePair("u1 >= u2 fails at some node");

  const BopProblem p1 = problem.with_control(u1);
  const BopProblem p2 = problem.with_control(u2);
  const SetPartition s1 = classify_sets(solve_bop(p1, options), p1.obstacles(), thresholds);
  const SetPartition s2 = classify_sets(solve_bop(p2, options), p2.obstacles(), thresholds);

  SetMonotonicityReport report;
  report.active_lower_violations = outside(s1.active_lower, s2.active_lower);
  report.active_upper_violations = outside(s2.active_upper, s1.active_upper);
  report.strict_lower_violations = outside(s1.strict_lower, s2.strict_lower);
  report.strict_upper_violations = outside(s2.strict_upper, s1.strict_upper);

  if (problem.control().kind() == ControlKind::identity) {
    // Reflection turns the upper statement for (u1, u2) into the lower one for
    // (-u2, -u1).
    const BopProblem r1 = reflect_problem(p2);
    const BopProblem r2 = reflect_problem(p1);
    const SetPartition t1 = classify_sets(solve_bop(r1, options), r1.obstacles(), thresholds);
    const SetPartition t2 = classify_sets(solve_bop(r2, options), r2.obstacles(), thresholds);
    report.strict_upper_via_reflection = outside(t1.strict_lower, t2.strict_lower);
  }
  return report;
}

}  // namespace bilateral
