#include "bilateral/derivatives.hpp"

#include <algorithm>

#include "bilateral/errors.hpp"
#include "bilateral/linalg.hpp"

namespace bilateral {

Linearization linearize(const BopProblem& problem, const SetThresholds& thresholds,
                        const SolveOptions& options) {
  BopSolution solution = solve_bop(problem, options);
  SetPartition partition = classify_sets(solution, problem.obstacles(), thresholds);
  return Linearization{problem, std::move(solution), std::move(partition)};
}

std::string to_string(LimitSide side) {
  return side == LimitSide::lower ? "lower" : "upper";
}

LimitSide parse_limit_side(std::string_view name) {
  if (name == "lower") return LimitSide::lower;
  if (name == "upper") return LimitSide::upper;
  throw InvalidSpec("unknown side '" + std::string(name) + "', expected lower or upper");
}

NodeMask generalized_domain(const SetPartition& partition, LimitSide side) {
  return side == LimitSide::lower ? (partition.inactive | partition.weak_upper)
                                  : (partition.inactive | partition.weak_lower);
}

double relative_max_error(const GridFunction& a, const GridFunction& b) {
  const double diff = max_abs_diff(a, b);
  const double scale = max_abs(b);
  return scale > 0.0 ? diff / scale : diff;
}

namespace {

DerivativeResult reduced_solve(const Linearization& lin, const GridFunction& h,
                               const NodeMask& D) {
  const BopProblem& p = lin.problem;
  require_same_grid(p.grid(), h.grid(), "derivative direction");
  const GridFunction rhs = p.control().derivative(p.u(), h);
  Vector eta = D.none() ? Vector::Zero(static_cast<Eigen::Index>(D.size()))
                        : solve_restricted(p.op().matrix(), D, rhs.values(), p.op().symmetric());
  return DerivativeResult{GridFunction(p.grid(), std::move(eta)), D, 0, 0.0};
}

}  // namespace

DerivativeResult directional_derivative(const Linearization& lin, const GridFunction& h,
                                        const DirectionalOptions& options) {
  const BopProblem& p = lin.problem;
  require_same_grid(p.grid(), h.grid(), "directional_derivative");
  const CriticalCone cone = lin.cone();
  const GridFunction rhs = p.control().derivative(p.u(), h);
  const Vector lo = cone.lower_bounds();
  const Vector up = cone.upper_bounds();

  const Vector free_solution =
      solve_restricted(p.op().matrix(), NodeMask::all(p.grid().size()), rhs.values(),
                       p.op().symmetric());
  const double scale = free_solution.size() ? free_solution.cwiseAbs().maxCoeff() : 0.0;

  NodeMask D(p.grid().size());
  for (std::size_t i = 0; i < D.size(); ++i) D.set(i, cone.class_of(i) != ConeClass::zero);

  if (scale == 0.0) {
    return DerivativeResult{GridFunction(p.grid()), D, 0, 0.0};
  }

  BoxViOptions box;
  box.method = options.method;
  box.tol = options.rel_tol * scale;
  box.max_iter = options.max_iter;
  box.omega = options.omega;
  const double hm = p.grid().h_min();
  box.pdas_c = 1.0 / (hm * hm);
  const BoxViResult r =
      solve_box_vi(p.op().matrix(), p.op().symmetric(), rhs.values(), lo, up, box);
  return DerivativeResult{GridFunction(p.grid(), r.x), D, r.iterations, r.residual_norm};
}

DerivativeResult gateaux_derivative_on_D(const Linearization& lin, const GridFunction& h,
                                         const NodeMask& D) {
  const SetPartition& part = lin.partition;
  if (D.size() != part.inactive.size()) throw InvalidD("D has the wrong size");
  if (!part.inactive.subset_of(D)) {
    throw InvalidD("D must contain every inactive node");
  }
  if (!(D & part.strict()).none()) {
    throw InvalidD("D must avoid the strictly active nodes");
  }
  return reduced_solve(lin, h, D);
}

DerivativeResult generalized_derivative(const Linearization& lin, const GridFunction& h,
                                        LimitSide side) {
  const auto broken = lin.partition.invariant_violations();
  if (!broken.empty()) throw InvalidPartition("set partition is inconsistent: " + broken.front());
  return reduced_solve(lin, h, generalized_domain(lin.partition, side));
}

SandwichReport verify_set_sandwich(const SetPartition& partition_n,
                                   const SetPartition& partition_limit, LimitSide side) {
  // For u_a >= u_b: A_psi(a) in A_psi(b), A^phi(b) in A^phi(a), same for strict.
  const SetPartition& a = side == LimitSide::lower ? partition_limit : partition_n;
  const SetPartition& b = side == LimitSide::lower ? partition_n : partition_limit;
  SandwichReport r;
  r.active_lower = a.active_lower.minus(b.active_lower).indices();
  r.active_upper = b.active_upper.minus(a.active_upper).indices();
  r.strict_lower = a.strict_lower.minus(b.strict_lower).indices();
  r.strict_upper = b.strict_upper.minus(a.strict_upper).indices();
  return r;
}

MoscoReport mosco_convergence_experiment(const BopProblem& problem, const GridFunction& h,
                                         LimitSide side, const MoscoOptions& options) {
  const Grid& grid = problem.grid();
  const GridFunction e = options.e ? *options.e : GridFunction::constant(grid, 1.0);
  require_same_grid(grid, e.grid(), "Mosco perturbation");
  if (!((e.values().array() > 0.0).all())) {
    throw InvalidSpec("Mosco perturbation e must be strictly positive");
  }
  for (int n : options.schedule) {
    if (n < 1) throw InvalidSpec("Mosco schedule entries must be positive");
  }

  const Linearization limit = linearize(problem, options.thresholds, options.solve);
  const DerivativeResult eta_inf = generalized_derivative(limit, h, side);
  const NodeMask d_limit = eta_inf.D_used;

  MoscoReport report;
  report.side = side;
  report.eta_inf_norm = max_abs(eta_inf.eta);
  report.d_limit_size = d_limit.count();

  const double sign = side == LimitSide::lower ? -1.0 : 1.0;
  for (int n : options.schedule) {
    const GridFunction u_n = problem.u() + (sign / n) * e;
    const Linearization lin = linearize(problem.with_control(u_n), options.thresholds,
                                        options.solve);
    const DerivativeResult eta_n = generalized_derivative(lin, h, side);

    MoscoPoint pt;
    pt.n = n;
    pt.abs_error = max_abs_diff(eta_n.eta, eta_inf.eta);
    pt.error = relative_max_error(eta_n.eta, eta_inf.eta);
    pt.counts = count_sets(lin.partition);
    pt.d_size = eta_n.D_used.count();
    pt.d_matches_limit = eta_n.D_used == d_limit;
    pt.threshold_sensitive =
        !threshold_sensitivity(lin.solution, lin.problem.obstacles(), options.thresholds).stable();
    pt.sandwich_violations = verify_set_sandwich(lin.partition, limit.partition, side).total();
    report.points.push_back(pt);
  }
  return report;
}

}  // namespace bilateral
