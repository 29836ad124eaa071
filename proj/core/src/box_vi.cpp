#include "bilateral/box_vi.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "bilateral/errors.hpp"
#include "bilateral/linalg.hpp"

namespace bilateral {

std::string to_string(ViMethod method) {
  return method == ViMethod::psor ? "psor" : "pdas";
}

ViMethod parse_vi_method(std::string_view name) {
  if (name == "psor") return ViMethod::psor;
  if (name == "pdas") return ViMethod::pdas;
  throw InvalidSpec("unknown solver method '" + std::string(name) + "'");
}

double default_tolerance(ViMethod method) {
  return method == ViMethod::psor ? 1e-8 : 1e-10;
}

namespace {

Vector diagonal_of(const SparseMatrix& a) {
  Vector d = Vector::Zero(a.rows());
  for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
      if (it.col() == r) d[r] = it.value();
    }
  }
  return d;
}

double residual_with_diag(const Vector& diag, const Vector& x, const Vector& r,
                          const Vector& lo, const Vector& up) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double trial = std::clamp(x[i] - r[i] / diag[i], lo[i], up[i]);
    worst = std::max(worst, std::abs(x[i] - trial));
  }
  return worst;
}

// max(1, ||A^{-1} diag(A)||_inf). For an M-matrix the distance to the
// solution in the max norm is at most kappa times the natural residual.
double error_factor(const SparseMatrix& a, bool symmetric, const Vector& diag) {
  const Vector w = solve_restricted(a, NodeMask::all(static_cast<std::size_t>(a.rows())), diag,
                                    symmetric);
  return std::max(1.0, w.maxCoeff());
}

void check_inputs(const SparseMatrix& a, const Vector& b, const Vector& lo, const Vector& up) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.size() != n || lo.size() != n || up.size() != n) {
    throw GridMismatch("box VI: matrix, load and bounds differ in size");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(lo[i] <= up[i])) throw InfeasibleObstacles("box VI: lower bound exceeds upper bound");
  }
}

BoxViResult run_psor(const SparseMatrix& a, bool symmetric, const Vector& b, const Vector& lo,
                     const Vector& up, const BoxViOptions& opt, const Vector* warm_start) {
  const Eigen::Index n = a.rows();
  const Vector diag = diagonal_of(a);
  const double kappa = error_factor(a, symmetric, diag);
  Vector x = warm_start ? *warm_start : Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = std::clamp(x[i], lo[i], up[i]);

  const int max_iter = opt.max_iter > 0 ? opt.max_iter : 200000;
  double best = INFINITY;
  for (int sweep = 0; sweep <= max_iter; ++sweep) {
    if (sweep % 10 == 0 || sweep == max_iter) {
      const Vector r = a * x - b;
      const double res = kappa * residual_with_diag(diag, x, r, lo, up);
      best = std::min(best, res);
      if (res <= opt.tol) return BoxViResult{x, r, sweep, res};
      if (sweep == max_iter) break;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      double ri = -b[i];
      for (SparseMatrix::InnerIterator it(a, i); it; ++it) ri += it.value() * x[it.col()];
      x[i] = std::clamp(x[i] - opt.omega * ri / diag[i], lo[i], up[i]);
    }
  }
  throw NoConvergence("PSOR did not converge", max_iter, best);
}

enum : std::uint8_t { kFree = 0, kLower = 1, kUpper = 2 };

// Solves with x fixed to the bound on every non-free node.
Vector reduced_solve(const SparseMatrix& a, bool symmetric, const Vector& b, const Vector& lo,
                     const Vector& up, const std::vector<std::uint8_t>& state) {
  const Eigen::Index n = a.rows();
  Vector fixed = Vector::Zero(n);
  NodeMask free(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto s = state[static_cast<std::size_t>(i)];
    if (s == kLower) {
      fixed[i] = lo[i];
    } else if (s == kUpper) {
      fixed[i] = up[i];
    } else {
      free.set(static_cast<std::size_t>(i));
    }
  }
  if (free.none()) return fixed;
  const Vector rhs = b - a * fixed;
  Vector x = solve_restricted(a, free, rhs, symmetric);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!free[static_cast<std::size_t>(i)]) x[i] = fixed[i];
  }
  return x;
}

BoxViResult run_pdas(const SparseMatrix& a, bool symmetric, const Vector& b, const Vector& lo,
                     const Vector& up, const BoxViOptions& opt) {
  const Eigen::Index n = a.rows();
  const Vector diag = diagonal_of(a);
  const double kappa = error_factor(a, symmetric, diag);
  std::vector<std::uint8_t> state(static_cast<std::size_t>(n), kFree);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lo[i] == up[i]) state[static_cast<std::size_t>(i)] = kLower;
  }

  Vector x = reduced_solve(a, symmetric, b, lo, up, state);
  Vector r = a * x - b;
  double res = kappa * residual_with_diag(diag, x, r, lo, up);
  if (res <= opt.tol) return BoxViResult{x, r, 0, res};
  Vector best_x = x;
  double best = res;

  const int max_iter = opt.max_iter > 0 ? opt.max_iter : 200;
  const double c = opt.pdas_c;
  std::set<std::vector<std::uint8_t>> seen{state};
  int it = 1;
  for (; it <= max_iter; ++it) {
    std::vector<std::uint8_t> next(state.size(), kFree);
    for (Eigen::Index i = 0; i < n; ++i) {
      auto& s = next[static_cast<std::size_t>(i)];
      if (lo[i] == up[i] || r[i] + c * (lo[i] - x[i]) > 0.0) {
        s = kLower;
      } else if (-r[i] + c * (x[i] - up[i]) > 0.0) {
        s = kUpper;
      }
    }
    // A revisited active set means PDAS is cycling (or stuck above tol).
    if (!seen.insert(next).second) break;
    state = std::move(next);
    x = reduced_solve(a, symmetric, b, lo, up, state);
    r = a * x - b;
    res = kappa * residual_with_diag(diag, x, r, lo, up);
    if (res < best) {
      best = res;
      best_x = x;
    }
    if (res <= opt.tol) return BoxViResult{x, r, it, res};
  }

  // Finish with projected SOR from the best iterate.
  BoxViOptions polish = opt;
  polish.max_iter = 0;
  try {
    BoxViResult out = run_psor(a, symmetric, b, lo, up, polish, &best_x);
    out.iterations += std::min(it, max_iter);
    return out;
  } catch (const NoConvergence&) {
    throw NoConvergence("PDAS did not converge", max_iter, best);
  }
}

}  // namespace

BoxViResult solve_box_vi(const SparseMatrix& a, bool symmetric, const Vector& b,
                         const Vector& lo, const Vector& up, const BoxViOptions& options,
                         const Vector* warm_start) {
  check_inputs(a, b, lo, up);
  if (!(options.tol > 0.0)) throw InvalidSpec("solver tolerance must be positive");
  if (options.method == ViMethod::psor) {
    if (!(options.omega > 0.0 && options.omega < 2.0)) {
      throw InvalidSpec("PSOR relaxation must lie in (0, 2)");
    }
    return run_psor(a, symmetric, b, lo, up, options, warm_start);
  }
  if (!(options.pdas_c > 0.0)) throw InvalidSpec("PDAS constant must be positive");
  return run_pdas(a, symmetric, b, lo, up, options);
}

double natural_residual(const SparseMatrix& a, const Vector& x, const Vector& r,
                        const Vector& lo, const Vector& up) {
  return residual_with_diag(diagonal_of(a), x, r, lo, up);
}

}  // namespace bilateral
