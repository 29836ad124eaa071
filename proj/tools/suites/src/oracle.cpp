#include "bilateral_tools/oracle.hpp"

#include <algorithm>

#include "bilateral/errors.hpp"

namespace bilateral::tools {

PatternOracle enumerate_patterns(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                 const Eigen::VectorXd& lo, const Eigen::VectorXd& up) {
  const int n = static_cast<int>(b.size());
  if (n < 1 || n > 12) throw InvalidSpec("pattern oracle handles 1 to 12 unknowns");

  const double bound_scale = std::max(lo.cwiseAbs().maxCoeff(), up.cwiseAbs().maxCoeff());
  const double y_tol = 1e-12 * (1.0 + bound_scale);
  const double r_tol =
      1e-10 * (a.cwiseAbs().rowwise().sum().maxCoeff() * bound_scale + b.cwiseAbs().maxCoeff());

  int total = 1;
  for (int i = 0; i < n; ++i) total *= 3;

  PatternOracle out;
  std::vector<std::int8_t> pattern(static_cast<std::size_t>(n));
  for (int code = 0; code < total; ++code) {
    int c = code;
    std::vector<int> free_nodes;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
      pattern[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(c % 3 - 1);
      c /= 3;
      if (pattern[static_cast<std::size_t>(i)] < 0) {
        x[i] = lo[i];
      } else if (pattern[static_cast<std::size_t>(i)] > 0) {
        x[i] = up[i];
      } else {
        free_nodes.push_back(i);
      }
    }

    const int m = static_cast<int>(free_nodes.size());
    if (m > 0) {
      Eigen::MatrixXd af(m, m);
      Eigen::VectorXd rhs(m);
      for (int r = 0; r < m; ++r) {
        rhs[r] = b[free_nodes[r]];
        for (int j = 0; j < n; ++j) {
          if (pattern[static_cast<std::size_t>(j)] != 0) rhs[r] -= a(free_nodes[r], j) * x[j];
        }
        for (int s = 0; s < m; ++s) af(r, s) = a(free_nodes[r], free_nodes[s]);
      }
      const Eigen::VectorXd xf = af.fullPivLu().solve(rhs);
      for (int r = 0; r < m; ++r) x[free_nodes[r]] = xf[r];
    }

    const Eigen::VectorXd res = a * x - b;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      switch (pattern[static_cast<std::size_t>(i)]) {
        case -1: ok = res[i] >= -r_tol; break;
        case 1: ok = res[i] <= r_tol; break;
        default: ok = x[i] >= lo[i] - y_tol && x[i] <= up[i] + y_tol; break;
      }
    }
    if (!ok) continue;

    if (out.accepted == 0) {
      out.y = x;
      out.pattern = pattern;
    } else {
      out.spread = std::max(out.spread, (x - out.y).cwiseAbs().maxCoeff());
    }
    ++out.accepted;
  }
  if (out.accepted == 0) throw InvalidSpec("no complementarity pattern was accepted");
  return out;
}

}  // namespace bilateral::tools
