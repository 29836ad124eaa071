#include "bilateral/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "bilateral/errors.hpp"
#include "bilateral/rng.hpp"

namespace bilateral::series {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 0.5)) {
    throw InvalidBeta("beta must lie in (0, 1/2), got " + std::to_string(beta));
  }
}

// Exponent q of omega_k = k^-q.
double weight_exponent(WeightRule rule) {
  return rule == WeightRule::inverse_k ? 1.0 : 2.0;
}

// a^c - b^c for 0 < b <= a without cancellation.
double power_difference(double a, double b, double c) {
  return std::pow(b, c) * std::expm1(c * std::log1p((a - b) / b));
}

// 2 pi beta * integral of cos^2(tau) tau^(1 - 1/beta) over [ta, tb].
double oscillating_energy_tau(double beta, double ta, double tb) {
  const double e = 1.0 - 1.0 / beta;
  const auto f = [e](double tau) {
    const double c = std::cos(tau);
    return c * c * std::pow(tau, e);
  };
  // Pieces of length at most pi/2 keep 30-point Gauss-Legendre at full
  // precision for these smooth integrands.
  const int pieces = std::max(1, static_cast<int>(std::ceil((tb - ta) / (pi / 2))));
  const double width = (tb - ta) / pieces;
  double sum = 0.0;
  for (int j = 0; j < pieces; ++j) {
    const double a = ta + j * width;
    sum += boost::math::quadrature::gauss<double, 30>::integrate(f, a, a + width);
  }
  return 2.0 * pi * beta * sum;
}

}  // namespace

std::string to_string(WeightRule rule) {
  return rule == WeightRule::inverse_k ? "inverse_k" : "inverse_k_squared";
}

WeightRule parse_weight_rule(const std::string& name) {
  if (name == "inverse_k") return WeightRule::inverse_k;
  if (name == "inverse_k_squared") return WeightRule::inverse_k_squared;
  throw InvalidSpec("unknown weight rule '" + name + "'");
}

void CounterexampleConfig::validate() const {
  check_beta(beta);
  if (k_max < 1) throw InvalidSpec("k_max must be at least 1");
}

double CounterexampleConfig::omega(std::int64_t k) const {
  const double kd = static_cast<double>(k);
  return weights == WeightRule::inverse_k ? 1.0 / kd : 1.0 / (kd * kd);
}

double CounterexampleConfig::omega_squared_sum() const {
  return weights == WeightRule::inverse_k ? pi * pi / 6.0 : std::pow(pi, 4) / 90.0;
}

double CounterexampleConfig::s_rho() const {
  return std::pow(pi, 1.0 / beta);
}

double circle_t(std::int64_t k, int sign) {
  return 2.0 * pi * static_cast<double>(k) + (sign < 0 ? -pi / 2 : pi / 2);
}

bool RadiusSchedule::interlaced() const {
  if (log_r_minus.size() != log_r_plus.size()) return false;
  double prev = log_rho;
  for (std::size_t k = 0; k < log_r_minus.size(); ++k) {
    if (!(log_r_minus[k] < prev)) return false;
    if (!(log_r_plus[k] < log_r_minus[k])) return false;
    prev = log_r_plus[k];
  }
  return true;
}

RadiusSchedule radius_schedule(const CounterexampleConfig& config) {
  config.validate();
  const double p = 1.0 / config.beta;
  RadiusSchedule s;
  s.log_rho = -config.s_rho();
  s.log_r_minus.reserve(static_cast<std::size_t>(config.k_max));
  s.log_r_plus.reserve(static_cast<std::size_t>(config.k_max));
  for (std::int64_t k = 1; k <= config.k_max; ++k) {
    s.log_r_minus.push_back(-std::pow(circle_t(k, -1), p));
    s.log_r_plus.push_back(-std::pow(circle_t(k, +1), p));
  }
  return s;
}

double log_radius_gap(std::int64_t k, double beta) {
  check_beta(beta);
  if (k < 1) throw InvalidSpec("circle index must be at least 1");
  return power_difference(circle_t(k, +1), circle_t(k, -1), 1.0 / beta);
}

GapBounds log_radius_gap_bounds(std::int64_t k, double beta) {
  check_beta(beta);
  if (k < 1) throw InvalidSpec("circle index must be at least 1");
  const double e = 1.0 / beta - 1.0;
  return GapBounds{std::pow(circle_t(k, -1), e) * pi / beta,
                   std::pow(circle_t(k, +1), e) * pi / beta};
}

double circle_weight(const CounterexampleConfig& config, std::int64_t k) {
  return config.omega(k) / std::sqrt(log_radius_gap(k, config.beta));
}

RadialProfile::RadialProfile(RadialKind kind, double beta, std::string name, double sup_abs,
                             std::function<double(double)> custom)
    : kind_(kind), beta_(beta), name_(std::move(name)), sup_abs_(sup_abs),
      custom_(std::move(custom)) {
  check_beta(beta);
}

RadialProfile RadialProfile::zero(double beta) {
  return RadialProfile(RadialKind::zero, beta, "zero", 0.0);
}

RadialProfile RadialProfile::oscillating(double beta) {
  return RadialProfile(RadialKind::oscillating, beta, "oscillating", 1.0);
}

RadialProfile RadialProfile::log_power(double beta) {
  return RadialProfile(RadialKind::log_power, beta, "log_power", inf);
}

RadialProfile RadialProfile::polynomial(double beta) {
  return RadialProfile(RadialKind::polynomial, beta, "polynomial", 1.0);
}

RadialProfile RadialProfile::custom(double beta, std::string name,
                                    std::function<double(double)> value_of_s, double sup_abs) {
  if (!value_of_s) throw InvalidSpec("custom radial profile needs a value function");
  return RadialProfile(RadialKind::custom, beta, std::move(name), sup_abs,
                       std::move(value_of_s));
}

double RadialProfile::value(double s) const {
  const double s_rho = std::pow(pi, 1.0 / beta_);
  if (!std::isfinite(s) || s < s_rho * (1.0 - 1e-14)) {
    throw EvaluationDomain("log-radius outside the disk: s = " + std::to_string(s) +
                           " < s_rho = " + std::to_string(s_rho));
  }
  switch (kind_) {
    case RadialKind::zero:
      return 0.0;
    case RadialKind::oscillating:
      return std::sin(std::pow(s, beta_));
    case RadialKind::log_power:
      return std::pow(s, beta_) - pi;
    case RadialKind::polynomial:
      return -std::expm1(2.0 * (s_rho - s));
    case RadialKind::custom:
      return custom_(s);
  }
  return 0.0;
}

double RadialProfile::value_on_circle(std::int64_t k, int sign) const {
  if (k < 1) throw EvaluationDomain("circle index must be at least 1");
  const double t = circle_t(k, sign);
  switch (kind_) {
    case RadialKind::zero:
      return 0.0;
    case RadialKind::oscillating:
      return std::sin(t);
    case RadialKind::log_power:
      return t - pi;
    case RadialKind::polynomial:
    case RadialKind::custom:
      return value(std::pow(t, 1.0 / beta_));
  }
  return 0.0;
}

double RadialProfile::annulus_energy(double s_lo, double s_hi) const {
  const double s_rho = std::pow(pi, 1.0 / beta_);
  if (!(s_lo >= s_rho * (1.0 - 1e-14)) || !(s_hi >= s_lo)) {
    throw EvaluationDomain("annulus must satisfy s_rho <= s_lo <= s_hi");
  }
  switch (kind_) {
    case RadialKind::zero:
      return 0.0;
    case RadialKind::oscillating:
      if (std::isinf(s_hi)) {
        if (s_lo <= s_rho) return domain_energy();
        throw NoClosedFormGradient("unbounded annulus only supported from the boundary");
      }
      return oscillating_energy_tau(beta_, std::pow(s_lo, beta_), std::pow(s_hi, beta_));
    case RadialKind::log_power: {
      // 2 pi beta^2 (s_lo^(2b-1) - s_hi^(2b-1)) / (1 - 2b)
      const double c = 2.0 * beta_ - 1.0;
      const double diff = std::isinf(s_hi) ? std::pow(s_lo, c)
                                           : -power_difference(s_hi, s_lo, c);
      return 2.0 * pi * beta_ * beta_ * diff / (1.0 - 2.0 * beta_);
    }
    case RadialKind::polynomial: {
      const double head = std::exp(4.0 * (s_rho - s_lo));
      const double frac = std::isinf(s_hi) ? 1.0 : -std::expm1(-4.0 * (s_hi - s_lo));
      return 2.0 * pi * head * frac;
    }
    case RadialKind::custom:
      break;
  }
  throw NoClosedFormGradient("profile '" + name_ + "' has no closed-form gradient");
}

double RadialProfile::circle_annulus_energy(std::int64_t k) const {
  const double t_lo = circle_t(k, -1);
  const double t_hi = circle_t(k, +1);
  switch (kind_) {
    case RadialKind::oscillating:
      return oscillating_energy_tau(beta_, t_lo, t_hi);
    case RadialKind::log_power: {
      // s^(2b-1) = t^(2 - 1/b)
      const double c = 2.0 - 1.0 / beta_;
      return 2.0 * pi * beta_ * beta_ * -power_difference(t_hi, t_lo, c) /
             (1.0 - 2.0 * beta_);
    }
    default:
      return annulus_energy(std::pow(t_lo, 1.0 / beta_), std::pow(t_hi, 1.0 / beta_));
  }
}

double RadialProfile::domain_energy() const {
  switch (kind_) {
    case RadialKind::zero:
      return 0.0;
    case RadialKind::oscillating: {
      // Quadrature up to T = (periods + 1) pi, then the two leading terms of
      // the asymptotic tail of integral cos^2(tau) tau^-a over [T, inf).
      constexpr int periods = 4000;
      const double a = 1.0 / beta_ - 1.0;
      const double T = (periods + 1) * pi;
      const double head = oscillating_energy_tau(beta_, pi, T);
      const double tail = std::pow(T, 1.0 - a) / (2.0 * (a - 1.0)) + a / 8.0 * std::pow(T, -a - 1.0);
      return head + 2.0 * pi * beta_ * tail;
    }
    case RadialKind::log_power:
      return 2.0 * pi * beta_ * beta_ * std::pow(pi, 2.0 - 1.0 / beta_) / (1.0 - 2.0 * beta_);
    case RadialKind::polynomial:
      return 2.0 * pi;
    case RadialKind::custom:
      break;
  }
  throw NoClosedFormGradient("profile '" + name_ + "' has no closed-form gradient");
}

PartialSums pair_with_radial(const CounterexampleConfig& config, const RadialProfile& w) {
  config.validate();
  if (w.beta() != config.beta) throw InvalidSpec("profile and config use different beta");
  const auto n = static_cast<std::size_t>(config.k_max);
  PartialSums out;
  out.total.reserve(n);
  out.lower_part.reserve(n);
  out.upper_part.reserve(n);
  double total = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  for (std::int64_t k = 1; k <= config.k_max; ++k) {
    const double c = 2.0 * pi * circle_weight(config, k);
    const double w_minus = w.value_on_circle(k, -1);
    const double w_plus = w.value_on_circle(k, +1);
    total += c * (w_minus - w_plus);
    lower += c * w_minus;
    upper += c * w_plus;
    out.total.push_back(total);
    out.lower_part.push_back(lower);
    out.upper_part.push_back(upper);
  }
  return out;
}

std::vector<double> cauchy_tails(const std::vector<double>& s) {
  std::vector<double> tails(s.size(), 0.0);
  double hi = -inf;
  double lo = inf;
  for (std::size_t i = s.size(); i-- > 0;) {
    if (i + 1 < s.size()) {
      hi = std::max(hi, s[i + 1]);
      lo = std::min(lo, s[i + 1]);
      tails[i] = std::max(hi - s[i], s[i] - lo);
    }
  }
  return tails;
}

double bounded_tail_bound(const CounterexampleConfig& config, std::int64_t K, double sup_abs) {
  config.validate();
  // |term_k| <= 4 pi sup omega_k sqrt(beta / pi) (2k pi - pi/2)^(-e), e = (1/beta - 1)/2,
  // and 2k pi - pi/2 >= 1.5 pi k; sum over k > K by the integral from K.
  const double e = (1.0 / config.beta - 1.0) / 2.0;
  const double q = weight_exponent(config.weights);
  const double Kd = static_cast<double>(std::max<std::int64_t>(K, 1));
  return 4.0 * pi * sup_abs * std::sqrt(config.beta / pi) * std::pow(1.5 * pi, -e) *
         std::pow(Kd, 1.0 - q - e) / (q + e - 1.0);
}

double upper_part_bound(const CounterexampleConfig& config) {
  config.validate();
  double inv_gap = 0.0;
  for (std::int64_t k = 1; k <= config.k_max; ++k) inv_gap += 1.0 / log_radius_gap(k, config.beta);
  const double e2 = 1.0 / config.beta - 1.0;
  const double Kd = static_cast<double>(config.k_max);
  inv_gap += config.beta / pi * std::pow(1.5 * pi, -e2) * std::pow(Kd, 1.0 - e2) / (e2 - 1.0);
  return 2.0 * pi * std::sqrt(config.omega_squared_sum()) * std::sqrt(inv_gap);
}

BoundedSeriesReport bounded_series_report(const CounterexampleConfig& config,
                                          const RadialProfile& w, std::int64_t checkpoint) {
  if (!w.bounded()) throw InvalidSpec("bounded series report needs a bounded profile");
  if (checkpoint < 1 || checkpoint > config.k_max) {
    throw InvalidSpec("checkpoint must lie in [1, k_max]");
  }
  const PartialSums sums = pair_with_radial(config, w);
  const std::vector<double> tails = cauchy_tails(sums.total);

  BoundedSeriesReport r;
  r.profile = w.name();
  r.limit_estimate = sums.total.back();
  r.checkpoint = checkpoint;
  r.tail_at_checkpoint = tails[static_cast<std::size_t>(checkpoint - 1)];
  r.tail_bound_at_checkpoint = bounded_tail_bound(config, checkpoint, w.sup_abs());
  r.tail_bound_decreasing = true;
  double prev = inf;
  for (std::int64_t K = 1; K <= config.k_max; ++K) {
    const double b = bounded_tail_bound(config, K, w.sup_abs());
    if (!(b < prev)) r.tail_bound_decreasing = false;
    prev = b;
  }
  for (double v : sums.upper_part) r.max_abs_upper_part = std::max(r.max_abs_upper_part, std::abs(v));
  r.upper_part_bound = w.sup_abs() * upper_part_bound(config);
  return r;
}

DivergenceReport divergence_report(const CounterexampleConfig& config,
                                   const std::vector<std::int64_t>& checkpoints) {
  const RadialProfile w = RadialProfile::log_power(config.beta);
  const PartialSums sums = pair_with_radial(config, w);

  DivergenceReport r;
  const double e = (1.0 / config.beta - 1.0) / 2.0;
  if (config.weights == WeightRule::inverse_k && std::abs(e - 1.0) < 1e-12) {
    r.reference_growth = 2.0 * pi * std::sqrt(config.beta / pi);
  }

  // Lower-bound chain: replace gap_k by its upper bound.
  std::vector<double> lower_bound(sums.upper_part.size());
  double acc = 0.0;
  r.dominates_lower_bound = true;
  for (std::int64_t k = 1; k <= config.k_max; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    const GapBounds gb = log_radius_gap_bounds(k, config.beta);
    acc += config.omega(k) * 2.0 * pi * w.value_on_circle(k, +1) / std::sqrt(gb.upper);
    lower_bound[i] = acc;
    if (sums.upper_part[i] < acc * (1.0 - 1e-12)) r.dominates_lower_bound = false;
  }

  for (std::int64_t K : checkpoints) {
    if (K < 2 || K > config.k_max) continue;
    const auto i = static_cast<std::size_t>(K - 1);
    r.checkpoints.push_back(K);
    r.upper_sums.push_back(sums.upper_part[i]);
    r.lower_bound_sums.push_back(lower_bound[i]);
    r.ratio_to_log.push_back(sums.upper_part[i] / std::log(static_cast<double>(K)));
  }

  if (r.checkpoints.size() >= 2) {
    double mx = 0.0;
    double my = 0.0;
    const double n = static_cast<double>(r.checkpoints.size());
    for (std::size_t j = 0; j < r.checkpoints.size(); ++j) {
      mx += std::log(static_cast<double>(r.checkpoints[j])) / n;
      my += r.upper_sums[j] / n;
    }
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t j = 0; j < r.checkpoints.size(); ++j) {
      const double dx = std::log(static_cast<double>(r.checkpoints[j])) - mx;
      sxy += dx * (r.upper_sums[j] - my);
      sxx += dx * dx;
    }
    r.fitted_growth = sxy / sxx;
  }

  const double c = r.reference_growth.value_or(r.fitted_growth);
  for (std::int64_t K = 1; K <= config.k_max; ++K) {
    const double gap = 0.9 * c * std::log(static_cast<double>(K)) -
                       sums.upper_part[static_cast<std::size_t>(K - 1)];
    r.c0 = std::max(r.c0, gap);
  }
  return r;
}

H1BoundReport h1_norm_bound_check(const CounterexampleConfig& config, const RadialProfile& w) {
  const PartialSums sums = pair_with_radial(config, w);
  H1BoundReport r;
  r.profile = w.name();
  r.omega_squared_sum = config.omega_squared_sum();
  r.gradient_norm = std::sqrt(w.domain_energy());
  r.bound = std::sqrt(2.0 * pi * r.omega_squared_sum) * r.gradient_norm;
  r.log_energy_bound = 2.0 * pi * config.beta * config.beta *
                       std::pow(config.s_rho(), 2.0 * config.beta - 1.0) /
                       (1.0 - 2.0 * config.beta);

  r.holds_every_K = true;
  for (double s : sums.total) {
    r.max_abs_partial = std::max(r.max_abs_partial, std::abs(s));
    if (std::abs(s) > r.bound * (1.0 + 1e-12)) r.holds_every_K = false;
  }

  r.annulus_chain_holds = true;
  for (std::int64_t k = 1; k <= config.k_max; ++k) {
    const double term = 2.0 * pi * circle_weight(config, k) *
                        (w.value_on_circle(k, -1) - w.value_on_circle(k, +1));
    const double local = std::sqrt(2.0 * pi) * config.omega(k) *
                         std::sqrt(w.circle_annulus_energy(k));
    if (std::abs(term) > local * (1.0 + 1e-10)) r.annulus_chain_holds = false;
  }
  return r;
}

ViPropertyReport verify_vi_solution_property(const CounterexampleConfig& config,
                                             std::int64_t K, int samples, std::uint64_t seed) {
  config.validate();
  if (K < 1 || K > config.k_max) throw InvalidSpec("K must lie in [1, k_max]");

  const auto n = static_cast<std::size_t>(K);
  std::vector<double> c(n), y_minus(n), y_plus(n), t_minus(n), t_plus(n);
  for (std::int64_t k = 1; k <= K; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    c[i] = 2.0 * pi * circle_weight(config, k);
    t_minus[i] = circle_t(k, -1);
    t_plus[i] = circle_t(k, +1);
    y_minus[i] = std::sin(t_minus[i]);
    y_plus[i] = std::sin(t_plus[i]);
  }
  const auto psi = [](double y) { return std::min(-0.5, y); };
  const auto phi = [](double y) { return std::max(0.5, y); };

  // Pairing <xi_K, z - y> given z on the circles.
  const auto pairing = [&](const std::vector<double>& z_minus, const std::vector<double>& z_plus) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += c[i] * ((z_minus[i] - y_minus[i]) - (z_plus[i] - y_plus[i]));
    }
    return sum;
  };

  ViPropertyReport r;
  r.K = K;
  r.samples = samples;
  r.support_on_contact = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(y_minus[i] == psi(y_minus[i]) && std::abs(y_minus[i] + 1.0) < 1e-9 &&
          y_plus[i] == phi(y_plus[i]) && std::abs(y_plus[i] - 1.0) < 1e-9)) {
      r.support_on_contact = false;
    }
  }

  r.identity_pairing = pairing(y_minus, y_plus);
  {
    std::vector<double> zm(n), zp(n);
    for (std::size_t i = 0; i < n; ++i) {
      zm[i] = std::clamp(y_minus[i], -0.5, 0.5);
      zp[i] = std::clamp(y_plus[i], -0.5, 0.5);
    }
    r.clamp_pairing = pairing(zm, zp);
  }

  // Random piecewise-linear g in t, zero at the boundary t = pi, clamped into
  // [psi, phi] so that z is admissible.
  Rng rng(seed);
  const double t_end = t_plus.back() + pi;
  r.min_pairing = inf;
  for (int s = 0; s < samples; ++s) {
    const int knots = rng.uniform_int(2, static_cast<int>(std::min<std::int64_t>(4 * K + 2, 4000)));
    std::vector<double> kt(static_cast<std::size_t>(knots)), kv(static_cast<std::size_t>(knots));
    for (int j = 0; j < knots; ++j) {
      kt[static_cast<std::size_t>(j)] = pi + (t_end - pi) * j / (knots - 1);
      kv[static_cast<std::size_t>(j)] = j == 0 ? 0.0 : rng.uniform(-1.5, 1.5);
    }
    const auto g = [&](double t) {
      const auto it = std::upper_bound(kt.begin(), kt.end(), t);
      const auto j = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
          it - kt.begin() - 1, 0, static_cast<std::ptrdiff_t>(knots) - 2));
      const double lam = (t - kt[j]) / (kt[j + 1] - kt[j]);
      return (1.0 - lam) * kv[j] + lam * kv[j + 1];
    };
    std::vector<double> zm(n), zp(n);
    for (std::size_t i = 0; i < n; ++i) {
      zm[i] = std::clamp(g(t_minus[i]), psi(y_minus[i]), phi(y_minus[i]));
      zp[i] = std::clamp(g(t_plus[i]), psi(y_plus[i]), phi(y_plus[i]));
    }
    const double p = pairing(zm, zp);
    r.min_pairing = std::min(r.min_pairing, p);
    if (p < -1e-10) ++r.negative_count;
  }
  if (samples <= 0) r.min_pairing = 0.0;
  return r;
}

}  // namespace bilateral::series
