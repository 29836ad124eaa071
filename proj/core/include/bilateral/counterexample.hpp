#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bilateral::series {

/// Radial construction on the punctured disk of radius rho = exp(-pi^(1/beta))
/// whose functional pairs a test function with weighted circle averages.
///
/// Everything is expressed in s = -ln r (so s >= s_rho = pi^(1/beta)) and in
/// t = s^beta. Radii themselves underflow long before the first circle and are
/// never formed.

enum class WeightRule { inverse_k, inverse_k_squared };

std::string to_string(WeightRule rule);
WeightRule parse_weight_rule(const std::string& name);

struct CounterexampleConfig {
  double beta = 1.0 / 3.0;
  std::int64_t k_max = 100000;
  WeightRule weights = WeightRule::inverse_k;

  /// Throws InvalidBeta unless 0 < beta < 1/2, InvalidSpec unless k_max >= 1.
  void validate() const;
  double omega(std::int64_t k) const;
  /// sum over all k of omega_k^2, in closed form.
  double omega_squared_sum() const;
  /// s at the outer boundary, pi^(1/beta).
  double s_rho() const;
};

/// t_k^- = 2k pi - pi/2 and t_k^+ = 2k pi + pi/2; the circles r_k^- and r_k^+
/// sit at s = t^(1/beta).
double circle_t(std::int64_t k, int sign);

struct RadiusSchedule {
  /// ln r_k^-, ln r_k^+ for k = 1..k_max (entry k-1).
  std::vector<double> log_r_minus;
  std::vector<double> log_r_plus;
  double log_rho = 0.0;

  /// ln rho > ln r_1^- > ln r_1^+ > ln r_2^- > ...
  bool interlaced() const;
};

RadiusSchedule radius_schedule(const CounterexampleConfig& config);

/// ln(r_k^- / r_k^+) = (2k pi + pi/2)^(1/beta) - (2k pi - pi/2)^(1/beta),
/// evaluated without cancellation. Throws InvalidBeta or InvalidSpec (k < 1).
double log_radius_gap(std::int64_t k, double beta);

struct GapBounds {
  double lower;
  double upper;
};

/// (2k pi - pi/2)^(1/beta - 1) pi / beta  and  (2k pi + pi/2)^(1/beta - 1) pi / beta.
GapBounds log_radius_gap_bounds(std::int64_t k, double beta);

/// Weight omega_k / sqrt(gap_k) of the k-th pair of circles.
double circle_weight(const CounterexampleConfig& config, std::int64_t k);

enum class RadialKind { zero, oscillating, log_power, polynomial, custom };

/// Radial test function w(s) on s >= s_rho, with closed-form Dirichlet energy
/// for every kind but `custom`.
///
///   oscillating: sin(s^beta)                (the state built by the construction)
///   log_power:   s^beta - pi                (unbounded, finite energy)
///   polynomial:  1 - (r / rho)^2 = 1 - exp(2 (s_rho - s))
class RadialProfile {
 public:
  static RadialProfile zero(double beta);
  static RadialProfile oscillating(double beta);
  static RadialProfile log_power(double beta);
  static RadialProfile polynomial(double beta);
  /// sup_abs is +inf for unbounded functions.
  static RadialProfile custom(double beta, std::string name,
                              std::function<double(double)> value_of_s, double sup_abs);

  RadialKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  double beta() const noexcept { return beta_; }
  double sup_abs() const noexcept { return sup_abs_; }
  bool bounded() const noexcept { return sup_abs_ < INFINITY; }

  /// Throws EvaluationDomain for s < s_rho or non-finite s.
  double value(double s) const;
  /// Value on the circle r_k^- (sign -1) or r_k^+ (sign +1).
  double value_on_circle(std::int64_t k, int sign) const;

  /// Integral of |grad w|^2 over the annulus s_lo < s < s_hi, i.e.
  /// 2 pi * integral of w'(s)^2 ds. Throws NoClosedFormGradient for custom.
  double annulus_energy(double s_lo, double s_hi) const;
  /// Energy between the circles r_k^+ and r_k^- (the k-th annulus).
  double circle_annulus_energy(std::int64_t k) const;
  /// Energy over the whole disk.
  double domain_energy() const;

 private:
  RadialProfile(RadialKind kind, double beta, std::string name, double sup_abs,
                std::function<double(double)> custom = {});

  RadialKind kind_;
  double beta_;
  std::string name_;
  double sup_abs_;
  std::function<double(double)> custom_;
};

/// Partial sums of the pairing, entry K-1 holding the sum over k <= K.
struct PartialSums {
  /// S_K = sum c_k 2 pi (w(r_k^-) - w(r_k^+)).
  std::vector<double> total;
  /// sum c_k 2 pi w(r_k^-): the part carried by the lower-contact circles.
  std::vector<double> lower_part;
  /// sum c_k 2 pi w(r_k^+): the part carried by the upper-contact circles.
  std::vector<double> upper_part;
};

PartialSums pair_with_radial(const CounterexampleConfig& config, const RadialProfile& w);

/// sup over K < K' <= k_max of |S_K' - S_K|, for every K (entry K-1).
std::vector<double> cauchy_tails(const std::vector<double>& partial_sums);

/// Upper bound on sum_{k > K} |c_k 2 pi (w(r_k^-) - w(r_k^+))| for |w| <= sup_abs,
/// built from the lower gap bound; finite for every shipped weight rule.
double bounded_tail_bound(const CounterexampleConfig& config, std::int64_t K, double sup_abs);

/// Bound 2 pi (sum omega^2)^(1/2) (sum 1/gap_k)^(1/2) on the upper part for
/// |w| <= 1, with the gap sum truncated at k_max and closed by an integral tail.
double upper_part_bound(const CounterexampleConfig& config);

struct BoundedSeriesReport {
  std::string profile;
  double limit_estimate = 0.0;
  /// tail at K = checkpoint: sup_{K' > checkpoint} |S_K' - S_checkpoint|.
  std::int64_t checkpoint = 0;
  double tail_at_checkpoint = 0.0;
  double tail_bound_at_checkpoint = 0.0;
  bool tail_bound_decreasing = false;
  double max_abs_upper_part = 0.0;
  double upper_part_bound = 0.0;
};

BoundedSeriesReport bounded_series_report(const CounterexampleConfig& config,
                                          const RadialProfile& w, std::int64_t checkpoint);

struct DivergenceReport {
  /// Checkpoints K and the upper-part sums S_K there.
  std::vector<std::int64_t> checkpoints;
  std::vector<double> upper_sums;
  std::vector<double> lower_bound_sums;
  std::vector<double> ratio_to_log;  ///< S_K / ln K
  /// Least-squares slope of S_K against ln K over the checkpoints.
  double fitted_growth = 0.0;
  /// Limit of k times the lower-bound term; 2 pi / sqrt(3 pi) at beta = 1/3
  /// with omega_k = 1/k. Empty when the terms do not behave like c / k.
  std::optional<double> reference_growth;
  /// max_K (0.9 reference ln K - S_K), floored at 0.
  double c0 = 0.0;
  /// S_K >= lower-bound sum at every K.
  bool dominates_lower_bound = false;
};

/// Upper-part pairing with the unbounded log_power profile.
DivergenceReport divergence_report(const CounterexampleConfig& config,
                                   const std::vector<std::int64_t>& checkpoints);

struct H1BoundReport {
  std::string profile;
  double omega_squared_sum = 0.0;
  double gradient_norm = 0.0;
  double bound = 0.0;            ///< sqrt(2 pi) (sum omega^2)^(1/2) |grad w|
  double max_abs_partial = 0.0;  ///< max_K |S_K|
  bool holds_every_K = false;
  /// |c_k 2 pi (w(r_k^-) - w(r_k^+))| <= sqrt(2 pi) omega_k |grad w|_{annulus k}.
  bool annulus_chain_holds = false;
  /// 2 pi beta^2 s_rho^(2 beta - 1) / (1 - 2 beta), the energy bound for
  /// profiles with |w'(s)| <= beta s^(beta - 1).
  double log_energy_bound = 0.0;
};

H1BoundReport h1_norm_bound_check(const CounterexampleConfig& config, const RadialProfile& w);

struct ViPropertyReport {
  std::int64_t K = 0;
  int samples = 0;
  double min_pairing = 0.0;
  int negative_count = 0;  ///< pairings below -1e-10
  double identity_pairing = 0.0;  ///< z = y
  double clamp_pairing = 0.0;     ///< z = clamp(y, -1/2, 1/2)
  /// y = psi on every r_k^- circle and y = phi on every r_k^+ circle.
  bool support_on_contact = false;
};

/// Pairs the truncated functional with z - y for admissible radial z, where
/// psi = min(-1/2, y), phi = max(1/2, y) and y is the oscillating profile.
ViPropertyReport verify_vi_solution_property(const CounterexampleConfig& config,
                                             std::int64_t K, int samples, std::uint64_t seed);

}  // namespace bilateral::series
