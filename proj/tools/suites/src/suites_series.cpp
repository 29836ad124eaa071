#include <algorithm>
#include <cmath>
#include <numbers>

#include "bilateral_tools/suites.hpp"
#include "common.hpp"

namespace bilateral::tools {

using namespace bilateral::series;

SuiteResult counterexample_suite(std::uint64_t seed) {
  SuiteResult r{"counterexample", 9, {}, Json::object()};
  CounterexampleConfig cfg;  // beta = 1/3, omega_k = 1/k, k_max = 1e5
  constexpr std::int64_t kCheckpoint = 10000;

  // (a) bounded test function: the state of the construction, |w| <= 1.
  {
    const BoundedSeriesReport b = bounded_series_report(cfg, RadialProfile::oscillating(cfg.beta), kCheckpoint);
    r.add(check_le("a_bounded_tail_beyond_1e4", b.tail_at_checkpoint, 1e-6));
    r.add(check_true("a_tail_bound_decreasing", b.tail_bound_decreasing));
    r.add(check_le("a_tail_below_analytic_bound", b.tail_at_checkpoint, b.tail_bound_at_checkpoint));
    r.add(check_le("a_upper_part_within_bound", b.max_abs_upper_part, b.upper_part_bound));
    Json j;
    j["limit_estimate"] = b.limit_estimate;
    j["tail_at_checkpoint"] = b.tail_at_checkpoint;
    j["tail_bound_at_checkpoint"] = b.tail_bound_at_checkpoint;
    j["max_abs_upper_part"] = b.max_abs_upper_part;
    j["upper_part_bound"] = b.upper_part_bound;
    // The series terms decay like c / k^2, so the tail past K is about c / K.
    j["tail_times_checkpoint"] = b.tail_at_checkpoint * static_cast<double>(kCheckpoint);
    r.metrics["bounded"] = j;
  }

  // (b) unbounded test function.
  {
    const DivergenceReport d = divergence_report(cfg, {100, 1000, 10000, 100000});
    const double ref = d.reference_growth.value_or(NAN);
    r.add(check_le("b_fitted_growth_relative_deviation", std::abs(d.fitted_growth / ref - 1.0), 0.25));
    r.add(check_true("b_c0_finite", std::isfinite(d.c0)));
    r.add(check_true("b_dominates_lower_bound_chain", d.dominates_lower_bound));
    double min_ratio = INFINITY;
    for (double v : d.ratio_to_log) min_ratio = std::min(min_ratio, v);
    r.add(check_ge("b_min_ratio_to_log", min_ratio, 0.9 * ref));
    Json j;
    j["checkpoints"] = d.checkpoints;
    j["upper_sums"] = d.upper_sums;
    j["lower_bound_sums"] = d.lower_bound_sums;
    j["ratio_to_log"] = d.ratio_to_log;
    j["fitted_growth"] = d.fitted_growth;
    j["reference_growth"] = ref;
    j["c0"] = d.c0;
    r.metrics["divergence"] = j;
  }

  // (c) H^{-1} bound for every closed-form profile and both weight rules.
  {
    Json rows = Json::array();
    bool all_hold = true;
    bool all_chain = true;
    for (WeightRule rule : {WeightRule::inverse_k, WeightRule::inverse_k_squared}) {
      CounterexampleConfig c = cfg;
      c.weights = rule;
      for (const RadialProfile& w : {RadialProfile::oscillating(c.beta), RadialProfile::log_power(c.beta),
                                     RadialProfile::polynomial(c.beta)}) {
        const H1BoundReport h = h1_norm_bound_check(c, w);
        all_hold = all_hold && h.holds_every_K;
        all_chain = all_chain && h.annulus_chain_holds;
        Json j;
        j["weights"] = to_string(rule);
        j["profile"] = h.profile;
        j["gradient_norm"] = h.gradient_norm;
        j["bound"] = h.bound;
        j["max_abs_partial"] = h.max_abs_partial;
        rows.push_back(j);
      }
    }
    r.add(check_true("c_bound_holds_every_K", all_hold));
    r.add(check_true("c_annulus_chain_holds", all_chain));
    const H1BoundReport osc = h1_norm_bound_check(cfg, RadialProfile::oscillating(cfg.beta));
    const double osc_energy = osc.gradient_norm * osc.gradient_norm;
    r.add(check_le("c_state_energy_within_log_bound", osc_energy, osc.log_energy_bound));
    r.metrics["h1"] = rows;
    r.metrics["log_energy_bound"] = osc.log_energy_bound;

    CounterexampleConfig c2 = cfg;
    c2.weights = WeightRule::inverse_k_squared;
    const PartialSums ps = pair_with_radial(c2, RadialProfile::log_power(c2.beta));
    r.metrics["unbounded_upper_sum_inverse_k_squared"] = ps.upper_part.back();
  }

  // Schedule and gap identities.
  {
    r.add(check_true("schedule_interlaced", radius_schedule(cfg).interlaced()));
    const double pi3 = std::pow(std::numbers::pi, 3);
    r.add(check_le("gap_k1_closed_form",
                   std::abs(log_radius_gap(1, 1.0 / 3.0) - 98.0 / 8.0 * pi3) / (98.0 / 8.0 * pi3), 1e-14));
    std::int64_t bound_failures = 0;
    double asym = 0.0;
    for (double beta : {0.25, 1.0 / 3.0, 0.49}) {
      for (std::int64_t k = 1; k <= 1000000; ++k) {
        const double g = log_radius_gap(k, beta);
        const GapBounds b = log_radius_gap_bounds(k, beta);
        if (!(g >= b.lower * (1 - 1e-14) && g <= b.upper * (1 + 1e-14))) ++bound_failures;
      }
      const double e = 1.0 / beta - 1.0;
      const double limit = std::pow(2.0 * std::numbers::pi, e) * std::numbers::pi / beta;
      asym = std::max(asym, std::abs(log_radius_gap(1000000, beta) / std::pow(1e6, e) / limit - 1.0));
    }
    r.add(check_le("gap_bound_failures", static_cast<double>(bound_failures), 0));
    r.add(check_le("gap_asymptotic_ratio_deviation", asym, 1e-5));
    bool rejected = false;
    try {
      CounterexampleConfig bad;
      bad.beta = 0.6;
      bad.validate();
    } catch (const InvalidBeta&) {
      rejected = true;
    }
    r.add(check_true("beta_outside_range_rejected", rejected));
  }

  // Variational inequality at the constructed state.
  {
    const ViPropertyReport v = verify_vi_solution_property(cfg, kCheckpoint, 100, seed);
    r.add(check_ge("vi_min_pairing", v.min_pairing, -1e-10));
    r.add(check_le("vi_identity_pairing", std::abs(v.identity_pairing), 0.0));
    r.add(check_ge("vi_clamp_pairing", v.clamp_pairing, 0.0));
    r.add(check_true("vi_support_on_contact", v.support_on_contact));
    r.metrics["vi_min_pairing"] = v.min_pairing;
  }
  return r;
}

}  // namespace bilateral::tools
