#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "bilateral/bilateral.hpp"

namespace bilateral::series {
namespace {

constexpr double pi = std::numbers::pi;

TEST(Config, BetaRange) {
  CounterexampleConfig c;
  EXPECT_NO_THROW(c.validate());
  for (double b : {0.0, 0.5, 0.6, -0.1}) {
    c.beta = b;
    EXPECT_THROW(c.validate(), InvalidBeta) << b;
  }
}

TEST(Config, OmegaSquaredSumClosedForm) {
  CounterexampleConfig c;
  EXPECT_NEAR(c.omega_squared_sum(), pi * pi / 6.0, 1e-15);
  c.weights = WeightRule::inverse_k_squared;
  EXPECT_NEAR(c.omega_squared_sum(), std::pow(pi, 4) / 90.0, 1e-15);
  EXPECT_EQ(parse_weight_rule(to_string(WeightRule::inverse_k_squared)), WeightRule::inverse_k_squared);
}

TEST(Gap, FirstGapClosedForm) {
  const double expected = std::pow(2.5 * pi, 3) - std::pow(1.5 * pi, 3);
  EXPECT_NEAR(log_radius_gap(1, 1.0 / 3.0), expected, 1e-12 * expected);
  EXPECT_NEAR(expected, 98.0 / 8.0 * std::pow(pi, 3), 1e-10);
  EXPECT_NEAR(log_radius_gap(1, 1.0 / 3.0), 379.8269, 1e-4);
}

TEST(Gap, BoundsHoldOnASweep) {
  for (double beta : {0.25, 1.0 / 3.0, 0.49}) {
    for (std::int64_t k : {1, 2, 10, 1000, 1000000}) {
      const GapBounds b = log_radius_gap_bounds(k, beta);
      const double g = log_radius_gap(k, beta);
      EXPECT_LE(b.lower, g * (1 + 1e-14));
      EXPECT_GE(b.upper, g * (1 - 1e-14));
    }
  }
}

TEST(Schedule, InterlacedWithoutUnderflow) {
  CounterexampleConfig c;
  const RadiusSchedule s = radius_schedule(c);
  EXPECT_TRUE(s.interlaced());
  EXPECT_NEAR(s.log_rho, -std::pow(pi, 3), 1e-12);
  // r_1^+ sits near exp(-484): far below the smallest double, fine as a log.
  EXPECT_NEAR(s.log_r_plus.front(), -std::pow(2.5 * pi, 3), 1e-9);
  EXPECT_TRUE(std::isfinite(s.log_r_plus.back()));
}

TEST(Pairing, ZeroProfileGivesZeroSums) {
  CounterexampleConfig c;
  c.k_max = 1000;
  const PartialSums s = pair_with_radial(c, RadialProfile::zero(c.beta));
  for (double v : s.total) EXPECT_EQ(v, 0.0);
}

TEST(Pairing, EvaluationOutsideDomainThrows) {
  const RadialProfile w = RadialProfile::oscillating(1.0 / 3.0);
  EXPECT_THROW(w.value(0.0), EvaluationDomain);
  EXPECT_THROW(w.value(NAN), EvaluationDomain);
}

TEST(Pairing, CustomProfileHasNoClosedFormEnergy) {
  const RadialProfile w = RadialProfile::custom(1.0 / 3.0, "flat", [](double) { return 0.5; }, 0.5);
  EXPECT_THROW(w.domain_energy(), NoClosedFormGradient);
}

TEST(Bounded, TailIsSmallAndBounded) {
  CounterexampleConfig c;
  const BoundedSeriesReport r = bounded_series_report(c, RadialProfile::oscillating(c.beta), 10000);
  EXPECT_TRUE(r.tail_bound_decreasing);
  EXPECT_LE(r.tail_at_checkpoint, r.tail_bound_at_checkpoint);
  EXPECT_LE(r.max_abs_upper_part, r.upper_part_bound);
  // Terms decay like c / k^2 with c = 2 / sqrt(3 pi), so the tail from 1e4 to
  // k_max = 1e5 is about c (1e-4 - 1e-5) = 5.9e-5.
  const double c_tail = 2.0 / std::sqrt(3.0 * pi);
  EXPECT_NEAR(r.tail_at_checkpoint / (c_tail * (1e-4 - 1e-5)), 1.0, 0.01);
}

TEST(Divergence, GrowthMatchesReference) {
  CounterexampleConfig c;
  const DivergenceReport r = divergence_report(c, {100, 1000, 10000, 100000});
  ASSERT_TRUE(r.reference_growth.has_value());
  EXPECT_NEAR(*r.reference_growth, 2.0 * pi / std::sqrt(3.0 * pi), 1e-14);
  EXPECT_NEAR(r.fitted_growth / *r.reference_growth, 1.0, 0.25);
  EXPECT_TRUE(r.dominates_lower_bound);
  EXPECT_TRUE(std::isfinite(r.c0));
}

TEST(Divergence, InverseKSquaredHasNoReference) {
  CounterexampleConfig c;
  c.weights = WeightRule::inverse_k_squared;
  EXPECT_FALSE(divergence_report(c, {100, 1000}).reference_growth.has_value());
}

TEST(H1Bound, HoldsForShippedProfiles) {
  for (WeightRule rule : {WeightRule::inverse_k, WeightRule::inverse_k_squared}) {
    CounterexampleConfig c;
    c.weights = rule;
    for (const RadialProfile& w : {RadialProfile::oscillating(c.beta), RadialProfile::log_power(c.beta),
                                   RadialProfile::polynomial(c.beta)}) {
      const H1BoundReport r = h1_norm_bound_check(c, w);
      EXPECT_TRUE(r.holds_every_K) << w.name();
      EXPECT_TRUE(r.annulus_chain_holds) << w.name();
      EXPECT_TRUE(std::isfinite(r.gradient_norm));
    }
  }
}

TEST(H1Bound, StateEnergyBelowLogBound) {
  CounterexampleConfig c;
  const H1BoundReport r = h1_norm_bound_check(c, RadialProfile::oscillating(c.beta));
  EXPECT_LE(r.gradient_norm * r.gradient_norm, r.log_energy_bound);
}

TEST(ViProperty, SampledPairingsNonnegative) {
  CounterexampleConfig c;
  const ViPropertyReport r = verify_vi_solution_property(c, 2000, 100, 7);
  EXPECT_EQ(r.identity_pairing, 0.0);
  EXPECT_GE(r.clamp_pairing, 0.0);
  EXPECT_GE(r.min_pairing, -1e-10);
  EXPECT_EQ(r.negative_count, 0);
  EXPECT_TRUE(r.support_on_contact);
}

}  // namespace
}  // namespace bilateral::series
