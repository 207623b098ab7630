#include <cmath>

#include <gtest/gtest.h>

#include "wzm/error.hpp"
#include "wzm/ratchet.hpp"

using namespace wzm;

TEST(GProfile, SpacetimeNormalizationAndMinimum) {
  const auto g = reference_profile_spacetime();
  EXPECT_DOUBLE_EQ(g.C(0.5), 1.0);  // f = 0 phase
  EXPECT_NEAR(g.C(kPi + 0.5), 0.90350790290525123771, 1e-15);
  EXPECT_NEAR(g.mean_square(0.5), 1.0, 1e-12);
  EXPECT_NEAR(g.mean_square(kPi + 0.5), 1.0, 1e-12);
  EXPECT_NEAR(g.min_value(), 0.19929318611289480613, 1e-6);
  EXPECT_EQ(g.f(0.5), 0.0);
  EXPECT_EQ(g.f(kPi + 0.5), -1.0);
  EXPECT_EQ(g.f(2.0 * kPi + 0.5), 0.0);
}

TEST(GProfile, QuadratureNormalizerForNonzeroMean) {
  const auto g = temporal_profile(0.5);
  EXPECT_NEAR(g(1.0, 0.5), 1.0, 1e-12);
  EXPECT_NEAR(g(1.0, kPi + 0.5), 1.0, 1e-12);
  const auto raw = temporal_profile(0.5, false);
  EXPECT_DOUBLE_EQ(raw(0.0, 0.5), 1.5);
  EXPECT_DOUBLE_EQ(raw(0.0, kPi + 0.5), 0.5);
}

TEST(GProfile, NegativeFormFactorIsRejected) {
  EXPECT_THROW(GProfile(2.0 * kPi, SpatialModes{0.0, {-1.5}, {}}, Temporal::constant), InvalidArgumentError);
}

TEST(GProfile, MeanInequality) {
  for (std::uint64_t s = 1; s <= 4; ++s) {
    const auto g = random_static_profile(s);
    EXPECT_GE(g.mean_square(0.0) * g.mean_inverse_square(0.0), 1.0);
    EXPECT_GT(g.min_value(), 0.0);
  }
  const auto u = uniform_profile();
  EXPECT_NEAR(u.mean_square(0.0) * u.mean_inverse_square(0.0), 1.0, 1e-14);
}

TEST(Seebeck, ClosedFormMatchesReference) {
  EXPECT_NEAR(seebeck_steady_current(reference_profile_seebeck()), -0.16363636363636363636, 1e-12);
  EXPECT_NEAR(seebeck_steady_current(uniform_profile()), -1.0, 1e-14);
  EXPECT_THROW(seebeck_steady_current(reference_profile_spacetime()), RegimeError);
  const GProfile touching(2.0 * kPi, SpatialModes{0.0, {-1.0}, {}}, Temporal::constant);
  EXPECT_THROW(seebeck_steady_current(touching), RegimeError);
}

TEST(Seebeck, SolverReachesClosedForm) {
  const auto g = random_static_profile(3);
  ReducedOptions o;
  o.cells = 96;
  o.t_end = 60.0;
  const auto r = solve_reduced(g, o);
  EXPECT_NEAR(r.record.current.back(), seebeck_steady_current(g), 1e-3);
}

TEST(Reduced, UniformProfileGivesUnitCurrent) {
  ReducedOptions o;
  o.cells = 64;
  o.t_end = 20.0 * kPi;
  const auto r = solve_reduced(uniform_profile(), o);
  EXPECT_NEAR(r.final_average, -1.0, 1e-9);
  for (double v : r.final_field.values()) EXPECT_NEAR(v, 1.0 / (2.0 * kPi), 1e-6);
  o.side = Side::right;
  EXPECT_NEAR(solve_reduced(uniform_profile(), o).final_average, 1.0, 1e-9);
}

TEST(Reduced, RunningAverageMatchesTrapezoid) {
  ReducedOptions o;
  o.cells = 64;
  o.t_end = 20.0 * kPi;
  const auto r = solve_reduced(alternate_profile(), o);
  EXPECT_NEAR(moving_average(r.record, r.record.times.back()), r.final_average, 2e-3);
  EXPECT_GT(r.final_average, -1.0);
  EXPECT_LT(r.final_average, 0.0);
  EXPECT_LT(r.max_mass_drift, 1e-12);
}

TEST(Localization, ProfileBranches) {
  const LocalizationProfile g(0.7, [](double) { return 1.0; });
  EXPECT_NEAR(g.lower(0.35), 0.53846153846153846154, 1e-15);
  EXPECT_DOUBLE_EQ(g.lower(0.0), 0.7);
  EXPECT_EQ(g.lower(0.7), 0.0);
  EXPECT_THROW(g.lower(0.8), InvalidArgumentError);
  EXPECT_THROW(g.upper(0.5), InvalidArgumentError);
  EXPECT_NEAR(g(0.9), 0.2 / 0.9, 1e-15);
  EXPECT_THROW(LocalizationProfile(1.0, [](double) { return 1.0; }), InvalidArgumentError);
}

TEST(Localization, MappedProblemIsThePlainWalk) {
  const LocalizationProfile g(0.7, [](double) { return 1.0; });
  const auto r = rescale_equivalence(g);
  const auto plain = coefficients_pi([](double, double) { return 1.0; });
  for (double q : {0.1, 0.5, 0.9}) EXPECT_DOUBLE_EQ(r.mapped.diffusion(q, 0.0), plain.diffusion(q, 0.0));
  EXPECT_DOUBLE_EQ(r.mapped_time(2.0), 0.98);
  EXPECT_DOUBLE_EQ(r.to_mapped(0.35), 0.5);
}

TEST(Localization, AbsorptionSplitAndState) {
  const auto lo = absorption_split(0.3, 0.7);
  EXPECT_NEAR(lo.to_x, 3.0 / 7.0, 1e-15);
  EXPECT_NEAR(lo.to_basis, 4.0 / 7.0, 1e-15);
  const auto hi = absorption_split(0.9, 0.7);
  EXPECT_NEAR(hi.to_x, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(hi.to_basis, 2.0 / 3.0, 1e-15);
  const auto [a, b] = build_state_X(0.25);
  EXPECT_DOUBLE_EQ(a, 0.5);
  EXPECT_DOUBLE_EQ(b, std::sqrt(0.75));
  const auto [c, d] = build_state_X(0.5);
  EXPECT_NEAR(c, d, 1e-16);
  EXPECT_THROW(build_state_X(1.0), InvalidArgumentError);
}
