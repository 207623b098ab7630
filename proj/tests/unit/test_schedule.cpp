#include <cmath>

#include <gtest/gtest.h>

#include "wzm/error.hpp"
#include "wzm/schedule.hpp"

using namespace wzm;

TEST(Schedule, ConstantScalesDelta) {
  const auto s = Schedule::constant(0.6, 0.05);
  const auto v = s.at(12, 3.0);
  EXPECT_DOUBLE_EQ(v.params.alpha, 0.6);
  EXPECT_DOUBLE_EQ(v.params.delta, 0.05);
  EXPECT_DOUBLE_EQ(v.tau, 0.0025);
  EXPECT_DOUBLE_EQ(s.effective_g(1, 0.0), 1.0);
}

TEST(Schedule, EffectiveFormFactorUsesSquareRootOfTau) {
  ScheduleSpec spec;
  spec.g_delta = {"constant", {{"value", 2.0}}};
  spec.g_tau = {"constant", {{"value", 4.0}}};
  const auto s = make_schedule(spec);
  EXPECT_DOUBLE_EQ(s.effective_g(1, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(s.at(1, 0.0).tau, 4.0 * 0.05 * 0.05);
}

TEST(Schedule, NonPositiveTauIsRejected) {
  ScheduleSpec spec;
  spec.g_tau = {"constant", {{"value", 0.0}}};
  EXPECT_THROW(make_schedule(spec).at(1, 0.0), InvalidArgumentError);
}

TEST(Profiles, LocalizationVanishesAtTarget) {
  const double x = x_of_pi(0.35);
  EXPECT_NEAR(localization_form_factor(x, 0.7, 1.0), 0.53846153846153846154, 1e-15);
  EXPECT_NEAR(localization_form_factor(x_of_pi(0.7), 0.7, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(localization_form_factor(-40.0, 0.7, 1.0), 0.7, 1e-15);
  EXPECT_GT(localization_form_factor(x_of_pi(0.9), 0.7, 1.0), 0.0);
}

TEST(Profiles, SineAndAlternating) {
  const auto sine = make_profile({"sine", {{"mean", 1.0}, {"amplitude", 0.5}, {"wavelength", 4.0}}});
  EXPECT_NEAR(sine(1, 1.0), 1.5, 1e-15);
  const auto alt = make_profile({"alternating", {{"first", 1.0}, {"second", 0.25}, {"period_steps", 2.0}}});
  EXPECT_EQ(alt(1, 0.0), 1.0);
  EXPECT_EQ(alt(2, 0.0), 1.0);
  EXPECT_EQ(alt(3, 0.0), 0.25);
  EXPECT_EQ(alt(5, 0.0), 1.0);
}

TEST(Profiles, UnknownNamesAndParametersAreRejected) {
  EXPECT_THROW(make_profile({"nope", {}}), InvalidArgumentError);
  EXPECT_THROW(make_profile({"constant", {{"amplitude", 1.0}}}), InvalidArgumentError);
  EXPECT_THROW(make_profile({"localization", {{"pi_x", 1.0}}}), InvalidArgumentError);
  for (const auto& info : profile_registry()) {
    ProfileSpec spec{info.name, {}};
    EXPECT_NO_THROW(make_profile(spec)) << info.name;
  }
}
