#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "wzm/error.hpp"
#include "wzm/measurement.hpp"

using namespace wzm;

// Reference values from tests/oracles/measurement.py (mpmath, 40 digits).
TEST(Coordinates, PiOfXMatchesReference) {
  EXPECT_NEAR(pi_of_x(3.0), 0.99752737684336522567, 4.5e-16);
  EXPECT_NEAR(pi_of_x(-20.0), 4.2483542552915889773e-18, 1e-31);
  EXPECT_NEAR(x_of_pi(0.3), -0.42364893019360180686, 1e-15);
  EXPECT_DOUBLE_EQ(pi_of_x(0.0), 0.5);
}

TEST(Coordinates, RoundTripsAcrossCharts) {
  for (double x : {-30.0, -17.5, -3.0, -0.2, 0.0, 1e-9, 2.5, 19.0, 30.0}) {
    const auto s = StateCoordinate::from_x(x);
    EXPECT_NEAR(s.in(Chart::pi).x(), x, 1e-12 * std::max(1.0, std::fabs(x))) << x;
    EXPECT_NEAR(s.in(Chart::theta).x(), x, 1e-12 * std::max(1.0, std::fabs(x))) << x;
  }
  EXPECT_NEAR(x_of_theta(theta_of_x(0.7)), 0.7, 1e-14);
}

TEST(Coordinates, ComplementsStayAccurateNearBasisStates) {
  const auto s = StateCoordinate::from_x(30.0);
  EXPECT_GT(s.pi_complement(), 0.0);
  EXPECT_NEAR(s.pi_complement() / std::exp(-60.0), 1.0, 1e-12);
  EXPECT_NEAR(StateCoordinate::from_pi_pair(1.0, s.pi_complement()).x(), 30.0, 1e-12);
}

TEST(Coordinates, BasisStatesAreRejected) {
  EXPECT_THROW(x_of_pi(0.0), InfiniteCoordinateError);
  EXPECT_THROW(x_of_pi(1.0), InfiniteCoordinateError);
  EXPECT_THROW(x_of_theta(0.0), InfiniteCoordinateError);
  EXPECT_THROW(StateCoordinate::from_pi(1.0), InfiniteCoordinateError);
}

TEST(StepSizes, MatchReference) {
  const auto a = step_sizes({kPi / 4.0, 0.1});
  EXPECT_NEAR(a.eps0, -0.11074079831006792814, 1e-15);
  EXPECT_NEAR(a.eps1, 0.090606025257659579212, 1e-15);
  const auto b = step_sizes({0.5, 0.05});
  EXPECT_NEAR(b.eps0, -0.028969064915258061957, 1e-15);
  EXPECT_NEAR(b.eps1, 0.086394659937893414682, 1e-15);
  const auto c = step_sizes({1.2, -0.3});
  EXPECT_NEAR(c.eps0, 0.53968083955484533165, 1e-14);
  EXPECT_NEAR(c.eps1, -0.17382463357838677495, 1e-14);
  EXPECT_FALSE(a.saturated);
}

TEST(StepSizes, ZeroDeltaGivesZeroSteps) {
  const auto s = step_sizes({0.9, 0.0});
  EXPECT_EQ(s.eps0, 0.0);
  EXPECT_EQ(s.eps1, 0.0);
}

TEST(StepSizes, SmallDeltaIsFirstOrder) {
  const auto s = step_sizes({kPi / 4.0, 0.01});
  EXPECT_NEAR(std::fabs(s.eps0), 0.01, 2e-4);
  EXPECT_LT(s.eps0, 0.0);
  EXPECT_GT(s.eps1, 0.0);
}

TEST(StepSizes, ProjectiveCollapseIsSingular) {
  // alpha + delta == 0 exactly zeroes sin; the rounded cos(pi/2) is not zero and only saturates.
  EXPECT_THROW(step_sizes({0.3, -0.3}), SingularParameterError);
  EXPECT_THROW(step_sizes({1.0, -1.0}), SingularParameterError);
  const auto s = step_sizes({kPi / 4.0, kPi / 4.0});
  EXPECT_TRUE(s.saturated);
  EXPECT_EQ(s.eps0, -kStepSaturation);
}

TEST(StepSizes, NearCollapseSaturates) {
  const auto s = step_sizes({kPi / 4.0, kPi / 4.0 - 1e-12});
  EXPECT_TRUE(s.saturated);
  EXPECT_EQ(s.eps0, -kStepSaturation);
}

TEST(StepSizes, InvalidParametersAreRejected) {
  EXPECT_THROW(step_sizes({0.0, 0.1}), InvalidArgumentError);
  EXPECT_THROW(step_sizes({kPi / 2.0, 0.1}), InvalidArgumentError);
  EXPECT_THROW(step_sizes({0.5, std::nan("")}), InvalidArgumentError);
}

TEST(StepSizes, IndependentOfPosition) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> alpha(0.1, kHalfPi - 0.1);
  std::uniform_real_distribution<double> delta(-0.2, 0.2);
  for (int k = 0; k < 20; ++k) {
    const MeasurementParams p{alpha(gen), delta(gen)};
    const auto s = step_sizes(p);
    for (double x = -8.0; x <= 8.0; x += 0.5) {
      EXPECT_NEAR(step_size_at_x(x, p, 0), s.eps0, 1e-10);
      EXPECT_NEAR(step_size_at_x(x, p, 1), s.eps1, 1e-10);
    }
  }
}

TEST(Probabilities, ChartsAgreeAndMatchReference) {
  const MeasurementParams p{0.5, 0.05};
  const auto s = StateCoordinate::from_x(0.8);
  const auto a = outcome_probabilities(s, p);
  const auto b = outcome_probabilities_theta(s.theta(), p);
  const auto c = outcome_probabilities_x(0.8, p);
  EXPECT_NEAR(a.p0, 0.73408058315355740091, 1e-15);
  EXPECT_NEAR(a.p0, b.p0, 1e-15);
  EXPECT_NEAR(a.p0, c.p0, 1e-15);
  EXPECT_NEAR(a.p0 + a.p1, 1.0, 1e-15);
}

TEST(Kraus, CompletenessHolds) {
  for (double alpha : {0.2, kPi / 4.0, 1.3}) {
    for (double delta : {-0.3, 0.0, 0.07}) {
      EXPECT_LT(kraus_pair({alpha, delta}).completeness_defect(), 1e-15);
      EXPECT_NEAR(amplitude_matrix(0.4, {alpha, delta}).norm_squared(), 1.0, 1e-15);
    }
  }
}

TEST(PostMeasurement, MatchesStepInX) {
  const MeasurementParams p{0.6, 0.08};
  const auto steps = step_sizes(p);
  for (double x : {-4.0, 0.0, 1.5}) {
    const auto s = StateCoordinate::from_x(x);
    EXPECT_NEAR(post_measurement_state(s, p, 0).x(), x + steps.eps0, 1e-12);
    EXPECT_NEAR(post_measurement_state(s, p, 1).x(), x + steps.eps1, 1e-12);
    EXPECT_EQ(post_measurement_state(StateCoordinate::from_pi(0.4), p, 1).chart(), Chart::pi);
  }
}

TEST(PostMeasurement, PiIsAMartingale) {
  const MeasurementParams p{0.7, 0.2};
  for (double x : {-2.0, 0.3, 3.0}) {
    const auto s = StateCoordinate::from_x(x);
    const auto pr = outcome_probabilities(s, p);
    const double next = pr.p0 * post_measurement_state(s, p, 0).pi() + pr.p1 * post_measurement_state(s, p, 1).pi();
    EXPECT_NEAR(next, s.pi(), 1e-15);
  }
}

TEST(Moments, MatchReference) {
  const MeasurementParams p{0.5, 0.05};
  EXPECT_NEAR(mean_step(0.8, p), 0.001708389522925435576, 1e-16);
  EXPECT_NEAR(diffusion_step(0.8, p), 0.0013004388984784543257, 1e-16);
  const auto c = mean_step_components(0.8, p);
  EXPECT_NEAR(c.mu0 + c.mu1, mean_step(0.8, p), 1e-18);
}

TEST(Moments, SmallDeltaResidualsAreThirdOrder) {
  // Residuals at delta = 0.02, 0.01 from the reference script.
  const double x = 0.8;
  auto r_mu = [&](double d) { return mean_step(x, {0.5, d}) - d * d * std::tanh(x); };
  auto r_d = [&](double d) { return diffusion_step(x, {0.5, d}) - d * d / 2.0; };
  EXPECT_NEAR(r_mu(0.02), 3.2895659687202501306e-6, 1e-15);
  EXPECT_NEAR(r_d(0.01), 4.2203359413459209282e-7, 1e-15);
  const double ratio = r_mu(0.01) / r_mu(0.005);
  EXPECT_GT(ratio, 4.0);
  EXPECT_LT(ratio, 16.0);
}
