#include <cmath>

#include <gtest/gtest.h>

#include "wzm/error.hpp"
#include "wzm/master_equation.hpp"

using namespace wzm;

TEST(PdfGrid, SpikeKeepsMassAndPi) {
  const auto g = PdfGrid::spike(-10.0, 10.0, 401, 0.3217);
  EXPECT_NEAR(g.mass(), 1.0, 1e-14);
  EXPECT_NEAR(pi_average(g), pi_of_x(0.3217), 1e-14);
}

TEST(PdfGrid, CenteredOnHitsTheNodeExactly) {
  const double x = x_of_pi(0.7);
  const auto g = PdfGrid::centered_on(x, -10.0, 10.0, 500);
  EXPECT_EQ(g.node(g.nearest(x)), x);
  EXPECT_NEAR(g.width(), 20.0 / 500.0, 1e-15);
}

TEST(Propagation, OneStepMatchesOutcomeProbabilities) {
  const MeasurementParams p{0.5, 0.05};
  const auto g = PdfGrid::spike(-5.0, 5.0, 1001, 0.0);
  const auto next = propagate_const(g, p);
  const auto eps = step_sizes(p);
  const auto pr = outcome_probabilities_x(0.0, p);
  EXPECT_NEAR(next.mass(), 1.0, 1e-14);
  EXPECT_NEAR(pi_average(next), pr.p0 * pi_of_x(eps.eps0) + pr.p1 * pi_of_x(eps.eps1), 1e-14);
  EXPECT_NEAR(pi_average(next), 0.5, 1e-14);
}

TEST(Propagation, ConservesMassAndPiOverManySteps) {
  const MeasurementParams p{kPi / 4.0, 0.1};
  auto g = PdfGrid::spike(-25.0, 25.0, 4096, x_of_pi(0.3));
  for (int n = 0; n < 300; ++n) g = propagate_const(g, p);
  EXPECT_NEAR(g.mass(), 1.0, 1e-12);
  EXPECT_NEAR(pi_average(g), 0.3, 1e-12);
  for (double v : g.values()) EXPECT_GE(v, 0.0);
}

TEST(Propagation, ConditionalScheduleConservesPi) {
  ScheduleSpec spec;
  spec.g_delta = {"sine", {{"mean", 1.0}, {"amplitude", 0.6}}};
  const auto sched = make_schedule(spec);
  auto g = PdfGrid::spike(-25.0, 25.0, 4096, 0.5);
  const double pi0 = pi_average(g);
  for (long long n = 1; n <= 200; ++n) g = propagate_conditional(g, sched, n);
  EXPECT_NEAR(pi_average(g), pi0, 1e-12);
  EXPECT_NEAR(g.mass(), 1.0, 1e-12);
}

TEST(Propagation, ZeroDeltaIsIdentity) {
  const auto g = PdfGrid::spike(-5.0, 5.0, 101, 0.0);
  const auto next = propagate_const(g, {0.4, 0.0});
  EXPECT_EQ(next.values(), g.values());
}

TEST(Propagation, EdgeMassRaises) {
  auto g = PdfGrid::spike(-2.0, 2.0, 81, 0.0);
  EXPECT_THROW(
      {
        for (int n = 0; n < 2000; ++n) g = propagate_const(g, {kPi / 4.0, 0.3});
      },
      BoundaryOverflowError);
  MasterOptions open;
  open.boundary_tolerance = std::numeric_limits<double>::infinity();
  auto h = PdfGrid::spike(-2.0, 2.0, 81, 0.0);
  for (int n = 0; n < 2000; ++n) h = propagate_const(h, {kPi / 4.0, 0.3}, open);
  EXPECT_NEAR(h.mass(), 1.0, 1e-12);
  EXPECT_GT(h.edge_mass(), 0.5);
}

TEST(Rebin, PreservesMassInRange) {
  const auto g = PdfGrid::spike(-5.0, 5.0, 100, 0.37);
  const auto bins = rebin(g, -5.0, 5.0, 7);
  double s = 0.0;
  for (double b : bins) s += b;
  EXPECT_NEAR(s, 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(l1_distance({0.5, 0.5}, {0.25, 0.75}), 0.5);
}
