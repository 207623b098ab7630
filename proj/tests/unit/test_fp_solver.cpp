#include <cmath>

#include <gtest/gtest.h>

#include "wzm/error.hpp"
#include "wzm/fp_solver.hpp"

using namespace wzm;

namespace {
FormFactor unit() {
  return [](double, double) { return 1.0; };
}
}  // namespace

TEST(Coefficients, ChartFormulas) {
  const auto fx = coefficients_x(unit());
  EXPECT_DOUBLE_EQ(fx.drift(0.5, 0.0), std::tanh(0.5));
  EXPECT_DOUBLE_EQ(fx.diffusion(0.5, 0.0), 0.5);
  const auto fp = coefficients_pi(unit());
  EXPECT_DOUBLE_EQ(fp.drift(0.3, 0.0), 0.0);
  EXPECT_NEAR(fp.diffusion(0.3, 0.0), 2.0 * 0.09 * 0.49, 1e-16);
  const auto ft = coefficients_theta(unit());
  EXPECT_NEAR(ft.drift(0.3, 0.0), -std::sin(1.2) / 8.0, 1e-16);
  EXPECT_NEAR(ft.diffusion(0.3, 0.0), std::pow(std::sin(0.6), 2) / 8.0, 1e-16);
}

TEST(Coefficients, ChangeOfVariablesReproducesOtherCharts) {
  const auto fx = coefficients_x(unit());
  const auto to_pi = change_coordinates(fx, x_to_pi_map());
  const auto to_theta = change_coordinates(fx, x_to_theta_map());
  const auto fp = coefficients_pi(unit());
  const auto ft = coefficients_theta(unit());
  EXPECT_EQ(to_pi.chart, Chart::pi);
  for (double y : {0.05, 0.3, 0.5, 0.81}) {
    EXPECT_NEAR(to_pi.drift(y, 0.0), fp.drift(y, 0.0), 1e-12);
    EXPECT_NEAR(to_pi.diffusion(y, 0.0), fp.diffusion(y, 0.0), 1e-12);
    const double th = y * kHalfPi;
    EXPECT_NEAR(to_theta.drift(th, 0.0), ft.drift(th, 0.0), 1e-12);
    EXPECT_NEAR(to_theta.diffusion(th, 0.0), ft.diffusion(th, 0.0), 1e-12);
  }
}

TEST(Coefficients, NonMonotoneMapsAndChartMismatchAreRejected) {
  CoordinateMap bad = identity_map(Chart::x);
  bad.to = Chart::theta;
  bad.forward = [](double x) { return x * x; };
  bad.first = [](double x) { return 2.0 * x; };
  bad.second = [](double) { return 2.0; };
  EXPECT_THROW(change_coordinates(coefficients_x(unit()), bad), InvalidArgumentError);
  EXPECT_THROW(change_coordinates(coefficients_pi(unit()), x_to_pi_map()), InvalidArgumentError);
}

TEST(Potential, UnitFormFactorInX) {
  const auto v = potential(coefficients_x(unit()));
  EXPECT_NEAR(v(2.0, 0.0), -1.3250027473578644309, 1e-10);
  EXPECT_NEAR(v(0.0, 0.0), 0.0, 1e-15);
}

TEST(Analytic, MatchesReference) {
  EXPECT_NEAR(analytic_solution(1.0, -11.0, -10.0), 0.39894227969043502922, 1e-15);
  EXPECT_NEAR(analytic_cell_average(1.0, -11.0, 1e-3, -10.0), analytic_solution(1.0, -11.0, -10.0), 1e-7);
  const auto [lo, hi] = truncated_domain(-10.0, 1.0);
  EXPECT_DOUBLE_EQ(lo, -30.0);
  EXPECT_DOUBLE_EQ(hi, 10.0);
}

TEST(Field, GeometryAndMoments) {
  const auto f = Field::cell_centered(Chart::x, -1.0, 1.0, 4, Boundary::zero_flux);
  EXPECT_DOUBLE_EQ(f.width(), 0.5);
  EXPECT_DOUBLE_EQ(f.nodes()[0], -0.75);
  EXPECT_DOUBLE_EQ(f.face(4), 1.0);
  auto v = Field::vertex_centered(Chart::pi, 0.0, 1.0, 10, Boundary::zero_flux);
  EXPECT_EQ(v.size(), 11U);
  EXPECT_DOUBLE_EQ(v.nodes()[10], 1.0);
  EXPECT_DOUBLE_EQ(v.lo(), -0.05);
  v.fill_normalized([](double p) { return p; });
  EXPECT_NEAR(v.mass(), 1.0, 1e-15);
}

TEST(Solve, ConvergesToAnalyticDensity) {
  auto err = [](std::size_t n) {
    const double X = -6.0, t0 = 0.1, t1 = 0.5;
    const auto [lo, hi] = truncated_domain(X, t1);
    auto f = Field::cell_centered(Chart::x, lo, hi, n, Boundary::zero_flux);
    for (std::size_t i = 0; i < n; ++i) f.values()[i] = analytic_cell_average(t0, f.nodes()[i], f.width(), X);
    f.t = t0;
    const auto sol = solve(f, coefficients_x(unit()), t1);
    EXPECT_LT(sol.audit.max_mass_drift, 1e-12);
    const auto& g = sol.snapshots.back();
    EXPECT_DOUBLE_EQ(g.t, t1);
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) e += std::pow(g.values()[i] - analytic_cell_average(t1, g.nodes()[i], g.width(), X), 2);
    return std::sqrt(e * g.width());
  };
  const double e1 = err(400), e2 = err(800);
  EXPECT_LT(e2, 1e-3);
  EXPECT_GT(e1 / e2, 3.5);
}

TEST(Solve, LandsOnOutputTimes) {
  auto f = Field::cell_centered(Chart::x, -5.0, 5.0, 100, Boundary::periodic);
  f.fill_normalized([](double x) { return std::exp(-x * x); });
  DtControl c;
  c.output_times = {0.013, 0.2};
  const auto sol = solve(f, coefficients_x(unit()), 0.5, c);
  ASSERT_EQ(sol.snapshots.size(), 3U);
  EXPECT_DOUBLE_EQ(sol.snapshots[0].t, 0.013);
  EXPECT_DOUBLE_EQ(sol.snapshots[2].t, 0.5);
  EXPECT_NEAR(sol.snapshots[2].mass(), 1.0, 1e-13);
}

TEST(Solve, PiMeanConservedInPiChart) {
  auto f = Field::vertex_centered(Chart::pi, 0.0, 1.0, 200, Boundary::zero_flux);
  f.fill_normalized([](double p) { return std::exp(-(p - 0.3) * (p - 0.3) / 0.002); });
  const auto id = [](double p) { return p; };
  const double m0 = f.moment(id);
  const auto sol = solve(f, coefficients_pi(unit()), 2.0);
  EXPECT_NEAR(sol.snapshots.back().moment(id), m0, 1e-12);
  EXPECT_EQ(sol.audit.clip_violations, 0);
}

TEST(Solve, AbsorbingWallsCollectMass) {
  auto f = Field::cell_centered(Chart::x, -2.0, 2.0, 80, Boundary::absorbing);
  f.fill_normalized([](double x) { return std::exp(-x * x * 4.0); });
  const auto sol = solve(f, coefficients_x(unit()), 3.0);
  const auto& g = sol.snapshots.back();
  EXPECT_GT(g.absorbed_low + g.absorbed_high, 0.5);
  EXPECT_NEAR(g.mass() + g.absorbed_low + g.absorbed_high, 1.0, 1e-12);
}

TEST(Solve, OversizedFixedStepRaises) {
  auto f = Field::cell_centered(Chart::x, -5.0, 5.0, 100, Boundary::zero_flux);
  f.fill_normalized([](double x) { return std::exp(-x * x); });
  DtControl c;
  c.dt = 1.0;
  EXPECT_THROW(solve(f, coefficients_x(unit()), 2.0, c), CflError);
}

TEST(Flux, DriftVelocityOfUniformPeriodicField) {
  auto f = Field::cell_centered(Chart::x, -kPi, kPi, 64, Boundary::periodic);
  f.fill_normalized([](double) { return 1.0; });
  FpCoefficients c;
  c.drift = [](double, double) { return -1.0; };
  c.diffusion = [](double, double) { return 0.5; };
  const FluxOperator op(f, c, 0.0);
  ssp_rk2_step(f, op, op.stable_dt(0.4));
  EXPECT_NEAR(drift_velocity(f), -1.0, 1e-12);
}
