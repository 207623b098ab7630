#include <benchmark/benchmark.h>

#include "wzm/fp_solver.hpp"
#include "wzm/master_equation.hpp"
#include "wzm/measurement.hpp"
#include "wzm/ratchet.hpp"
#include "wzm/trajectory.hpp"

using namespace wzm;

static void BM_StepSizes(benchmark::State& state) {
  MeasurementParams p{0.6, 0.05};
  for (auto _ : state) {
    benchmark::DoNotOptimize(step_sizes(p));
    p.delta = -p.delta;
  }
}
BENCHMARK(BM_StepSizes);

static void BM_Ensemble(benchmark::State& state) {
  const auto sched = Schedule::constant(kPi / 4.0, 0.05);
  EnsembleOptions o;
  o.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_ensemble(0.0, sched, 200, state.range(0), {200}, 1, o));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 200);
}
BENCHMARK(BM_Ensemble)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_MasterStep(benchmark::State& state) {
  const MeasurementParams p{kPi / 4.0, 0.05};
  auto g = PdfGrid::spike(-25.0, 25.0, static_cast<std::size_t>(state.range(0)), 0.0);
  for (int k = 0; k < 20; ++k) g = propagate_const(g, p);
  for (auto _ : state) benchmark::DoNotOptimize(propagate_const(g, p));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MasterStep)->Arg(2048)->Arg(8192);

static void BM_FpStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Field f = Field::cell_centered(Chart::x, -30.0, 10.0, n, Boundary::zero_flux);
  for (std::size_t i = 0; i < n; ++i) f.values()[i] = analytic_cell_average(0.1, f.nodes()[i], f.width(), -10.0);
  const FluxOperator op(f, coefficients_x([](double, double) { return 1.0; }), 0.0);
  const double dt = op.stable_dt(0.4);
  for (auto _ : state) ssp_rk2_step(f, op, dt);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FpStep)->Arg(4096)->Arg(8192);

static void BM_ReducedRatchet(benchmark::State& state) {
  const auto g = reference_profile_spacetime();
  ReducedOptions o;
  o.t_end = 20.0 * kPi;
  for (auto _ : state) benchmark::DoNotOptimize(solve_reduced(g, o).final_average);
}
BENCHMARK(BM_ReducedRatchet)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
