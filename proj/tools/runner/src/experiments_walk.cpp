// trajectory and master: the discrete walk by Monte Carlo and on a grid.

#include <algorithm>
#include <cmath>
#include <limits>

#include "catalog.hpp"
#include "wzm/master_equation.hpp"
#include "wzm/trajectory.hpp"

namespace wzm::runner {

std::vector<KeySpec> schedule_keys() {
  return {
      {"schedule.alpha", Kind::profile, "constant", "rotation angle alpha per step", {{"value", "0.78539816339744828"}}},
      {"schedule.g_delta", Kind::profile, "constant", "form factor scaling delta", {{"value", "1"}}},
      {"schedule.g_tau", Kind::profile, "constant", "form factor scaling the time increment", {{"value", "1"}}},
      {"schedule.delta_scale", Kind::number, "0.05", "delta = delta_scale * g_delta"},
  };
}

bool constant_schedule(const ScheduleSpec& spec) {
  return spec.alpha.name == "constant" && spec.g_delta.name == "constant" && spec.g_tau.name == "constant";
}

unsigned thread_count(const Settings& s, const std::string& key) {
  return static_cast<unsigned>(s.count(key, 0));
}

namespace {

double start_x(const Settings& s) {
  if (s.has("run.pi0")) {
    const double p = s.number("run.pi0");
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("key 'run.pi0': must lie in (0, 1)");
    return x_of_pi(p);
  }
  return s.number("run.x0");
}

std::vector<KeySpec> with_schedule(std::vector<KeySpec> keys) {
  auto sched = schedule_keys();
  keys.insert(keys.end(), sched.begin(), sched.end());
  return keys;
}

const std::vector<OutputSchema>& trajectory_outputs() {
  static const std::vector<OutputSchema> out = {
      {"trajectory.csv", {"trajectory", "step", "t", "x", "pi", "outcome"},
       "recorded single trajectories; outcome -1 marks the initial point"},
      {"ensemble.csv", {"step", "mean_time", "pi_mean", "pi_stderr", "pi_z", "underflow", "overflow"},
       "ensemble statistics per checkpoint; pi_z = (pi_mean - Pi(x0)) / pi_stderr"},
      {"histogram.csv", {"step", "bin_lo", "bin_hi", "mass"}, "probability per x bin at each checkpoint"},
  };
  return out;
}

RunOutput run_trajectory_experiment(const Settings& s) {
  const auto& schema = trajectory_outputs();
  const double x0 = start_x(s);
  const long long n_steps = s.count("run.n_steps", 1);
  const long long n_traj = s.count("run.n_traj", 2);
  const long long n_record = std::min(s.count("run.record", 0), n_traj);
  const Schedule schedule = make_schedule(s.schedule());

  std::vector<long long> checkpoints;
  if (s.has("run.checkpoints")) {
    checkpoints = s.int_list("run.checkpoints");
    for (long long c : checkpoints) {
      if (c < 0 || c > n_steps) throw ConfigError("key 'run.checkpoints': steps must lie in [0, run.n_steps]");
    }
  } else {
    checkpoints = {0, n_steps / 10, n_steps / 2, n_steps};
  }
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

  EnsembleOptions options;
  options.histogram = {s.number("histogram.lo"), s.number("histogram.hi"),
                       static_cast<int>(s.count("histogram.bins", 1))};
  if (!(options.histogram.hi > options.histogram.lo)) throw ConfigError("key 'histogram.hi': must exceed histogram.lo");
  options.threads = thread_count(s, "run.threads");

  RunOutput out;
  Table traj = make_table(schema[0]);
  long long saturated = 0;
  for (long long k = 0; k < n_record; ++k) {
    const auto rec = run_trajectory(x0, schedule, n_steps, s.seed(), static_cast<std::uint64_t>(k));
    saturated += rec.saturated ? 1 : 0;
    for (const auto& e : rec.entries) {
      traj.rows.push_back({k, e.step, e.t, e.x, pi_of_x(e.x), static_cast<long long>(e.outcome)});
    }
  }

  const auto stats = run_ensemble(x0, schedule, n_steps, n_traj, checkpoints, s.seed(), options);
  const double pi_start = pi_of_x(x0);
  const double z_limit = s.positive("checks.martingale_z");
  Table ens = make_table(schema[1]);
  Table hist = make_table(schema[2]);
  double max_z = 0.0;
  double max_exact_gap = 0.0;
  double max_norm_error = 0.0;
  for (const auto& c : stats.checkpoints) {
    const double gap = c.pi_mean - pi_start;
    const double z = c.pi_stderr > 0.0 ? gap / c.pi_stderr : 0.0;
    if (c.pi_stderr > 0.0) {
      max_z = std::max(max_z, std::fabs(z));
    } else {
      max_exact_gap = std::max(max_exact_gap, std::fabs(gap));
    }
    max_norm_error = std::max(max_norm_error, std::fabs(c.histogram.total() - 1.0));
    ens.rows.push_back({c.step, c.mean_time, c.pi_mean, c.pi_stderr, z, c.histogram.underflow, c.histogram.overflow});
    const double w = c.histogram.bin_width();
    for (std::size_t b = 0; b < c.histogram.mass.size(); ++b) {
      const double lo = c.histogram.lo + static_cast<double>(b) * w;
      hist.rows.push_back({c.step, lo, lo + w, c.histogram.mass[b]});
    }
  }
  out.tables = {std::move(traj), std::move(ens), std::move(hist)};

  out.audits["pi_start"] = pi_start;
  out.audits["max_abs_pi_z"] = max_z;
  out.audits["histogram_normalization_error"] = max_norm_error;
  out.audits["saturated_recorded_trajectories"] = saturated;
  out.results["n_trajectories"] = stats.n_trajectories;
  out.results["absorbed_low"] = stats.absorbed_low;
  out.results["absorbed_high"] = stats.absorbed_high;
  out.results["final_pi_mean"] = stats.checkpoints.empty() ? pi_start : stats.checkpoints.back().pi_mean;

  out.checks.push_back(make_check("pi_martingale", max_z <= z_limit && max_exact_gap <= 1e-12, max_z,
                                  "|<Pi> - Pi(x0)| within checks.martingale_z standard errors at every checkpoint"));
  out.checks.push_back(make_check("histogram_normalized", max_norm_error <= 1e-12, max_norm_error,
                                  "histogram mass including under/overflow sums to 1"));
  return out;
}

const std::vector<OutputSchema>& master_outputs() {
  static const std::vector<OutputSchema> out = {
      {"density.csv", {"step", "x", "density"}, "grid density at step 0, every run.snapshot_every steps and the last"},
      {"audit.csv", {"step", "mass", "pi_average", "pi_step_drift", "edge_mass"},
       "per-step conservation audit; pi_step_drift = <Pi>(n) - <Pi>(n-1)"},
      {"comparison.csv", {"bin_lo", "bin_hi", "grid_mass", "mc_mass"},
       "final grid mass against a Monte Carlo histogram (only when compare.n_traj > 0)"},
  };
  return out;
}

RunOutput run_master_experiment(const Settings& s) {
  const auto& schema = master_outputs();
  const double x0 = start_x(s);
  const long long n_steps = s.count("run.n_steps", 1);
  const long long every = s.count("run.snapshot_every", 1);
  const double lo = s.number("grid.lo");
  const double hi = s.number("grid.hi");
  if (!(hi > lo)) throw ConfigError("key 'grid.hi': must exceed grid.lo");
  const auto cells = static_cast<std::size_t>(s.count("grid.cells", 3));
  MasterOptions options;
  options.boundary_tolerance = s.positive("grid.boundary_tolerance");
  const ScheduleSpec spec = s.schedule();
  const Schedule schedule = make_schedule(spec);
  const bool constant = constant_schedule(spec);

  PdfGrid grid = PdfGrid::spike(lo, hi, cells, x0);
  Table density = make_table(schema[0]);
  Table audit = make_table(schema[1]);
  auto snapshot = [&](long long step) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid.values()[i] != 0.0) density.rows.push_back({step, grid.node(i), grid.values()[i]});
    }
  };

  const double mass0 = grid.mass();
  const double pi0 = pi_average(grid);
  double prev_pi = pi0;
  double max_step_drift = 0.0;
  double max_mass_error = 0.0;
  audit.rows.push_back({0LL, mass0, pi0, 0.0, grid.edge_mass()});
  snapshot(0);
  for (long long n = 1; n <= n_steps; ++n) {
    grid = constant ? propagate_const(grid, schedule.at(n, 0.0).params, options)
                    : propagate_conditional(grid, schedule, n, options);
    const double pi = pi_average(grid);
    const double mass = grid.mass();
    max_step_drift = std::max(max_step_drift, std::fabs(pi - prev_pi));
    max_mass_error = std::max(max_mass_error, std::fabs(mass - mass0));
    audit.rows.push_back({n, mass, pi, pi - prev_pi, grid.edge_mass()});
    prev_pi = pi;
    if (n % every == 0 || n == n_steps) snapshot(n);
  }

  RunOutput out;
  const double drift_limit = s.positive("checks.pi_step_drift");
  out.audits["initial_mass"] = mass0;
  out.audits["max_mass_error"] = max_mass_error;
  out.audits["initial_pi"] = pi0;
  out.audits["final_pi"] = prev_pi;
  out.audits["max_pi_step_drift"] = max_step_drift;
  out.audits["final_edge_mass"] = grid.edge_mass();
  out.results["schedule"] = constant ? "constant" : "conditional";
  out.checks.push_back(make_check("pi_conservation", max_step_drift < drift_limit, max_step_drift,
                                  "per-step |<Pi> drift| below checks.pi_step_drift"));
  out.checks.push_back(
      make_check("mass_conservation", max_mass_error < 1e-10, max_mass_error, "|mass - initial mass| below 1e-10"));

  Table comparison = make_table(schema[2]);
  const long long n_traj = s.count("compare.n_traj", 0);
  if (n_traj > 0) {
    // A constant schedule keeps the walk on the lattice x0 + k eps0 + m eps1; bins centred on
    // its n + 1 points avoid splitting lattice mass across bin edges.
    EnsembleOptions eo;
    eo.threads = thread_count(s, "compare.threads");
    if (constant) {
      const auto eps = step_sizes(schedule.at(1, x0).params);
      const double w = eps.eps1 - eps.eps0;
      const double n = static_cast<double>(n_steps);
      eo.histogram = {x0 + n * eps.eps0 - 0.5 * w, x0 + n * eps.eps1 + 0.5 * w, static_cast<int>(n_steps + 1)};
    } else {
      eo.histogram = {lo, hi, static_cast<int>(s.count("compare.bins", 1))};
    }
    const auto stats = run_ensemble(x0, schedule, n_steps, n_traj, {n_steps}, s.seed(), eo);
    const auto& h = stats.checkpoints.front().histogram;
    const auto grid_bins = rebin(grid, h.lo, h.hi, static_cast<int>(h.mass.size()));
    const double l1 = l1_distance(grid_bins, h.mass);
    for (std::size_t b = 0; b < h.mass.size(); ++b) {
      const double blo = h.lo + static_cast<double>(b) * h.bin_width();
      comparison.rows.push_back({blo, blo + h.bin_width(), grid_bins[b], h.mass[b]});
    }
    out.results["mc_l1"] = l1;
    out.results["mc_bins"] = constant ? "lattice" : "uniform";
    out.checks.push_back(make_check("mc_agreement", l1 < s.positive("checks.mc_l1"), l1,
                                    "L1 distance between grid and Monte Carlo histograms below checks.mc_l1"));
  }
  out.tables = {std::move(density), std::move(audit), std::move(comparison)};
  return out;
}

}  // namespace

Experiment trajectory_experiment() {
  return {
      "trajectory",
      "Monte Carlo ensemble of measurement trajectories in the x chart; checks that <Pi> is a martingale",
      with_schedule({
          {"run.x0", Kind::number, "0", "starting position"},
          {"run.pi0", Kind::number, "", "starting Pi; replaces run.x0 when set"},
          {"run.n_steps", Kind::integer, "2000", "measurement steps per trajectory"},
          {"run.n_traj", Kind::integer, "10000", "ensemble size"},
          {"run.checkpoints", Kind::int_list, "", "steps with recorded statistics (default 0, n/10, n/2, n)"},
          {"run.record", Kind::integer, "1", "trajectories written in full to trajectory.csv"},
          {"run.threads", Kind::integer, "0", "worker threads (0 = hardware concurrency); results do not depend on it"},
          {"histogram.lo", Kind::number, "-25", "histogram range"},
          {"histogram.hi", Kind::number, "25", "histogram range"},
          {"histogram.bins", Kind::integer, "200", "histogram bins"},
          {"checks.martingale_z", Kind::number, "4", "allowed |<Pi> - Pi(x0)| in standard errors"},
      }),
      trajectory_outputs(),
      run_trajectory_experiment,
  };
}

Experiment master_experiment() {
  return {
      "master",
      "Density propagation on an x grid; audits mass and <Pi>, optionally against a Monte Carlo histogram",
      with_schedule({
          {"run.x0", Kind::number, "0", "initial point mass position"},
          {"run.pi0", Kind::number, "", "initial Pi; replaces run.x0 when set"},
          {"run.n_steps", Kind::integer, "500", "steps"},
          {"run.snapshot_every", Kind::integer, "100", "density snapshot interval in steps"},
          {"grid.lo", Kind::number, "-25", "grid range"},
          {"grid.hi", Kind::number, "25", "grid range"},
          {"grid.cells", Kind::integer, "8192", "grid cells"},
          {"grid.boundary_tolerance", Kind::number, "1e-9", "edge mass that aborts the run"},
          {"compare.n_traj", Kind::integer, "0", "Monte Carlo trajectories for the comparison (0 = off)"},
          {"compare.threads", Kind::integer, "0", "worker threads for the comparison"},
          {"compare.bins", Kind::integer, "200", "histogram bins over the grid range for non-constant schedules"},
          {"checks.pi_step_drift", Kind::number, "1e-9", "allowed per-step <Pi> drift"},
          {"checks.mc_l1", Kind::number, "0.05", "allowed L1 distance to the Monte Carlo histogram"},
      }),
      master_outputs(),
      run_master_experiment,
  };
}

}  // namespace wzm::runner
