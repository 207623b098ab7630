// fp-analytic-check and localization: Fokker-Planck runs against closed forms.

#include <algorithm>
#include <cmath>

#include "catalog.hpp"
#include "wzm/fp_solver.hpp"
#include "wzm/ratchet.hpp"
#include "wzm/trajectory.hpp"

namespace wzm::runner {

namespace {

const std::vector<OutputSchema>& fp_outputs() {
  static const std::vector<OutputSchema> out = {
      {"field.csv", {"x", "density", "exact", "flux_left_face"},
       "cell averages at fp.t_end on the base grid; exact is the analytic cell average"},
      {"convergence.csv", {"cells", "l2_error", "drift_velocity", "steps", "dt", "max_mass_drift"},
       "L2 error against the analytic density for each resolution"},
  };
  return out;
}

struct FpRun {
  Field field;
  double l2 = 0.0;
  SolveAudit audit;
};

FpRun run_analytic(std::size_t cells, double x_start, double t0, double t1, double safety) {
  const auto [lo, hi] = truncated_domain(x_start, t1);
  Field f = Field::cell_centered(Chart::x, lo, hi, cells, Boundary::zero_flux);
  for (std::size_t i = 0; i < cells; ++i) f.values()[i] = analytic_cell_average(t0, f.nodes()[i], f.width(), x_start);
  f.t = t0;
  DtControl control;
  control.safety = safety;
  auto sol = solve(f, coefficients_x([](double, double) { return 1.0; }), t1, control);
  FpRun run{std::move(sol.snapshots.back()), 0.0, sol.audit};
  double e = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    const double d = run.field.values()[i] - analytic_cell_average(t1, run.field.nodes()[i], run.field.width(), x_start);
    e += d * d;
  }
  run.l2 = std::sqrt(e * run.field.width());
  return run;
}

RunOutput run_fp_check(const Settings& s) {
  const auto& schema = fp_outputs();
  const double x_start = s.number("fp.x_start");
  const double t0 = s.positive("fp.t_start");
  const double t1 = s.positive("fp.t_end");
  if (!(t1 > t0)) throw ConfigError("key 'fp.t_end': must exceed fp.t_start");
  const auto cells = static_cast<std::size_t>(s.count("fp.cells", 8));
  const double safety = s.positive("fp.safety");

  std::vector<FpRun> runs;
  runs.push_back(run_analytic(cells, x_start, t0, t1, safety));
  if (s.boolean("fp.refine")) runs.push_back(run_analytic(2 * cells, x_start, t0, t1, safety));

  RunOutput out;
  Table field = make_table(schema[0]);
  const Field& base = runs.front().field;
  for (std::size_t i = 0; i < base.size(); ++i) {
    field.rows.push_back({base.nodes()[i], base.values()[i],
                          analytic_cell_average(t1, base.nodes()[i], base.width(), x_start), base.flux()[i]});
  }
  Table conv = make_table(schema[1]);
  for (const auto& r : runs) {
    conv.rows.push_back({static_cast<long long>(r.field.size()), r.l2, drift_velocity(r.field), r.audit.steps,
                         r.audit.dt, r.audit.max_mass_drift});
  }
  out.tables = {std::move(field), std::move(conv)};

  const double v = drift_velocity(base);
  out.audits["max_mass_drift"] = runs.front().audit.max_mass_drift;
  out.audits["clip_violations"] = runs.front().audit.clip_violations;
  out.audits["steps"] = runs.front().audit.steps;
  out.results["l2_error"] = runs.front().l2;
  out.results["drift_velocity"] = v;
  out.checks.push_back(make_check("l2_error", runs.front().l2 < s.positive("checks.l2"), runs.front().l2,
                                  "L2 error at fp.t_end below checks.l2"));
  if (runs.size() == 2) {
    const double ratio = runs[0].l2 / runs[1].l2;
    out.results["refined_l2_error"] = runs[1].l2;
    out.results["convergence_ratio"] = ratio;
    out.checks.push_back(make_check("convergence", ratio >= s.positive("checks.ratio"), ratio,
                                    "error ratio on doubling the cells at least checks.ratio"));
  }
  // The analytic density drifts left at unit speed once it sits far below x = 0.
  const double dv = std::fabs(v + 1.0);
  out.checks.push_back(make_check("drift_velocity", dv < s.positive("checks.drift_tolerance"), v,
                                  "integrated flux within checks.drift_tolerance of -1"));
  return out;
}

const std::vector<OutputSchema>& localization_outputs() {
  static const std::vector<OutputSchema> out = {
      {"absorption.csv", {"outcome", "count", "fraction", "expected"},
       "Monte Carlo end states: target (Pi_X), zero, one, undecided"},
      {"fp_field.csv", {"t", "pi", "density"}, "Pi chart density on [0, 1] at each output time"},
      {"rescale.csv", {"t", "t_mapped", "l1", "mass_wrong_side", "pi_mean"},
       "direct vs mapped problem (lower branch only); mass_wrong_side is the mass beyond Pi_X"},
  };
  return out;
}

RunOutput run_localization(const Settings& s) {
  const auto& schema = localization_outputs();
  const double pi_x = s.number("localization.pi_x");
  const double pi0 = s.number("localization.pi0");
  const double tilde_g = s.positive("localization.tilde_g");
  if (!(pi_x > 0.0 && pi_x < 1.0)) throw ConfigError("key 'localization.pi_x': must lie in (0, 1)");
  if (!(pi0 > 0.0 && pi0 < 1.0) || pi0 == pi_x) {
    throw ConfigError("key 'localization.pi0': must lie in (0, 1) and differ from localization.pi_x");
  }
  const bool lower = pi0 < pi_x;
  const auto intervals = s.count("fp.intervals", 4);
  const double scaled = pi_x * static_cast<double>(intervals);
  if (std::fabs(scaled - std::round(scaled)) > 1e-9) {
    throw ConfigError("key 'fp.intervals': pi_x * fp.intervals must be an integer so that Pi_X is a grid node");
  }
  const auto below = static_cast<std::size_t>(std::llround(scaled));
  const double width = s.positive("fp.width");
  std::vector<double> times;
  for (double t : s.number_list("fp.times")) {
    if (!(t > 0.0)) throw ConfigError("key 'fp.times': times must be positive");
    times.push_back(t / (pi_x * pi_x));
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  RunOutput out;

  // Monte Carlo end states.
  ScheduleSpec spec;
  spec.alpha = {"constant", {{"value", s.number("mc.alpha")}}};
  spec.g_delta = {"localization", {{"pi_x", pi_x}, {"tilde_g", tilde_g}}};
  spec.delta_scale = s.positive("mc.delta_scale");
  AbsorptionOptions ao;
  ao.target_pi = pi_x;
  ao.neighborhood = s.positive("mc.neighborhood");
  ao.sustain_steps = s.count("mc.sustain_steps", 1);
  ao.max_steps = s.count("mc.max_steps", 1);
  ao.threads = thread_count(s, "mc.threads");
  const long long n_traj = s.count("mc.n_traj", 2);
  const auto st = run_absorption_study(x_of_pi(pi0), make_schedule(spec), ao, n_traj, s.seed());
  const auto split = absorption_split(pi0, pi_x);
  const double n = static_cast<double>(n_traj);
  Table absorption = make_table(schema[0]);
  absorption.rows.push_back({std::string("target"), st.reached_target, st.fraction_target(), split.to_x});
  absorption.rows.push_back({std::string("zero"), st.reached_zero, static_cast<double>(st.reached_zero) / n,
                             lower ? split.to_basis : 0.0});
  absorption.rows.push_back({std::string("one"), st.reached_one, static_cast<double>(st.reached_one) / n,
                             lower ? 0.0 : split.to_basis});
  absorption.rows.push_back({std::string("undecided"), st.undecided, static_cast<double>(st.undecided) / n, 0.0});
  const double se = st.fraction_target_stderr();
  const double z = se > 0.0 ? (st.fraction_target() - split.to_x) / se : 0.0;
  out.results["fraction_target"] = st.fraction_target();
  out.results["fraction_target_stderr"] = se;
  out.results["expected_target"] = split.to_x;
  out.results["split_z"] = z;
  out.audits["crossings"] = st.crossings;
  out.audits["closest_approach"] = st.closest_approach;
  out.audits["undecided"] = st.undecided;
  out.checks.push_back(make_check("no_crossing", st.crossings == 0, static_cast<double>(st.crossings),
                                  "no trajectory reaches the far side of Pi_X"));
  out.checks.push_back(make_check("absorption_split", se > 0.0 && std::fabs(z) <= s.positive("checks.split_z"), z,
                                  "fraction reaching Pi_X within checks.split_z standard errors of the closed form"));

  // Fokker-Planck in the Pi chart on [0, 1].
  const LocalizationProfile profile(pi_x, [tilde_g](double) { return tilde_g; });
  auto initial_density = [&](double p) {
    if (lower ? p >= pi_x : p <= pi_x) return 0.0;
    return std::exp(-(p - pi0) * (p - pi0) / (2.0 * width * width));
  };
  auto wrong_side_mass = [&](const Field& f, double x_node) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double p = f.nodes()[i];
      if (lower ? p > x_node : p < x_node) m += f.values()[i] * f.width();
    }
    return m;
  };
  Field full = Field::vertex_centered(Chart::pi, 0.0, 1.0, static_cast<std::size_t>(intervals), Boundary::zero_flux);
  full.fill_normalized(initial_density);
  const double node_x = full.nodes()[below];
  const auto identity = [](double p) { return p; };
  const double pi_mean0 = full.moment(identity);
  DtControl dc;
  dc.output_times = times;
  const auto sol = solve(full, coefficients_pi(profile.form_factor()), times.back(), dc);
  Table fp_field = make_table(schema[1]);
  double max_wrong = wrong_side_mass(full, node_x);
  double max_pi_drift = 0.0;
  for (const auto& snap : sol.snapshots) {
    for (std::size_t i = 0; i < snap.size(); ++i) fp_field.rows.push_back({snap.t, snap.nodes()[i], snap.values()[i]});
    max_wrong = std::max(max_wrong, wrong_side_mass(snap, node_x));
    max_pi_drift = std::max(max_pi_drift, std::fabs(snap.moment(identity) - pi_mean0));
  }
  out.audits["fp_max_mass_drift"] = sol.audit.max_mass_drift;
  out.audits["fp_max_pi_drift"] = max_pi_drift;
  out.audits["fp_steps"] = sol.audit.steps;
  out.results["fp_mass_wrong_side"] = max_wrong;
  out.checks.push_back(make_check("fp_no_crossing", max_wrong < s.positive("checks.mass_wrong_side"), max_wrong,
                                  "Fokker-Planck mass beyond Pi_X below checks.mass_wrong_side at every output"));

  // Direct lower-branch problem on [0, Pi_X] against the mapped unit-interval problem.
  Table rescale = make_table(schema[2]);
  if (lower) {
    const auto rp = rescale_equivalence(profile);
    Field direct = Field::vertex_centered(Chart::pi, 0.0, pi_x, below, Boundary::zero_flux);
    direct.fill_normalized(initial_density);
    Field mapped = Field::vertex_centered(Chart::pi, 0.0, 1.0, below, Boundary::zero_flux);
    mapped.fill_normalized([&](double q) { return initial_density(rp.to_direct(q)); });
    DtControl d1;
    d1.output_times = times;
    DtControl d2;
    for (double t : times) d2.output_times.push_back(rp.mapped_time(t));
    const auto sd = solve(direct, rp.direct, times.back(), d1);
    const auto sm = solve(mapped, rp.mapped, rp.mapped_time(times.back()), d2);
    double max_l1 = 0.0;
    for (std::size_t k = 0; k < sd.snapshots.size(); ++k) {
      const Field& a = sd.snapshots[k];
      const Field& b = sm.snapshots[k];
      double l1 = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) l1 += std::fabs(a.values()[i] - rp.density_back(b.values()[i]));
      l1 *= a.width();
      max_l1 = std::max(max_l1, l1);
      rescale.rows.push_back({a.t, b.t, l1, wrong_side_mass(sol.snapshots[k], node_x), a.moment(identity)});
    }
    out.results["rescale_l1"] = max_l1;
    out.checks.push_back(make_check("rescale_equivalence", max_l1 < s.positive("checks.rescale_l1"), max_l1,
                                    "L1 distance between direct and mapped densities below checks.rescale_l1"));
  }
  out.tables = {std::move(absorption), std::move(fp_field), std::move(rescale)};
  return out;
}

}  // namespace

Experiment fp_check_experiment() {
  return {
      "fp-analytic-check",
      "Fokker-Planck solver against the exact density for g = 1 in the x chart",
      {
          {"fp.x_start", Kind::number, "-10", "initial point mass position of the exact solution"},
          {"fp.t_start", Kind::number, "0.1", "the run starts from the exact cell averages at this time"},
          {"fp.t_end", Kind::number, "1", "comparison time"},
          {"fp.cells", Kind::integer, "4096", "base resolution"},
          {"fp.refine", Kind::boolean, "true", "also run with twice the cells and report the error ratio"},
          {"fp.safety", Kind::number, "0.4", "fraction of the stable time step"},
          {"checks.l2", Kind::number, "1e-3", "allowed L2 error"},
          {"checks.ratio", Kind::number, "3.5", "required error ratio on refinement"},
          {"checks.drift_tolerance", Kind::number, "0.01", "allowed |drift velocity + 1|"},
      },
      fp_outputs(),
      run_fp_check,
  };
}

Experiment localization_experiment() {
  return {
      "localization",
      "Measurement strength vanishing at Pi_X: Monte Carlo end states, Pi chart Fokker-Planck and the rescaled problem",
      {
          {"localization.pi_x", Kind::number, "0.7", "Pi where the form factor vanishes"},
          {"localization.pi0", Kind::number, "0.3", "starting Pi"},
          {"localization.tilde_g", Kind::number, "1", "constant tilde_g"},
          {"mc.n_traj", Kind::integer, "10000", "trajectories"},
          {"mc.alpha", Kind::number, "0.78539816339744828", "rotation angle"},
          {"mc.delta_scale", Kind::number, "0.05", "delta scale"},
          {"mc.neighborhood", Kind::number, "1e-3", "distance in Pi that counts as reaching a limit"},
          {"mc.sustain_steps", Kind::integer, "1000", "consecutive steps near a limit before classifying"},
          {"mc.max_steps", Kind::integer, "200000", "step cap per trajectory"},
          {"mc.threads", Kind::integer, "0", "worker threads (0 = hardware concurrency)"},
          {"fp.intervals", Kind::integer, "500", "grid intervals on [0, 1]; pi_x * intervals must be an integer"},
          {"fp.width", Kind::number, "0.02", "standard deviation of the initial Gaussian in Pi"},
          {"fp.times", Kind::number_list, "0.1,1,5", "output times in units of 1 / Pi_X^2"},
          {"checks.split_z", Kind::number, "4", "allowed deviation of the split in standard errors"},
          {"checks.mass_wrong_side", Kind::number, "1e-12", "allowed Fokker-Planck mass beyond Pi_X"},
          {"checks.rescale_l1", Kind::number, "1e-3", "allowed direct vs mapped L1 distance"},
      },
      localization_outputs(),
      run_localization,
  };
}

}  // namespace wzm::runner
