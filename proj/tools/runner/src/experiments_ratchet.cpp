// ratchet-spacetime and seebeck: reduced periodic problems in the asymptotic coordinate.

#include <algorithm>
#include <cmath>
#include <limits>

#include "catalog.hpp"
#include "wzm/ratchet.hpp"

namespace wzm::runner {

namespace {

Side parse_side(const Settings& s, const std::string& key) {
  const auto& v = s.text(key);
  if (v == "left") return Side::left;
  if (v == "right") return Side::right;
  throw ConfigError("key '" + key + "': expected left or right, got '" + v + "'");
}

GProfile ratchet_profile(const Settings& s) {
  const auto& kind = s.text("profile.kind");
  const bool normalize = s.boolean("profile.normalize");
  const double two_pi = 2.0 * kPi;
  if (kind == "spacetime" || kind == "alternate") {
    const bool st = kind == "spacetime";
    const double a = s.has("profile.a") ? s.number("profile.a") : (st ? -0.6 : -0.8);
    const double b = s.has("profile.b") ? s.number("profile.b") : (st ? -0.5 : 0.0);
    return GProfile(two_pi, SpatialModes{0.0, {a, a * b}, {}}, st ? Temporal::on_off : Temporal::sign_sin, 1.0,
                    normalize);
  }
  if (kind == "uniform") return uniform_profile();
  if (kind == "temporal") return temporal_profile(s.number("profile.amplitude"), normalize);
  throw ConfigError("key 'profile.kind': expected spacetime, alternate, uniform or temporal, got '" + kind + "'");
}

ReducedOptions reduced_options(const Settings& s, double t_end) {
  ReducedOptions o;
  o.cells = static_cast<std::size_t>(s.count("solver.cells", 8));
  o.t_end = t_end;
  o.side = parse_side(s, "solver.side");
  o.initial_width = s.positive("solver.initial_width");
  o.safety = s.positive("solver.safety");
  return o;
}

void append_field(Table& table, const Field& f, const GProfile* g, bool with_time) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = f.nodes()[i];
    const double j = f.flux().empty() ? 0.0 : 0.5 * (f.flux()[i] + f.flux()[i + 1]);
    if (with_time) {
      table.rows.push_back({f.t, x, f.values()[i], j});
    } else {
      table.rows.push_back({x, (*g)(x, f.t), f.values()[i], j});
    }
  }
}

const std::vector<OutputSchema>& ratchet_outputs() {
  static const std::vector<OutputSchema> out = {
      {"current.csv", {"t", "current", "running_average"},
       "space-integrated current; a second row at each switching time holds the value after the switch"},
      {"field.csv", {"t", "x", "density", "flux"}, "reduced density and cell-averaged flux at the snapshot times"},
  };
  return out;
}

RunOutput run_ratchet(const Settings& s) {
  const auto& schema = ratchet_outputs();
  const std::string kind = s.text("profile.kind");
  const GProfile g = ratchet_profile(s);
  const double periods = s.positive("solver.periods");
  ReducedOptions o = reduced_options(s, periods * kPi);
  o.samples_per_period = static_cast<int>(s.count("solver.samples_per_period", 1));
  for (double p : s.number_list("solver.snapshots")) {
    if (p < 0.0 || p > periods) throw ConfigError("key 'solver.snapshots': must lie in [0, solver.periods]");
    o.snapshot_times.push_back(p * kPi);
  }
  const auto r = solve_reduced(g, o);

  RunOutput out;
  Table current = make_table(schema[0]);
  for (std::size_t i = 0; i < r.record.times.size(); ++i) {
    current.rows.push_back({r.record.times[i], r.record.current[i], r.record.running_average[i]});
  }
  Table field = make_table(schema[1]);
  for (const auto& snap : r.snapshots) append_field(field, snap, nullptr, true);
  out.tables = {std::move(current), std::move(field)};

  const double avg = r.final_average;
  out.audits["max_mass_drift"] = r.max_mass_drift;
  out.audits["clip_violations"] = r.clip_violations;
  out.audits["dt"] = r.dt;
  out.audits["min_g"] = g.min_value();
  out.results["profile"] = g.describe();
  out.results["final_average"] = avg;
  out.results["t_end"] = r.final_field.t;
  out.results["converged"] = r.converged;

  out.checks.push_back(make_check("converged", r.converged, avg,
                                  "running average moves by less than 1e-3 over the last 20% of the run"));
  const double tol = s.positive("checks.sign_tolerance");
  const double sign = o.side == Side::left ? 1.0 : -1.0;  // the right side mirrors the current
  if (g.normalized()) {
    const double v = sign * avg;
    out.checks.push_back(make_check("weak_ratchet", v > -1.0 - tol && v <= 0.0, avg,
                                    "long-time current in (-1 - checks.sign_tolerance, 0] (mirrored on the right)"));
  }
  if (kind == "spacetime") {
    const double target = s.number("checks.target");
    const double band = s.positive("checks.band");
    out.checks.push_back(make_check("ratchet_band", std::fabs(avg - target) <= band, avg,
                                    "long-time current within checks.band of checks.target"));
    out.checks.push_back(make_check("ratchet_gap", sign * avg + 1.0 >= s.positive("checks.min_gap"), sign * avg + 1.0,
                                    "long-time current above -1 by at least checks.min_gap"));
  }
  if (kind == "uniform") {
    double dev = 0.0;
    for (double v : r.final_field.values()) dev = std::max(dev, std::fabs(v - 1.0 / g.period()));
    out.results["max_density_deviation"] = dev;
    out.checks.push_back(make_check("no_ratchet", std::fabs(sign * avg + 1.0) <= tol, avg,
                                    "current -1 within checks.sign_tolerance"));
    out.checks.push_back(make_check("homogeneous", dev <= 1e-6, dev, "final density 1/L within 1e-6"));
  }
  if (kind == "temporal") {
    // A space-independent g leaves the current at -g(t)^2 at every instant.
    const double t_end = r.final_field.t;
    double integral = 0.0;
    for (double t0 = 0.0; t0 < t_end; t0 += kPi) {
      const double len = std::min(kPi, t_end - t0);
      const double gv = g(0.0, t0 + 0.5 * kPi);
      integral += gv * gv * len;
    }
    const double expected = -sign * integral / t_end;
    const double err = std::fabs(avg - expected);
    out.results["expected_average"] = expected;
    out.checks.push_back(make_check("no_ratchet", err <= 1e-6, err, "current equals the time average of -g(t)^2"));
  }
  return out;
}

const std::vector<OutputSchema>& seebeck_outputs() {
  static const std::vector<OutputSchema> out = {
      {"profiles.csv", {"profile", "closed_form", "numeric", "abs_error", "mean_g2", "mean_inv_g2", "min_g"},
       "steady current per time-independent profile: closed form -1/<g^-2> against the solver"},
      {"field.csv", {"x", "g", "density", "flux"}, "steady reduced density for the configured profile"},
  };
  return out;
}

RunOutput run_seebeck(const Settings& s) {
  const auto& schema = seebeck_outputs();
  const double a = s.number("profile.a");
  const double b = s.number("profile.b");
  const GProfile main(2.0 * kPi, SpatialModes{0.0, {a, a * b}, {}}, Temporal::constant, 1.0,
                      s.boolean("profile.normalize"));
  const ReducedOptions o = reduced_options(s, s.positive("solver.t_end"));
  const double tol = s.positive("checks.tolerance");
  const long long n_random = s.count("random.count", 0);
  const double floor = s.positive("random.floor");

  std::vector<std::pair<std::string, GProfile>> profiles = {{"configured", main}};
  for (long long i = 0; i < n_random; ++i) {
    const auto seed = s.seed() + static_cast<std::uint64_t>(i);
    profiles.emplace_back("random_" + std::to_string(i), random_static_profile(seed, floor));
  }

  RunOutput out;
  Table table = make_table(schema[0]);
  Table field = make_table(schema[1]);
  double max_err = 0.0;
  double min_product = std::numeric_limits<double>::infinity();
  bool signs_ok = true;
  double max_drift = 0.0;
  for (const auto& [name, g] : profiles) {
    const double closed = seebeck_steady_current(g);
    const auto r = solve_reduced(g, o);
    const double numeric = r.record.current.back();
    const double m2 = g.mean_square(0.0);
    const double mi2 = g.mean_inverse_square(0.0);
    max_err = std::max(max_err, std::fabs(numeric - closed));
    min_product = std::min(min_product, m2 * mi2);
    max_drift = std::max(max_drift, r.max_mass_drift);
    const double v = o.side == Side::left ? numeric : -numeric;
    if (g.normalized() && !(v > -1.0 - 0.01 && v <= 0.0)) signs_ok = false;
    table.rows.push_back({name, closed, numeric, std::fabs(numeric - closed), m2, mi2, g.min_value()});
    if (name == "configured") {
      append_field(field, r.final_field, &g, false);
      out.results["closed_form"] = closed;
      out.results["numeric"] = numeric;
    }
  }
  out.tables = {std::move(table), std::move(field)};
  out.audits["max_mass_drift"] = max_drift;
  out.results["max_abs_error"] = max_err;
  out.results["min_mean_product"] = min_product;

  out.checks.push_back(make_check("closed_form", max_err < tol, max_err,
                                  "numeric steady current within checks.tolerance of -1/<g^-2> for every profile"));
  const double closed = out.results["closed_form"].get<double>();
  out.checks.push_back(make_check("figure_band",
                                  std::fabs(closed - s.number("checks.figure_value")) <= s.positive("checks.figure_band"),
                                  closed, "closed form within checks.figure_band of checks.figure_value"));
  out.checks.push_back(make_check("mean_inequality", min_product >= 1.0 - 1e-12, min_product,
                                  "<g^2><g^-2> >= 1 for every profile"));
  out.checks.push_back(make_check("weak_ratchet", signs_ok, max_err, "every normalized current lies in (-1.01, 0]"));
  return out;
}

std::vector<KeySpec> solver_keys() {
  return {
      {"solver.cells", Kind::integer, "128", "cells over one spatial period"},
      {"solver.side", Kind::text, "left", "asymptotic side: left (mu = -g^2) or right (mu = +g^2)"},
      {"solver.initial_width", Kind::number, "0.1", "initial profile exp(-x^2 / width), wrapped"},
      {"solver.safety", Kind::number, "0.4", "fraction of the stable time step"},
  };
}

}  // namespace

Experiment ratchet_experiment() {
  auto keys = solver_keys();
  const std::vector<KeySpec> own = {
      {"profile.kind", Kind::text, "spacetime", "spacetime, alternate, uniform or temporal"},
      {"profile.a", Kind::number, "", "amplitude a of a (sin x + b sin 2x) (spacetime -0.6, alternate -0.8)"},
      {"profile.b", Kind::number, "", "second harmonic ratio b (spacetime -0.5, alternate 0)"},
      {"profile.amplitude", Kind::number, "0.5", "temporal profile: g = C (1 + amplitude sign(sin t))"},
      {"profile.normalize", Kind::boolean, "true", "fix C(t) so that the spatial mean of g^2 is 1"},
      {"solver.periods", Kind::number, "400", "run length in switching periods of length pi"},
      {"solver.samples_per_period", Kind::integer, "64", "current samples per switching period"},
      {"solver.snapshots", Kind::number_list, "0,1,2,3,4,399,400", "field snapshot times in switching periods"},
      {"checks.target", Kind::number, "-0.86", "expected long-time current (spacetime)"},
      {"checks.band", Kind::number, "0.05", "allowed distance from checks.target"},
      {"checks.min_gap", Kind::number, "0.05", "required distance above -1 (spacetime)"},
      {"checks.sign_tolerance", Kind::number, "0.01", "slack below -1 for the weak-ratchet bound"},
  };
  keys.insert(keys.end(), own.begin(), own.end());
  return {
      "ratchet-spacetime",
      "Reduced periodic run with a switching form factor; long-time moving-average current",
      keys,
      ratchet_outputs(),
      run_ratchet,
  };
}

Experiment seebeck_experiment() {
  auto keys = solver_keys();
  const std::vector<KeySpec> own = {
      {"profile.a", Kind::number, "-0.8", "amplitude a of a (sin x + b sin 2x)"},
      {"profile.b", Kind::number, "0", "second harmonic ratio b"},
      {"profile.normalize", Kind::boolean, "true", "fix C so that the spatial mean of g^2 is 1"},
      {"random.count", Kind::integer, "5", "additional random positive profiles (seeded from seed, seed + 1, ...)"},
      {"random.floor", Kind::number, "0.25", "lower bound of 1 + F for the random profiles"},
      {"solver.t_end", Kind::number, "100", "run length; the current is read at the end"},
      {"checks.tolerance", Kind::number, "1e-3", "allowed |numeric - closed form|"},
      {"checks.figure_value", Kind::number, "-0.2", "value read off the published figure"},
      {"checks.figure_band", Kind::number, "0.08", "allowed distance of the closed form from checks.figure_value"},
  };
  keys.insert(keys.end(), own.begin(), own.end());
  return {
      "seebeck",
      "Time-independent form factors: steady current against -1/<g^-2>",
      keys,
      seebeck_outputs(),
      run_seebeck,
  };
}

}  // namespace wzm::runner
