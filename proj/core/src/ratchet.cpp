#include "wzm/ratchet.hpp"

#include <algorithm>
#include <boost/math/quadrature/trapezoidal.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "wzm/error.hpp"
#include "wzm/rng.hpp"
#include "text.hpp"

namespace wzm {

namespace {

constexpr int kMinSamples = 8192;

// Periodic integrands: the adaptive trapezoid rule converges geometrically.
template <typename Fn>
double periodic_mean(Fn fn, double period) {
  return boost::math::quadrature::trapezoidal(fn, 0.0, period, 1e-13, 20) / period;
}

// Index of the switching phase active on (k pi, (k + 1) pi).
long long phase_index(double t) { return static_cast<long long>(std::floor(t / kPi)); }

}  // namespace

const char* to_string(Temporal f) {
  switch (f) {
    case Temporal::constant:
      return "constant";
    case Temporal::on_off:
      return "on_off";
    case Temporal::sign_sin:
      return "sign_sin";
  }
  return "?";
}

GProfile::GProfile(double period, SpatialModes spatial, Temporal temporal, double temporal_value, bool normalize)
    : period_(period),
      spatial_(std::move(spatial)),
      temporal_(temporal),
      temporal_value_(temporal_value),
      normalize_(normalize) {
  if (!(period > 0.0) || !std::isfinite(period)) throw InvalidArgumentError("profile period must be positive");
  if (!std::isfinite(temporal_value)) throw InvalidArgumentError("temporal value must be finite");
  const std::vector<double> phases = phase_values();
  c_first_ = normalizer(phases.front());
  c_second_ = normalizer(phases.back());
  const double lowest = min_value();
  if (lowest < 0.0) {
    throw InvalidArgumentError("form factor becomes negative (min g = " + detail::num(lowest) + ")");
  }
}

double GProfile::F(double x) const {
  const double q = 2.0 * kPi / period_;
  double s = spatial_.mean;
  for (std::size_t k = 0; k < spatial_.sin_coeffs.size(); ++k) {
    s += spatial_.sin_coeffs[k] * std::sin(static_cast<double>(k + 1) * q * x);
  }
  for (std::size_t k = 0; k < spatial_.cos_coeffs.size(); ++k) {
    s += spatial_.cos_coeffs[k] * std::cos(static_cast<double>(k + 1) * q * x);
  }
  return s;
}

std::vector<double> GProfile::phase_values() const {
  switch (temporal_) {
    case Temporal::constant:
      return {temporal_value_};
    case Temporal::on_off:
      return {0.0, -1.0};
    case Temporal::sign_sin:
      return {1.0, -1.0};
  }
  return {1.0};
}

double GProfile::f(double t) const {
  if (temporal_ == Temporal::constant) return temporal_value_;
  const std::vector<double> v = phase_values();
  return phase_index(t) % 2 == 0 ? v[0] : v[1];
}

double GProfile::C(double t) const {
  if (temporal_ == Temporal::constant) return c_first_;
  return phase_index(t) % 2 == 0 ? c_first_ : c_second_;
}

double GProfile::normalizer(double f_value) const {
  if (!normalize_) return 1.0;
  double m2 = 0.0;
  if (spatial_.mean == 0.0) {
    // <(1 + f F)^2> = 1 + f^2 <F^2>, <F^2> = sum (s_k^2 + c_k^2) / 2
    double f2 = 0.0;
    for (double c : spatial_.sin_coeffs) f2 += 0.5 * c * c;
    for (double c : spatial_.cos_coeffs) f2 += 0.5 * c * c;
    m2 = 1.0 + f_value * f_value * f2;
  } else {
    m2 = periodic_mean(
        [this, f_value](double x) {
          const double v = 1.0 + F(x) * f_value;
          return v * v;
        },
        period_);
  }
  if (!(m2 > 0.0)) throw InvalidArgumentError("profile has zero mean square");
  return 1.0 / std::sqrt(m2);
}

double GProfile::mean_square(double t) const {
  return periodic_mean(
      [this, t](double x) {
        const double v = (*this)(x, t);
        return v * v;
      },
      period_);
}

double GProfile::mean_inverse_square(double t) const {
  return periodic_mean(
      [this, t](double x) {
        const double v = (*this)(x, t);
        return 1.0 / (v * v);
      },
      period_);
}

double GProfile::min_value() const {
  double lowest = std::numeric_limits<double>::infinity();
  const std::vector<double> phases = phase_values();
  for (std::size_t p = 0; p < phases.size(); ++p) {
    const double c = p == 0 ? c_first_ : c_second_;
    for (int i = 0; i < kMinSamples; ++i) {
      const double x = period_ * i / kMinSamples;
      lowest = std::min(lowest, c * (1.0 + F(x) * phases[p]));
    }
  }
  return lowest;
}

std::string GProfile::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "L=" << period_ << " F.mean=" << spatial_.mean << " F.sin=[";
  for (std::size_t k = 0; k < spatial_.sin_coeffs.size(); ++k) os << (k ? "," : "") << spatial_.sin_coeffs[k];
  os << "] F.cos=[";
  for (std::size_t k = 0; k < spatial_.cos_coeffs.size(); ++k) os << (k ? "," : "") << spatial_.cos_coeffs[k];
  os << "] f=" << to_string(temporal_);
  if (temporal_ == Temporal::constant) os << "(" << temporal_value_ << ")";
  os << " normalize=" << (normalize_ ? "true" : "false");
  return os.str();
}

GProfile reference_profile_spacetime(bool normalize) {
  const double a = -0.6;
  const double b = -0.5;
  return {2.0 * kPi, {0.0, {a, a * b}, {}}, Temporal::on_off, 1.0, normalize};
}

GProfile reference_profile_seebeck(bool normalize) {
  return {2.0 * kPi, {0.0, {-0.8}, {}}, Temporal::constant, 1.0, normalize};
}

GProfile alternate_profile(bool normalize) {
  return {2.0 * kPi, {0.0, {-0.8}, {}}, Temporal::sign_sin, 1.0, normalize};
}

GProfile uniform_profile() { return {2.0 * kPi, {}, Temporal::constant, 1.0, true}; }

GProfile temporal_profile(double amplitude, bool normalize) {
  return {2.0 * kPi, {amplitude, {}, {}}, Temporal::sign_sin, 1.0, normalize};
}

GProfile random_static_profile(std::uint64_t seed, double floor) {
  if (!(floor > 0.0 && floor < 1.0)) throw InvalidArgumentError("floor must lie in (0, 1)");
  PhiloxStream rng(seed, 0);
  SpatialModes modes;
  for (int k = 0; k < 3; ++k) {
    modes.sin_coeffs.push_back(2.0 * rng.uniform() - 1.0);
    modes.cos_coeffs.push_back(2.0 * rng.uniform() - 1.0);
  }
  auto raw = [&modes](double x) {
    double s = 0.0;
    for (std::size_t k = 0; k < modes.sin_coeffs.size(); ++k) {
      s += modes.sin_coeffs[k] * std::sin(static_cast<double>(k + 1) * x) +
           modes.cos_coeffs[k] * std::cos(static_cast<double>(k + 1) * x);
    }
    return s;
  };
  double f_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kMinSamples; ++i) f_min = std::min(f_min, raw(2.0 * kPi * i / kMinSamples));
  // Scale so that 1 + F stays above the floor, with a random fraction of the headroom.
  const double scale = (1.0 - floor) / std::max(-f_min, 1e-12) * (0.3 + 0.7 * rng.uniform());
  for (double& c : modes.sin_coeffs) c *= scale;
  for (double& c : modes.cos_coeffs) c *= scale;
  return {2.0 * kPi, modes, Temporal::constant, 1.0, true};
}

FpCoefficients asymptotic_coefficients(const GProfile& g, Side side) {
  const double sign = side == Side::left ? -1.0 : 1.0;
  FpCoefficients c;
  c.chart = Chart::x;
  c.drift = [g, sign](double x, double t) {
    const double v = g(x, t);
    return sign * v * v;
  };
  c.diffusion = [g](double x, double t) {
    const double v = g(x, t);
    return 0.5 * v * v;
  };
  c.time_independent = g.time_independent();
  return c;
}

double moving_average(const CurrentRecord& record, double t) {
  const auto& ts = record.times;
  const auto& cs = record.current;
  if (ts.empty() || ts.size() != cs.size()) throw InvalidArgumentError("moving_average: empty record");
  if (!(t >= ts.front()) || t > ts.back()) throw InvalidArgumentError("moving_average: t outside the record");
  if (t == ts.front()) return cs.front();
  double integral = 0.0;
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (ts[i] <= t) {
      integral += 0.5 * (cs[i] + cs[i - 1]) * (ts[i] - ts[i - 1]);
      continue;
    }
    const double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
    const double c_t = cs[i - 1] + w * (cs[i] - cs[i - 1]);
    integral += 0.5 * (c_t + cs[i - 1]) * (t - ts[i - 1]);
    break;
  }
  return integral / (t - ts.front());
}

ReducedResult solve_reduced(const GProfile& g, const ReducedOptions& options) {
  if (options.cells < 8) throw InvalidArgumentError("solve_reduced: need at least 8 cells");
  if (!(options.t_end > 0.0)) throw InvalidArgumentError("solve_reduced: t_end must be positive");
  if (options.samples_per_period < 1) throw InvalidArgumentError("solve_reduced: samples_per_period must be >= 1");
  if (!(options.initial_width > 0.0)) throw InvalidArgumentError("solve_reduced: initial_width must be positive");

  const double L = g.period();
  Field field = Field::cell_centered(Chart::x, -0.5 * L, 0.5 * L, options.cells, Boundary::periodic);
  field.fill_normalized([&](double x) {
    double s = 0.0;
    for (int m = -3; m <= 3; ++m) {
      const double y = x + m * L;
      s += std::exp(-y * y / options.initial_width);
    }
    return s;
  });

  // Coefficients are constant within each switching phase, so one operator per phase.
  const FpCoefficients coeffs = asymptotic_coefficients(g, options.side);
  const std::size_t n_phases = g.time_independent() ? 1 : 2;
  std::vector<FluxOperator> ops;
  for (std::size_t p = 0; p < n_phases; ++p) ops.emplace_back(field, coeffs, (static_cast<double>(p) + 0.5) * kPi);
  double dt_stable = std::numeric_limits<double>::infinity();
  for (const auto& op : ops) dt_stable = std::min(dt_stable, op.stable_dt(options.safety));
  const auto samples = static_cast<long long>(options.samples_per_period);
  long long per_sample = 1;
  if (std::isfinite(dt_stable)) {
    per_sample = std::max(1LL, static_cast<long long>(std::ceil(kPi / (static_cast<double>(samples) * dt_stable))));
  }
  const long long steps_per_phase = per_sample * samples;
  const double dt = kPi / static_cast<double>(steps_per_phase);

  ReducedResult res;
  res.dt = dt;
  const double initial_mass = field.mass();
  auto& rec = res.record;
  {
    std::vector<double> j;
    ops[0].fluxes(field.values(), j);
    field.flux() = j;
    const double c0 = drift_velocity(field);
    rec.times.push_back(0.0);
    rec.current.push_back(c0);
    rec.running_average.push_back(c0);
  }

  std::vector<double> snaps = options.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;
  while (next_snap < snaps.size() && snaps[next_snap] <= 0.0) {
    res.snapshots.push_back(field);
    ++next_snap;
  }

  const long long total_steps = static_cast<long long>(std::ceil(options.t_end / dt - 1e-6));
  double integral = 0.0;
  for (long long step = 0; step < total_steps; ++step) {
    const long long phase = step / steps_per_phase;
    const FluxOperator& op = ops[static_cast<std::size_t>(phase % static_cast<long long>(n_phases))];
    ssp_rk2_step(field, op, dt);
    field.t = static_cast<double>(step + 1) * dt;
    for (double& v : field.values()) {
      if (v < 0.0) {
        if (v < -1e-12) ++res.clip_violations;
        v = 0.0;
      }
    }
    const double c = drift_velocity(field);  // flux effective over this step
    integral += c * dt;
    if ((step + 1) % per_sample == 0 || step + 1 == total_steps) {
      rec.times.push_back(field.t);
      rec.current.push_back(c);
      rec.running_average.push_back(integral / field.t);
      const double drift = std::fabs(field.mass() - initial_mass) / initial_mass;
      res.max_mass_drift = std::max(res.max_mass_drift, drift);
      if (!(drift <= options.mass_tolerance)) {
        throw MassDriftError("reduced run lost normalization: relative drift " + detail::num(drift));
      }
      while (next_snap < snaps.size() && snaps[next_snap] <= field.t) {
        res.snapshots.push_back(field);
        ++next_snap;
      }
    }
    // The current jumps at a switch; a second sample at the same time holds the value after it.
    if (n_phases > 1 && (step + 1) % steps_per_phase == 0 && step + 1 < total_steps) {
      const FluxOperator& next = ops[static_cast<std::size_t>((phase + 1) % static_cast<long long>(n_phases))];
      Field probe = field;
      next.fluxes(probe.values(), probe.flux());
      rec.times.push_back(field.t);
      rec.current.push_back(drift_velocity(probe));
      rec.running_average.push_back(integral / field.t);
    }
  }

  res.final_average = rec.running_average.back();
  const double t_check = 0.8 * field.t;
  const auto it = std::lower_bound(rec.times.begin(), rec.times.end(), t_check);
  const auto k = static_cast<std::size_t>(std::distance(rec.times.begin(), it));
  res.converged = k < rec.times.size() && std::fabs(rec.running_average[k] - res.final_average) < 1e-3;
  res.final_field = field;
  return res;
}

double seebeck_steady_current(const GProfile& g) {
  if (!g.time_independent()) throw RegimeError("steady current needs a time-independent profile");
  if (!(g.min_value() > 0.0)) throw RegimeError("g touches zero: the steady state localizes instead");
  return -1.0 / g.mean_inverse_square(0.0);
}

LocalizationProfile::LocalizationProfile(double pi_x, std::function<double(double)> tilde_g)
    : pi_x_(pi_x), tilde_g_(std::move(tilde_g)) {
  if (!(pi_x > 0.0 && pi_x < 1.0)) throw InvalidArgumentError("Pi_X must lie in (0, 1)");
  if (!tilde_g_) throw InvalidArgumentError("tilde_g must be set");
}

double LocalizationProfile::lower(double pi) const {
  if (!(pi >= 0.0) || pi > pi_x_) throw InvalidArgumentError("lower branch needs 0 <= Pi <= Pi_X");
  return (pi_x_ - pi) / (1.0 - pi) * tilde_g_(pi);
}

double LocalizationProfile::upper(double pi) const {
  if (pi < pi_x_ || !(pi <= 1.0)) throw InvalidArgumentError("upper branch needs Pi_X <= Pi <= 1");
  return (pi - pi_x_) / pi * tilde_g_(pi);
}

FormFactor LocalizationProfile::form_factor() const {
  const LocalizationProfile self = *this;
  return [self](double pi, double) { return self(pi); };
}

RescaledProblem rescale_equivalence(const LocalizationProfile& g) {
  const double pi_x = g.pi_x();
  RescaledProblem r{pi_x, {}, {}};
  const LocalizationProfile profile = g;
  r.direct = coefficients_pi([profile](double pi, double) { return profile.lower(std::clamp(pi, 0.0, profile.pi_x())); });
  r.mapped = coefficients_pi([profile, pi_x](double pt, double) { return profile.tilde_g(pi_x * pt); });
  return r;
}

AbsorptionSplit absorption_split(double pi0, double pi_x) {
  if (!(pi_x > 0.0 && pi_x < 1.0)) throw InvalidArgumentError("Pi_X must lie in (0, 1)");
  if (!(pi0 >= 0.0 && pi0 <= 1.0)) throw InvalidArgumentError("Pi_0 must lie in [0, 1]");
  if (pi0 <= pi_x) return {pi0 / pi_x, 1.0 - pi0 / pi_x};
  return {(1.0 - pi0) / (1.0 - pi_x), (pi0 - pi_x) / (1.0 - pi_x)};
}

std::pair<double, double> build_state_X(double pi_x) {
  if (!(pi_x > 0.0 && pi_x < 1.0)) throw InvalidArgumentError("Pi_X must lie in (0, 1)");
  return {std::sqrt(pi_x), std::sqrt(1.0 - pi_x)};
}

}  // namespace wzm
