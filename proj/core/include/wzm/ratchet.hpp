#pragma once

// Reduced periodic Fokker-Planck problems in the asymptotic coordinate, form
// factor profiles g(x, t) = C(t) (1 + F(x) f(t)), ratchet currents, the Seebeck
// steady state and the dynamic localization scenario.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "wzm/fp_solver.hpp"

namespace wzm {

/// Periodic spatial factor F(x) = mean + sum_k (sin_k sin(k q x) + cos_k cos(k q x)), q = 2 pi / L.
struct SpatialModes {
  double mean = 0.0;
  std::vector<double> sin_coeffs;  // k = 1, 2, ...
  std::vector<double> cos_coeffs;
};

/// Temporal factor f(t); the switching shapes change value at t = k pi.
enum class Temporal {
  constant,  // f = value
  on_off,    // (sign(sin t) - 1) / 2: 0 on (0, pi), -1 on (pi, 2 pi)
  sign_sin,  // sign(sin t)
};

const char* to_string(Temporal f);

class GProfile {
 public:
  /// normalize = true fixes C(t) so that the spatial mean of g^2 is 1 at every t;
  /// false keeps C = 1. Throws InvalidArgumentError if g < 0 anywhere.
  GProfile(double period, SpatialModes spatial, Temporal temporal, double temporal_value = 1.0,
           bool normalize = true);

  double period() const { return period_; }
  const SpatialModes& spatial() const { return spatial_; }
  Temporal temporal() const { return temporal_; }
  bool normalized() const { return normalize_; }
  bool time_independent() const { return temporal_ == Temporal::constant; }

  double F(double x) const;
  double f(double t) const;
  /// Normalizer for the phase active just after t.
  double C(double t) const;
  double operator()(double x, double t) const { return C(t) * (1.0 + F(x) * f(t)); }

  /// Distinct values f takes; one per switching phase.
  std::vector<double> phase_values() const;
  /// C for a given value of f.
  double normalizer(double f_value) const;
  /// Spatial means over one period by quadrature.
  double mean_square(double t) const;
  double mean_inverse_square(double t) const;
  /// Minimum of g over all phases (dense sampling).
  double min_value() const;
  std::string describe() const;

 private:
  double period_;
  SpatialModes spatial_;
  Temporal temporal_;
  double temporal_value_;
  bool normalize_;
  double c_first_ = 1.0;   // phase (0, pi)
  double c_second_ = 1.0;  // phase (pi, 2 pi)
};

/// a (sin x + b sin 2x), a = -0.6, b = -0.5, on-off switching, L = 2 pi.
GProfile reference_profile_spacetime(bool normalize = true);
/// a sin x, a = -0.8, time independent, L = 2 pi.
GProfile reference_profile_seebeck(bool normalize = true);
/// a sin x, a = -0.8, f = sign(sin t), L = 2 pi.
GProfile alternate_profile(bool normalize = true);
/// g = 1.
GProfile uniform_profile();
/// Space-independent switching: F = amplitude, f = sign(sin t).
GProfile temporal_profile(double amplitude, bool normalize = true);
/// Random time-independent profile with three modes and 1 + F >= floor.
GProfile random_static_profile(std::uint64_t seed, double floor = 0.25);

enum class Side { left, right };

/// Left: mu = -g^2, right: mu = +g^2; D = g^2 / 2 on both sides.
FpCoefficients asymptotic_coefficients(const GProfile& g, Side side);

/// Time series of the space-integrated current and its running average.
struct CurrentRecord {
  std::vector<double> times;
  std::vector<double> current;
  /// (1/t) times the time integral of the current, accumulated at every solver step.
  std::vector<double> running_average;
};

/// (1/t) integral_0^t of the recorded current by the trapezoid rule.
double moving_average(const CurrentRecord& record, double t);

struct ReducedOptions {
  std::size_t cells = 128;
  /// 400 switching periods of length pi.
  double t_end = 400.0 * kPi;
  Side side = Side::left;
  /// Initial profile exp(-x^2 / width), wrapped periodically.
  double initial_width = 0.1;
  double safety = 0.4;
  /// Current samples per switching period.
  int samples_per_period = 64;
  /// Field snapshots at these times (aligned to the sampling grid).
  std::vector<double> snapshot_times;
  double mass_tolerance = 1e-8;
};

struct ReducedResult {
  std::vector<Field> snapshots;
  Field final_field;
  CurrentRecord record;
  double final_average = 0.0;
  /// Running average moved by less than 1e-3 over the last 20% of the run.
  bool converged = false;
  double max_mass_drift = 0.0;
  long long clip_violations = 0;
  double dt = 0.0;
};

ReducedResult solve_reduced(const GProfile& g, const ReducedOptions& options = {});

/// -1 / <g^-2> for a time-independent profile (left side). Throws RegimeError if g touches 0.
double seebeck_steady_current(const GProfile& g);

/// g in the Pi chart vanishing at Pi_X:
///   lower branch (Pi <= Pi_X): (Pi_X - Pi) / (1 - Pi) * tilde_g(Pi)
///   upper branch (Pi >= Pi_X): (Pi - Pi_X) / Pi * tilde_g(Pi)
class LocalizationProfile {
 public:
  LocalizationProfile(double pi_x, std::function<double(double)> tilde_g);

  double pi_x() const { return pi_x_; }
  /// Throws InvalidArgumentError for Pi > Pi_X.
  double lower(double pi) const;
  /// Throws InvalidArgumentError for Pi < Pi_X.
  double upper(double pi) const;
  double operator()(double pi) const { return pi <= pi_x_ ? lower(pi) : upper(pi); }
  FormFactor form_factor() const;
  double tilde_g(double pi) const { return tilde_g_(pi); }

 private:
  double pi_x_;
  std::function<double(double)> tilde_g_;
};

/// The lower-branch problem on [0, Pi_X] mapped to the unit interval:
/// Pi~ = Pi / Pi_X, t~ = Pi_X^2 t, with D~ = 2 Pi~^2 (1 - Pi~)^2 tilde_g(Pi_X Pi~)^2.
struct RescaledProblem {
  double pi_x;
  FpCoefficients direct;  // Pi chart, lower branch
  FpCoefficients mapped;  // Pi~ chart
  double to_mapped(double pi) const { return pi / pi_x; }
  double to_direct(double pi_tilde) const { return pi_tilde * pi_x; }
  double mapped_time(double t) const { return pi_x * pi_x * t; }
  /// P(Pi) from P~(Pi~) at Pi~ = Pi / Pi_X.
  double density_back(double p_tilde) const { return p_tilde / pi_x; }
};

RescaledProblem rescale_equivalence(const LocalizationProfile& g);

/// Long-time absorption probabilities from Pi_0 with g vanishing at Pi_X.
/// Below Pi_X: {to |X>, to |0>} = {Pi_0 / Pi_X, 1 - Pi_0 / Pi_X}.
/// Above Pi_X: {to |X>, to |1>} = {(1 - Pi_0) / (1 - Pi_X), (Pi_0 - Pi_X) / (1 - Pi_X)}.
struct AbsorptionSplit {
  double to_x = 0.0;
  double to_basis = 0.0;
};
AbsorptionSplit absorption_split(double pi0, double pi_x);

/// Amplitudes of |X> = A|0> + B|1> with A = sqrt(Pi_X), B = sqrt(1 - Pi_X).
std::pair<double, double> build_state_X(double pi_x);

}  // namespace wzm
