#pragma once

// Step- and state-conditioned measurement schedules.
//
// A schedule fixes, for step n taken from position x, the angle alpha_n and the
// form factors g_delta, g_tau; the realized step uses
//   delta_n = delta_scale * g_delta(n, x),   tau_n = delta_scale^2 * g_tau(n, x).
// Schedules are built from declarative ProfileSpecs so that configurations can
// be serialized; a registry maps profile names to evaluators.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "wzm/measurement.hpp"

namespace wzm {

/// f(n, x) evaluated for a step starting at position x.
using StepFunction = std::function<double(long long step, double x)>;

/// Named profile plus numeric parameters, e.g. {"localization", {{"pi_x", 0.7}}}.
struct ProfileSpec {
  std::string name = "constant";
  std::map<std::string, double> params;

  double get(const std::string& key, double fallback) const;
};

struct ScheduleSpec {
  ProfileSpec alpha{"constant", {{"value", kPi / 4.0}}};
  ProfileSpec g_delta{"constant", {{"value", 1.0}}};
  ProfileSpec g_tau{"constant", {{"value", 1.0}}};
  double delta_scale = 0.05;
};

struct StepValues {
  MeasurementParams params;
  double tau = 0.0;
};

class Schedule {
 public:
  Schedule(StepFunction alpha, StepFunction g_delta, StepFunction g_tau, double delta_scale);

  /// Constant alpha, g_delta = g_tau = 1.
  static Schedule constant(double alpha, double delta_scale);

  /// Per-step values; throws InvalidArgumentError if g_tau <= 0.
  StepValues at(long long step, double x) const;

  double delta_scale() const { return delta_scale_; }

  /// Effective continuum form factor g = g_delta / sqrt(g_tau), i.e. the g whose
  /// square multiplies drift and diffusion in the Fokker-Planck limit.
  double effective_g(long long step, double x) const;

 private:
  StepFunction alpha_;
  StepFunction g_delta_;
  StepFunction g_tau_;
  double delta_scale_;
};

/// Evaluator factory for a named profile. Throws InvalidArgumentError for unknown
/// names or parameters.
StepFunction make_profile(const ProfileSpec& spec);

Schedule make_schedule(const ScheduleSpec& spec);

/// Registered profile names with the parameters each accepts.
struct ProfileInfo {
  std::string name;
  std::vector<std::string> params;
  std::string description;
};

const std::vector<ProfileInfo>& profile_registry();

/// Form factor vanishing at Pi = pi_x, in the x chart:
///   Pi < pi_x: (pi_x - Pi) / (1 - Pi) * tilde_g
///   Pi > pi_x: (Pi - pi_x) / Pi * tilde_g
double localization_form_factor(double x, double pi_x, double tilde_g);

}  // namespace wzm
