#include "wzm/schedule.hpp"

#include <cmath>
#include <set>
#include <utility>

#include "wzm/error.hpp"

namespace wzm {

double ProfileSpec::get(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

Schedule::Schedule(StepFunction alpha, StepFunction g_delta, StepFunction g_tau, double delta_scale)
    : alpha_(std::move(alpha)), g_delta_(std::move(g_delta)), g_tau_(std::move(g_tau)), delta_scale_(delta_scale) {
  if (!alpha_ || !g_delta_ || !g_tau_) throw InvalidArgumentError("schedule functions must be set");
  if (!std::isfinite(delta_scale_) || delta_scale_ < 0.0) {
    throw InvalidArgumentError("delta_scale must be finite and non-negative");
  }
}

Schedule Schedule::constant(double alpha, double delta_scale) {
  return {[alpha](long long, double) { return alpha; }, [](long long, double) { return 1.0; },
          [](long long, double) { return 1.0; }, delta_scale};
}

StepValues Schedule::at(long long step, double x) const {
  const double g_tau = g_tau_(step, x);
  if (!(g_tau > 0.0)) throw InvalidArgumentError("g_tau must be positive");
  StepValues v;
  v.params.alpha = alpha_(step, x);
  v.params.delta = delta_scale_ * g_delta_(step, x);
  v.tau = delta_scale_ * delta_scale_ * g_tau;
  return v;
}

double Schedule::effective_g(long long step, double x) const {
  const double g_tau = g_tau_(step, x);
  if (!(g_tau > 0.0)) throw InvalidArgumentError("g_tau must be positive");
  return g_delta_(step, x) / std::sqrt(g_tau);
}

double localization_form_factor(double x, double pi_x, double tilde_g) {
  if (!(pi_x > 0.0 && pi_x < 1.0)) throw InvalidArgumentError("pi_x must lie in (0, 1)");
  const double x_barrier = x_of_pi(pi_x);
  // Pi_X - Pi(x) = (tanh X - tanh x) / 2 = sinh(X - x) / (2 cosh X cosh x); exact zero at x = X.
  const double gap = std::sinh(x_barrier - x) / (2.0 * std::cosh(x_barrier) * std::cosh(x));
  if (gap >= 0.0) {
    const double one_minus_pi = 1.0 / (1.0 + std::exp(2.0 * x));
    return gap / one_minus_pi * tilde_g;
  }
  const double pi = 1.0 / (1.0 + std::exp(-2.0 * x));
  return -gap / pi * tilde_g;
}

namespace {

void check_keys(const ProfileSpec& spec, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : spec.params) {
    if (!allowed.count(key)) {
      throw InvalidArgumentError("profile '" + spec.name + "' does not accept parameter '" + key + "'");
    }
    if (!std::isfinite(value)) throw InvalidArgumentError("profile parameter '" + key + "' must be finite");
  }
}

}  // namespace

const std::vector<ProfileInfo>& profile_registry() {
  static const std::vector<ProfileInfo> registry = {
      {"constant", {"value"}, "value everywhere"},
      {"localization", {"pi_x", "tilde_g"}, "vanishes linearly in Pi at Pi = pi_x"},
      {"sine", {"mean", "amplitude", "wavelength", "phase"}, "mean + amplitude sin(2 pi x / wavelength + phase)"},
      {"alternating", {"first", "second", "period_steps"}, "switches between two values every period_steps steps"},
  };
  return registry;
}

StepFunction make_profile(const ProfileSpec& spec) {
  if (spec.name == "constant") {
    check_keys(spec, {"value"});
    const double value = spec.get("value", 1.0);
    return [value](long long, double) { return value; };
  }
  if (spec.name == "localization") {
    check_keys(spec, {"pi_x", "tilde_g"});
    const double pi_x = spec.get("pi_x", 0.5);
    const double tilde_g = spec.get("tilde_g", 1.0);
    if (!(pi_x > 0.0 && pi_x < 1.0)) throw InvalidArgumentError("localization: pi_x must lie in (0, 1)");
    return [pi_x, tilde_g](long long, double x) { return localization_form_factor(x, pi_x, tilde_g); };
  }
  if (spec.name == "sine") {
    check_keys(spec, {"mean", "amplitude", "wavelength", "phase"});
    const double mean = spec.get("mean", 1.0);
    const double amplitude = spec.get("amplitude", 0.5);
    const double wavelength = spec.get("wavelength", 2.0 * kPi);
    const double phase = spec.get("phase", 0.0);
    if (!(wavelength > 0.0)) throw InvalidArgumentError("sine: wavelength must be positive");
    return [=](long long, double x) { return mean + amplitude * std::sin(2.0 * kPi * x / wavelength + phase); };
  }
  if (spec.name == "alternating") {
    check_keys(spec, {"first", "second", "period_steps"});
    const double first = spec.get("first", 1.0);
    const double second = spec.get("second", 0.5);
    const auto period = static_cast<long long>(spec.get("period_steps", 1.0));
    if (period < 1) throw InvalidArgumentError("alternating: period_steps must be >= 1");
    return [=](long long step, double) { return ((step - 1) / period) % 2 == 0 ? first : second; };
  }
  throw InvalidArgumentError("unknown profile '" + spec.name + "'");
}

Schedule make_schedule(const ScheduleSpec& spec) {
  return {make_profile(spec.alpha), make_profile(spec.g_delta), make_profile(spec.g_tau), spec.delta_scale};
}

}  // namespace wzm
