#include "wzm/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wzm/error.hpp"
#include "text.hpp"

namespace wzm {

namespace {

// (Pi, 1 - Pi) from x without cancellation at either end.
void logistic_pair(double x, double& p, double& q) {
  p = 1.0 / (1.0 + std::exp(-2.0 * x));
  q = 1.0 / (1.0 + std::exp(2.0 * x));
}

double log_ratio_step(double num, double den, const char* which) {
  const double a = std::fabs(num);
  const double b = std::fabs(den);
  if (a == 0.0 || b == 0.0 || !std::isfinite(a) || !std::isfinite(b)) {
    throw SingularParameterError(std::string("projective outcome: step ") + which + " is infinite");
  }
  return std::log(a / b);
}

double clamp_step(double eps, bool& saturated) {
  if (eps > kStepSaturation) {
    saturated = true;
    return kStepSaturation;
  }
  if (eps < -kStepSaturation) {
    saturated = true;
    return -kStepSaturation;
  }
  return eps;
}

void require_outcome(int outcome) {
  if (outcome != 0 && outcome != 1) throw InvalidArgumentError("outcome must be 0 or 1");
}

}  // namespace

void validate(const MeasurementParams& p) {
  if (!(p.alpha > 0.0 && p.alpha < kHalfPi)) {
    throw InvalidArgumentError("alpha must lie in (0, pi/2), got " + detail::num(p.alpha));
  }
  if (!std::isfinite(p.delta) || std::fabs(p.delta) >= kHalfPi) {
    throw InvalidArgumentError("delta must be finite with |delta| < pi/2, got " + detail::num(p.delta));
  }
}

const char* to_string(Chart c) {
  switch (c) {
    case Chart::x:
      return "x";
    case Chart::theta:
      return "theta";
    case Chart::pi:
      return "pi";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Coordinates

StateCoordinate StateCoordinate::from_x(double x) {
  if (!std::isfinite(x)) throw InfiniteCoordinateError("x must be finite");
  return {Chart::x, x, 0.0};
}

StateCoordinate StateCoordinate::from_theta(double theta) {
  if (!(theta > 0.0 && theta < kHalfPi)) {
    throw InfiniteCoordinateError("theta must lie strictly inside (0, pi/2)");
  }
  return {Chart::theta, theta, kHalfPi - theta};
}

StateCoordinate StateCoordinate::from_pi(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InfiniteCoordinateError("Pi must lie strictly inside (0, 1)");
  return {Chart::pi, p, 1.0 - p};
}

StateCoordinate StateCoordinate::from_pi_pair(double p, double complement) {
  if (!(p > 0.0 && complement > 0.0) || !std::isfinite(p) || !std::isfinite(complement)) {
    throw InfiniteCoordinateError("Pi pair must have both parts positive");
  }
  return {Chart::pi, p, complement};
}

StateCoordinate StateCoordinate::from_theta_pair(double theta, double complement) {
  if (!(theta > 0.0 && complement > 0.0) || !std::isfinite(theta) || !std::isfinite(complement)) {
    throw InfiniteCoordinateError("theta pair must have both parts positive");
  }
  return {Chart::theta, theta, complement};
}

double StateCoordinate::x() const {
  switch (chart_) {
    case Chart::x:
      return value_;
    case Chart::theta:
      // tan(theta) = e^x; use sin of the smaller angle on each side.
      return std::log(std::sin(value_)) - std::log(std::sin(complement_));
    case Chart::pi:
      return 0.5 * (std::log(value_) - std::log(complement_));
  }
  return 0.0;
}

double StateCoordinate::theta() const {
  switch (chart_) {
    case Chart::x:
      return std::atan(std::exp(value_));
    case Chart::theta:
      return value_;
    case Chart::pi:
      return std::atan2(std::sqrt(value_), std::sqrt(complement_));
  }
  return 0.0;
}

double StateCoordinate::theta_complement() const {
  switch (chart_) {
    case Chart::x:
      return std::atan(std::exp(-value_));
    case Chart::theta:
      return complement_;
    case Chart::pi:
      return std::atan2(std::sqrt(complement_), std::sqrt(value_));
  }
  return 0.0;
}

double StateCoordinate::pi() const {
  switch (chart_) {
    case Chart::x:
      return 1.0 / (1.0 + std::exp(-2.0 * value_));
    case Chart::theta: {
      const double s = std::sin(value_);
      return s * s;
    }
    case Chart::pi:
      return value_;
  }
  return 0.0;
}

double StateCoordinate::pi_complement() const {
  switch (chart_) {
    case Chart::x:
      return 1.0 / (1.0 + std::exp(2.0 * value_));
    case Chart::theta: {
      const double s = std::sin(complement_);
      return s * s;
    }
    case Chart::pi:
      return complement_;
  }
  return 0.0;
}

StateCoordinate StateCoordinate::in(Chart target) const {
  if (target == chart_) return *this;
  switch (target) {
    case Chart::x:
      return {Chart::x, x(), 0.0};
    case Chart::theta:
      return {Chart::theta, theta(), theta_complement()};
    case Chart::pi:
      return {Chart::pi, pi(), pi_complement()};
  }
  return *this;
}

double x_of_theta(double theta) {
  if (!(theta > 0.0 && theta < kHalfPi)) {
    throw InfiniteCoordinateError("x_of_theta: theta outside (0, pi/2) maps to infinite x");
  }
  // atanh(-cos 2 theta) = ln tan theta
  return std::log(std::sin(theta)) - std::log(std::cos(theta));
}

double theta_of_x(double x) {
  if (!std::isfinite(x)) throw InfiniteCoordinateError("theta_of_x: x must be finite");
  return std::atan(std::exp(x));
}

double pi_of_x(double x) {
  if (!std::isfinite(x)) throw InfiniteCoordinateError("pi_of_x: x must be finite");
  double p = 0.0;
  double q = 0.0;
  logistic_pair(x, p, q);
  return p;
}

double x_of_pi(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InfiniteCoordinateError("x_of_pi: Pi outside (0, 1) maps to infinite x");
  // atanh(2p - 1) = 1/2 ln(p / (1 - p))
  return 0.5 * (std::log(p) - std::log1p(-p));
}

// ---------------------------------------------------------------------------
// Amplitudes and operators

double AmplitudeMatrix::norm_squared() const {
  double s = 0.0;
  for (const auto& row : b) {
    for (double v : row) s += v * v;
  }
  return s;
}

AmplitudeMatrix amplitude_matrix(double theta, const MeasurementParams& p) {
  if (!(theta >= 0.0 && theta <= kHalfPi)) throw InvalidArgumentError("theta must lie in [0, pi/2]");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  AmplitudeMatrix m;
  m.b[0] = {c * std::cos(p.alpha), s * std::cos(p.delta + p.alpha)};
  m.b[1] = {c * std::sin(p.alpha), s * std::sin(p.delta + p.alpha)};
  return m;
}

double KrausPair::completeness_defect() const {
  return std::max(std::fabs(b0[0] * b0[0] + b1[0] * b1[0] - 1.0), std::fabs(b0[1] * b0[1] + b1[1] * b1[1] - 1.0));
}

KrausPair kraus_pair(const MeasurementParams& p) {
  KrausPair k;
  k.b0 = {std::cos(p.alpha), std::cos(p.delta + p.alpha)};
  k.b1 = {std::sin(p.alpha), std::sin(p.delta + p.alpha)};
  return k;
}

// ---------------------------------------------------------------------------
// Probabilities and steps

namespace {

OutcomeProbabilities probabilities_from_pair(double pi, double pi_c, const MeasurementParams& p) {
  const double ca = std::cos(p.alpha);
  const double sa = std::sin(p.alpha);
  const double cad = std::cos(p.delta + p.alpha);
  const double sad = std::sin(p.delta + p.alpha);
  return {pi * cad * cad + pi_c * ca * ca, pi * sad * sad + pi_c * sa * sa};
}

}  // namespace

OutcomeProbabilities outcome_probabilities(const StateCoordinate& s, const MeasurementParams& p) {
  return probabilities_from_pair(s.pi(), s.pi_complement(), p);
}

OutcomeProbabilities outcome_probabilities_theta(double theta, const MeasurementParams& p) {
  const double c2 = std::cos(theta) * std::cos(theta);
  const double s2 = std::sin(theta) * std::sin(theta);
  const double ca = std::cos(p.alpha);
  const double sa = std::sin(p.alpha);
  const double cad = std::cos(p.delta + p.alpha);
  const double sad = std::sin(p.delta + p.alpha);
  return {ca * ca * c2 + s2 * cad * cad, c2 * sa * sa + s2 * sad * sad};
}

OutcomeProbabilities outcome_probabilities_x(double x, const MeasurementParams& p) {
  double pi = 0.0;
  double pi_c = 0.0;
  logistic_pair(x, pi, pi_c);
  return probabilities_from_pair(pi, pi_c, p);
}

StepSizes step_sizes(const MeasurementParams& p) {
  // atanh(2c/(c + c_a) - 1) = 1/2 ln(c / c_a) with c = cos^2(alpha + delta), c_a = cos^2(alpha).
  validate(p);
  StepSizes s;
  s.eps0 = clamp_step(log_ratio_step(std::cos(p.alpha + p.delta), std::cos(p.alpha), "eps0"), s.saturated);
  s.eps1 = clamp_step(log_ratio_step(std::sin(p.alpha + p.delta), std::sin(p.alpha), "eps1"), s.saturated);
  return s;
}

double step_size_at_x(double x, const MeasurementParams& p, int outcome) {
  require_outcome(outcome);
  double pi = 0.0;
  double pi_c = 0.0;
  logistic_pair(x, pi, pi_c);
  const OutcomeProbabilities probs = probabilities_from_pair(pi, pi_c, p);
  const double factor_one = outcome == 0 ? std::cos(p.alpha + p.delta) : std::sin(p.alpha + p.delta);
  const double factor_zero = outcome == 0 ? std::cos(p.alpha) : std::sin(p.alpha);
  const double prob = probs[outcome];
  if (prob <= 0.0) throw SingularParameterError("outcome has zero probability");
  // z = (1 + tanh x) f1^2 / p - 1 = 2 Pi' - 1, where Pi' = Pi f1^2 / p and 1 - Pi' = (1 - Pi) f0^2 / p.
  // atanh(z) = 1/2 ln((1 + z) / (1 - z)) = 1/2 ln(Pi' / (1 - Pi')).
  const double pi_next = pi * factor_one * factor_one / prob;
  const double pi_next_c = pi_c * factor_zero * factor_zero / prob;
  if (pi_next <= 0.0 || pi_next_c <= 0.0) throw SingularParameterError("projective outcome at this position");
  bool saturated = false;
  return clamp_step(0.5 * (std::log(pi_next) - std::log(pi_next_c)) - x, saturated);
}

StateCoordinate post_measurement_state(const StateCoordinate& s, const MeasurementParams& p, int outcome) {
  require_outcome(outcome);
  const KrausPair k = kraus_pair(p);
  const auto& op = outcome == 0 ? k.b0 : k.b1;
  const double prob = outcome_probabilities(s, p)[outcome];
  if (prob <= 0.0) throw SingularParameterError("post_measurement_state: outcome has zero probability");

  switch (s.chart()) {
    case Chart::theta: {
      // Amplitudes (cos theta, sin theta) -> B_j (cos theta, sin theta) / sqrt(p_j).
      const double norm = std::sqrt(prob);
      const double c_new = std::fabs(std::sin(s.theta_complement()) * op[0]) / norm;
      const double s_new = std::fabs(std::sin(s.theta()) * op[1]) / norm;
      return StateCoordinate::from_theta_pair(std::atan2(s_new, c_new), std::atan2(c_new, s_new));
    }
    case Chart::pi:
    case Chart::x: {
      const double pi_new = s.pi() * op[1] * op[1] / prob;
      const double pi_new_c = s.pi_complement() * op[0] * op[0] / prob;
      const StateCoordinate out = StateCoordinate::from_pi_pair(pi_new, pi_new_c);
      return s.chart() == Chart::x ? out.in(Chart::x) : out;
    }
  }
  return s;
}

MeanStepComponents mean_step_components(double x, const MeasurementParams& p) {
  const StepSizes eps = step_sizes(p);
  const OutcomeProbabilities probs = outcome_probabilities_x(x, p);
  return {eps.eps0 * probs.p0, eps.eps1 * probs.p1};
}

double mean_step(double x, const MeasurementParams& p) {
  const MeanStepComponents m = mean_step_components(x, p);
  return m.mu0 + m.mu1;
}

double diffusion_step(double x, const MeasurementParams& p) {
  const StepSizes eps = step_sizes(p);
  const OutcomeProbabilities probs = outcome_probabilities_x(x, p);
  return 0.5 * (probs.p0 * eps.eps0 * eps.eps0 + probs.p1 * eps.eps1 * eps.eps1);
}

}  // namespace wzm
