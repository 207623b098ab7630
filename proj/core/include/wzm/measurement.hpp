#pragma once

// Single-step weak measurement of a qubit through a rotated ancilla.
//
// The qubit |q> = cos(theta)|0> + sin(theta)|1> is entangled with an ancilla by a
// conditional rotation of angle delta followed by an unconditional rotation of
// angle alpha; the ancilla is then measured projectively in the computational
// basis. Each outcome moves the qubit along the |0>-|1> line. Three equivalent
// charts describe a position on that line:
//
//   x     = atanh(-cos 2 theta)   in (-inf, +inf)   (parabolic coordinate)
//   theta                         in (0, pi/2)
//   Pi    = sin^2 theta = (1 + tanh x) / 2 in (0, 1)
//
// In the x chart the walk has outcome-dependent but position-independent steps.

#include <array>
#include <cstdint>

namespace wzm {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHalfPi = kPi / 2.0;

/// Rotation angles (radians) of one weak measurement.
struct MeasurementParams {
  double alpha = kPi / 4.0;
  double delta = 0.0;
};

/// Throws InvalidArgumentError unless alpha is in (0, pi/2) and delta finite with |delta| < pi/2.
void validate(const MeasurementParams& p);

enum class Chart : std::uint8_t { x, theta, pi };

const char* to_string(Chart c);

/// A point on the |0>-|1> line, tagged with the chart its value lives in.
///
/// The bounded charts also keep the distance to the upper end (pi/2 - theta,
/// 1 - Pi). Without it, positions with |x| > ~18 collapse onto the basis states
/// in double precision and conversions back to x lose all accuracy.
class StateCoordinate {
 public:
  static StateCoordinate from_x(double x);
  /// theta must lie strictly inside (0, pi/2).
  static StateCoordinate from_theta(double theta);
  /// p must lie strictly inside (0, 1).
  static StateCoordinate from_pi(double p);
  /// Pi chart value given as the pair (Pi, 1 - Pi); both must be positive.
  static StateCoordinate from_pi_pair(double p, double complement);
  /// theta chart value given as the pair (theta, pi/2 - theta); both must be positive.
  static StateCoordinate from_theta_pair(double theta, double complement);

  Chart chart() const { return chart_; }
  /// Value in the coordinate's own chart.
  double value() const { return value_; }

  double x() const;
  double theta() const;
  double pi() const;
  /// pi/2 - theta, accurate near the |1> end.
  double theta_complement() const;
  /// 1 - Pi, accurate near the |1> end.
  double pi_complement() const;

  StateCoordinate in(Chart target) const;

 private:
  StateCoordinate(Chart c, double v, double complement) : chart_(c), value_(v), complement_(complement) {}

  Chart chart_;
  double value_;
  double complement_;  // unused for the x chart
};

// Chart maps on plain doubles. They throw InfiniteCoordinateError at the basis states.
double x_of_theta(double theta);
double theta_of_x(double x);
double pi_of_x(double x);
double x_of_pi(double p);

/// Coefficients b_ij of |q> (x) |0>  ->  sum_i sum_j b_ij |j> (x) |i>.
/// Row i is the ancilla outcome, column j the qubit basis state.
struct AmplitudeMatrix {
  std::array<std::array<double, 2>, 2> b{};

  double operator()(int i, int j) const { return b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  double norm_squared() const;
};

AmplitudeMatrix amplitude_matrix(double theta, const MeasurementParams& p);

/// Diagonal measurement operators B0 = diag(b11, b12), B1 = diag(b21, b22) in the qubit basis.
struct KrausPair {
  std::array<double, 2> b0{};  // (<0|B0|0>, <1|B0|1>)
  std::array<double, 2> b1{};  // (<0|B1|0>, <1|B1|1>)

  /// Largest entry of |sum_j B_j^T B_j - 1|.
  double completeness_defect() const;
};

KrausPair kraus_pair(const MeasurementParams& p);

struct OutcomeProbabilities {
  double p0 = 0.0;
  double p1 = 0.0;

  double operator[](int outcome) const { return outcome == 0 ? p0 : p1; }
};

OutcomeProbabilities outcome_probabilities(const StateCoordinate& s, const MeasurementParams& p);
/// Same quantity from the amplitude (theta chart) formulas.
OutcomeProbabilities outcome_probabilities_theta(double theta, const MeasurementParams& p);
/// Same quantity from the Pi-weighted x chart formulas.
OutcomeProbabilities outcome_probabilities_x(double x, const MeasurementParams& p);

struct StepSizes {
  double eps0 = 0.0;
  double eps1 = 0.0;
  /// True when either step was clamped at the atanh saturation bound.
  bool saturated = false;

  double operator[](int outcome) const { return outcome == 0 ? eps0 : eps1; }
};

/// |eps| beyond atanh(1 - 1e-15) is clamped and flagged.
inline constexpr double kStepSaturation = 17.6673982905558;

/// Steps in x for each outcome. They do not depend on the current position.
/// Throws SingularParameterError when one outcome is a projective collapse.
StepSizes step_sizes(const MeasurementParams& p);

/// Step for `outcome` evaluated through the position-dependent update formula
/// atanh((1 + tanh x) c^2 / p_outcome(x) - 1) - x. It must agree with step_sizes();
/// it is kept as an independent check.
double step_size_at_x(double x, const MeasurementParams& p, int outcome);

/// State after observing `outcome`, computed from the amplitudes
/// (sin theta' = sin theta * cos(alpha + delta) / sqrt(p0) for outcome 0).
/// The result is expressed in the chart of `s`.
StateCoordinate post_measurement_state(const StateCoordinate& s, const MeasurementParams& p, int outcome);

struct MeanStepComponents {
  double mu0 = 0.0;
  double mu1 = 0.0;
};

/// mu_i(x) = eps_i p_i(x)
MeanStepComponents mean_step_components(double x, const MeasurementParams& p);
/// mu(x) = sum_i eps_i p_i(x); small-delta limit delta^2 tanh x.
double mean_step(double x, const MeasurementParams& p);
/// D(x) = 1/2 sum_i p_i(x) eps_i^2; small-delta limit delta^2 / 2.
double diffusion_step(double x, const MeasurementParams& p);

}  // namespace wzm
