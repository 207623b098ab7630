#pragma once

// Fokker-Planck equation dP/dt = -dJ/dy, J = mu P - d(D P)/dy, in any of the
// three charts, solved by finite volumes.
//
// Face fluxes use exponential fitting on Q = D P with the local ratio w = mu / D:
//   J_f = (1/h) [B(-w h) Q_i - B(w h) Q_{i+1}],  B(z) = z / (e^z - 1),
// which is exact for constant w and J across the face, reduces to the plain
// divergence form -(Q_{i+1} - Q_i)/h when mu = 0, and keeps the update
// positivity preserving. Time stepping is SSP-RK2.

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "wzm/measurement.hpp"

namespace wzm {

/// Form factor g(y, t) in the chart variable y.
using FormFactor = std::function<double(double y, double t)>;
using Coefficient = std::function<double(double y, double t)>;

struct FpCoefficients {
  Chart chart = Chart::x;
  Coefficient drift;
  Coefficient diffusion;
  /// Set when neither function depends on t; the solver then builds its operator once.
  bool time_independent = true;
};

/// mu = g^2 tanh x, D = g^2 / 2.
FpCoefficients coefficients_x(FormFactor g, bool time_independent = true);
/// mu = -g^2 sin(4 theta) / 8, D = g^2 sin^2(2 theta) / 8.
FpCoefficients coefficients_theta(FormFactor g, bool time_independent = true);
/// mu = 0, D = 2 Pi^2 (1 - Pi)^2 g^2.
FpCoefficients coefficients_pi(FormFactor g, bool time_independent = true);

/// Smooth change of variable y(x) with its first two derivatives and inverse.
struct CoordinateMap {
  Chart from = Chart::x;
  Chart to = Chart::x;
  std::function<double(double)> forward;
  std::function<double(double)> first;
  std::function<double(double)> second;
  std::function<double(double)> inverse;
  /// Interval of the source variable on which monotonicity is checked.
  double domain_lo = -20.0;
  double domain_hi = 20.0;
};

CoordinateMap identity_map(Chart chart, double lo = -20.0, double hi = 20.0);
CoordinateMap x_to_pi_map();
CoordinateMap x_to_theta_map();

/// mu_y = mu y' + D y'', D_y = D y'^2, expressed in y. Throws InvalidArgumentError
/// if the map is not strictly monotone on its domain or the charts do not match.
FpCoefficients change_coordinates(const FpCoefficients& coeffs, const CoordinateMap& map);

/// V(y, t) = -integral_0^y mu(s, t) ds by adaptive Gauss-Kronrod quadrature.
std::function<double(double y, double t)> potential(const FpCoefficients& coeffs, double tolerance = 1e-10);

/// Exact density for g = 1 in the x chart started from a point mass at X:
/// (2 pi t)^{-1/2} cosh(x) / cosh(X) exp(-(t^2 + (x - X)^2) / (2t)).
double analytic_solution(double t, double x, double x_start);

/// Mean of analytic_solution over [x - h/2, x + h/2] (7-point Gauss rule).
double analytic_cell_average(double t, double x, double h, double x_start);

/// [X - 15 sqrt(t_end) - 5, X + 15 sqrt(t_end) + 5]
std::pair<double, double> truncated_domain(double x_start, double t_end);

enum class Boundary { zero_flux, periodic, absorbing };

const char* to_string(Boundary b);

class Field {
 public:
  /// n cells of width (hi - lo) / n with centred nodes.
  static Field cell_centered(Chart chart, double lo, double hi, std::size_t n, Boundary boundary);
  /// n + 1 cells whose nodes are a + (b - a) i / n, i = 0..n; the end cells straddle a and b.
  /// Suits charts whose diffusion vanishes at the ends, where those cells collect absorbed mass.
  static Field vertex_centered(Chart chart, double a, double b, std::size_t n, Boundary boundary);

  Chart chart() const { return chart_; }
  Boundary boundary() const { return boundary_; }
  std::size_t size() const { return nodes_.size(); }
  double width() const { return width_; }
  const std::vector<double>& nodes() const { return nodes_; }
  /// Position of face i, the left face of cell i (i = 0..n).
  double face(std::size_t i) const;
  double lo() const { return face(0); }
  double hi() const { return face(size()); }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  /// Face fluxes from the last solver update, size n + 1; empty before any update.
  const std::vector<double>& flux() const { return flux_; }
  std::vector<double>& flux() { return flux_; }

  double t = 0.0;
  /// Mass that left through absorbing walls.
  double absorbed_low = 0.0;
  double absorbed_high = 0.0;

  double mass() const;
  /// Sum of f(node) P h.
  double moment(const std::function<double(double)>& f) const;
  /// Replaces values by f(node) and rescales them to unit mass.
  void fill_normalized(const std::function<double(double)>& f);

 private:
  Chart chart_ = Chart::x;
  Boundary boundary_ = Boundary::zero_flux;
  double width_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> flux_;
};

/// Face weights of the flux at one instant: J_f = a_f P_left - b_f P_right.
class FluxOperator {
 public:
  FluxOperator(const Field& geometry, const FpCoefficients& coeffs, double t);

  /// Fluxes at all n + 1 faces (wall faces per the boundary condition).
  void fluxes(const std::vector<double>& p, std::vector<double>& j) const;
  /// dP/dt and the fluxes it came from.
  void rate(const std::vector<double>& p, std::vector<double>& dpdt, std::vector<double>& j) const;
  /// safety * min(h^2 / (2 max D), h / max|mu|), capped by the positivity limit of one Euler stage.
  double stable_dt(double safety) const;

 private:
  Boundary boundary_;
  double h_;
  std::vector<double> a_;
  std::vector<double> b_;
  double max_d_ = 0.0;
  double max_mu_ = 0.0;
};

struct DtControl {
  double safety = 0.4;
  /// Fixed step; 0 selects it from the coefficients. A fixed step above the stable one raises CflError.
  double dt = 0.0;
  /// Snapshot times in (t0, t_end]; t_end is always included. Steps land exactly on them.
  std::vector<double> output_times;
  /// Relative mass drift that raises MassDriftError (zero-flux and periodic runs).
  double mass_tolerance = 1e-8;
  /// Negative values above -clip_tolerance are clipped silently, below it they are counted.
  double clip_tolerance = 1e-12;
};

struct SolveAudit {
  long long steps = 0;
  double dt = 0.0;
  double initial_mass = 0.0;
  double final_mass = 0.0;
  /// max over steps of |mass + absorbed - initial| / initial
  double max_mass_drift = 0.0;
  double min_value = 0.0;
  long long clipped = 0;
  long long clip_violations = 0;
};

struct Solution {
  std::vector<Field> snapshots;
  SolveAudit audit;
};

Solution solve(const Field& initial, const FpCoefficients& coeffs, double t_end, const DtControl& control = {});

/// One SSP-RK2 step of size dt with a fixed operator; updates values, flux, t and the absorbed tallies.
void ssp_rk2_step(Field& field, const FluxOperator& op, double dt);

/// Integral of J: interior faces weigh h, absorbing wall faces h / 2, the periodic seam once.
double drift_velocity(const Field& field);

}  // namespace wzm
