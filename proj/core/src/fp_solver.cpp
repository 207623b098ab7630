#include "wzm/fp_solver.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "wzm/error.hpp"
#include "text.hpp"

namespace wzm {

namespace {

void require_g(const FormFactor& g) {
  if (!g) throw InvalidArgumentError("form factor must be set");
}

// ln cosh without overflow.
double log_cosh(double x) {
  const double a = std::fabs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

// Bernoulli function z / (e^z - 1).
double bernoulli(double z) {
  if (std::fabs(z) < 1e-6) return 1.0 - 0.5 * z + z * z / 12.0;
  return z / std::expm1(z);
}

}  // namespace

FpCoefficients coefficients_x(FormFactor g, bool time_independent) {
  require_g(g);
  FpCoefficients c;
  c.chart = Chart::x;
  c.drift = [g](double x, double t) {
    const double v = g(x, t);
    return v * v * std::tanh(x);
  };
  c.diffusion = [g](double x, double t) {
    const double v = g(x, t);
    return 0.5 * v * v;
  };
  c.time_independent = time_independent;
  return c;
}

FpCoefficients coefficients_theta(FormFactor g, bool time_independent) {
  require_g(g);
  FpCoefficients c;
  c.chart = Chart::theta;
  c.drift = [g](double th, double t) {
    const double v = g(th, t);
    return -v * v * std::sin(4.0 * th) / 8.0;
  };
  c.diffusion = [g](double th, double t) {
    const double v = g(th, t);
    const double s = std::sin(2.0 * th);
    return v * v * s * s / 8.0;
  };
  c.time_independent = time_independent;
  return c;
}

FpCoefficients coefficients_pi(FormFactor g, bool time_independent) {
  require_g(g);
  FpCoefficients c;
  c.chart = Chart::pi;
  c.drift = [](double, double) { return 0.0; };
  c.diffusion = [g](double p, double t) {
    const double v = g(p, t);
    const double q = p * (1.0 - p);
    return 2.0 * q * q * v * v;
  };
  c.time_independent = time_independent;
  return c;
}

CoordinateMap identity_map(Chart chart, double lo, double hi) {
  CoordinateMap m;
  m.from = chart;
  m.to = chart;
  m.forward = [](double x) { return x; };
  m.first = [](double) { return 1.0; };
  m.second = [](double) { return 0.0; };
  m.inverse = [](double y) { return y; };
  m.domain_lo = lo;
  m.domain_hi = hi;
  return m;
}

CoordinateMap x_to_pi_map() {
  CoordinateMap m;
  m.from = Chart::x;
  m.to = Chart::pi;
  m.forward = [](double x) { return 1.0 / (1.0 + std::exp(-2.0 * x)); };
  // dPi/dx = 2 Pi (1 - Pi), d2Pi/dx2 = -4 Pi (1 - Pi) (2 Pi - 1)
  m.first = [](double x) {
    const double p = 1.0 / (1.0 + std::exp(-2.0 * x));
    const double q = 1.0 / (1.0 + std::exp(2.0 * x));
    return 2.0 * p * q;
  };
  m.second = [](double x) {
    const double p = 1.0 / (1.0 + std::exp(-2.0 * x));
    const double q = 1.0 / (1.0 + std::exp(2.0 * x));
    return -4.0 * p * q * (p - q);
  };
  m.inverse = [](double p) { return x_of_pi(p); };
  return m;
}

CoordinateMap x_to_theta_map() {
  CoordinateMap m;
  m.from = Chart::x;
  m.to = Chart::theta;
  m.forward = [](double x) { return std::atan(std::exp(x)); };
  // dtheta/dx = sin(2 theta) / 2 = 1 / (2 cosh x), d2theta/dx2 = -tanh(x) / (2 cosh x)
  m.first = [](double x) { return 0.5 / std::cosh(x); };
  m.second = [](double x) { return -0.5 * std::tanh(x) / std::cosh(x); };
  m.inverse = [](double th) { return x_of_theta(th); };
  return m;
}

FpCoefficients change_coordinates(const FpCoefficients& coeffs, const CoordinateMap& map) {
  if (coeffs.chart != map.from) throw InvalidArgumentError("coordinate map starts in a different chart");
  if (!map.forward || !map.first || !map.second || !map.inverse) {
    throw InvalidArgumentError("coordinate map is incomplete");
  }
  if (!(map.domain_hi > map.domain_lo)) throw InvalidArgumentError("coordinate map domain is empty");
  constexpr int kSamples = 1001;
  int sign = 0;
  for (int i = 0; i < kSamples; ++i) {
    const double x = map.domain_lo + (map.domain_hi - map.domain_lo) * i / (kSamples - 1);
    const double d = map.first(x);
    const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (s == 0 || (sign != 0 && s != sign)) {
      throw InvalidArgumentError("coordinate map is not strictly monotone at " + detail::num(x));
    }
    sign = s;
  }
  FpCoefficients out;
  out.chart = map.to;
  out.time_independent = coeffs.time_independent;
  out.drift = [coeffs, map](double y, double t) {
    const double x = map.inverse(y);
    return coeffs.drift(x, t) * map.first(x) + coeffs.diffusion(x, t) * map.second(x);
  };
  out.diffusion = [coeffs, map](double y, double t) {
    const double x = map.inverse(y);
    const double d = map.first(x);
    return coeffs.diffusion(x, t) * d * d;
  };
  return out;
}

std::function<double(double, double)> potential(const FpCoefficients& coeffs, double tolerance) {
  if (!coeffs.drift) throw InvalidArgumentError("potential: drift must be set");
  const Coefficient mu = coeffs.drift;
  return [mu, tolerance](double y, double t) {
    if (y == 0.0) return 0.0;
    auto f = [&mu, t](double s) { return mu(s, t); };
    return -boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, y, 15, tolerance);
  };
}

double analytic_solution(double t, double x, double x_start) {
  if (!(t > 0.0)) throw InvalidArgumentError("analytic_solution: t must be positive");
  const double d = x - x_start;
  const double log_p =
      -0.5 * std::log(2.0 * kPi * t) + log_cosh(x) - log_cosh(x_start) - (t * t + d * d) / (2.0 * t);
  return std::exp(log_p);
}

double analytic_cell_average(double t, double x, double h, double x_start) {
  auto f = [t, x_start](double s) { return analytic_solution(t, s, x_start); };
  return boost::math::quadrature::gauss<double, 7>::integrate(f, x - 0.5 * h, x + 0.5 * h) / h;
}

std::pair<double, double> truncated_domain(double x_start, double t_end) {
  if (!(t_end >= 0.0)) throw InvalidArgumentError("truncated_domain: t_end must be non-negative");
  const double half = 15.0 * std::sqrt(t_end) + 5.0;
  return {x_start - half, x_start + half};
}

const char* to_string(Boundary b) {
  switch (b) {
    case Boundary::zero_flux:
      return "zero_flux";
    case Boundary::periodic:
      return "periodic";
    case Boundary::absorbing:
      return "absorbing";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Field

Field Field::cell_centered(Chart chart, double lo, double hi, std::size_t n, Boundary boundary) {
  if (!(hi > lo) || n < 2) throw InvalidArgumentError("field needs lo < hi and at least 2 cells");
  Field f;
  f.chart_ = chart;
  f.boundary_ = boundary;
  f.width_ = (hi - lo) / static_cast<double>(n);
  f.nodes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.nodes_[i] = lo + (static_cast<double>(i) + 0.5) * f.width_;
  f.values_.assign(n, 0.0);
  return f;
}

Field Field::vertex_centered(Chart chart, double a, double b, std::size_t n, Boundary boundary) {
  if (!(b > a) || n < 2) throw InvalidArgumentError("field needs a < b and at least 2 intervals");
  if (boundary == Boundary::periodic) throw InvalidArgumentError("vertex-centred fields cannot be periodic");
  Field f;
  f.chart_ = chart;
  f.boundary_ = boundary;
  f.width_ = (b - a) / static_cast<double>(n);
  f.nodes_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    f.nodes_[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
  }
  f.values_.assign(n + 1, 0.0);
  return f;
}

double Field::face(std::size_t i) const {
  if (i == 0) return nodes_.front() - 0.5 * width_;
  if (i >= nodes_.size()) return nodes_.back() + 0.5 * width_;
  return 0.5 * (nodes_[i - 1] + nodes_[i]);
}

double Field::mass() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * width_;
}

double Field::moment(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) s += f(nodes_[i]) * values_[i];
  return s * width_;
}

void Field::fill_normalized(const std::function<double(double)>& f) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) values_[i] = f(nodes_[i]);
  const double m = mass();
  if (!(m > 0.0) || !std::isfinite(m)) throw InvalidArgumentError("initial profile has no positive mass");
  for (double& v : values_) v /= m;
}

// ---------------------------------------------------------------------------
// Operator

FluxOperator::FluxOperator(const Field& geometry, const FpCoefficients& coeffs, double t)
    : boundary_(geometry.boundary()), h_(geometry.width()) {
  if (!coeffs.drift || !coeffs.diffusion) throw InvalidArgumentError("coefficients must be set");
  if (coeffs.chart != geometry.chart()) throw InvalidArgumentError("coefficients and field use different charts");
  const auto& nodes = geometry.nodes();
  const std::size_t n = nodes.size();
  std::vector<double> d_node(n);
  for (std::size_t i = 0; i < n; ++i) {
    d_node[i] = coeffs.diffusion(nodes[i], t);
    if (!(d_node[i] >= 0.0) || !std::isfinite(d_node[i])) {
      throw InvalidArgumentError("diffusion must be finite and non-negative, got " + detail::num(d_node[i]) +
                                 " at " + detail::num(nodes[i]));
    }
    max_d_ = std::max(max_d_, d_node[i]);
  }
  a_.assign(n + 1, 0.0);
  b_.assign(n + 1, 0.0);

  auto weights = [&](std::size_t f, double x_face, double d_left, double d_right) {
    const double mu = coeffs.drift(x_face, t);
    const double d = coeffs.diffusion(x_face, t);
    if (!std::isfinite(mu) || !(d >= 0.0) || !std::isfinite(d)) {
      throw InvalidArgumentError("non-finite coefficient at " + detail::num(x_face));
    }
    max_d_ = std::max(max_d_, d);
    max_mu_ = std::max(max_mu_, std::fabs(mu));
    if (d > 0.0) {
      const double z = mu / d * h_;
      a_[f] = bernoulli(-z) * d_left / h_;
      b_[f] = bernoulli(z) * d_right / h_;
    } else {
      a_[f] = std::max(mu, 0.0);
      b_[f] = std::max(-mu, 0.0);
    }
  };

  for (std::size_t f = 1; f < n; ++f) weights(f, geometry.face(f), d_node[f - 1], d_node[f]);
  switch (boundary_) {
    case Boundary::zero_flux:
      break;
    case Boundary::periodic:
      weights(n, geometry.face(n), d_node[n - 1], d_node[0]);
      a_[0] = a_[n];
      b_[0] = b_[n];
      break;
    case Boundary::absorbing: {
      // Empty ghost cells beyond both walls.
      weights(0, geometry.face(0), 0.0, d_node[0]);
      a_[0] = 0.0;
      weights(n, geometry.face(n), d_node[n - 1], 0.0);
      b_[n] = 0.0;
      break;
    }
  }
}

void FluxOperator::fluxes(const std::vector<double>& p, std::vector<double>& j) const {
  const std::size_t n = p.size();
  j.resize(n + 1);
  for (std::size_t f = 1; f < n; ++f) j[f] = a_[f] * p[f - 1] - b_[f] * p[f];
  switch (boundary_) {
    case Boundary::zero_flux:
      j[0] = 0.0;
      j[n] = 0.0;
      break;
    case Boundary::periodic:
      j[n] = a_[n] * p[n - 1] - b_[n] * p[0];
      j[0] = j[n];
      break;
    case Boundary::absorbing:
      j[0] = -b_[0] * p[0];
      j[n] = a_[n] * p[n - 1];
      break;
  }
}

void FluxOperator::rate(const std::vector<double>& p, std::vector<double>& dpdt, std::vector<double>& j) const {
  fluxes(p, j);
  const std::size_t n = p.size();
  dpdt.resize(n);
  const double inv_h = 1.0 / h_;
  for (std::size_t i = 0; i < n; ++i) dpdt[i] = -(j[i + 1] - j[i]) * inv_h;
}

double FluxOperator::stable_dt(double safety) const {
  double dt = std::numeric_limits<double>::infinity();
  if (max_d_ > 0.0) dt = std::min(dt, h_ * h_ / (2.0 * max_d_));
  if (max_mu_ > 0.0) dt = std::min(dt, h_ / max_mu_);
  dt *= safety;
  // Euler-stage positivity: dt * (outflow rate of cell i) <= h.
  double out_max = 0.0;
  const std::size_t n = a_.size() - 1;
  for (std::size_t i = 0; i < n; ++i) out_max = std::max(out_max, a_[i + 1] + b_[i]);
  if (out_max > 0.0) dt = std::min(dt, h_ / out_max);
  return dt;
}

// ---------------------------------------------------------------------------
// Time stepping

namespace {

struct Workspace {
  std::vector<double> k;
  std::vector<double> j1;
  std::vector<double> j2;
  std::vector<double> stage;
};

void rk2_step(Field& field, const FluxOperator& op1, const FluxOperator& op2, double dt, Workspace& w) {
  auto& p = field.values();
  const std::size_t n = p.size();
  op1.rate(p, w.k, w.j1);
  w.stage.resize(n);
  for (std::size_t i = 0; i < n; ++i) w.stage[i] = p[i] + dt * w.k[i];
  op2.rate(w.stage, w.k, w.j2);
  for (std::size_t i = 0; i < n; ++i) p[i] = 0.5 * (p[i] + w.stage[i] + dt * w.k[i]);
  auto& flux = field.flux();
  flux.resize(n + 1);
  for (std::size_t f = 0; f <= n; ++f) flux[f] = 0.5 * (w.j1[f] + w.j2[f]);
  if (field.boundary() == Boundary::absorbing) {
    field.absorbed_low -= dt * flux[0];
    field.absorbed_high += dt * flux[n];
  }
  field.t += dt;
}

}  // namespace

void ssp_rk2_step(Field& field, const FluxOperator& op, double dt) {
  Workspace w;
  rk2_step(field, op, op, dt, w);
}

Solution solve(const Field& initial, const FpCoefficients& coeffs, double t_end, const DtControl& control) {
  if (!(t_end > initial.t)) throw InvalidArgumentError("solve: t_end must exceed the initial time");
  if (!(control.safety > 0.0 && control.safety <= 1.0)) throw InvalidArgumentError("solve: safety must be in (0, 1]");
  std::vector<double> stops;
  for (double s : control.output_times) {
    if (s > initial.t && s < t_end) stops.push_back(s);
  }
  stops.push_back(t_end);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  Solution sol;
  Field field = initial;
  SolveAudit& audit = sol.audit;
  audit.initial_mass = field.mass() + field.absorbed_low + field.absorbed_high;
  if (!(audit.initial_mass > 0.0)) throw InvalidArgumentError("solve: initial field has no mass");
  audit.min_value = *std::min_element(field.values().begin(), field.values().end());

  Workspace work;
  const bool frozen = coeffs.time_independent;
  std::optional<FluxOperator> fixed;
  if (frozen) fixed.emplace(field, coeffs, field.t);

  for (double stop : stops) {
    const double interval = stop - field.t;
    const FluxOperator probe = frozen ? *fixed : FluxOperator(field, coeffs, field.t);
    const double stable = probe.stable_dt(control.safety);
    double dt_target = stable;
    if (control.dt > 0.0) {
      if (control.dt > probe.stable_dt(1.0)) {
        throw CflError("dt = " + detail::num(control.dt) + " exceeds the stability limit " +
                       detail::num(probe.stable_dt(1.0)));
      }
      dt_target = control.dt;
    }
    long long n_sub = 1;
    if (std::isfinite(dt_target)) n_sub = std::max(1LL, static_cast<long long>(std::ceil(interval / dt_target - 1e-9)));
    const double dt = interval / static_cast<double>(n_sub);
    audit.dt = dt;
    const double t_start = field.t;
    for (long long s = 0; s < n_sub; ++s) {
      const double t0 = t_start + dt * static_cast<double>(s);
      field.t = t0;
      if (frozen) {
        rk2_step(field, *fixed, *fixed, dt, work);
      } else {
        const FluxOperator op1(field, coeffs, t0);
        const FluxOperator op2(field, coeffs, t0 + dt);
        if (dt > std::min(op1.stable_dt(1.0), op2.stable_dt(1.0))) {
          throw CflError("time-dependent coefficients exceed the stability limit at t = " + detail::num(t0));
        }
        rk2_step(field, op1, op2, dt, work);
      }
      ++audit.steps;
      for (double& v : field.values()) {
        if (v < 0.0) {
          audit.min_value = std::min(audit.min_value, v);
          if (v < -control.clip_tolerance) ++audit.clip_violations;
          ++audit.clipped;
          v = 0.0;
        }
      }
      const double total = field.mass() + field.absorbed_low + field.absorbed_high;
      const double drift = std::fabs(total - audit.initial_mass) / audit.initial_mass;
      audit.max_mass_drift = std::max(audit.max_mass_drift, drift);
      if (!std::isfinite(total)) throw MassDriftError("solution became non-finite at t = " + detail::num(field.t));
      if (drift > control.mass_tolerance) {
        throw MassDriftError("relative mass drift " + detail::num(drift) + " at t = " + detail::num(field.t));
      }
    }
    field.t = stop;
    // Snapshot fluxes are those of the stored state.
    const FluxOperator at_stop = frozen ? *fixed : FluxOperator(field, coeffs, stop);
    at_stop.fluxes(field.values(), field.flux());
    sol.snapshots.push_back(field);
  }
  audit.final_mass = field.mass();
  return sol;
}

double drift_velocity(const Field& field) {
  const auto& j = field.flux();
  const std::size_t n = field.size();
  if (j.size() != n + 1) throw InvalidArgumentError("drift_velocity: field carries no flux");
  const double h = field.width();
  double s = 0.0;
  for (std::size_t f = 1; f < n; ++f) s += j[f];
  s *= h;
  switch (field.boundary()) {
    case Boundary::zero_flux:
      break;
    case Boundary::periodic:
      s += j[n] * h;
      break;
    case Boundary::absorbing:
      s += 0.5 * h * (j[0] + j[n]);
      break;
  }
  return s;
}

}  // namespace wzm
