#include "wzm/master_equation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wzm/error.hpp"
#include "text.hpp"

namespace wzm {

PdfGrid::PdfGrid(double lo, double hi, std::size_t cells) : lo_(lo), hi_(hi) {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) throw InvalidArgumentError("grid needs lo < hi");
  if (cells < 3) throw InvalidArgumentError("grid needs at least 3 cells");
  width_ = (hi - lo) / static_cast<double>(cells);
  origin_ = lo + 0.5 * width_;
  values_.assign(cells, 0.0);
}

std::size_t PdfGrid::nearest(double x) const {
  const double s = std::round((x - node(0)) / width_);
  if (s <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(s), size() - 1);
}

double PdfGrid::mass() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * width_;
}

double PdfGrid::edge_mass() const { return (values_.front() + values_.back()) * width_; }

namespace {

// Adds `density` at position node(j) + frac * h, splitting between j and j + 1 so that the
// deposited mass and Pi-moment are exact:
//   w (Pi(x_{j+1}) - Pi(x_j)) = Pi(y) - Pi(x_j)  =>  w = sinh(frac h) cosh(x_{j+1}) / (sinh(h) cosh(y)).
// Positions outside the grid land in the edge cell on that side.
void deposit(std::vector<double>& out, const PdfGrid& grid, long long j, double frac, double density) {
  const auto n = static_cast<long long>(out.size());
  if (j < 0) {
    out.front() += density;
    return;
  }
  if (j >= n - 1) {
    out.back() += density;
    return;
  }
  if (frac == 0.0) {
    out[static_cast<std::size_t>(j)] += density;
    return;
  }
  const double h = grid.width();
  const double x_right = grid.node(static_cast<std::size_t>(j + 1));
  const double y = grid.node(static_cast<std::size_t>(j)) + frac * h;
  const double w = std::sinh(frac * h) * std::cosh(x_right) / (std::sinh(h) * std::cosh(y));
  const double right = density * w;
  out[static_cast<std::size_t>(j)] += density - right;
  out[static_cast<std::size_t>(j + 1)] += right;
}

// Index-space target of a push by eps from cell i: i + eps / h, as (floor, fraction).
void target(std::size_t i, double eps, double h, long long& j, double& frac) {
  const double shift = eps / h;
  const double whole = std::floor(shift);
  j = static_cast<long long>(i) + static_cast<long long>(whole);
  frac = shift - whole;
}

template <typename ParamsAt>
PdfGrid push(const PdfGrid& grid, ParamsAt params_at, const MasterOptions& options) {
  PdfGrid out = grid;
  auto& dst = out.values();
  std::fill(dst.begin(), dst.end(), 0.0);
  const auto& src = grid.values();
  const std::size_t n = grid.size();
  const double h = grid.width();
  dst.front() += src.front();
  dst.back() += src.back();

  bool cached = false;
  MeasurementParams last{};
  StepSizes eps{};
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double v = src[i];
    if (v == 0.0) continue;
    const double x = grid.node(i);
    const MeasurementParams p = params_at(x);
    if (!cached || p.alpha != last.alpha || p.delta != last.delta) {
      validate(p);
      eps = step_sizes(p);
      last = p;
      cached = true;
    }
    if (eps.eps0 == eps.eps1) {
      long long j = 0;
      double frac = 0.0;
      target(i, eps.eps0, h, j, frac);
      deposit(dst, grid, j, frac, v);
      continue;
    }
    const OutcomeProbabilities probs = outcome_probabilities_x(x, p);
    const double v0 = v * probs.p0;
    long long j = 0;
    double frac = 0.0;
    target(i, eps.eps0, h, j, frac);
    deposit(dst, grid, j, frac, v0);
    target(i, eps.eps1, h, j, frac);
    deposit(dst, grid, j, frac, v - v0);
  }

  const double edge = out.edge_mass();
  if (edge > options.boundary_tolerance) {
    throw BoundaryOverflowError("mass " + detail::num(edge) + " reached the grid edges; widen the grid");
  }
  return out;
}

}  // namespace

PdfGrid PdfGrid::spike(double lo, double hi, std::size_t cells, double x0) {
  PdfGrid grid(lo, hi, cells);
  if (!(x0 > grid.node(0) && x0 < grid.node(cells - 1))) throw InvalidArgumentError("spike outside the grid interior");
  const double s = (x0 - grid.node(0)) / grid.width();
  const double whole = std::floor(s);
  deposit(grid.values_, grid, static_cast<long long>(whole), s - whole, 1.0 / grid.width());
  return grid;
}

PdfGrid PdfGrid::centered_on(double x_center, double lo, double hi, std::size_t cells) {
  PdfGrid grid(lo, hi, cells);
  if (!(x_center > grid.node(0) && x_center < grid.node(cells - 1))) {
    throw InvalidArgumentError("centre outside the grid interior");
  }
  const std::size_t k = grid.nearest(x_center);
  const double shift = x_center - grid.node(k);
  grid.ref_ = k;
  grid.origin_ = x_center;
  grid.lo_ += shift;
  grid.hi_ += shift;
  return grid;
}

PdfGrid propagate_const(const PdfGrid& grid, const MeasurementParams& params, const MasterOptions& options) {
  return push(grid, [&params](double) { return params; }, options);
}

PdfGrid propagate_conditional(const PdfGrid& grid, const Schedule& schedule, long long step,
                              const MasterOptions& options) {
  return push(grid, [&schedule, step](double x) { return schedule.at(step, x).params; }, options);
}

double pi_average(const PdfGrid& grid) {
  double s = 0.0;
  const auto& v = grid.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) s += v[i] / (1.0 + std::exp(-2.0 * grid.node(i)));
  }
  return s * grid.width();
}

std::vector<double> rebin(const PdfGrid& grid, double lo, double hi, int bins) {
  if (!(hi > lo) || bins < 1) throw InvalidArgumentError("invalid binning");
  std::vector<double> out(static_cast<std::size_t>(bins), 0.0);
  const double bw = (hi - lo) / bins;
  const double h = grid.width();
  const auto& v = grid.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0) continue;
    const double a = std::max(grid.node(i) - 0.5 * h, lo);
    const double b = std::min(grid.node(i) + 0.5 * h, hi);
    if (!(b > a)) continue;
    auto k = static_cast<int>(std::floor((a - lo) / bw));
    for (k = std::clamp(k, 0, bins - 1); k < bins; ++k) {
      const double left = lo + k * bw;
      const double right = k == bins - 1 ? hi : lo + (k + 1) * bw;
      const double overlap = std::min(b, right) - std::max(a, left);
      if (overlap > 0.0) out[static_cast<std::size_t>(k)] += v[i] * overlap;
      if (right >= b) break;
    }
  }
  return out;
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw InvalidArgumentError("l1_distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

}  // namespace wzm
