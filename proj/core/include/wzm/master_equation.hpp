#pragma once

// Deterministic propagation of the density P(n, x) on a uniform x grid.
//
// Each interior cell pushes its mass to x + eps_0 and x + eps_1 with weights
// p_0(x), p_1(x). A push landing between two nodes is split so that both mass
// and the Pi-moment are deposited exactly, which makes <Pi> conserved to
// rounding. The two edge cells are absorbers: they keep what they receive.

#include <cstddef>
#include <vector>

#include "wzm/measurement.hpp"
#include "wzm/schedule.hpp"

namespace wzm {

class PdfGrid {
 public:
  /// Zero density on n cells covering [lo, hi]; nodes sit at cell centres.
  PdfGrid(double lo, double hi, std::size_t cells);

  /// Unit mass at x0. Off-node positions are split over the two neighbouring
  /// cells preserving both mass and Pi.
  static PdfGrid spike(double lo, double hi, std::size_t cells, double x0);

  /// Grid shifted by less than a cell so that one node equals x_center bit for bit.
  static PdfGrid centered_on(double x_center, double lo, double hi, std::size_t cells);

  Chart chart() const { return Chart::x; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t size() const { return values_.size(); }
  double width() const { return width_; }
  double node(std::size_t i) const {
    return origin_ + (static_cast<double>(i) - static_cast<double>(ref_)) * width_;
  }
  /// Index of the node nearest to x (clamped to the grid).
  std::size_t nearest(double x) const;

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double mass() const;
  /// Mass sitting in the two absorbing edge cells.
  double edge_mass() const;

 private:
  double lo_;
  double hi_;
  double width_;
  std::size_t ref_ = 0;  // node(ref_) == origin_ exactly
  double origin_;
  std::vector<double> values_;  // density per cell
};

struct MasterOptions {
  /// Maximum mass allowed in the edge cells after a step; BoundaryOverflowError otherwise.
  /// Set to infinity to let the edges collect absorbed mass.
  double boundary_tolerance = 1e-9;
};

/// One step with constant parameters.
PdfGrid propagate_const(const PdfGrid& grid, const MeasurementParams& params, const MasterOptions& options = {});

/// One step with (alpha, delta) evaluated per cell from the schedule at step index `step` (1-based).
PdfGrid propagate_conditional(const PdfGrid& grid, const Schedule& schedule, long long step,
                              const MasterOptions& options = {});

/// Midpoint rule for the integral of Pi(x) P(x).
double pi_average(const PdfGrid& grid);

/// Mass of the grid redistributed onto `bins` equal bins over [lo, hi] by overlap length.
/// Mass outside [lo, hi] is dropped.
std::vector<double> rebin(const PdfGrid& grid, double lo, double hi, int bins);

/// Sum of |a_i - b_i|.
double l1_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace wzm
