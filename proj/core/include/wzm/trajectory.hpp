#pragma once

// Monte Carlo simulation of the measurement-induced random walk in the x chart.

#include <cstdint>
#include <utility>
#include <vector>

#include "wzm/schedule.hpp"

namespace wzm {

/// Beyond |x| > kAbsorptionX the state is within 2e-22 of a basis state; the walk is frozen there.
inline constexpr double kAbsorptionX = 25.0;

struct TrajectoryEntry {
  long long step = 0;
  double t = 0.0;
  double x = 0.0;
  int outcome = -1;  // -1 for the initial point
};

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  std::vector<TrajectoryEntry> entries;
  /// The walk crossed |x| > kAbsorptionX and stopped before n_steps.
  bool absorbed = false;
  /// Some step hit the step-size saturation clamp.
  bool saturated = false;
};

/// One trajectory. Reproducible in (seed, stream); stream 0 is the stream an
/// ensemble uses for its first member.
TrajectoryRecord run_trajectory(double x0, const Schedule& schedule, long long n_steps, std::uint64_t seed,
                                std::uint64_t stream = 0);

struct HistogramSpec {
  double lo = -kAbsorptionX;
  double hi = kAbsorptionX;
  int bins = 200;
};

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> mass;  // probability per bin
  double underflow = 0.0;
  double overflow = 0.0;

  double bin_width() const { return (hi - lo) / static_cast<double>(mass.size()); }
  double total() const;
};

struct Checkpoint {
  long long step = 0;
  Histogram histogram;
  double pi_mean = 0.0;
  double pi_stderr = 0.0;
  double mean_time = 0.0;
};

struct EnsembleStats {
  long long n_trajectories = 0;
  std::vector<Checkpoint> checkpoints;
  /// Final position of every member, by trajectory index.
  std::vector<double> final_x;
  long long absorbed_low = 0;
  long long absorbed_high = 0;
};

struct EnsembleOptions {
  HistogramSpec histogram;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Runs n_traj independent trajectories; member i uses stream i under base_seed.
/// Results do not depend on the number of threads.
EnsembleStats run_ensemble(double x0, const Schedule& schedule, long long n_steps, long long n_traj,
                           std::vector<long long> checkpoints, std::uint64_t base_seed,
                           const EnsembleOptions& options = {});

/// (mean, standard error) of Pi over the ensemble at a recorded checkpoint step.
std::pair<double, double> empirical_pi_mean(const EnsembleStats& stats, long long checkpoint);

/// Where each trajectory ends up when the measurement strength vanishes at Pi = target_pi.
struct AbsorptionOptions {
  double target_pi = 0.5;
  /// |Pi - target| (or Pi, 1 - Pi at the basis states) below this counts as "near".
  double neighborhood = 1e-3;
  /// Consecutive steps spent near a limit before the trajectory is classified.
  long long sustain_steps = 1000;
  long long max_steps = 200000;
  unsigned threads = 0;
};

struct AbsorptionStats {
  long long n_trajectories = 0;
  long long reached_target = 0;
  long long reached_zero = 0;  // Pi -> 0
  long long reached_one = 0;   // Pi -> 1
  long long undecided = 0;
  /// Trajectories that ever sat on the other side of the target (x >= X when started below).
  long long crossings = 0;
  /// Smallest distance |X - x| seen from the starting side over all trajectories; <= 0 means a crossing.
  double closest_approach = 0.0;

  double fraction_target() const;
  double fraction_target_stderr() const;
};

AbsorptionStats run_absorption_study(double x0, const Schedule& schedule, const AbsorptionOptions& options,
                                     long long n_traj, std::uint64_t base_seed);

}  // namespace wzm
