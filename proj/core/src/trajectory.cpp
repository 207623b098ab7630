#include "wzm/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "wzm/error.hpp"
#include "wzm/rng.hpp"

namespace wzm {

namespace {

// Walk state with the trig factors of the last parameter set cached; consecutive
// steps usually share alpha and delta.
class Walker {
 public:
  Walker(const Schedule& schedule, double x0) : schedule_(schedule), x_(x0) {
    if (!std::isfinite(x0)) throw InvalidArgumentError("x0 must be finite");
  }

  double x() const { return x_; }
  double t() const { return t_; }
  long long n() const { return n_; }
  bool absorbed() const { return std::fabs(x_) > kAbsorptionX; }
  bool saturated() const { return saturated_; }

  int step(PhiloxStream& rng) {
    const StepValues v = schedule_.at(n_ + 1, x_);
    if (!cached_ || v.params.alpha != params_.alpha || v.params.delta != params_.delta) refresh(v.params);
    // p0(x) = Pi cos^2(alpha + delta) + (1 - Pi) cos^2(alpha)
    const double pi = 1.0 / (1.0 + std::exp(-2.0 * x_));
    const double pi_c = 1.0 / (1.0 + std::exp(2.0 * x_));
    const double p0 = pi * cad2_ + pi_c * ca2_;
    const int outcome = rng.uniform() < p0 ? 0 : 1;
    x_ += outcome == 0 ? eps_.eps0 : eps_.eps1;
    t_ += v.tau;
    ++n_;
    return outcome;
  }

 private:
  void refresh(const MeasurementParams& p) {
    validate(p);
    params_ = p;
    eps_ = step_sizes(p);
    saturated_ = saturated_ || eps_.saturated;
    const double ca = std::cos(p.alpha);
    const double cad = std::cos(p.alpha + p.delta);
    ca2_ = ca * ca;
    cad2_ = cad * cad;
    cached_ = true;
  }

  const Schedule& schedule_;
  double x_;
  double t_ = 0.0;
  long long n_ = 0;
  bool cached_ = false;
  bool saturated_ = false;
  MeasurementParams params_{};
  StepSizes eps_{};
  double ca2_ = 0.0;
  double cad2_ = 0.0;
};

unsigned resolve_threads(unsigned requested, long long work) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<long long>(n, std::max<long long>(1, work)));
}

// Calls fn(i) for i in [0, n) on contiguous blocks. fn must only write to slot i.
template <typename Fn>
void parallel_for(long long n, unsigned threads, Fn fn) {
  const unsigned workers = resolve_threads(threads, n);
  if (workers <= 1) {
    for (long long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    const long long begin = n * w / workers;
    const long long end = n * (w + 1) / workers;
    pool.emplace_back([&, begin, end] {
      try {
        for (long long i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

TrajectoryRecord run_trajectory(double x0, const Schedule& schedule, long long n_steps, std::uint64_t seed,
                                std::uint64_t stream) {
  if (n_steps < 0) throw InvalidArgumentError("n_steps must be non-negative");
  Walker walker(schedule, x0);
  PhiloxStream rng(seed, stream);
  TrajectoryRecord record;
  record.seed = seed;
  record.entries.reserve(static_cast<std::size_t>(std::min<long long>(n_steps, 1 << 20)) + 1);
  record.entries.push_back({0, 0.0, x0, -1});
  for (long long i = 0; i < n_steps && !walker.absorbed(); ++i) {
    const int outcome = walker.step(rng);
    record.entries.push_back({walker.n(), walker.t(), walker.x(), outcome});
  }
  record.absorbed = walker.absorbed();
  record.saturated = walker.saturated();
  return record;
}

double Histogram::total() const {
  double s = underflow + overflow;
  for (double m : mass) s += m;
  return s;
}

EnsembleStats run_ensemble(double x0, const Schedule& schedule, long long n_steps, long long n_traj,
                           std::vector<long long> checkpoints, std::uint64_t base_seed,
                           const EnsembleOptions& options) {
  if (n_traj < 1) throw InvalidArgumentError("n_traj must be >= 1");
  if (n_steps < 0) throw InvalidArgumentError("n_steps must be non-negative");
  const HistogramSpec& hs = options.histogram;
  if (!(hs.hi > hs.lo) || hs.bins < 1) throw InvalidArgumentError("invalid histogram specification");
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  for (long long c : checkpoints) {
    if (c < 0 || c > n_steps) throw InvalidArgumentError("checkpoint outside [0, n_steps]");
  }

  const auto n_cp = checkpoints.size();
  const auto n = static_cast<std::size_t>(n_traj);
  // Per-trajectory samples, merged afterwards in index order.
  std::vector<double> x_at(n * n_cp);
  std::vector<double> t_at(n * n_cp);
  std::vector<double> final_x(n);

  parallel_for(n_traj, options.threads, [&](long long i) {
    Walker walker(schedule, x0);
    PhiloxStream rng(base_seed, static_cast<std::uint64_t>(i));
    std::size_t next = 0;
    const auto slot = static_cast<std::size_t>(i) * n_cp;
    for (long long step = 0;; ++step) {
      while (next < n_cp && checkpoints[next] == step) {
        x_at[slot + next] = walker.x();
        t_at[slot + next] = walker.t();
        ++next;
      }
      if (step == n_steps || walker.absorbed()) break;
      walker.step(rng);
    }
    // Frozen after absorption: remaining checkpoints see the final position.
    for (; next < n_cp; ++next) {
      x_at[slot + next] = walker.x();
      t_at[slot + next] = walker.t();
    }
    final_x[static_cast<std::size_t>(i)] = walker.x();
  });

  EnsembleStats stats;
  stats.n_trajectories = n_traj;
  stats.final_x = std::move(final_x);
  for (double x : stats.final_x) {
    if (x < -kAbsorptionX) ++stats.absorbed_low;
    if (x > kAbsorptionX) ++stats.absorbed_high;
  }
  const double weight = 1.0 / static_cast<double>(n_traj);
  for (std::size_t c = 0; c < n_cp; ++c) {
    Checkpoint cp;
    cp.step = checkpoints[c];
    cp.histogram.lo = hs.lo;
    cp.histogram.hi = hs.hi;
    cp.histogram.mass.assign(static_cast<std::size_t>(hs.bins), 0.0);
    const double width = cp.histogram.bin_width();
    // Welford accumulation: identical members give zero variance exactly.
    double mean = 0.0;
    double m2 = 0.0;
    double sum_t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = x_at[i * n_cp + c];
      if (x < hs.lo) {
        cp.histogram.underflow += weight;
      } else if (x >= hs.hi) {
        cp.histogram.overflow += weight;
      } else {
        const auto bin = std::min(static_cast<std::size_t>((x - hs.lo) / width), cp.histogram.mass.size() - 1);
        cp.histogram.mass[bin] += weight;
      }
      const double pi = 1.0 / (1.0 + std::exp(-2.0 * x));
      const double d = pi - mean;
      mean += d / static_cast<double>(i + 1);
      m2 += d * (pi - mean);
      sum_t += t_at[i * n_cp + c];
    }
    cp.pi_mean = mean;
    if (n_traj > 1) {
      const double var = std::max(0.0, m2 / static_cast<double>(n_traj - 1));
      cp.pi_stderr = std::sqrt(var * weight);
    }
    cp.mean_time = sum_t * weight;
    stats.checkpoints.push_back(std::move(cp));
  }
  return stats;
}

std::pair<double, double> empirical_pi_mean(const EnsembleStats& stats, long long checkpoint) {
  for (const Checkpoint& cp : stats.checkpoints) {
    if (cp.step == checkpoint) return {cp.pi_mean, cp.pi_stderr};
  }
  throw InvalidArgumentError("checkpoint " + std::to_string(checkpoint) + " was not recorded");
}

double AbsorptionStats::fraction_target() const {
  return n_trajectories > 0 ? static_cast<double>(reached_target) / static_cast<double>(n_trajectories) : 0.0;
}

double AbsorptionStats::fraction_target_stderr() const {
  if (n_trajectories < 2) return 0.0;
  const double f = fraction_target();
  return std::sqrt(f * (1.0 - f) / static_cast<double>(n_trajectories));
}

AbsorptionStats run_absorption_study(double x0, const Schedule& schedule, const AbsorptionOptions& options,
                                     long long n_traj, std::uint64_t base_seed) {
  if (n_traj < 1) throw InvalidArgumentError("n_traj must be >= 1");
  if (!(options.target_pi > 0.0 && options.target_pi < 1.0)) throw InvalidArgumentError("target_pi must lie in (0, 1)");
  if (!(options.neighborhood > 0.0) || options.sustain_steps < 1 || options.max_steps < 1) {
    throw InvalidArgumentError("invalid absorption options");
  }
  const double barrier = x_of_pi(options.target_pi);
  const double side = x0 < barrier ? 1.0 : -1.0;  // +1: started below the barrier

  enum Outcome : int { undecided = 0, target = 1, zero = 2, one = 3 };
  const auto n = static_cast<std::size_t>(n_traj);
  std::vector<int> outcome(n, undecided);
  std::vector<char> crossed(n, 0);
  std::vector<double> gap(n, std::numeric_limits<double>::infinity());

  parallel_for(n_traj, options.threads, [&](long long i) {
    Walker walker(schedule, x0);
    PhiloxStream rng(base_seed, static_cast<std::uint64_t>(i));
    long long near_target = 0;
    long long near_zero = 0;
    long long near_one = 0;
    const auto k = static_cast<std::size_t>(i);
    for (long long step = 0; step < options.max_steps; ++step) {
      walker.step(rng);
      const double x = walker.x();
      const double signed_gap = side * (barrier - x);
      gap[k] = std::min(gap[k], signed_gap);
      if (signed_gap <= 0.0) crossed[k] = 1;
      if (walker.absorbed()) {
        outcome[k] = x < 0.0 ? zero : one;
        return;
      }
      const double pi = 1.0 / (1.0 + std::exp(-2.0 * x));
      const double pi_c = 1.0 / (1.0 + std::exp(2.0 * x));
      near_target = std::fabs(pi - options.target_pi) < options.neighborhood ? near_target + 1 : 0;
      near_zero = pi < options.neighborhood ? near_zero + 1 : 0;
      near_one = pi_c < options.neighborhood ? near_one + 1 : 0;
      if (near_target >= options.sustain_steps) {
        outcome[k] = target;
        return;
      }
      if (near_zero >= options.sustain_steps) {
        outcome[k] = zero;
        return;
      }
      if (near_one >= options.sustain_steps) {
        outcome[k] = one;
        return;
      }
    }
  });

  AbsorptionStats stats;
  stats.n_trajectories = n_traj;
  stats.closest_approach = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    switch (outcome[i]) {
      case target:
        ++stats.reached_target;
        break;
      case zero:
        ++stats.reached_zero;
        break;
      case one:
        ++stats.reached_one;
        break;
      default:
        ++stats.undecided;
    }
    stats.crossings += crossed[i];
    stats.closest_approach = std::min(stats.closest_approach, gap[i]);
  }
  return stats;
}

}  // namespace wzm
