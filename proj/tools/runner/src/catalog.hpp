#pragma once

// Internal: experiment factories and helpers shared by their implementations.

#include <string>
#include <vector>

#include "wzm/runner/experiment.hpp"

namespace wzm::runner {

Experiment trajectory_experiment();
Experiment master_experiment();
Experiment fp_check_experiment();
Experiment ratchet_experiment();
Experiment seebeck_experiment();
Experiment localization_experiment();

/// schedule.alpha, schedule.g_delta, schedule.g_tau, schedule.delta_scale.
std::vector<KeySpec> schedule_keys();

/// True when every schedule profile is "constant".
bool constant_schedule(const ScheduleSpec& spec);

inline Table make_table(const OutputSchema& schema) { return {schema.file, schema.columns, {}}; }

inline Check make_check(std::string name, bool passed, double value, std::string criterion) {
  return {std::move(name), passed, value, std::move(criterion)};
}

/// Worker threads for ensemble runs; 0 means one per hardware thread.
unsigned thread_count(const Settings& s, const std::string& key);

}  // namespace wzm::runner
