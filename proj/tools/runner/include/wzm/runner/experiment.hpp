#pragma once

// Experiment registry: each experiment declares its accepted keys (with
// defaults), the CSV files it writes and a run function.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "wzm/runner/config.hpp"
#include "wzm/schedule.hpp"

namespace wzm::runner {

using Json = nlohmann::ordered_json;

enum class Kind { number, integer, boolean, text, int_list, number_list, profile };

const char* to_string(Kind k);

struct KeySpec {
  std::string key;
  Kind kind = Kind::number;
  /// Default value as config text; empty means the key is optional and unset by default.
  std::string fallback;
  std::string help;
  /// Profile keys only: parameter defaults used while the profile keeps its default name.
  std::vector<std::pair<std::string, std::string>> profile_defaults = {};
};

struct OutputSchema {
  std::string file;
  std::vector<std::string> columns;
  std::string description;
};

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string file;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  std::string criterion;
};

struct RunOutput {
  std::vector<Table> tables;
  Json audits = Json::object();
  Json results = Json::object();
  std::vector<Check> checks;
};

/// Config resolved against an experiment schema: defaults applied, unknown keys rejected.
class Settings {
 public:
  Settings(std::map<std::string, std::string> values, std::uint64_t seed)
      : values_(std::move(values)), seed_(seed) {}

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  double number(const std::string& key) const;
  /// Number that must be > 0.
  double positive(const std::string& key) const;
  long long integer(const std::string& key) const;
  /// Integer that must be >= min.
  long long count(const std::string& key, long long min) const;
  bool boolean(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  std::vector<long long> int_list(const std::string& key) const;
  std::vector<double> number_list(const std::string& key) const;
  /// Profile named by `key` with numeric parameters from `key.<param>`.
  ProfileSpec profile(const std::string& key) const;
  /// Built from schedule.alpha, schedule.g_delta, schedule.g_tau and schedule.delta_scale.
  ScheduleSpec schedule() const;

  std::uint64_t seed() const { return seed_; }
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  std::uint64_t seed_;
};

struct Experiment {
  std::string name;
  std::string description;
  std::vector<KeySpec> keys;
  std::vector<OutputSchema> outputs;
  std::function<RunOutput(const Settings&)> run;
};

/// Stable-ordered catalog.
const std::vector<Experiment>& experiments();
/// Throws ConfigError for unknown names.
const Experiment& find_experiment(const std::string& name);

/// Keys every experiment accepts besides its own.
inline constexpr const char* kExperimentKey = "experiment";
inline constexpr const char* kSeedKey = "seed";
inline constexpr const char* kOutputKey = "output";

/// Validates every key of `config` against the experiment, type-checks values
/// and fills defaults. `experiment`, `seed` and `output` are not part of the result.
Settings resolve(const Experiment& experiment, const Config& config, std::uint64_t seed);

}  // namespace wzm::runner
