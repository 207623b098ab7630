#include "wzm/runner/experiment.hpp"

#include <algorithm>
#include <set>

#include "catalog.hpp"

namespace wzm::runner {

const char* to_string(Kind k) {
  switch (k) {
    case Kind::number: return "number";
    case Kind::integer: return "integer";
    case Kind::boolean: return "boolean";
    case Kind::text: return "text";
    case Kind::int_list: return "integer list";
    case Kind::number_list: return "number list";
    case Kind::profile: return "profile";
  }
  return "?";
}

double Settings::number(const std::string& key) const { return parse_double(key, text(key)); }

double Settings::positive(const std::string& key) const {
  const double v = number(key);
  if (!(v > 0.0)) throw ConfigError("key '" + key + "': must be positive, got '" + text(key) + "'");
  return v;
}

long long Settings::integer(const std::string& key) const { return parse_int(key, text(key)); }

long long Settings::count(const std::string& key, long long min) const {
  const long long v = integer(key);
  if (v < min) throw ConfigError("key '" + key + "': must be at least " + std::to_string(min));
  return v;
}

bool Settings::boolean(const std::string& key) const { return parse_bool(key, text(key)); }

const std::string& Settings::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing key '" + key + "'");
  return it->second;
}

std::vector<long long> Settings::int_list(const std::string& key) const { return parse_int_list(key, text(key)); }

std::vector<double> Settings::number_list(const std::string& key) const {
  return parse_double_list(key, text(key));
}

ProfileSpec Settings::profile(const std::string& key) const {
  ProfileSpec spec;
  spec.name = text(key);
  const std::string prefix = key + ".";
  for (auto it = values_.lower_bound(prefix); it != values_.end() && it->first.starts_with(prefix); ++it) {
    spec.params[it->first.substr(prefix.size())] = parse_double(it->first, it->second);
  }
  return spec;
}

ScheduleSpec Settings::schedule() const {
  ScheduleSpec s;
  s.alpha = profile("schedule.alpha");
  s.g_delta = profile("schedule.g_delta");
  s.g_tau = profile("schedule.g_tau");
  s.delta_scale = positive("schedule.delta_scale");
  return s;
}

const std::vector<Experiment>& experiments() {
  static const std::vector<Experiment> catalog = {
      trajectory_experiment(), master_experiment(), fp_check_experiment(),
      ratchet_experiment(),    seebeck_experiment(), localization_experiment(),
  };
  return catalog;
}

const Experiment& find_experiment(const std::string& name) {
  for (const auto& e : experiments()) {
    if (e.name == name) return e;
  }
  throw ConfigError("key 'experiment': unknown experiment '" + name + "' (see `wzm list`)");
}

namespace {

void check_value(const KeySpec& spec, const std::string& value) {
  switch (spec.kind) {
    case Kind::number: parse_double(spec.key, value); break;
    case Kind::integer: parse_int(spec.key, value); break;
    case Kind::boolean: parse_bool(spec.key, value); break;
    case Kind::int_list: parse_int_list(spec.key, value); break;
    case Kind::number_list: parse_double_list(spec.key, value); break;
    case Kind::text: break;
    case Kind::profile: {
      const auto& reg = profile_registry();
      const bool known = std::any_of(reg.begin(), reg.end(), [&](const ProfileInfo& p) { return p.name == value; });
      if (!known) throw ConfigError("key '" + spec.key + "': unknown profile '" + value + "'");
      break;
    }
  }
}

const ProfileInfo& profile_info(const std::string& name) {
  for (const auto& p : profile_registry()) {
    if (p.name == name) return p;
  }
  throw ConfigError("unknown profile '" + name + "'");
}

}  // namespace

Settings resolve(const Experiment& experiment, const Config& config, std::uint64_t seed) {
  std::map<std::string, const KeySpec*> specs;
  for (const auto& k : experiment.keys) specs[k.key] = &k;

  std::map<std::string, std::string> values;
  for (const auto& k : experiment.keys) {
    if (!k.fallback.empty()) values[k.key] = k.fallback;
  }

  // Explicit keys first, so profile parameters can be checked against the chosen profile.
  std::vector<std::pair<std::string, std::string>> params;
  for (const auto& [key, entry] : config.entries()) {
    if (key == kExperimentKey || key == kSeedKey || key == kOutputKey) continue;
    const auto it = specs.find(key);
    if (it != specs.end()) {
      check_value(*it->second, entry.value);
      values[key] = entry.value;
      continue;
    }
    const auto dot = key.rfind('.');
    const auto owner = dot == std::string::npos ? specs.end() : specs.find(key.substr(0, dot));
    if (owner != specs.end() && owner->second->kind == Kind::profile) {
      params.emplace_back(key, entry.value);
      continue;
    }
    std::string where = entry.line > 0 ? " (" + config.origin() + ":" + std::to_string(entry.line) + ")" : "";
    throw ConfigError("unknown key '" + key + "' for experiment '" + experiment.name + "'" + where);
  }

  for (const auto& k : experiment.keys) {
    if (k.kind != Kind::profile || values[k.key] != k.fallback) continue;
    for (const auto& [param, value] : k.profile_defaults) values[k.key + "." + param] = value;
  }
  for (const auto& [key, value] : params) {
    const auto dot = key.rfind('.');
    const std::string owner = key.substr(0, dot);
    const std::string param = key.substr(dot + 1);
    const auto& info = profile_info(values.at(owner));
    if (std::find(info.params.begin(), info.params.end(), param) == info.params.end()) {
      throw ConfigError("key '" + key + "': profile '" + info.name + "' has no parameter '" + param + "'");
    }
    parse_double(key, value);
    values[key] = value;
  }
  return Settings(std::move(values), seed);
}

}  // namespace wzm::runner
