#pragma once

// Scenario configuration: line-oriented `key = value` text with [sections].
//
//   # comment
//   experiment = trajectory
//   seed = 42
//   [schedule]
//   g_delta = localization
//   g_delta.pi_x = 0.7
//
// Keys inside a section are stored as "section.key". Values run to the end of
// the line (trailing `#` comments are stripped); quotes are not interpreted.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace wzm::runner {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigEntry {
  std::string value;
  int line = 0;  // 0 for overrides and defaults
};

class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<config>");
  static Config load(const std::string& path);

  /// Applies "section.key=value"; the key must already be valid for the experiment.
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::string& raw(const std::string& key) const;
  const std::map<std::string, ConfigEntry>& entries() const { return entries_; }
  const std::string& origin() const { return origin_; }

  /// Canonical text (sorted key = value lines) used for hashing.
  std::string canonical() const;

 private:
  std::string origin_;
  std::map<std::string, ConfigEntry> entries_;
};

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

/// Typed accessors; each throws ConfigError naming the key on malformed values.
double parse_double(const std::string& key, const std::string& value);
long long parse_int(const std::string& key, const std::string& value);
bool parse_bool(const std::string& key, const std::string& value);
std::vector<long long> parse_int_list(const std::string& key, const std::string& value);
std::vector<double> parse_double_list(const std::string& key, const std::string& value);

}  // namespace wzm::runner
