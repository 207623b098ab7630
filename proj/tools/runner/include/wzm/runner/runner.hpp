#pragma once

// Runs one configured experiment and writes its CSV tables plus summary.json.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wzm/runner/config.hpp"
#include "wzm/runner/experiment.hpp"

namespace wzm::runner {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumeric = 3, kExitCheck = 4 };

struct RunRequest {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out_dir;
  /// "section.key=value" strings applied after the file.
  std::vector<std::string> overrides;
};

struct RunResult {
  int exit_code = kExitOk;
  std::string status;   // ok, check_failed, numeric_failure, config_error
  std::string message;  // diagnostic for non-zero exits
  std::filesystem::path out_dir;
  std::vector<std::string> files;
  std::vector<Check> checks;
};

/// Never throws for config or numeric problems; they map to exit codes.
RunResult run_config_file(const std::string& path, const RunRequest& request);
RunResult run_config(Config config, const RunRequest& request);

void print_catalog(std::ostream& os);

/// %.17g; integers verbatim; strings must not need quoting.
std::string format_cell(const Cell& cell);
std::string format_csv(const Table& table);

/// Writes to a sibling temporary file, then renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace wzm::runner
