#include "wzm/runner/runner.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>

#include "wzm/error.hpp"
#include "wzm/version.hpp"

namespace wzm::runner {

namespace fs = std::filesystem;

std::string format_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  return std::get<std::string>(cell);
}

std::string format_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_cell(row[c]);
    }
    out += '\n';
  }
  return out;
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    os.flush();
    if (!os) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, path);
}

namespace {

std::uint64_t parse_seed(const std::string& text) {
  const long long v = parse_int(kSeedKey, text);
  if (v < 0) throw ConfigError("key 'seed': must be non-negative");
  return static_cast<std::uint64_t>(v);
}

void apply_overrides(Config& config, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + o + "': expected key=value");
    config.set(o.substr(0, eq), o.substr(eq + 1));
  }
}

Json check_json(const Check& c) {
  Json j;
  j["name"] = c.name;
  j["passed"] = c.passed;
  j["value"] = c.value;
  j["criterion"] = c.criterion;
  return j;
}

RunResult fail(int code, std::string status, std::string message) {
  RunResult r;
  r.exit_code = code;
  r.status = std::move(status);
  r.message = std::move(message);
  return r;
}

}  // namespace

RunResult run_config_file(const std::string& path, const RunRequest& request) {
  try {
    return run_config(Config::load(path), request);
  } catch (const ConfigError& e) {
    return fail(kExitConfig, "config_error", e.what());
  }
}

RunResult run_config(Config config, const RunRequest& request) {
  const Experiment* experiment = nullptr;
  std::uint64_t seed = 1;
  fs::path out_dir;
  std::optional<Settings> settings;
  try {
    apply_overrides(config, request.overrides);
    if (!config.has(kExperimentKey)) throw ConfigError("missing key 'experiment'");
    experiment = &find_experiment(config.raw(kExperimentKey));
    if (config.has(kSeedKey)) seed = parse_seed(config.raw(kSeedKey));
    if (request.seed) seed = *request.seed;
    out_dir = config.has(kOutputKey) ? fs::path(config.raw(kOutputKey)) : fs::path("wzm_out") / experiment->name;
    if (request.out_dir) out_dir = *request.out_dir;
    settings.emplace(resolve(*experiment, config, seed));
  } catch (const ConfigError& e) {
    return fail(kExitConfig, "config_error", e.what());
  }

  std::string canonical = std::string(kExperimentKey) + " = " + experiment->name + "\n";
  Json resolved = Json::object();
  for (const auto& [k, v] : settings->values()) {
    canonical += k + " = " + v + "\n";
    resolved[k] = v;
  }

  Json summary;
  summary["experiment"] = experiment->name;
  summary["library_version"] = kVersion;
  summary["seed"] = seed;
  summary["config_hash"] = fnv1a_hex(canonical);
  summary["config"] = resolved;

  RunResult result;
  result.out_dir = out_dir;
  RunOutput output;
  try {
    output = experiment->run(*settings);
  } catch (const ConfigError& e) {
    return fail(kExitConfig, "config_error", e.what());
  } catch (const InvalidArgumentError& e) {
    return fail(kExitConfig, "config_error", std::string("invalid parameter: ") + e.what());
  } catch (const InfiniteCoordinateError& e) {
    return fail(kExitConfig, "config_error", std::string("invalid parameter: ") + e.what());
  } catch (const Error& e) {
    result.exit_code = kExitNumeric;
    result.status = "numeric_failure";
    result.message = e.what();
  }

  if (result.exit_code == kExitOk) {
    bool all = true;
    for (const auto& c : output.checks) all = all && c.passed;
    result.exit_code = all ? kExitOk : kExitCheck;
    result.status = all ? "ok" : "check_failed";
    result.checks = output.checks;
    if (!all) {
      for (const auto& c : output.checks) {
        if (!c.passed) result.message += (result.message.empty() ? "failed checks: " : ", ") + c.name;
      }
    }
  }

  summary["status"] = result.status;
  summary["exit_code"] = result.exit_code;
  if (result.exit_code == kExitNumeric) summary["error"] = result.message;

  try {
    fs::create_directories(out_dir);
    Json outputs = Json::array();
    for (const auto& table : output.tables) {
      write_atomic(out_dir / table.file, format_csv(table));
      result.files.push_back(table.file);
      Json o;
      o["file"] = table.file;
      o["columns"] = table.columns;
      o["rows"] = table.rows.size();
      outputs.push_back(o);
    }
    summary["outputs"] = outputs;
    summary["audits"] = output.audits;
    summary["results"] = output.results;
    Json checks = Json::array();
    for (const auto& c : output.checks) checks.push_back(check_json(c));
    summary["checks"] = checks;
    write_atomic(out_dir / "summary.json", summary.dump(2) + "\n");
    result.files.push_back("summary.json");
  } catch (const std::exception& e) {
    return fail(kExitConfig, "config_error", std::string("cannot write outputs: ") + e.what());
  }
  return result;
}

void print_catalog(std::ostream& os) {
  for (const auto& e : experiments()) {
    os << e.name << "\n  " << e.description << "\n  outputs:\n";
    for (const auto& o : e.outputs) {
      os << "    " << o.file << ": ";
      for (std::size_t c = 0; c < o.columns.size(); ++c) os << (c ? "," : "") << o.columns[c];
      os << "\n      " << o.description << "\n";
    }
    os << "    summary.json\n  keys:\n";
    for (const auto& k : e.keys) {
      os << "    " << std::left << std::setw(26) << k.key << " " << to_string(k.kind);
      os << (k.fallback.empty() ? ", optional" : ", default " + k.fallback);
      for (const auto& [p, v] : k.profile_defaults) os << ", " << p << " = " << v;
      os << "\n      " << k.help << "\n";
    }
    os << "\n";
  }
  os << "schedule profiles:\n";
  for (const auto& p : profile_registry()) {
    os << "  " << p.name << " (";
    for (std::size_t i = 0; i < p.params.size(); ++i) os << (i ? ", " : "") << p.params[i];
    os << "): " << p.description << "\n";
  }
}

}  // namespace wzm::runner
