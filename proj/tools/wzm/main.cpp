// wzm: command line front end for the experiment runner.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wzm/runner/runner.hpp"
#include "wzm/version.hpp"

int main(int argc, char** argv) {
  namespace r = wzm::runner;
  CLI::App app{"Weak Zeno measurement experiments"};
  app.set_version_flag("--version", wzm::kVersion);
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "Show experiments, their keys and output schemas");

  std::string config_path;
  long long seed = -1;
  std::string out_dir;
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("--seed", seed, "Seed (replaces the config's seed)")->check(CLI::NonNegativeNumber);
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--override", overrides, "section.key=value, repeatable")->take_all();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : r::kExitConfig;
  }

  if (list->parsed()) {
    r::print_catalog(std::cout);
    return 0;
  }

  r::RunRequest request;
  if (seed >= 0) request.seed = static_cast<std::uint64_t>(seed);
  if (!out_dir.empty()) request.out_dir = out_dir;
  request.overrides = overrides;
  const auto result = r::run_config_file(config_path, request);
  if (result.exit_code == r::kExitConfig) {
    std::cerr << "config error: " << result.message << "\n";
    return result.exit_code;
  }
  for (const auto& c : result.checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " = " << c.value << "\n";
  }
  std::cout << "status: " << result.status << " (" << result.out_dir.string() << ")\n";
  if (result.exit_code == r::kExitNumeric) std::cerr << "numeric failure: " << result.message << "\n";
  return result.exit_code;
}
