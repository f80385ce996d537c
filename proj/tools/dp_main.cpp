#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dp/scenario.hpp"

namespace {

int finish(const dp::RunManifest& manifest) {
  for (const auto& c : manifest.checks)
    std::cout << (c.pass ? "[ok]   " : "[FAIL] ") << c.name << " (value=" << c.value
              << ", bound=" << c.bound << ")\n";
  for (const auto& w : manifest.warnings) std::cout << "[warn] " << w << '\n';
  std::cout << (manifest.rollup ? "PASS" : "FAIL") << '\n';
  return manifest.rollup ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degasperis-Procesi numerical laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_override;
  int jobs = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "scenario config (JSON)")->required();
    sub->add_option("--output-dir", output_override, "override config output_dir");
  };

  auto* cmd_identities = app.add_subcommand("identities", "run the identity suite scenario");
  add_common(cmd_identities);
  auto* cmd_simulate = app.add_subcommand("simulate", "run the configured scenario");
  add_common(cmd_simulate);
  auto* cmd_sweep = app.add_subcommand("sweep", "fan out the configured sweep");
  add_common(cmd_sweep);
  cmd_sweep->add_option("--jobs", jobs, "parallel workers")->check(CLI::PositiveNumber);
  auto* cmd_validate = app.add_subcommand("validate", "check a config without running");
  add_common(cmd_validate);

  CLI11_PARSE(app, argc, argv);

  try {
    dp::ScenarioConfig config = dp::ScenarioConfig::load(config_path);
    if (!output_override.empty()) config.output_dir = output_override;

    if (cmd_validate->parsed()) {
      auto problems = dp::validate(config);
      for (const auto& p : problems) std::cout << "problem: " << p << '\n';
      std::cout << (problems.empty() ? "valid" : "invalid") << '\n';
      return problems.empty() ? 0 : 1;
    }
    if (cmd_identities->parsed()) {
      config.scenario = dp::ScenarioKind::Identities;
      return finish(dp::run(config));
    }
    if (cmd_sweep->parsed()) {
      if (config.scenario != dp::ScenarioKind::Sweep)
        throw std::invalid_argument("sweep subcommand needs a sweep config");
      return finish(dp::run_sweep(config, jobs));
    }
    return finish(dp::run(config));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
