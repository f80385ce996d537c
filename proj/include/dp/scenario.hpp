#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dp/grid.hpp"
#include "dp/profiles.hpp"

namespace dp {

inline constexpr const char* kToolVersion = "dp-lab 1.0.0";
inline constexpr int kSchemaVersion = 1;

enum class ScenarioKind { Identities, SinglePeakon, AntipeakonPeakon, Train, Shock, Sweep };

enum class PerturbationShape { None, Bump, LeftNegativeMomentum };

struct GridConfig {
  double length = 60.0;
  Eigen::Index n = 8192;
};

struct TimeConfig {
  double T = 5.0;
  double cfl = 0.3;
  int out_every = 50;
};

struct ProfileConfig {
  double c = 1.0;                 // single peakon speed
  double x0 = 0.0;                // initial crest location
  int mollify_n = 32;
  std::vector<double> velocities; // train speeds
  std::vector<double> shifts;     // train shifts
  double separation = 0.0;        // train L
  double shock_k = 1.0;
  double shock_width = 0.05;      // mollification width for shock runs
};

struct PerturbationConfig {
  PerturbationShape shape = PerturbationShape::None;
  double amplitude = 0.0;  // target H-norm
  double center = 0.0;
  double width = 1.0;
};

struct DiagnosticsConfig {
  bool modulation = true;
  bool decay_window = true;
  bool monotonicity = true;
  double weight_K = 0.0;  // 0: sqrt(L)/8
  bool filter = true;
};

struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::SinglePeakon;
  GridConfig grid;
  TimeConfig time;
  ProfileConfig profile;
  PerturbationConfig perturbation;
  DiagnosticsConfig diagnostics;
  unsigned long long seed = 0;
  std::string output_dir = "out";
  std::vector<nlohmann::json> sweep_runs;  // config patches for sweep

  static ScenarioConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  static ScenarioConfig load(const std::string& path);
};

/// Human-readable validation problems; empty means runnable.
std::vector<std::string> validate(const ScenarioConfig& config);

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double bound = 0.0;
};

struct RunManifest {
  nlohmann::json config_echo;
  std::string version;
  double wall_clock_s = 0.0;
  std::vector<std::string> files;       // paths relative to output_dir
  std::vector<std::string> hashes;      // fnv1a-64 hex per file
  std::vector<CheckResult> checks;
  std::vector<std::string> warnings;
  bool rollup = false;

  nlohmann::json to_json() const;
};

/// Executes the scenario, writes data/manifest under config.output_dir and
/// returns the manifest. Deterministic for a fixed config + seed.
RunManifest run(const ScenarioConfig& config);

/// Sweep fan-out with per-run subdirectories; jobs > 1 runs them in
/// parallel (no shared mutable state).
RunManifest run_sweep(const ScenarioConfig& config, int jobs);

std::string fnv1a64_file(const std::string& path);

}  // namespace dp
