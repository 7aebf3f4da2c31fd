#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "exciplex/cli/config.hpp"

namespace exciplex::cli {

struct ScenarioInfo {
  std::string name;
  std::string description;
};

/// Catalogue in a fixed order.
const std::vector<ScenarioInfo>& list_scenarios();
bool has_scenario(const std::string& name);

struct OutputFile {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::size_t bytes = 0;
};

struct RunManifest {
  std::string scenario;
  std::string library_version;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  double wall_clock_seconds = 0.0;
  std::string config_source;
  std::vector<OutputFile> files;  // sorted by path
  std::vector<std::string> warnings;
  RunConfig config;

  /// Resolved parameters (defaults included), sweep, file digests and timing.
  std::string to_json() const;
};

std::string sha256_hex(const std::string& data);
std::string library_version();

/// Runs the configured scenario into config.output_dir and writes manifest.json
/// there last. Throws ConfigError for invalid input and NumericalError when a
/// solver gives up.
RunManifest run_scenario(const RunConfig& config);

}  // namespace exciplex::cli
