#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace aqo::cli {

inline constexpr const char* kVersion = "1.0.0";

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kDomainFailure = 1;
inline constexpr int kIoFailure = 2;

/// Written next to every output; `parameters` holds the fully resolved
/// inputs of the command, so replaying it reproduces the outputs.
struct RunManifest {
  std::string command;
  std::string version = kVersion;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> input_paths;
  std::vector<std::string> output_paths;
  double wall_time_s = 0.0;
  /// Command-specific additions (histogram edges, summaries).
  nlohmann::json extra = nlohmann::json::object();
};

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

/// Where the manifest of an output goes: `<dir>/manifest.json` for directory
/// outputs, the output path with extension ".manifest.json" otherwise.
std::filesystem::path manifest_path(const std::filesystem::path& out, bool directory);

/// Runs one resolved command. Throws on failure.
RunManifest execute(const std::string& command, const nlohmann::json& parameters);

/// Parses argv, runs, prints diagnostics to stderr and returns the exit code.
int run(int argc, const char* const* argv);

}  // namespace aqo::cli
