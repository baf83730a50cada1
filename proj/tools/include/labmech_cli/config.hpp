#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "labmech/sim_harness.hpp"

namespace labmech::cli {

/// Configuration documents carry `"version": 1` and any of the sections
/// `helix`, `detent`, `screw`, `scene`, `score`. Unknown keys are rejected.
inline constexpr int kConfigVersion = 1;

struct LoadedConfig {
  nlohmann::json document = nlohmann::json::object();
  std::filesystem::path base_dir;  ///< relative mesh paths resolve against this
};

/// Parses and checks the version and the section names. Throws Failure(2).
LoadedConfig parse_config(std::string_view bytes, const std::filesystem::path& origin);

/// Section or an empty object. Throws Failure(2) on unknown keys.
nlohmann::json section(const LoadedConfig& config, const std::string& name,
                       const std::vector<std::string>& allowed_keys);

/// Numeric field with a fallback. Throws Failure(2) on a type mismatch.
double number_or(const nlohmann::json& object, const std::string& key, double fallback);
std::vector<double> numbers_or(const nlohmann::json& object, const std::string& key,
                               std::vector<double> fallback);

/// Container described by a `container` object: one of `mesh` (path),
/// `box` {lo, hi}, `cylinder` {radius, height, segments},
/// `l_prism` {w, d, c, b, height} or `icosphere` {radius, subdivisions}.
/// `mesh_bytes` receives the file contents when a mesh file is read.
TriMesh build_container(const nlohmann::json& spec, const std::filesystem::path& base_dir,
                        std::filesystem::path* mesh_path, std::string* mesh_bytes);

}  // namespace labmech::cli
