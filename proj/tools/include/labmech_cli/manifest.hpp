#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace labmech::cli {

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

/// Sidecar describing one command run, written next to its primary output as
/// `<output>.manifest.json`.
class RunManifest {
 public:
  explicit RunManifest(std::string command);

  void set_parameters(nlohmann::json parameters) { parameters_ = std::move(parameters); }
  void add_input(const std::filesystem::path& path, std::string_view bytes);
  void add_output(const std::filesystem::path& path);

  nlohmann::json to_json() const;
  /// Writes the sidecar for `primary` and returns its path.
  std::filesystem::path write_beside(const std::filesystem::path& primary) const;

 private:
  std::string command_;
  nlohmann::json parameters_ = nlohmann::json::object();
  nlohmann::json inputs_ = nlohmann::json::array();
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace labmech::cli
