#include "labmech_cli/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>

#include "labmech_cli/inputs.hpp"

namespace labmech::cli {

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw Failure(1, "SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    char pair[3];
    std::snprintf(pair, sizeof pair, "%02x", digest[i]);
    hex += pair;
  }
  return hex;
}

RunManifest::RunManifest(std::string command)
    : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {}

void RunManifest::add_input(const std::filesystem::path& path, std::string_view bytes) {
  inputs_.push_back({{"path", path.string()}, {"sha256", sha256_hex(bytes)}, {"bytes", bytes.size()}});
}

void RunManifest::add_output(const std::filesystem::path& path) { outputs_.push_back(path.string()); }

nlohmann::json RunManifest::to_json() const {
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
  return {{"command", command_},
          {"parameters", parameters_},
          {"inputs", inputs_},
          {"outputs", outputs_},
          {"wall_clock_seconds", elapsed.count()}};
}

std::filesystem::path RunManifest::write_beside(const std::filesystem::path& primary) const {
  std::filesystem::path sidecar = primary;
  sidecar += ".manifest.json";
  write_file_bytes(sidecar, to_json().dump(2) + "\n");
  return sidecar;
}

}  // namespace labmech::cli
