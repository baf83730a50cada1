#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "labmech/sim_harness.hpp"

namespace labmech::cli {

/// A failure that maps directly to a process exit status.
class Failure : public std::runtime_error {
 public:
  Failure(int exit_code, const std::string& message)
      : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

/// Whole file as bytes. Throws Failure(2) when it cannot be read.
std::string read_file_bytes(const std::filesystem::path& path);

/// Writes `bytes` to `path`, replacing any previous file.
void write_file_bytes(const std::filesystem::path& path, std::string_view bytes);

/// Comma-separated numbers ("0,0.5,1"). Throws Failure(2) naming `what`.
std::vector<double> parse_number_list(std::string_view text, std::string_view what);

/// Trajectory text: one sample per line, columns `time ax ay az` with an
/// optional `qw qx qy qz` orientation; blank lines and `#` comments ignored.
/// Throws Error(ParseError) with the line number.
std::vector<FrameSample> parse_trajectory(std::string_view text);

/// One number per line (torque or angle profiles), with `#` comments.
std::vector<double> parse_profile(std::string_view text);

TriMesh parse_mesh_bytes(std::string_view text);

}  // namespace labmech::cli
