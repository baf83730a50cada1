#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace labmech::cli {

/// Exit statuses shared by every command.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  ///< unexpected internal error
  kExitInvalid = 2,  ///< bad arguments, unreadable or malformed input
  kExitSolver = 3,   ///< solver failure (liquid) or NotWatertight (clip, fill-height)
  kExitVolume = 4,   ///< VolumeOutOfRange (clip, fill-height)
};

/// Runs the command line `args` (args[0] is the program name). Results go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace labmech::cli
