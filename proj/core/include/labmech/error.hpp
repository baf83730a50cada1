#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace labmech {

enum class ErrorCode : std::uint8_t {
  InvalidArgument,
  DegenerateGradient,
  NonFiniteState,
  ZeroGravity,
  NotWatertight,
  VolumeOutOfRange,
  NoConvergence,
  OpenCutLoop,
  NonStarShapedLoop,
  DegenerateTerm,
  MalformedTrace,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Exception type for every failure raised by the kernel. `code()` is the
/// machine-readable category; `what()` carries the diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Error raised while stepping a scene; remembers which step failed.
class StepError : public Error {
 public:
  StepError(ErrorCode code, std::size_t step, const std::string& message)
      : Error(code, "step " + std::to_string(step) + ": " + message), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace labmech
