#pragma once

#include <string>

namespace labmech {

/// Shortest decimal that round-trips to `value`, widened to at least 12
/// significant digits when the shortest form is shorter.
std::string format_roundtrip(double value);

/// Exactly 12 significant digits, trailing zeros kept ("0.300000000000").
std::string format_sig12(double value);

}  // namespace labmech
