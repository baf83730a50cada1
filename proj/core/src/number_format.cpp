#include "labmech/number_format.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace labmech {
namespace {

int significant_digits(const char* first, const char* last) {
  int digits = 0;
  bool leading = true;
  for (const char* p = first; p != last; ++p) {
    if (*p == 'e' || *p == 'E') break;
    if (!std::isdigit(static_cast<unsigned char>(*p))) continue;
    if (leading && *p == '0') continue;
    leading = false;
    ++digits;
  }
  return digits;
}

}  // namespace

std::string format_roundtrip(double value) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (significant_digits(buf.data(), res.ptr) >= 12) return {buf.data(), res.ptr};
  return format_sig12(value);
}

std::string format_sig12(double value) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  std::array<char, 64> buf{};
  const int n = std::snprintf(buf.data(), buf.size(), "%#.12g", value);
  return {buf.data(), static_cast<std::size_t>(n)};
}

}  // namespace labmech
