#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "labmech/geometry.hpp"

namespace labmech {

enum class TraceKind : std::uint32_t { Liquid = 1, Screw = 2, Knob = 3 };

/// One simulation step. Fields a scene does not drive stay zero.
struct TraceRecord {
  double time = 0.0;
  double phi = 0.0;
  double theta = 0.0;
  double phidot = 0.0;
  double thetadot = 0.0;
  Vec3 normal{};
  double height = 0.0;
  double volume = 0.0;
  double residual = 0.0;
  double screw_angle = 0.0;
  double screw_axial = 0.0;
  double knob_q = 0.0;
  double knob_qdot = 0.0;
  std::int64_t knob_index = 0;
  double eccentric_theta = 0.0;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct ReplayTrace {
  TraceKind kind = TraceKind::Liquid;
  std::vector<TraceRecord> records;

  friend bool operator==(const ReplayTrace&, const ReplayTrace&) = default;
};

/// Binary layout: a 16-byte header ("LMTRACE\0", u16 version, u16 record
/// size, u32 kind) followed by fixed 136-byte little-endian records.
inline constexpr std::uint16_t kTraceVersion = 1;
inline constexpr std::size_t kTraceHeaderSize = 16;
inline constexpr std::size_t kTraceRecordSize = 136;

void write_trace(std::ostream& out, const ReplayTrace& trace);
void write_trace_file(const std::filesystem::path& path, const ReplayTrace& trace);

/// Throws Error(MalformedTrace) naming the offending record.
ReplayTrace read_trace(std::istream& in);
ReplayTrace read_trace_file(const std::filesystem::path& path);

/// Whitespace-separated table with a header row; values use round-trip
/// decimal formatting.
void write_trace_table(std::ostream& out, const ReplayTrace& trace);

}  // namespace labmech
