#include "labmech/replay_trace.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <ostream>
#include <string>

#include "labmech/error.hpp"
#include "labmech/number_format.hpp"

namespace labmech {
namespace {

constexpr std::array<char, 8> kMagic = {'L', 'M', 'T', 'R', 'A', 'C', 'E', '\0'};
constexpr int kFields = 17;
static_assert(kFields * 8 == kTraceRecordSize);

template <class T>
void put_le(std::string& buf, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xffu));
  }
}

template <class T>
T get_le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return static_cast<T>(v);
}

std::array<std::uint64_t, kFields> pack(const TraceRecord& r) {
  const auto b = [](double d) { return std::bit_cast<std::uint64_t>(d); };
  return {b(r.time),        b(r.phi),          b(r.theta),       b(r.phidot),
          b(r.thetadot),    b(r.normal.x),     b(r.normal.y),    b(r.normal.z),
          b(r.height),      b(r.volume),       b(r.residual),    b(r.screw_angle),
          b(r.screw_axial), b(r.knob_q),       b(r.knob_qdot),   static_cast<std::uint64_t>(r.knob_index),
          b(r.eccentric_theta)};
}

TraceRecord unpack(const std::array<std::uint64_t, kFields>& f) {
  const auto d = [](std::uint64_t u) { return std::bit_cast<double>(u); };
  TraceRecord r;
  r.time = d(f[0]);
  r.phi = d(f[1]);
  r.theta = d(f[2]);
  r.phidot = d(f[3]);
  r.thetadot = d(f[4]);
  r.normal = {d(f[5]), d(f[6]), d(f[7])};
  r.height = d(f[8]);
  r.volume = d(f[9]);
  r.residual = d(f[10]);
  r.screw_angle = d(f[11]);
  r.screw_axial = d(f[12]);
  r.knob_q = d(f[13]);
  r.knob_qdot = d(f[14]);
  r.knob_index = static_cast<std::int64_t>(f[15]);
  r.eccentric_theta = d(f[16]);
  return r;
}

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedTrace, what); }

}  // namespace

void write_trace(std::ostream& out, const ReplayTrace& trace) {
  std::string buf;
  buf.reserve(kTraceHeaderSize + trace.records.size() * kTraceRecordSize);
  buf.append(kMagic.data(), kMagic.size());
  put_le<std::uint16_t>(buf, kTraceVersion);
  put_le<std::uint16_t>(buf, static_cast<std::uint16_t>(kTraceRecordSize));
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(trace.kind));
  for (const TraceRecord& r : trace.records) {
    for (std::uint64_t field : pack(r)) put_le<std::uint64_t>(buf, field);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorCode::InvalidArgument, "failed to write trace");
}

void write_trace_file(const std::filesystem::path& path, const ReplayTrace& trace) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string() + " for writing");
  write_trace(out, trace);
}

ReplayTrace read_trace(std::istream& in) {
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (bytes.size() < kTraceHeaderSize) malformed("header truncated");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (std::memcmp(p, kMagic.data(), kMagic.size()) != 0) malformed("bad magic");
  if (get_le<std::uint16_t>(p + 8) != kTraceVersion) malformed("unsupported version");
  if (get_le<std::uint16_t>(p + 10) != kTraceRecordSize) malformed("unexpected record size");
  const auto kind = get_le<std::uint32_t>(p + 12);
  if (kind < 1 || kind > 3) malformed("unknown trace kind " + std::to_string(kind));

  ReplayTrace trace;
  trace.kind = static_cast<TraceKind>(kind);
  const std::size_t body = bytes.size() - kTraceHeaderSize;
  const std::size_t count = body / kTraceRecordSize;
  if (body % kTraceRecordSize != 0) malformed("record " + std::to_string(count) + " truncated");
  trace.records.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const unsigned char* rec = p + kTraceHeaderSize + i * kTraceRecordSize;
    std::array<std::uint64_t, kFields> fields{};
    for (int f = 0; f < kFields; ++f) fields[static_cast<std::size_t>(f)] = get_le<std::uint64_t>(rec + 8 * f);
    trace.records.push_back(unpack(fields));
  }
  return trace;
}

ReplayTrace read_trace_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) malformed("cannot open " + path.string());
  return read_trace(in);
}

void write_trace_table(std::ostream& out, const ReplayTrace& trace) {
  out << "step time phi theta phidot thetadot nx ny nz height volume residual screw_angle "
         "screw_axial knob_q knob_qdot knob_index eccentric_theta\n";
  std::size_t step = 0;
  for (const TraceRecord& r : trace.records) {
    const double values[] = {r.time,     r.phi,    r.theta,      r.phidot,      r.thetadot,
                             r.normal.x, r.normal.y, r.normal.z, r.height,      r.volume,
                             r.residual, r.screw_angle, r.screw_axial, r.knob_q, r.knob_qdot};
    out << step++;
    for (double v : values) out << ' ' << format_roundtrip(v);
    out << ' ' << r.knob_index << ' ' << format_roundtrip(r.eccentric_theta) << '\n';
  }
}

}  // namespace labmech
