#include "labmech_cli/inputs.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

#include "labmech/error.hpp"
#include "labmech/mesh.hpp"

namespace labmech::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view token, double& value) {
  const char* end = token.data() + token.size();
  const auto res = std::from_chars(token.data(), end, value);
  return res.ec == std::errc{} && res.ptr == end;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

/// Calls `fn(line_number, tokens)` for every non-blank, non-comment line.
template <typename Fn>
void for_each_row(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = split_ws(line);
    if (!tokens.empty()) fn(line_no, tokens);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

[[noreturn]] void parse_failure(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure(2, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure(2, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Failure(2, "failed writing " + path.string());
}

std::vector<double> parse_number_list(std::string_view text, std::string_view what) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view token = trim(text.substr(pos, comma == text.npos ? text.npos : comma - pos));
    double v = 0.0;
    if (!parse_double(token, v)) {
      throw Failure(2, std::string(what) + ": '" + std::string(token) + "' is not a number");
    }
    values.push_back(v);
    if (comma == text.npos) break;
    pos = comma + 1;
  }
  return values;
}

std::vector<FrameSample> parse_trajectory(std::string_view text) {
  std::vector<FrameSample> samples;
  for_each_row(text, [&](std::size_t line, const std::vector<std::string_view>& tokens) {
    if (tokens.size() != 4 && tokens.size() != 8) {
      parse_failure(line, "expected 4 or 8 columns, found " + std::to_string(tokens.size()));
    }
    std::array<double, 8> v{};
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (!parse_double(tokens[i], v[i])) {
        parse_failure(line, "'" + std::string(tokens[i]) + "' is not a number");
      }
    }
    FrameSample s{v[0], {v[1], v[2], v[3]}, std::nullopt};
    if (tokens.size() == 8) s.orientation = std::array<double, 4>{v[4], v[5], v[6], v[7]};
    samples.push_back(s);
  });
  if (samples.empty()) throw Error(ErrorCode::ParseError, "trajectory has no samples");
  return samples;
}

std::vector<double> parse_profile(std::string_view text) {
  std::vector<double> values;
  for_each_row(text, [&](std::size_t line, const std::vector<std::string_view>& tokens) {
    if (tokens.size() != 1) parse_failure(line, "expected one value per line");
    double v = 0.0;
    if (!parse_double(tokens[0], v)) parse_failure(line, "'" + std::string(tokens[0]) + "' is not a number");
    values.push_back(v);
  });
  return values;
}

TriMesh parse_mesh_bytes(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_mesh(in);
}

}  // namespace labmech::cli
