#include "labmech/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <unordered_map>

#include "labmech/error.hpp"

namespace labmech {

double Aabb::extent() const {
  const Vec3 d = hi - lo;
  return std::max({d.x, d.y, d.z});
}

Aabb bounding_box(const TriMesh& mesh) {
  if (mesh.vertices.empty()) return {};
  Aabb box{mesh.vertices.front(), mesh.vertices.front()};
  for (const Vec3& v : mesh.vertices) {
    box.lo = {std::min(box.lo.x, v.x), std::min(box.lo.y, v.y), std::min(box.lo.z, v.z)};
    box.hi = {std::max(box.hi.x, v.x), std::max(box.hi.y, v.y), std::max(box.hi.z, v.z)};
  }
  return box;
}

void validate_watertight(const TriMesh& mesh) {
  if (mesh.triangles.empty()) throw Error(ErrorCode::NotWatertight, "mesh has no triangles");
  const auto nv = mesh.vertices.size();
  for (const Vec3& v : mesh.vertices) {
    if (!is_finite(v)) throw Error(ErrorCode::NotWatertight, "mesh has a non-finite vertex");
  }
  const double ext = bounding_box(mesh).extent();
  const double min_area = 1e-12 * ext * ext;

  std::unordered_map<std::uint64_t, int> directed;
  directed.reserve(mesh.triangles.size() * 3);
  const auto key = [](std::uint32_t a, std::uint32_t b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
  };
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Triangle& tri = mesh.triangles[t];
    for (auto i : tri) {
      if (i >= nv) {
        throw Error(ErrorCode::NotWatertight, "triangle " + std::to_string(t) + " index out of range");
      }
    }
    const Vec3& a = mesh.vertices[tri[0]];
    const double area = 0.5 * norm(cross(mesh.vertices[tri[1]] - a, mesh.vertices[tri[2]] - a));
    if (!(area > min_area)) {
      throw Error(ErrorCode::NotWatertight, "triangle " + std::to_string(t) + " is degenerate");
    }
    for (int e = 0; e < 3; ++e) {
      if (++directed[key(tri[e], tri[(e + 1) % 3])] > 1) {
        throw Error(ErrorCode::NotWatertight,
                    "edge used twice in the same direction at triangle " + std::to_string(t));
      }
    }
  }
  for (const auto& [k, count] : directed) {
    const auto a = static_cast<std::uint32_t>(k >> 32);
    const auto b = static_cast<std::uint32_t>(k & 0xffffffffu);
    if (!directed.contains(key(b, a))) {
      throw Error(ErrorCode::NotWatertight,
                  "boundary edge " + std::to_string(a + 1) + "-" + std::to_string(b + 1));
    }
  }
}

double signed_volume(const TriMesh& mesh, const Vec3& origin) {
  double six_v = 0.0;
  for (const Triangle& t : mesh.triangles) {
    six_v += triple(mesh.vertices[t[0]] - origin, mesh.vertices[t[1]] - origin,
                    mesh.vertices[t[2]] - origin);
  }
  return six_v / 6.0;
}

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

TriMesh read_mesh(std::istream& in) {
  TriMesh mesh;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Vec3 v;
      if (!(ls >> v.x >> v.y >> v.z)) parse_fail(lineno, "expected three vertex coordinates");
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::array<long long, 3> idx{};
      for (auto& i : idx) {
        std::string tok;
        if (!(ls >> tok)) parse_fail(lineno, "expected three face indices");
        // Accept "i/vt/vn" tokens by keeping the vertex index only.
        tok = tok.substr(0, tok.find('/'));
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), i);
        if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
          parse_fail(lineno, "bad face index '" + tok + "'");
        }
      }
      std::string extra;
      if (ls >> extra) parse_fail(lineno, "only triangular faces are supported");
      Triangle tri{};
      for (int k = 0; k < 3; ++k) {
        if (idx[k] < 1 || static_cast<std::size_t>(idx[k]) > mesh.vertices.size()) {
          parse_fail(lineno, "face index " + std::to_string(idx[k]) + " out of range");
        }
        tri[k] = static_cast<std::uint32_t>(idx[k] - 1);
      }
      mesh.triangles.push_back(tri);
    } else {
      parse_fail(lineno, "unknown record '" + tag + "'");
    }
  }
  return mesh;
}

TriMesh read_mesh_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open mesh file " + path.string());
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const TriMesh& mesh) {
  out << std::setprecision(17);
  for (const Vec3& v : mesh.vertices) out << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
  for (const Triangle& t : mesh.triangles) {
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
}

void write_mesh_file(const std::filesystem::path& path, const TriMesh& mesh) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write mesh file " + path.string());
  write_mesh(out, mesh);
}

TriMesh make_box(const Vec3& lo, const Vec3& hi) {
  TriMesh m;
  for (int i = 0; i < 8; ++i) {
    m.vertices.push_back({(i & 1) ? hi.x : lo.x, (i & 2) ? hi.y : lo.y, (i & 4) ? hi.z : lo.z});
  }
  // Each face as two triangles, outward winding.
  m.triangles = {{0, 2, 1}, {1, 2, 3},   // z = lo
                 {4, 5, 6}, {5, 7, 6},   // z = hi
                 {0, 1, 4}, {1, 5, 4},   // y = lo
                 {2, 6, 3}, {3, 6, 7},   // y = hi
                 {0, 4, 2}, {2, 4, 6},   // x = lo
                 {1, 3, 5}, {3, 7, 5}};  // x = hi
  return m;
}

TriMesh make_unit_cube() { return make_box({0, 0, 0}, {1, 1, 1}); }

TriMesh make_cylinder(double radius, double height, int segments) {
  if (segments < 3 || !(radius > 0.0) || !(height > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "cylinder needs radius, height > 0 and >= 3 segments");
  }
  TriMesh m;
  const auto n = static_cast<std::uint32_t>(segments);
  for (std::uint32_t i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    m.vertices.push_back({radius * std::cos(a), radius * std::sin(a), 0.0});
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    const Vec3& b = m.vertices[i];
    m.vertices.push_back({b.x, b.y, height});
  }
  const std::uint32_t bottom = 2 * n;
  const std::uint32_t top = 2 * n + 1;
  m.vertices.push_back({0, 0, 0});
  m.vertices.push_back({0, 0, height});
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t j = (i + 1) % n;
    m.triangles.push_back({bottom, j, i});
    m.triangles.push_back({top, n + i, n + j});
    m.triangles.push_back({i, j, n + j});
    m.triangles.push_back({i, n + j, n + i});
  }
  return m;
}

TriMesh make_l_prism(double w, double d, double c, double b, double height) {
  if (!(0.0 < c && c < w && 0.0 < b && b < d && height > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "L prism needs 0 < c < w, 0 < b < d, height > 0");
  }
  // Counter-clockwise footprint; (c,b) and (0,b) split it into two convex parts.
  const std::vector<std::array<double, 2>> outline = {{0, 0}, {w, 0}, {w, b}, {c, b},
                                                      {c, d}, {0, d}, {0, b}};
  const std::vector<Triangle> cap = {{0, 1, 2}, {0, 2, 3}, {0, 3, 6}, {6, 3, 4}, {6, 4, 5}};
  TriMesh m;
  const auto n = static_cast<std::uint32_t>(outline.size());
  for (const auto& [x, y] : outline) m.vertices.push_back({x, y, 0.0});
  for (const auto& [x, y] : outline) m.vertices.push_back({x, y, height});
  for (const Triangle& t : cap) {
    m.triangles.push_back({t[0], t[2], t[1]});
    m.triangles.push_back({n + t[0], n + t[1], n + t[2]});
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t j = (i + 1) % n;
    m.triangles.push_back({i, j, n + j});
    m.triangles.push_back({i, n + j, n + i});
  }
  return m;
}

TriMesh make_icosphere(double radius, int subdivisions) {
  const double g = (1.0 + std::sqrt(5.0)) / 2.0;
  TriMesh m;
  m.vertices = {{-1, g, 0}, {1, g, 0}, {-1, -g, 0}, {1, -g, 0}, {0, -1, g}, {0, 1, g},
                {0, -1, -g}, {0, 1, -g}, {g, 0, -1}, {g, 0, 1}, {-g, 0, -1}, {-g, 0, 1}};
  m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                 {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                 {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                 {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (Vec3& v : m.vertices) v = normalized(v);
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoint;
    const auto mid = [&](std::uint32_t a, std::uint32_t b) {
      const auto k = std::minmax(a, b);
      if (auto it = midpoint.find(k); it != midpoint.end()) return it->second;
      const auto idx = static_cast<std::uint32_t>(m.vertices.size());
      m.vertices.push_back(normalized(m.vertices[a] + m.vertices[b]));
      midpoint.emplace(k, idx);
      return idx;
    };
    std::vector<Triangle> next;
    next.reserve(m.triangles.size() * 4);
    for (const Triangle& t : m.triangles) {
      const auto ab = mid(t[0], t[1]);
      const auto bc = mid(t[1], t[2]);
      const auto ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.triangles = std::move(next);
  }
  for (Vec3& v : m.vertices) v *= radius;
  return m;
}

}  // namespace labmech
