#include "labmech/mesh_volume.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>
#include <vector>

#include "labmech/error.hpp"

namespace labmech {
namespace {

// Vertex identity inside a clipped surface: either an input vertex or the
// crossing point on an input edge. Shared edges produce identical keys on
// both adjacent triangles.
using VertexKey = std::uint64_t;
constexpr VertexKey kEdgeBit = VertexKey{1} << 63;

VertexKey vertex_key(std::uint32_t v) { return v; }
VertexKey edge_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return kEdgeBit | (static_cast<VertexKey>(a) << 31) | b;
}

struct ClipVertex {
  Vec3 p;
  VertexKey key;
};

struct ClippedPolygon {
  std::array<ClipVertex, 4> v;
  int count = 0;
};

struct PlaneFrame {
  Vec3 normal;
  Vec3 origin;
  double tolerance;
};

PlaneFrame frame_for(const Container& c, const LiquidPlane& plane) {
  const double n = norm(plane.normal);
  if (!(std::abs(n - 1.0) <= 1e-9) || !std::isfinite(plane.height)) {
    throw Error(ErrorCode::InvalidArgument, "plane normal must be a unit vector and height finite");
  }
  const Vec3 unit = plane.normal / n;
  return {unit, c.center() + plane.height * unit, 1e-9 * c.extent()};
}

// Crossing point of edge (a, b), computed in canonical vertex order so both
// adjacent triangles agree bit for bit.
Vec3 crossing(const TriMesh& m, std::uint32_t a, std::uint32_t b, double sa, double sb) {
  if (a > b) {
    std::swap(a, b);
    std::swap(sa, sb);
  }
  const double t = sa / (sa - sb);
  return m.vertices[a] + t * (m.vertices[b] - m.vertices[a]);
}

// Part of triangle `tri` on the liquid side. Triangles lying in the plane are
// kept only when they face along the normal, i.e. when they bound the liquid
// from above.
ClippedPolygon clip_triangle(const TriMesh& m, const Triangle& tri, const PlaneFrame& f) {
  std::array<double, 3> s{};
  bool any_below = false;
  bool any_above = false;
  for (int i = 0; i < 3; ++i) {
    double d = dot(m.vertices[tri[i]] - f.origin, f.normal);
    if (std::abs(d) <= f.tolerance) d = 0.0;
    s[i] = d;
    any_below |= d < 0.0;
    any_above |= d > 0.0;
  }

  ClippedPolygon poly;
  if (!any_below && !any_above) {
    const Vec3& a = m.vertices[tri[0]];
    const Vec3 area = cross(m.vertices[tri[1]] - a, m.vertices[tri[2]] - a);
    if (dot(area, f.normal) <= 0.0) return poly;
  } else if (!any_below) {
    return poly;
  }

  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    if (s[i] <= 0.0) poly.v[poly.count++] = {m.vertices[tri[i]], vertex_key(tri[i])};
    if ((s[i] < 0.0 && s[j] > 0.0) || (s[i] > 0.0 && s[j] < 0.0)) {
      poly.v[poly.count++] = {crossing(m, tri[i], tri[j], s[i], s[j]), edge_key(tri[i], tri[j])};
    }
  }
  if (poly.count < 3) poly.count = 0;
  return poly;
}

}  // namespace

Container::Container(TriMesh mesh) : mesh_(std::move(mesh)) {
  validate_watertight(mesh_);
  bounds_ = bounding_box(mesh_);
  extent_ = bounds_.extent();
  volume_ = signed_volume(mesh_, bounds_.center());
  if (!(volume_ > 0.0)) {
    throw Error(ErrorCode::NotWatertight, "mesh encloses non-positive volume (inverted winding?)");
  }
}

std::pair<double, double> Container::support(const Vec3& normal) const {
  const Vec3 c = center();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Vec3& v : mesh_.vertices) {
    const double d = dot(v - c, normal);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return {lo, hi};
}

double mesh_volume(const TriMesh& mesh) { return Container(mesh).volume(); }

ClipResult clip_volume(const Container& container, const LiquidPlane& plane) {
  const PlaneFrame f = frame_for(container, plane);
  const TriMesh& m = container.mesh();

  ClipResult r;
  r.empty = true;
  r.full = true;
  for (const Vec3& v : m.vertices) {
    const double d = dot(v - f.origin, f.normal);
    if (d < -f.tolerance) r.empty = false;
    if (d > f.tolerance) r.full = false;
  }

  // With the reference point on the plane the cap carries no flux, so only
  // the clipped walls enter the volume sum. The cap area follows from the
  // walls' projected area, since a closed surface has zero net area vector.
  double six_v = 0.0;
  double projected = 0.0;
  for (const Triangle& tri : m.triangles) {
    const ClippedPolygon poly = clip_triangle(m, tri, f);
    for (int i = 1; i + 1 < poly.count; ++i) {
      const Vec3 a = poly.v[0].p - f.origin;
      const Vec3 b = poly.v[i].p - f.origin;
      const Vec3 c = poly.v[i + 1].p - f.origin;
      six_v += triple(a, b, c);
      projected += dot(cross(b - a, c - a), f.normal);
    }
  }
  r.volume = std::clamp(six_v / 6.0, 0.0, container.volume());
  r.cut_area = std::max(-0.5 * projected, 0.0);
  return r;
}

ClipResult clip_volume(const TriMesh& mesh, const LiquidPlane& plane) {
  return clip_volume(Container(mesh), plane);
}

HeightSolution solve_height(const Container& container, const Vec3& normal, double target_volume,
                            std::optional<double> initial_height) {
  const double total = container.volume();
  if (!std::isfinite(target_volume) || target_volume < -1e-12 * total ||
      target_volume > total * (1.0 + 1e-12)) {
    throw Error(ErrorCode::VolumeOutOfRange, "target volume " + std::to_string(target_volume) +
                                                 " outside [0, " + std::to_string(total) + "]");
  }
  const double n = norm(normal);
  if (!(std::abs(n - 1.0) <= 1e-9)) {
    throw Error(ErrorCode::InvalidArgument, "surface normal must be a unit vector");
  }
  const Vec3 unit = normal / n;
  auto [lo, hi] = container.support(unit);
  const double ext = container.extent();

  HeightSolution out;
  const auto evaluate = [&](double h) {
    ++out.iterations;
    return clip_volume(container, LiquidPlane{unit, h});
  };
  const auto finish = [&](double h, const ClipResult& r) {
    out.height = h;
    out.volume = r.volume;
    out.residual = r.volume - target_volume;
    return out;
  };

  if (target_volume <= 0.0) return finish(lo, evaluate(lo));
  if (target_volume >= total) return finish(hi, evaluate(hi));

  double h = (lo + hi) / 2.0;
  if (initial_height && std::isfinite(*initial_height)) h = std::clamp(*initial_height, lo, hi);

  const double volume_tol = 1e-14 * total;
  const double height_tol = 1e-14 * ext;
  const double min_area = 1e-12 * ext * ext;

  double best_h = h;
  ClipResult best{};
  double best_err = std::numeric_limits<double>::infinity();
  while (out.iterations < kMaxHeightIterations) {
    const ClipResult r = evaluate(h);
    const double f = r.volume - target_volume;
    if (std::abs(f) < best_err) {
      best_err = std::abs(f);
      best_h = h;
      best = r;
    }
    if (std::abs(f) <= volume_tol) break;
    if (f < 0.0) {
      lo = h;
    } else {
      hi = h;
    }
    if (hi - lo <= height_tol) break;

    double next = (lo + hi) / 2.0;
    if (r.cut_area > min_area) {
      const double newton = h - f / r.cut_area;
      if (newton > lo && newton < hi) {
        if (std::abs(newton - h) <= height_tol) {
          h = newton;
          const ClipResult rn = evaluate(h);
          if (std::abs(rn.volume - target_volume) < best_err) {
            best_err = std::abs(rn.volume - target_volume);
            best_h = h;
            best = rn;
          }
          break;
        }
        next = newton;
      }
    }
    h = next;
  }

  if (!(best_err <= 1e-9 * total)) {
    throw Error(ErrorCode::NoConvergence, "height search stalled with volume error " +
                                              std::to_string(best_err));
  }
  return finish(best_h, best);
}

TriMesh liquid_geometry(const Container& container, const LiquidPlane& plane) {
  const PlaneFrame f = frame_for(container, plane);
  const TriMesh& m = container.mesh();

  TriMesh out;
  std::unordered_map<VertexKey, std::uint32_t> index;
  const auto vertex = [&](const ClipVertex& cv) {
    auto [it, inserted] = index.try_emplace(cv.key, static_cast<std::uint32_t>(out.vertices.size()));
    if (inserted) out.vertices.push_back(cv.p);
    return it->second;
  };

  bool any_below = false;
  for (const Vec3& v : m.vertices) any_below |= dot(v - f.origin, f.normal) < -f.tolerance;
  if (!any_below) return out;

  for (const Triangle& tri : m.triangles) {
    const ClippedPolygon poly = clip_triangle(m, tri, f);
    if (poly.count == 0) continue;
    std::array<std::uint32_t, 4> ids{};
    for (int i = 0; i < poly.count; ++i) ids[i] = vertex(poly.v[i]);
    for (int i = 1; i + 1 < poly.count; ++i) out.triangles.push_back({ids[0], ids[i], ids[i + 1]});
  }

  // Wall edges without a twin bound the cut; the cap runs them backwards.
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
  for (const Triangle& t : out.triangles) {
    for (int e = 0; e < 3; ++e) ++directed[{t[e], t[(e + 1) % 3]}];
  }
  std::map<std::uint32_t, std::uint32_t> cap_next;
  for (const auto& [edge, count] : directed) {
    if (directed.contains({edge.second, edge.first})) continue;
    if (count != 1 || !cap_next.emplace(edge.second, edge.first).second) {
      throw Error(ErrorCode::OpenCutLoop, "cut loop branches at a vertex");
    }
  }

  const double area_tol = 1e-12 * container.extent() * container.extent();
  while (!cap_next.empty()) {
    std::vector<std::uint32_t> loop;
    std::uint32_t cur = cap_next.begin()->first;
    const std::uint32_t start = cur;
    do {
      const auto it = cap_next.find(cur);
      if (it == cap_next.end()) throw Error(ErrorCode::OpenCutLoop, "cut loop does not close");
      loop.push_back(cur);
      cur = it->second;
      cap_next.erase(it);
    } while (cur != start);
    if (loop.size() < 3) throw Error(ErrorCode::OpenCutLoop, "cut loop has fewer than 3 vertices");

    Vec3 centroid{};
    for (auto id : loop) centroid += out.vertices[id];
    centroid = centroid / static_cast<double>(loop.size());
    const auto c = static_cast<std::uint32_t>(out.vertices.size());
    out.vertices.push_back(centroid);
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const std::uint32_t a = loop[i];
      const std::uint32_t b = loop[(i + 1) % loop.size()];
      const double facing =
          dot(cross(out.vertices[a] - centroid, out.vertices[b] - centroid), f.normal);
      if (facing < -area_tol) {
        throw Error(ErrorCode::NonStarShapedLoop, "cut loop is not star-shaped about its centroid");
      }
      out.triangles.push_back({c, a, b});
    }
  }
  return out;
}

TriMesh liquid_geometry(const TriMesh& mesh, const LiquidPlane& plane) {
  return liquid_geometry(Container(mesh), plane);
}

}  // namespace labmech
