#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "labmech/geometry.hpp"

namespace labmech {

using Triangle = std::array<std::uint32_t, 3>;

/// Indexed triangle mesh; triangles are counter-clockwise seen from outside.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
};

struct Aabb {
  Vec3 lo;
  Vec3 hi;

  Vec3 center() const { return (lo + hi) * 0.5; }
  /// Longest side; the length scale used by every relative tolerance.
  double extent() const;
};

Aabb bounding_box(const TriMesh& mesh);

/// Throws Error(NotWatertight) unless every directed edge has exactly one
/// opposite twin, indices are in range and no triangle is degenerate
/// (area <= 1e-12 * extent^2).
void validate_watertight(const TriMesh& mesh);

/// Divergence-theorem volume about `origin`; no validation.
double signed_volume(const TriMesh& mesh, const Vec3& origin);

/// ASCII subset: "v x y z" and "f i j k" lines with 1-based indices. '#'
/// starts a comment. Throws Error(ParseError) with the line number.
TriMesh read_mesh(std::istream& in);
TriMesh read_mesh_file(const std::filesystem::path& path);
void write_mesh(std::ostream& out, const TriMesh& mesh);
void write_mesh_file(const std::filesystem::path& path, const TriMesh& mesh);

// Primitive containers.
TriMesh make_box(const Vec3& lo, const Vec3& hi);
TriMesh make_unit_cube();
/// Closed polygonal cylinder with its axis along z, base at z = 0.
TriMesh make_cylinder(double radius, double height, int segments);
/// L-shaped prism: footprint [0,w]x[0,d] with the corner [c,w]x[b,d] removed,
/// extruded over [0, height].
TriMesh make_l_prism(double w, double d, double c, double b, double height);
TriMesh make_icosphere(double radius, int subdivisions);

}  // namespace labmech
