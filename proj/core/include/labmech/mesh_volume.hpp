#pragma once

#include <optional>

#include "labmech/geometry.hpp"
#include "labmech/mesh.hpp"

namespace labmech {

/// Liquid surface: `normal` is the upward unit normal and `height` the signed
/// offset of the plane along it from the container's bounding-box center.
/// Liquid occupies the side where (x - o) . normal <= 0.
struct LiquidPlane {
  Vec3 normal{0, 0, 1};
  double height = 0.0;
};

struct ClipResult {
  double volume = 0.0;
  double cut_area = 0.0;  ///< area of the liquid surface inside the container
  bool empty = false;     ///< no vertex strictly below the plane
  bool full = false;      ///< no vertex strictly above the plane
};

/// A watertight mesh with cached bounds and volume. Construction validates.
class Container {
 public:
  explicit Container(TriMesh mesh);

  const TriMesh& mesh() const noexcept { return mesh_; }
  const Aabb& bounds() const noexcept { return bounds_; }
  Vec3 center() const noexcept { return bounds_.center(); }
  double extent() const noexcept { return extent_; }
  double volume() const noexcept { return volume_; }

  /// Range of plane heights [lowest, highest] spanned by the mesh along `normal`.
  std::pair<double, double> support(const Vec3& normal) const;

 private:
  TriMesh mesh_;
  Aabb bounds_;
  double extent_ = 0.0;
  double volume_ = 0.0;
};

/// Enclosed volume. Throws Error(NotWatertight).
double mesh_volume(const TriMesh& mesh);

ClipResult clip_volume(const Container& container, const LiquidPlane& plane);
ClipResult clip_volume(const TriMesh& mesh, const LiquidPlane& plane);

struct HeightSolution {
  double height = 0.0;
  double volume = 0.0;
  double residual = 0.0;  ///< clipped volume minus target
  int iterations = 0;     ///< clip evaluations spent
};

inline constexpr int kMaxHeightIterations = 200;

/// Plane height along `normal` whose clipped volume equals `target_volume`.
/// Safeguarded Newton iteration (dV/dh = cut area) inside the support bracket,
/// falling back to bisection. `initial_height` defaults to the bracket midpoint.
/// Throws Error(VolumeOutOfRange) or Error(NoConvergence).
HeightSolution solve_height(const Container& container, const Vec3& normal, double target_volume,
                            std::optional<double> initial_height = std::nullopt);

/// Closed mesh of the liquid body: clipped walls plus a cap over each cut
/// loop, fan-triangulated from the loop centroid. Throws Error(OpenCutLoop)
/// when a loop cannot be closed and Error(NonStarShapedLoop) when the fan
/// would fold over.
TriMesh liquid_geometry(const Container& container, const LiquidPlane& plane);
TriMesh liquid_geometry(const TriMesh& mesh, const LiquidPlane& plane);

}  // namespace labmech
