#pragma once

#include <vector>

#include "labmech/geometry.hpp"

namespace labmech {

/// Helical thread parameters. The centerline is the circular helix
/// H(t) = (r1 cos t, r1 sin t, p t) restricted to 2*pi*l <= t <= 2*pi*h, and
/// the thread surface is the tube of radius r2 swept along it.
struct HelixSpec {
  double r1 = 1.0;  ///< helix radius
  double r2 = 0.1;  ///< gauge (wire) radius
  double p = 0.05;  ///< axial advance per radian; negative for left-handed threads
  double l = -1.0;  ///< starting turn count
  double h = 1.0;   ///< ending turn count
};

inline constexpr double kDefaultHelixAngleThreshold = 0.5;

/// Validated helix. Construction throws Error(InvalidArgument) when the
/// parameters are out of range. Steep helices (|p| / r1 above the threshold)
/// are accepted but flagged, since the turn-snapping SDF degrades with the
/// helix angle.
class HelixThread {
 public:
  explicit HelixThread(const HelixSpec& spec,
                       double helix_angle_threshold = kDefaultHelixAngleThreshold);

  const HelixSpec& spec() const noexcept { return spec_; }
  bool steep() const noexcept { return steep_; }

  Vec3 point(double t) const;
  double t_min() const noexcept;
  double t_max() const noexcept;

 private:
  HelixSpec spec_;
  bool steep_ = false;
};

enum class BoundedCase { Interior, LowClamp, HighClamp };

struct SdfResult {
  double distance = 0.0;
  /// Unit vector (P - H(nearest_t)) / distance. At zero distance the radial
  /// direction of the nearest turn is reported and `degenerate` is set.
  Vec3 gradient{};
  double nearest_t = 0.0;
  bool degenerate = false;
  BoundedCase branch = BoundedCase::Interior;
};

/// Turn bookkeeping shared by the unbounded and bounded SDFs.
struct TurnWindow {
  double t0 = 0.0;    ///< atan2(Py, Px), 0 on the axis
  double k = 0.0;     ///< nearest turn index at angle t0 (round half to even)
  double low = 0.0;   ///< first turn index at angle t0 inside the bounds
  double high = 0.0;  ///< last turn index at angle t0 inside the bounds
  BoundedCase branch = BoundedCase::Interior;
};

TurnWindow turn_window(const HelixThread& helix, const Vec3& point);

/// Euclidean distance from `point` to H(t).
double distance_at(const HelixThread& helix, const Vec3& point, double t);

/// Approximate (unsigned) distance to the infinite centerline helix.
SdfResult sdf_unbounded(const HelixThread& helix, const Vec3& point);

/// Approximate (unsigned) distance to the centerline restricted to its turn bounds.
SdfResult sdf_bounded(const HelixThread& helix, const Vec3& point);

/// Signed distance to the thread surface: sdf_bounded - r2.
SdfResult sdf_thread(const HelixThread& helix, const Vec3& point);

/// Normalized central-difference gradient of sdf_thread with step 1e-6 * r1.
/// Throws Error(DegenerateGradient) when the difference vector vanishes.
Vec3 sdf_gradient(const HelixThread& helix, const Vec3& point);

/// Axial displacement produced by turning the thread by `delta_angle` radians.
double screw_advance(const HelixSpec& spec, double delta_angle);

struct EngagementReport {
  double min_clearance = 0.0;
  bool overlapping = false;
  Vec3 witness{};  ///< query sample (in the bolt frame) attaining min_clearance
};

/// Points probing a thread: the centerline sampled every `step_deg` degrees
/// over the turn bounds, each with `azimuths` offsets of r2 around the wire.
/// The centerline point itself is included ahead of its offsets.
std::vector<Vec3> thread_probe_points(const HelixThread& helix, double step_deg = 1.0,
                                      int azimuths = 8);

/// Proximity of two threads. `nut_to_bolt` maps nut-frame coordinates into the
/// bolt frame. Clearance is the minimum bolt thread SDF over the nut probes.
EngagementReport thread_engagement(const HelixThread& bolt, const HelixThread& nut,
                                   const RigidTransform& nut_to_bolt);

}  // namespace labmech
