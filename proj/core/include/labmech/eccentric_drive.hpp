#pragma once

#include <array>
#include <utility>

namespace labmech {

/// Homogeneous planar transform, row-major 3x3.
struct PlanarTransform {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  double operator()(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }
  double& operator()(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }

  static PlanarTransform rotation(double angle);
  static PlanarTransform rotation_translation(double angle, double tx, double ty);

  double tx() const { return m[2]; }
  double ty() const { return m[5]; }

  friend PlanarTransform operator*(const PlanarTransform& a, const PlanarTransform& b);
};

struct EccentricSpec {
  double throw_radius = 0.0;  ///< offset of the orbit center, >= 0
};

/// Orbital pose of the driven platform at crank angle theta: a pure
/// translation by throw * (cos theta, sin theta).
PlanarTransform eccentric_transform(const EccentricSpec& spec, double theta);

/// The two hinge motions whose product is eccentric_transform: the first
/// rotates by +theta about a pivot carried at the throw, the second by -theta.
std::pair<PlanarTransform, PlanarTransform> factor_transforms(const EccentricSpec& spec,
                                                              double theta);

/// Two hinges whose angles are kinematically locked to sum to zero.
class CoupledHinges {
 public:
  explicit CoupledHinges(EccentricSpec spec);

  void set_drive_angle(double theta) noexcept { drive_ = theta; }
  double drive_angle() const noexcept { return drive_; }
  double follower_angle() const noexcept { return -drive_; }

  /// Composite platform transform for the current angles.
  PlanarTransform platform() const;

 private:
  EccentricSpec spec_;
  double drive_ = 0.0;
};

}  // namespace labmech
