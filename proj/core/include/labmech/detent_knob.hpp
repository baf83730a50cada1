#pragma once

#include <cstddef>
#include <vector>

namespace labmech {

/// Detent gear positions with the spring-damper constants that pull a
/// generalized coordinate toward the nearest one. Units are whatever the
/// coordinate uses (radians for rotary knobs, meters for sliders).
class DetentProfile {
 public:
  /// Throws Error(InvalidArgument) unless positions are non-empty and strictly
  /// increasing, stiffness > 0 and damping >= 0.
  DetentProfile(std::vector<double> positions, double stiffness, double damping);

  const std::vector<double>& positions() const noexcept { return positions_; }
  double stiffness() const noexcept { return stiffness_; }
  double damping() const noexcept { return damping_; }

 private:
  std::vector<double> positions_;
  double stiffness_;
  double damping_;
};

struct KnobState {
  double q = 0.0;
  double qdot = 0.0;
  double inertia = 1.0;
};

inline constexpr double kDefaultKnobStep = 1e-3;

/// Index of the detent closest to q; exact midpoints resolve to the lower index.
std::size_t nearest_detent(const DetentProfile& profile, double q);

/// Passive force -k (q - q_j) - lambda qdot toward the nearest detent j.
double detent_force(const DetentProfile& profile, double q, double qdot);

/// One semi-implicit Euler step. Throws Error(NonFiniteState) on overflow and
/// Error(InvalidArgument) for dt <= 0 or non-positive inertia.
KnobState step_knob(const DetentProfile& profile, const KnobState& state, double external_torque,
                    double dt);

}  // namespace labmech
