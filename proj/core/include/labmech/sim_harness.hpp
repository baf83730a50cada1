#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "labmech/detent_knob.hpp"
#include "labmech/eccentric_drive.hpp"
#include "labmech/helix_thread.hpp"
#include "labmech/liquid_pendulum.hpp"
#include "labmech/mesh_volume.hpp"
#include "labmech/replay_trace.hpp"

namespace labmech {

/// Container frame state at one instant. Accelerations are in world
/// coordinates; the optional orientation is a (w, x, y, z) quaternion taking
/// container coordinates to world coordinates.
struct FrameSample {
  double time = 0.0;
  Vec3 accel{};
  std::optional<std::array<double, 4>> orientation;
};

/// Uniformly sampled frame motion, held piecewise-constant between samples.
class FrameTrajectory {
 public:
  /// Throws Error(InvalidArgument) unless timestamps are strictly increasing
  /// with constant spacing (relative tolerance 1e-9) and all values finite.
  explicit FrameTrajectory(std::vector<FrameSample> samples);

  static FrameTrajectory constant(const Vec3& accel, double spacing, double duration);

  const std::vector<FrameSample>& samples() const noexcept { return samples_; }
  double spacing() const noexcept { return spacing_; }
  double start() const noexcept { return samples_.front().time; }
  double end() const noexcept { return samples_.back().time; }

  /// Latest sample at or before `time` (clamped to the ends).
  const FrameSample& at(double time) const;

 private:
  std::vector<FrameSample> samples_;
  double spacing_ = 0.0;
};

/// gravity - frame_accel: the acceleration a liquid feels in the moving frame.
Accel3 effective_accel(const Vec3& gravity, const Vec3& frame_accel);

/// As above, rotated into container coordinates when the sample carries an
/// orientation. Rotational (Euler, centrifugal) terms are not modelled.
Accel3 effective_accel(const Vec3& gravity, const FrameSample& sample);

struct ScrewDrive {
  HelixSpec spec;
  double angular_velocity = 0.0;  ///< rad/s
};

struct KnobDrive {
  DetentProfile profile;
  KnobState initial;
  double torque = 0.0;
};

struct EccentricDrive {
  EccentricSpec spec;
  double angular_velocity = 0.0;  ///< rad/s
  /// Add the orbit's centripetal acceleration to the container frame.
  bool shake_container = true;
};

struct SceneConfig {
  Vec3 gravity{0.0, 0.0, -9.81};
  std::shared_ptr<const Container> container;
  PendulumParams pendulum;
  double liquid_volume = 0.0;
  double dt = kDefaultPendulumStep;
  double duration = 1.0;
  std::optional<ScrewDrive> screw;
  std::optional<KnobDrive> knob;
  std::optional<EccentricDrive> eccentric;

  void validate() const;   ///< throws Error(InvalidArgument) / Error(VolumeOutOfRange)
  std::size_t steps() const;
};

/// Number of steps covering `duration` at `dt`; they must divide evenly.
std::size_t step_count(double duration, double dt);

/// Quasi-static liquid scene. Each step turns the frame sample into g_eff,
/// advances the pendulum, sets the surface normal to -direction, and solves
/// the height from the previous one. Solver failures are rethrown as
/// StepError carrying the step index.
ReplayTrace run_liquid_scene(const SceneConfig& config, const FrameTrajectory& trajectory);

/// Kinematic screw replay: axial position p * angle at each sampled angle.
ReplayTrace run_screw_scene(const HelixSpec& spec, std::span<const double> angles, double dt);

/// Knob under a sampled torque (last sample held). Throws StepError on divergence.
ReplayTrace run_knob_scene(const DetentProfile& profile, std::span<const double> torque,
                           const KnobState& initial, double dt, double duration);

}  // namespace labmech
