#include "labmech/sim_harness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "labmech/error.hpp"

namespace labmech {

FrameTrajectory::FrameTrajectory(std::vector<FrameSample> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw Error(ErrorCode::InvalidArgument, "trajectory has no samples");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const FrameSample& s = samples_[i];
    if (!std::isfinite(s.time) || !is_finite(s.accel)) {
      throw Error(ErrorCode::InvalidArgument, "trajectory sample " + std::to_string(i) + " is not finite");
    }
    if (s.orientation) {
      for (double c : *s.orientation) {
        if (!std::isfinite(c)) {
          throw Error(ErrorCode::InvalidArgument, "trajectory sample " + std::to_string(i) + " orientation");
        }
      }
    }
  }
  if (samples_.size() == 1) return;
  spacing_ = (samples_.back().time - samples_.front().time) / static_cast<double>(samples_.size() - 1);
  if (!(spacing_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "timestamps must increase");
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    const double gap = samples_[i].time - samples_[i - 1].time;
    if (!(gap > 0.0) || std::abs(gap - spacing_) > 1e-9 * spacing_ + 1e-12 * std::abs(samples_[i].time)) {
      throw Error(ErrorCode::InvalidArgument,
                  "trajectory spacing is not constant at sample " + std::to_string(i));
    }
  }
}

FrameTrajectory FrameTrajectory::constant(const Vec3& accel, double spacing, double duration) {
  if (!(spacing > 0.0) || !(duration >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "constant trajectory needs spacing > 0, duration >= 0");
  }
  const auto n = static_cast<std::size_t>(std::ceil(duration / spacing - 1e-9)) + 1;
  std::vector<FrameSample> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = {static_cast<double>(i) * spacing, accel, std::nullopt};
  return FrameTrajectory(std::move(s));
}

const FrameSample& FrameTrajectory::at(double time) const {
  if (samples_.size() == 1 || time <= start()) return samples_.front();
  // Small slack so that step times landing on a sample boundary pick it.
  const double pos = (time - start()) / spacing_ + 1e-9;
  const auto idx = static_cast<std::size_t>(std::floor(pos));
  return samples_[std::min(idx, samples_.size() - 1)];
}

Accel3 effective_accel(const Vec3& gravity, const Vec3& frame_accel) { return gravity - frame_accel; }

Accel3 effective_accel(const Vec3& gravity, const FrameSample& sample) {
  const Vec3 world = effective_accel(gravity, sample.accel);
  if (!sample.orientation) return world;
  const auto& q = *sample.orientation;
  return rotation_from_quaternion(q[0], q[1], q[2], q[3]).transposed() * world;
}

std::size_t step_count(double duration, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw Error(ErrorCode::InvalidArgument, "duration must be non-negative");
  }
  const double ratio = duration / dt;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-6) {
    throw Error(ErrorCode::InvalidArgument, "duration must be a whole number of steps");
  }
  return static_cast<std::size_t>(n);
}

void SceneConfig::validate() const {
  if (!container) throw Error(ErrorCode::InvalidArgument, "scene has no container");
  if (!is_finite(gravity)) throw Error(ErrorCode::InvalidArgument, "gravity must be finite");
  pendulum.validate();
  (void)steps();
  if (!std::isfinite(liquid_volume) || liquid_volume < 0.0 || liquid_volume > container->volume()) {
    throw Error(ErrorCode::VolumeOutOfRange, "liquid volume " + std::to_string(liquid_volume) +
                                                 " outside [0, " + std::to_string(container->volume()) + "]");
  }
  if (screw) (void)HelixThread(screw->spec);
  if (eccentric && !(eccentric->spec.throw_radius >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "eccentric throw must be non-negative");
  }
  if (knob && !(knob->initial.inertia > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "knob inertia must be positive");
  }
}

std::size_t SceneConfig::steps() const { return step_count(duration, dt); }

ReplayTrace run_liquid_scene(const SceneConfig& config, const FrameTrajectory& trajectory) {
  config.validate();
  const std::size_t n = config.steps();
  const double end_time = static_cast<double>(n) * config.dt;
  // The last sample is held for one spacing; a single sample is held forever.
  if (trajectory.samples().size() > 1 &&
      trajectory.end() + trajectory.spacing() < end_time * (1.0 - 1e-9)) {
    throw Error(ErrorCode::InvalidArgument, "trajectory does not cover the scene duration");
  }

  const Container& container = *config.container;
  std::optional<KnobState> knob;
  if (config.knob) knob = config.knob->initial;

  // Frame acceleration at time t, including the eccentric orbit when it shakes the container.
  const auto g_at = [&](double t) {
    FrameSample sample = trajectory.at(t);
    if (config.eccentric && config.eccentric->shake_container) {
      const double w = config.eccentric->angular_velocity;
      const double r = config.eccentric->spec.throw_radius;
      const double theta = w * t;
      sample.accel += Vec3{-w * w * r * std::cos(theta), -w * w * r * std::sin(theta), 0.0};
    }
    return effective_accel(config.gravity, sample);
  };

  ReplayTrace trace;
  trace.kind = TraceKind::Liquid;
  trace.records.reserve(n);

  std::size_t step = 0;
  try {
    PendulumState state = init_state(g_at(0.0));
    std::optional<double> height;
    for (; step < n; ++step) {
      const double t = static_cast<double>(step) * config.dt;
      const double t_next = static_cast<double>(step + 1) * config.dt;
      state = step_pendulum(config.pendulum, state, g_at(t), config.dt);
      const Vec3 normal = -direction_of(state);
      const HeightSolution sol = solve_height(container, normal, config.liquid_volume, height);
      height = sol.height;

      TraceRecord r;
      r.time = t_next;
      r.phi = state.phi;
      r.theta = state.theta;
      r.phidot = state.phidot;
      r.thetadot = state.thetadot;
      r.normal = normal;
      r.height = sol.height;
      r.volume = sol.volume;
      r.residual = sol.residual;
      if (config.screw) {
        r.screw_angle = config.screw->angular_velocity * t_next;
        r.screw_axial = screw_advance(config.screw->spec, r.screw_angle);
      }
      if (knob) {
        *knob = step_knob(config.knob->profile, *knob, config.knob->torque, config.dt);
        r.knob_q = knob->q;
        r.knob_qdot = knob->qdot;
        r.knob_index = static_cast<std::int64_t>(nearest_detent(config.knob->profile, knob->q));
      }
      if (config.eccentric) r.eccentric_theta = config.eccentric->angular_velocity * t_next;
      trace.records.push_back(r);
    }
  } catch (const StepError&) {
    throw;
  } catch (const Error& e) {
    throw StepError(e.code(), step, e.what());
  }
  return trace;
}

ReplayTrace run_screw_scene(const HelixSpec& spec, std::span<const double> angles, double dt) {
  (void)HelixThread(spec);
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  ReplayTrace trace;
  trace.kind = TraceKind::Screw;
  trace.records.reserve(angles.size());
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (!std::isfinite(angles[i])) {
      throw Error(ErrorCode::InvalidArgument, "angle sample " + std::to_string(i) + " is not finite");
    }
    TraceRecord r;
    r.time = static_cast<double>(i) * dt;
    r.screw_angle = angles[i];
    r.screw_axial = screw_advance(spec, angles[i]);
    trace.records.push_back(r);
  }
  return trace;
}

ReplayTrace run_knob_scene(const DetentProfile& profile, std::span<const double> torque,
                           const KnobState& initial, double dt, double duration) {
  const std::size_t n = step_count(duration, dt);
  ReplayTrace trace;
  trace.kind = TraceKind::Knob;
  trace.records.reserve(n);
  KnobState state = initial;
  for (std::size_t step = 0; step < n; ++step) {
    const double tau = torque.empty() ? 0.0 : torque[std::min(step, torque.size() - 1)];
    try {
      state = step_knob(profile, state, tau, dt);
    } catch (const Error& e) {
      throw StepError(e.code(), step, e.what());
    }
    TraceRecord r;
    r.time = static_cast<double>(step + 1) * dt;
    r.knob_q = state.q;
    r.knob_qdot = state.qdot;
    r.knob_index = static_cast<std::int64_t>(nearest_detent(profile, state.q));
    trace.records.push_back(r);
  }
  return trace;
}

}  // namespace labmech
