#include "labmech/detent_knob.hpp"

#include <algorithm>
#include <cmath>

#include "labmech/error.hpp"

namespace labmech {

DetentProfile::DetentProfile(std::vector<double> positions, double stiffness, double damping)
    : positions_(std::move(positions)), stiffness_(stiffness), damping_(damping) {
  if (positions_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "detent profile needs at least one position");
  }
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    if (!std::isfinite(positions_[i])) {
      throw Error(ErrorCode::InvalidArgument, "detent positions must be finite");
    }
    if (i > 0 && !(positions_[i] > positions_[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "detent positions must be strictly increasing");
    }
  }
  if (!(stiffness_ > 0.0) || !std::isfinite(stiffness_)) {
    throw Error(ErrorCode::InvalidArgument, "detent stiffness must be positive");
  }
  if (!(damping_ >= 0.0) || !std::isfinite(damping_)) {
    throw Error(ErrorCode::InvalidArgument, "detent damping must be non-negative");
  }
}

std::size_t nearest_detent(const DetentProfile& profile, double q) {
  const auto& pos = profile.positions();
  const auto it = std::lower_bound(pos.begin(), pos.end(), q);
  if (it == pos.begin()) return 0;
  if (it == pos.end()) return pos.size() - 1;
  const auto hi = static_cast<std::size_t>(it - pos.begin());
  const std::size_t lo = hi - 1;
  return (q - pos[lo]) <= (pos[hi] - q) ? lo : hi;
}

double detent_force(const DetentProfile& profile, double q, double qdot) {
  const double target = profile.positions()[nearest_detent(profile, q)];
  return -profile.stiffness() * (q - target) - profile.damping() * qdot;
}

KnobState step_knob(const DetentProfile& profile, const KnobState& state, double external_torque,
                    double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "time step must be positive");
  if (!(state.inertia > 0.0)) throw Error(ErrorCode::InvalidArgument, "inertia must be positive");
  KnobState next = state;
  const double accel = (detent_force(profile, state.q, state.qdot) + external_torque) / state.inertia;
  next.qdot = state.qdot + dt * accel;
  next.q = state.q + dt * next.qdot;
  if (!std::isfinite(next.q) || !std::isfinite(next.qdot)) {
    throw Error(ErrorCode::NonFiniteState, "knob state diverged");
  }
  return next;
}

}  // namespace labmech
