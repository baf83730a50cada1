#include "labmech/liquid_pendulum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "labmech/error.hpp"

namespace labmech {

using std::numbers::pi;

void PendulumParams::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorCode::InvalidArgument, "pendulum length must be positive");
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw Error(ErrorCode::InvalidArgument, "pendulum mass must be positive");
  }
  if (!(damping_phi >= 0.0) || !(damping_theta >= 0.0) || !std::isfinite(damping_phi) ||
      !std::isfinite(damping_theta)) {
    throw Error(ErrorCode::InvalidArgument, "pendulum damping must be non-negative");
  }
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
}

namespace {

double kinetic(const PendulumParams& p, const PendulumState& s) {
  const double st = std::sin(s.theta);
  return 0.5 * p.mass * p.length * p.length * (s.phidot * s.phidot * st * st + s.thetadot * s.thetadot);
}

double potential_term(const PendulumParams& p, const PendulumState& s, const Accel3& g) {
  const double st = std::sin(s.theta);
  return p.mass * p.length *
         (g.x * st * std::cos(s.phi) + g.y * std::sin(s.phi) * st - g.z * std::cos(s.theta));
}

PendulumState advance(const PendulumState& s, const PendulumDerivative& d, double h) {
  return {s.phi + h * d.phi, s.theta + h * d.theta, s.phidot + h * d.phidot,
          s.thetadot + h * d.thetadot};
}

}  // namespace

double lagrangian(const PendulumParams& params, const PendulumState& state, const Accel3& g) {
  return kinetic(params, state) + potential_term(params, state, g);
}

double pendulum_energy(const PendulumParams& params, const PendulumState& state, const Accel3& g) {
  return kinetic(params, state) - potential_term(params, state, g);
}

double phi_denominator(const PendulumParams& params, double theta) {
  const double st = std::sin(theta);
  return params.mass * params.length * params.length * std::max(st * st, params.epsilon);
}

PendulumDerivative ode_rhs(const PendulumParams& params, const PendulumState& s, const Accel3& g) {
  const double m = params.mass;
  const double l = params.length;
  const double st = std::sin(s.theta);
  const double ct = std::cos(s.theta);
  const double sp = std::sin(s.phi);
  const double cp = std::cos(s.phi);
  const double vphi = s.phidot;
  const double vtheta = s.thetadot;

  PendulumDerivative d;
  d.phi = vphi;
  d.theta = vtheta;
  d.phidot = (-2.0 * m * l * l * vphi * vtheta * st * ct + m * l * (-g.x * sp + g.y * cp) * st -
              params.damping_phi * vphi) /
             phi_denominator(params, s.theta);
  d.thetadot = (m * l * l * vphi * vphi * st * ct + m * l * (g.x * cp * ct + g.y * sp * ct + g.z * st) -
                params.damping_theta * vtheta) /
               (m * l * l);
  return d;
}

PendulumState renormalize(PendulumState s) {
  if (s.theta < 0.0 || s.theta > pi) {
    // Reflect through the nearest pole.
    s.theta = s.theta < 0.0 ? -s.theta : 2.0 * pi - s.theta;
    s.thetadot = -s.thetadot;
    s.phi += pi;
  }
  if (s.theta == 0.0 || s.theta == pi) s.phi = 0.0;
  if (s.phi > pi || s.phi <= -pi) {
    s.phi = std::remainder(s.phi, 2.0 * pi);
    if (s.phi <= -pi) s.phi += 2.0 * pi;
  }
  return s;
}

namespace {

// One split substep: exact phi damping for h/2, RK4 on the remaining terms, exact damping for h/2.
PendulumState split_substep(const PendulumParams& params, const PendulumParams& rest,
                            const PendulumState& state, const Accel3& g, double h) {
  const auto decay = [&](PendulumState s) {
    if (params.damping_phi > 0.0) {
      s.phidot *= std::exp(-params.damping_phi * 0.5 * h / phi_denominator(params, s.theta));
    }
    return s;
  };
  const PendulumState s0 = decay(state);
  const PendulumDerivative k1 = ode_rhs(rest, s0, g);
  const PendulumDerivative k2 = ode_rhs(rest, advance(s0, k1, 0.5 * h), g);
  const PendulumDerivative k3 = ode_rhs(rest, advance(s0, k2, 0.5 * h), g);
  const PendulumDerivative k4 = ode_rhs(rest, advance(s0, k3, h), g);

  PendulumState next;
  const double w = h / 6.0;
  next.phi = s0.phi + w * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi);
  next.theta = s0.theta + w * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta);
  next.phidot = s0.phidot + w * (k1.phidot + 2.0 * k2.phidot + 2.0 * k3.phidot + k4.phidot);
  next.thetadot = s0.thetadot + w * (k1.thetadot + 2.0 * k2.thetadot + 2.0 * k3.thetadot + k4.thetadot);
  return decay(next);
}

// Angular rate scale of the undamped flow: velocities and sqrt of accelerations.
double rate_scale(const PendulumParams& rest, const PendulumState& s, const Accel3& g) {
  const PendulumDerivative d = ode_rhs(rest, s, g);
  return std::max({std::abs(s.phidot), std::abs(s.thetadot), std::sqrt(std::abs(d.phidot)),
                   std::sqrt(std::abs(d.thetadot))});
}

}  // namespace

PendulumState step_pendulum(const PendulumParams& params, const PendulumState& state,
                            const Accel3& g, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "time step must be positive");
  PendulumParams rest = params;
  rest.damping_phi = 0.0;

  PendulumState s = state;
  double remaining = dt;
  int substeps = 0;
  while (remaining > 0.0) {
    const double rate = rate_scale(rest, s, g);
    if (!std::isfinite(rate)) break;
    double h = remaining;
    if (rate * h > kPendulumMaxTurn && substeps + 1 < kPendulumMaxSubsteps) {
      h = std::max(kPendulumMaxTurn / rate, dt / kPendulumMaxSubsteps);
      // Spread the rest of the step evenly so no sliver substep remains.
      h = remaining / std::ceil(remaining / h);
    }
    s = split_substep(params, rest, s, g, h);
    remaining = (h == remaining) ? 0.0 : remaining - h;
    ++substeps;
    if (!std::isfinite(s.phi) || !std::isfinite(s.theta) || !std::isfinite(s.phidot) ||
        !std::isfinite(s.thetadot)) {
      break;
    }
  }

  if (!std::isfinite(s.phi) || !std::isfinite(s.theta) || !std::isfinite(s.phidot) ||
      !std::isfinite(s.thetadot)) {
    throw Error(ErrorCode::NonFiniteState, "pendulum state diverged");
  }
  return renormalize(s);
}

PendulumState init_state(const Accel3& g) {
  const double n = norm(g);
  if (!(n > 0.0)) throw Error(ErrorCode::ZeroGravity, "effective acceleration is zero");
  if (!std::isfinite(n)) throw Error(ErrorCode::InvalidArgument, "effective acceleration is not finite");
  PendulumState s;
  s.theta = std::atan2(std::hypot(g.x, g.y), -g.z);
  s.phi = (g.x == 0.0 && g.y == 0.0) ? 0.0 : std::atan2(g.y, g.x);
  return renormalize(s);
}

Vec3 direction_of(const PendulumState& s) {
  const double st = std::sin(s.theta);
  return {st * std::cos(s.phi), st * std::sin(s.phi), -std::cos(s.theta)};
}

}  // namespace labmech
