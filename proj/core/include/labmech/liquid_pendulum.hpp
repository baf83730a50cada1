#pragma once

#include "labmech/geometry.hpp"

namespace labmech {

/// Damped spherical pendulum that carries the liquid surface direction.
/// The mass cancels from the undamped dynamics but scales the damping.
struct PendulumParams {
  double length = 0.05;        ///< characteristic length l
  double mass = 1.0;           ///< m
  double damping_phi = 0.02;   ///< lambda_phi
  double damping_theta = 0.02; ///< lambda_theta
  double epsilon = 1e-6;       ///< floor on sin^2(theta) in the phi equation

  void validate() const;  ///< throws Error(InvalidArgument)
};

/// Spherical coordinates of the pendulum direction and their rates.
/// theta = 0 points along -z.
struct PendulumState {
  double phi = 0.0;
  double theta = 0.0;
  double phidot = 0.0;
  double thetadot = 0.0;

  friend bool operator==(const PendulumState&, const PendulumState&) = default;
};

/// Effective acceleration felt in the container frame (gravity plus inertial).
using Accel3 = Vec3;

struct PendulumDerivative {
  double phi = 0.0;
  double theta = 0.0;
  double phidot = 0.0;
  double thetadot = 0.0;
};

inline constexpr double kDefaultPendulumStep = 1e-3;

double lagrangian(const PendulumParams& params, const PendulumState& state, const Accel3& g);

/// Total mechanical energy T - V associated with the Lagrangian above,
/// conserved when both damping coefficients vanish and g is constant.
double pendulum_energy(const PendulumParams& params, const PendulumState& state, const Accel3& g);

/// Denominator of the phi equation: m l^2 max(sin^2 theta, epsilon).
double phi_denominator(const PendulumParams& params, double theta);

PendulumDerivative ode_rhs(const PendulumParams& params, const PendulumState& state, const Accel3& g);

/// Largest angle (radians) the state may turn through in one RK4 substep, and
/// the cap on substeps per call.
inline constexpr double kPendulumMaxTurn = 0.01;
inline constexpr int kPendulumMaxSubsteps = 100000;

/// Advances by dt with g held constant. The step is split into RK4 substeps
/// whenever the state turns faster than kPendulumMaxTurn per substep, which
/// happens on close passes by the poles of the (phi, theta) chart. Within a
/// substep the phi damping term is integrated exactly in two half steps around
/// RK4 on the remaining terms (Strang splitting), which keeps the guarded
/// denominator stable. Ends with chart renormalization:
/// theta is reflected back into [0, pi] (shifting phi by pi) and phi is wrapped
/// into (-pi, pi]. Throws Error(NonFiniteState) on overflow.
PendulumState step_pendulum(const PendulumParams& params, const PendulumState& state,
                            const Accel3& g, double dt);

/// Rest state aligned with g. Throws Error(ZeroGravity) when |g| = 0.
PendulumState init_state(const Accel3& g);

/// Unit direction (sin t cos p, sin t sin p, -cos t).
Vec3 direction_of(const PendulumState& state);

/// Maps theta into [0, pi] and phi into (-pi, pi] without changing the direction.
PendulumState renormalize(PendulumState state);

}  // namespace labmech
