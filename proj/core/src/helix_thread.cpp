#include "labmech/helix_thread.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "labmech/error.hpp"

namespace labmech {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

SdfResult make_result(const HelixThread& helix, const Vec3& point, double t, BoundedCase branch) {
  SdfResult r;
  r.nearest_t = t;
  r.branch = branch;
  const Vec3 diff = point - helix.point(t);
  r.distance = norm(diff);
  if (r.distance > 0.0) {
    r.gradient = diff / r.distance;
  } else {
    r.gradient = {std::cos(t), std::sin(t), 0.0};
    r.degenerate = true;
  }
  return r;
}

// Polar angle of the query; the axis maps to 0.
double polar_angle(const Vec3& point) {
  if (point.x == 0.0 && point.y == 0.0) return 0.0;
  return std::atan2(point.y, point.x);
}

double nearest_turn(const HelixSpec& s, const Vec3& point, double t0) {
  // nearbyint honours the default round-to-nearest-even mode.
  return std::nearbyint((point.z - t0 * s.p) / (kTwoPi * s.p));
}

}  // namespace

HelixThread::HelixThread(const HelixSpec& spec, double helix_angle_threshold) : spec_(spec) {
  const auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (!std::isfinite(spec.r1) || !std::isfinite(spec.r2) || !std::isfinite(spec.p) ||
      !std::isfinite(spec.l) || !std::isfinite(spec.h)) {
    bad("helix parameters must be finite");
  }
  if (!(spec.r1 > 0.0)) bad("helix radius r1 must be positive");
  if (!(spec.r2 > 0.0)) bad("gauge radius r2 must be positive");
  if (!(spec.r2 < spec.r1)) bad("gauge radius r2 must be smaller than r1");
  if (spec.p == 0.0) bad("pitch p must be nonzero");
  if (!(spec.h > spec.l)) bad("turn bounds require h > l");
  steep_ = std::abs(spec.p) / spec.r1 > helix_angle_threshold;
}

Vec3 HelixThread::point(double t) const {
  return {spec_.r1 * std::cos(t), spec_.r1 * std::sin(t), spec_.p * t};
}

double HelixThread::t_min() const noexcept { return kTwoPi * spec_.l; }
double HelixThread::t_max() const noexcept { return kTwoPi * spec_.h; }

double distance_at(const HelixThread& helix, const Vec3& point, double t) {
  return norm(helix.point(t) - point);
}

TurnWindow turn_window(const HelixThread& helix, const Vec3& point) {
  const HelixSpec& s = helix.spec();
  TurnWindow w;
  w.t0 = polar_angle(point);
  w.k = nearest_turn(s, point, w.t0);
  // Turns j with 2*pi*l <= 2*pi*j + t0 <= 2*pi*h.
  const double frac = w.t0 / kTwoPi;
  w.low = std::ceil(s.l - frac);
  w.high = std::floor(s.h - frac);
  if (w.k < w.low) {
    w.branch = BoundedCase::LowClamp;
  } else if (w.k > w.high) {
    w.branch = BoundedCase::HighClamp;
  } else {
    w.branch = BoundedCase::Interior;
  }
  return w;
}

SdfResult sdf_unbounded(const HelixThread& helix, const Vec3& point) {
  const double t0 = polar_angle(point);
  const double k = nearest_turn(helix.spec(), point, t0);
  return make_result(helix, point, kTwoPi * k + t0, BoundedCase::Interior);
}

SdfResult sdf_bounded(const HelixThread& helix, const Vec3& point) {
  const TurnWindow w = turn_window(helix, point);
  switch (w.branch) {
    case BoundedCase::Interior:
      return make_result(helix, point, kTwoPi * w.k + w.t0, w.branch);
    case BoundedCase::LowClamp: {
      const double end = helix.t_min();
      const double turn = kTwoPi * w.low + w.t0;
      const double t = distance_at(helix, point, end) <= distance_at(helix, point, turn) ? end : turn;
      return make_result(helix, point, t, w.branch);
    }
    case BoundedCase::HighClamp: {
      const double end = helix.t_max();
      const double turn = kTwoPi * w.high + w.t0;
      const double t = distance_at(helix, point, end) <= distance_at(helix, point, turn) ? end : turn;
      return make_result(helix, point, t, w.branch);
    }
  }
  return {};
}

SdfResult sdf_thread(const HelixThread& helix, const Vec3& point) {
  SdfResult r = sdf_bounded(helix, point);
  r.distance -= helix.spec().r2;
  return r;
}

Vec3 sdf_gradient(const HelixThread& helix, const Vec3& point) {
  const double step = 1e-6 * helix.spec().r1;
  const auto f = [&](const Vec3& q) { return sdf_thread(helix, q).distance; };
  const Vec3 g{(f(point + Vec3{step, 0, 0}) - f(point - Vec3{step, 0, 0})) / (2 * step),
               (f(point + Vec3{0, step, 0}) - f(point - Vec3{0, step, 0})) / (2 * step),
               (f(point + Vec3{0, 0, step}) - f(point - Vec3{0, 0, step})) / (2 * step)};
  const double n = norm(g);
  if (!(n >= 1e-12)) {
    throw Error(ErrorCode::DegenerateGradient, "finite-difference gradient vanishes");
  }
  return g / n;
}

double screw_advance(const HelixSpec& spec, double delta_angle) { return spec.p * delta_angle; }

std::vector<Vec3> thread_probe_points(const HelixThread& helix, double step_deg, int azimuths) {
  if (!(step_deg > 0.0) || azimuths < 1) {
    throw Error(ErrorCode::InvalidArgument, "probe resolution must be positive");
  }
  const HelixSpec& s = helix.spec();
  const double step = step_deg * std::numbers::pi / 180.0;
  const double span = helix.t_max() - helix.t_min();
  const auto n = static_cast<std::size_t>(std::ceil(span / step)) + 1;

  std::vector<Vec3> out;
  out.reserve(n * static_cast<std::size_t>(azimuths + 1));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = std::min(helix.t_min() + static_cast<double>(i) * step, helix.t_max());
    const Vec3 c = helix.point(t);
    const Vec3 radial{std::cos(t), std::sin(t), 0.0};
    const Vec3 tangent = normalized(Vec3{-s.r1 * std::sin(t), s.r1 * std::cos(t), s.p});
    const Vec3 binormal = cross(tangent, radial);
    out.push_back(c);
    for (int j = 0; j < azimuths; ++j) {
      const double a = 2.0 * std::numbers::pi * j / azimuths;
      out.push_back(c + s.r2 * (std::cos(a) * radial + std::sin(a) * binormal));
    }
  }
  return out;
}

EngagementReport thread_engagement(const HelixThread& bolt, const HelixThread& nut,
                                   const RigidTransform& nut_to_bolt) {
  EngagementReport report;
  report.min_clearance = std::numeric_limits<double>::infinity();
  for (const Vec3& local : thread_probe_points(nut)) {
    const Vec3 q = nut_to_bolt.apply(local);
    const double d = sdf_thread(bolt, q).distance;
    if (d < report.min_clearance) {
      report.min_clearance = d;
      report.witness = q;
    }
  }
  report.overlapping = report.min_clearance < 0.0;
  return report;
}

}  // namespace labmech
