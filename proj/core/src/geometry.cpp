#include "labmech/geometry.hpp"

#include "labmech/error.hpp"

namespace labmech {

Mat3 rotation_about(const Vec3& axis, double angle) {
  const Vec3 a = normalized(axis);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double t = 1.0 - c;
  Mat3 r;
  r(0, 0) = c + a.x * a.x * t;
  r(0, 1) = a.x * a.y * t - a.z * s;
  r(0, 2) = a.x * a.z * t + a.y * s;
  r(1, 0) = a.y * a.x * t + a.z * s;
  r(1, 1) = c + a.y * a.y * t;
  r(1, 2) = a.y * a.z * t - a.x * s;
  r(2, 0) = a.z * a.x * t - a.y * s;
  r(2, 1) = a.z * a.y * t + a.x * s;
  r(2, 2) = c + a.z * a.z * t;
  return r;
}

Mat3 rotation_from_quaternion(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::InvalidArgument, "quaternion must be finite and nonzero");
  }
  w /= n;
  x /= n;
  y /= n;
  z /= n;
  Mat3 r;
  r(0, 0) = 1 - 2 * (y * y + z * z);
  r(0, 1) = 2 * (x * y - w * z);
  r(0, 2) = 2 * (x * z + w * y);
  r(1, 0) = 2 * (x * y + w * z);
  r(1, 1) = 1 - 2 * (x * x + z * z);
  r(1, 2) = 2 * (y * z - w * x);
  r(2, 0) = 2 * (x * z - w * y);
  r(2, 1) = 2 * (y * z + w * x);
  r(2, 2) = 1 - 2 * (x * x + y * y);
  return r;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateGradient: return "DegenerateGradient";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::ZeroGravity: return "ZeroGravity";
    case ErrorCode::NotWatertight: return "NotWatertight";
    case ErrorCode::VolumeOutOfRange: return "VolumeOutOfRange";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::OpenCutLoop: return "OpenCutLoop";
    case ErrorCode::NonStarShapedLoop: return "NonStarShapedLoop";
    case ErrorCode::DegenerateTerm: return "DegenerateTerm";
    case ErrorCode::MalformedTrace: return "MalformedTrace";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace labmech
