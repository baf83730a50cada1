#include "labmech/eccentric_drive.hpp"

#include <cmath>

#include "labmech/error.hpp"

namespace labmech {

PlanarTransform PlanarTransform::rotation(double angle) { return rotation_translation(angle, 0.0, 0.0); }

PlanarTransform PlanarTransform::rotation_translation(double angle, double tx, double ty) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {{c, -s, tx, s, c, ty, 0.0, 0.0, 1.0}};
}

PlanarTransform operator*(const PlanarTransform& a, const PlanarTransform& b) {
  PlanarTransform r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    }
  }
  return r;
}

namespace {
void check(const EccentricSpec& spec) {
  if (!(spec.throw_radius >= 0.0) || !std::isfinite(spec.throw_radius)) {
    throw Error(ErrorCode::InvalidArgument, "eccentric throw must be finite and non-negative");
  }
}
}  // namespace

PlanarTransform eccentric_transform(const EccentricSpec& spec, double theta) {
  check(spec);
  PlanarTransform t;
  t(0, 2) = spec.throw_radius * std::cos(theta);
  t(1, 2) = spec.throw_radius * std::sin(theta);
  return t;
}

std::pair<PlanarTransform, PlanarTransform> factor_transforms(const EccentricSpec& spec,
                                                              double theta) {
  check(spec);
  return {PlanarTransform::rotation_translation(theta, spec.throw_radius * std::cos(theta),
                                                spec.throw_radius * std::sin(theta)),
          PlanarTransform::rotation(-theta)};
}

CoupledHinges::CoupledHinges(EccentricSpec spec) : spec_(spec) { check(spec_); }

PlanarTransform CoupledHinges::platform() const {
  const auto [first, second] = factor_transforms(spec_, drive_);
  return first * second;
}

}  // namespace labmech
