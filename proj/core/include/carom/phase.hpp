#pragma once

#include "carom/curve.hpp"
#include "carom/errors.hpp"
#include "carom/vec2.hpp"

namespace carom {

// Boundary phase coordinates: arc length s in [0, perimeter) and incidence
// angle phi in (0, pi) measured from the positive tangent direction.
struct PhasePoint {
  double s = 0.0;
  double phi = 0.0;
};

// Oriented chord, stored as its two boundary parameters in traversal order.
struct ChordState {
  double s0 = 0.0;
  double s1 = 0.0;
};

inline void check_phase(const BoundaryCurve& curve, const PhasePoint& p) {
  if (!(p.phi > 0.0) || !(p.phi < 3.14159265358979323846))
    throw DomainError("phase angle must lie strictly between 0 and pi");
  (void)curve;
}

// Unit direction leaving the boundary at p (into the table interior).
inline Vec2 launch_direction(const CurvePoint& cp, double phi) {
  return cp.tangent * std::cos(phi) + cp.normal * std::sin(phi);
}

// Incidence angle of a unit direction d at the boundary frame cp.
inline double phase_angle(const CurvePoint& cp, const Vec2& d) {
  return std::atan2(dot(d, cp.normal), dot(d, cp.tangent));
}

// Specular reflection of d at a boundary point with unit normal n.
inline Vec2 reflect(const Vec2& d, const Vec2& n) { return d - n * (2.0 * dot(d, n)); }

}  // namespace carom
