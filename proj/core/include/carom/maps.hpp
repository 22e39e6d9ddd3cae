#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "carom/curve.hpp"
#include "carom/norm.hpp"
#include "carom/phase.hpp"
#include "carom/vec2.hpp"

namespace carom {

// --------------------------------------------------------------------------
// classical (equal-angle) reflection map

PhasePoint birkhoff_step(const BoundaryCurve& curve, const PhasePoint& p);

// --------------------------------------------------------------------------
// chord map generated by a Minkowski length L(s0,s1) = N(gamma(s1)-gamma(s0)):
// the successor s2 makes the two-chord action stationary in s1.

ChordState minkowski_step(const BoundaryCurve& curve, const MinkowskiNorm& N,
                          const ChordState& c);

// Directional derivative d/ds1 [L(s0,s1) + L(s1,s2)]; the step solves
// residual = 0 for s2.  Exposed for tests.
double minkowski_stationarity(const BoundaryCurve& curve, const MinkowskiNorm& N,
                              double s0, double s1, double s2);

// --------------------------------------------------------------------------
// magnetic map: circular arcs of Larmor radius 1/B between reflections

struct MagneticResult {
  PhasePoint next;
  BoundaryCurve::ArcHit arc;
};

MagneticResult magnetic_step(const BoundaryCurve& curve, double B, int orientation,
                             const PhasePoint& p);

// --------------------------------------------------------------------------
// reflection followed by a boundary slide of length ell(phi)

class DelayFunction {
 public:
  static DelayFunction constant(double value);
  static DelayFunction half_perimeter();
  // samples of (alpha, ell) on (0, pi), monotone-cubic interpolated
  static DelayFunction tabulated(std::vector<std::pair<double, double>> samples);

  double operator()(double phi, double perimeter) const;

 private:
  enum class Kind { Constant, HalfPerimeter, Tabulated } kind_ = Kind::Constant;
  double value_ = 0.0;
  MonotoneCubic interp_;
  double lo_ = 0.0, hi_ = 0.0;
};

PhasePoint pensive_step(const BoundaryCurve& curve, const DelayFunction& delay,
                        const PhasePoint& p);

// --------------------------------------------------------------------------
// chord map where the new chord from gamma(s0) is parallel to the tangent at
// the pivot gamma(s1)

ChordState symplectic_billiard_step(const BoundaryCurve& curve, const ChordState& c);

// --------------------------------------------------------------------------
// reflection defined by a transverse line field: tangential component kept,
// transverse component reversed

class TransverseField {
 public:
  static TransverseField inward_normal();
  static TransverseField concurrent(Vec2 through);
  // samples of (s, direction angle), periodically linearly interpolated
  static TransverseField tabulated(std::vector<std::pair<double, double>> samples);

  Vec2 direction(const BoundaryCurve& curve, double s) const;

 private:
  enum class Kind { InwardNormal, Concurrent, Tabulated } kind_ = Kind::InwardNormal;
  Vec2 through_;
  std::vector<std::pair<double, double>> samples_;
};

// Throws FieldDegenerateError if the field is (near-)tangent anywhere on a
// sample grid.
void check_transverse(const BoundaryCurve& curve, const TransverseField& field,
                      int samples = 512);

PhasePoint projective_step(const BoundaryCurve& curve, const TransverseField& field,
                           const PhasePoint& p);

// --------------------------------------------------------------------------
// outer (dual) map on exterior points: reflect through the support tangency

struct OuterResult {
  Vec2 image;
  Vec2 tangency;
  double s_tangency = 0.0;
};

OuterResult outer_billiard_step(const BoundaryCurve& curve, const Vec2& z, int orientation);

}  // namespace carom
