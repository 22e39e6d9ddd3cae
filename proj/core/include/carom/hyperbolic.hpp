#pragma once

#include "carom/curve.hpp"
#include "carom/vec2.hpp"

namespace carom {

// Geodesic distance between two points of the open unit disc in the Klein
// (projective) model, where geodesics are straight chords.  Exactly symmetric
// in its arguments; throws ModelError on or outside the unit circle.
double klein_distance(const Vec2& a, const Vec2& b);

// A billiard table drawn inside the Klein disc; chords are hyperbolic
// geodesics, so Euclidean chord mechanics applies with hyperbolic lengths.
class HyperbolicTable {
 public:
  explicit HyperbolicTable(BoundaryCurve curve);
  const BoundaryCurve& curve() const { return curve_; }

  // Hyperbolic length of the chord between boundary parameters s0 and s1.
  double chord_length(double s0, double s1) const;

 private:
  BoundaryCurve curve_;
};

}  // namespace carom
