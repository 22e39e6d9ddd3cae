#include "carom/hyperbolic.hpp"

#include <algorithm>
#include <cmath>

#include "carom/errors.hpp"

namespace carom {

double klein_distance(const Vec2& a, const Vec2& b) {
  double qa = 1.0 - norm2(a);
  double qb = 1.0 - norm2(b);
  if (!(qa > 0.0) || !(qb > 0.0))
    throw ModelError("Klein distance needs points strictly inside the unit disc");
  double c = (1.0 - dot(a, b)) / std::sqrt(qa * qb);
  return std::acosh(std::max(1.0, c));
}

HyperbolicTable::HyperbolicTable(BoundaryCurve curve) : curve_(std::move(curve)) {
  const int n = 1024;
  for (int i = 0; i < n; ++i) {
    Vec2 p = curve_.point(curve_.perimeter() * i / n);
    if (!(norm2(p) < 1.0))
      throw ModelError("hyperbolic table boundary must stay inside the unit disc");
  }
}

double HyperbolicTable::chord_length(double s0, double s1) const {
  return klein_distance(curve_.point(s0), curve_.point(s1));
}

}  // namespace carom
