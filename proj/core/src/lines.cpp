#include "carom/lines.hpp"

#include <cmath>

#include "carom/errors.hpp"
#include "carom/maps.hpp"

namespace carom {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

Vec2 line_normal(const LineCoords& lc) { return {std::cos(lc.theta), std::sin(lc.theta)}; }

Vec2 line_direction(const LineCoords& lc) { return {-std::sin(lc.theta), std::cos(lc.theta)}; }

LineCoords phase_to_line(const BoundaryCurve& curve, const PhasePoint& q) {
  check_phase(curve, q);
  const CurvePoint cp = curve.eval(q.s);
  const Vec2 d = launch_direction(cp, q.phi);
  const Vec2 u{d.y, -d.x};
  LineCoords lc;
  lc.theta = wrap(std::atan2(u.y, u.x), kTwoPi);
  lc.p = dot(cp.point, u);
  return lc;
}

PhasePoint line_to_phase(const BoundaryCurve& curve, const LineCoords& lc) {
  const Vec2 u = line_normal(lc);
  const Vec2 d = line_direction(lc);
  const Vec2 z0 = lc.p * u;
  auto hits = curve.line_intersections(z0, d);
  if (hits.size() < 2) throw DomainError("line does not cross the table");
  for (const auto& h : hits) {
    const CurvePoint cp = curve.eval(h.s);
    if (dot(d, cp.normal) > BoundaryCurve::kTangentTol)
      return {h.s, phase_angle(cp, d)};
  }
  throw DomainError("line is tangent to the table");
}

LineCoords line_billiard_step(const BoundaryCurve& curve, const LineCoords& lc) {
  const PhasePoint q = line_to_phase(curve, lc);
  return phase_to_line(curve, birkhoff_step(curve, q));
}

LineDomain line_domain(const BoundaryCurve& curve, int grid) {
  if (grid < 3) throw DomainError("need at least 3 grid angles");
  LineDomain dom;
  dom.theta.reserve(grid);
  dom.p_lo.reserve(grid);
  dom.p_hi.reserve(grid);
  for (int i = 0; i < grid; ++i) {
    const double th = kTwoPi * i / grid;
    dom.theta.push_back(th);
    dom.p_lo.push_back(-curve.support(th + kPi));
    dom.p_hi.push_back(curve.support(th));
  }
  return dom;
}

double line_domain_margin(const BoundaryCurve& curve, const LineCoords& lc) {
  const double hi = curve.support(lc.theta);
  const double lo = -curve.support(lc.theta + kPi);
  return std::min(hi - lc.p, lc.p - lo);
}

LineJacobian line_map_jacobian(const BoundaryCurve& curve, const LineCoords& lc, double step) {
  if (line_domain_margin(curve, lc) <= 1e-6)
    throw BoundaryStateError("state is within 1e-6 of the boundary of the line domain");

  auto image = [&](double dth, double dp) {
    LineCoords q{lc.theta + dth, lc.p + dp};
    return line_billiard_step(curve, q);
  };
  const LineCoords tp = image(step, 0.0), tm = image(-step, 0.0);
  const LineCoords pp = image(0.0, step), pm = image(0.0, -step);

  LineJacobian out;
  out.J(0, 0) = wrap_signed(tp.theta - tm.theta, kTwoPi) / (2.0 * step);
  out.J(0, 1) = wrap_signed(pp.theta - pm.theta, kTwoPi) / (2.0 * step);
  out.J(1, 0) = (tp.p - tm.p) / (2.0 * step);
  out.J(1, 1) = (pp.p - pm.p) / (2.0 * step);
  out.det = out.J.determinant();
  return out;
}

}  // namespace carom
