#pragma once

#include <utility>
#include <vector>

#include "carom/util.hpp"
#include "carom/vec2.hpp"

namespace carom {

enum class CurveKind { Circle, Ellipse, Polygon, SupportOval, Stadium };

// Boundary data at one arc-length parameter.
struct CurvePoint {
  Vec2 point;
  Vec2 tangent;   // unit, counterclockwise
  Vec2 normal;    // unit, inward
  double curvature = 0.0;
};

// A convex table boundary, parametrized counterclockwise by Euclidean arc
// length s in [0, perimeter).  Smooth kinds keep a native parameter (polar or
// normal angle) plus a cached cumulative arc-length table with a monotone
// cubic inverse; conversions are polished with Newton steps against exact
// quadrature, so round trips are accurate to ~1e-13 * perimeter.
class BoundaryCurve {
 public:
  static BoundaryCurve circle(double radius, Vec2 center = {0.0, 0.0});
  static BoundaryCurve ellipse(double a, double b);
  static BoundaryCurve polygon(std::vector<Vec2> vertices);
  static BoundaryCurve regular_polygon(int n, double circumradius);
  // h(theta) = c0 + sum_k a_k cos(k theta) + b_k sin(k theta); requires
  // h + h'' > 0 (strict convexity).
  static BoundaryCurve support_oval(double c0,
                                    std::vector<std::pair<double, double>> fourier);
  // Two half-discs of the given radius joined by straight segments of length
  // 2*half_length; C^1 but not C^2.
  static BoundaryCurve stadium(double half_length, double radius);

  CurveKind kind() const { return kind_; }
  double perimeter() const { return perimeter_; }
  bool is_smooth() const {
    return kind_ == CurveKind::Circle || kind_ == CurveKind::Ellipse ||
           kind_ == CurveKind::SupportOval;
  }

  // Point/frame evaluation; throws VertexParamError exactly at polygon corners.
  CurvePoint eval(double s) const;
  Vec2 point(double s) const { return eval_point(s); }

  // Arc-length parameter of a point assumed (numerically) on the boundary.
  double project(const Vec2& p) const;

  // Support function h(theta) = max_{x in table} <x, u(theta)>.
  double support(double theta) const;

  bool contains(const Vec2& p, double tol = 0.0) const;
  Vec2 interior_point() const;

  // Tangency threshold shared by the exit solvers: |dir . normal| below this
  // raises TangentialRayError.
  static constexpr double kTangentTol = 1e-9;

  struct Hit {
    double s = 0.0;   // arc-length parameter of the hit
    Vec2 point;       // hit point
    double t = 0.0;   // distance travelled along the ray / arc angle
  };

  // Next boundary intersection of the chord leaving the boundary point at s0
  // with (unit) direction dir pointing into the table.
  Hit ray_exit(double s0, const Vec2& dir) const;

  // First boundary hit of the ray from an interior point.
  Hit ray_from_interior(const Vec2& p, const Vec2& dir) const;

  // All intersections of the full line {p + t*dir} with the boundary,
  // ordered by increasing t.
  std::vector<Hit> line_intersections(const Vec2& p, const Vec2& dir) const;

  struct ArcHit {
    double s = 0.0;
    Vec2 point;
    double psi = 0.0;  // arc angle travelled
    Vec2 velocity;     // unit velocity at the hit
    Vec2 center;       // center of the circular arc
  };

  // First boundary re-intersection of the circular arc of the given radius
  // leaving the boundary point at s0 with unit velocity dir; orientation +1
  // turns counterclockwise, -1 clockwise.  Throws NoReturnError if the circle
  // stays interior and TangentialRayError on tangential launch/landing.
  ArcHit arc_exit(double s0, const Vec2& dir, double radius, int orientation) const;

  // Signed interior function: negative inside, zero on the boundary.
  double implicit(const Vec2& p) const;

  // Polygon access.
  const std::vector<Vec2>& vertices() const { return vertices_; }
  // Index of the polygon side containing s (VertexParamError at corners).
  int side_index(double s) const;

  // Generic root-bracketing intersection path (sampled sign changes +
  // bisection + Newton polish); always available for smooth kinds and used
  // as the only path for support ovals.  Public so tests can cross-check the
  // analytic fast paths against it.
  std::vector<Hit> line_intersections_generic(const Vec2& p, const Vec2& dir) const;

 private:
  BoundaryCurve() = default;
  void build_arc_table();
  double native_to_arclen(double t) const;   // s(t) by table + quadrature
  double arclen_to_native(double s) const;   // t(s) by monotone cubic + Newton
  double speed(double t) const;              // |dgamma/dt|
  Vec2 eval_native(double t) const;
  Vec2 eval_point(double s) const;
  double project_native(const Vec2& p) const;

  CurveKind kind_ = CurveKind::Circle;
  double perimeter_ = 0.0;

  // circle / stadium
  double radius_ = 1.0;
  Vec2 center_;
  double half_length_ = 0.0;

  // ellipse
  double a_ = 1.0, b_ = 1.0;

  // polygon
  std::vector<Vec2> vertices_;
  std::vector<double> cum_;  // cumulative arc length at each vertex

  // support oval
  double c0_ = 0.0;
  std::vector<std::pair<double, double>> fourier_;
  double oval_h(double theta) const;
  double oval_dh(double theta) const;
  double oval_ddh(double theta) const;

  // arc-length table for smooth non-circular kinds
  std::vector<double> table_t_, table_s_;
  MonotoneCubic inverse_;  // s -> t
  double native_period_ = 0.0;
};

}  // namespace carom
