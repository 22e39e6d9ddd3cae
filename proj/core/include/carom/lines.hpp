#pragma once

#include <vector>

#include <Eigen/Dense>

#include "carom/curve.hpp"
#include "carom/phase.hpp"

namespace carom {

// Oriented line chart: the line {z : z . u(theta) = p} with unit normal
// u(theta) = (cos theta, sin theta), traversed along perp(u) = (-sin, cos);
// p is the signed distance from the origin.  theta in [0, 2*pi).  The
// invariant two-form in this chart is d(theta) ^ d(p).
struct LineCoords {
  double theta = 0.0;
  double p = 0.0;
};

Vec2 line_normal(const LineCoords& lc);
Vec2 line_direction(const LineCoords& lc);

// Chart of the launched chord of a boundary phase state, and back.  The
// inverse picks the boundary point where the line enters the table (velocity
// pointing inward).
LineCoords phase_to_line(const BoundaryCurve& curve, const PhasePoint& q);
PhasePoint line_to_phase(const BoundaryCurve& curve, const LineCoords& lc);

// One bounce of the Birkhoff billiard expressed on oriented lines.
LineCoords line_billiard_step(const BoundaryCurve& curve, const LineCoords& lc);

// Set of oriented lines meeting the table: for each grid angle theta the
// fiber in p is the single interval [-h(theta+pi), h(theta)], h the support
// function.
struct LineDomain {
  std::vector<double> theta;
  std::vector<double> p_lo;
  std::vector<double> p_hi;
};

LineDomain line_domain(const BoundaryCurve& curve, int grid = 256);

// Signed margin of a line inside the domain of lines meeting the table
// (positive inside, in units of p).
double line_domain_margin(const BoundaryCurve& curve, const LineCoords& lc);

struct LineJacobian {
  Eigen::Matrix2d J;
  double det = 0.0;
};

// Central finite-difference Jacobian of the bounce map in (theta, p); throws
// BoundaryStateError when the state is within 1e-6 of the domain boundary.
LineJacobian line_map_jacobian(const BoundaryCurve& curve, const LineCoords& lc,
                               double step = 1e-6);

}  // namespace carom
