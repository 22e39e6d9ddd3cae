#include "carom/beads.hpp"

#include <array>
#include <cmath>

#include "carom/errors.hpp"

namespace carom {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

bool beads_masses_valid(double m1, double m2, double m3) {
  if (m1 == 0.0 || m2 == 0.0 || m3 == 0.0) return false;
  return (m1 + m2 + m3) * m1 * m2 * m3 > 0.0;
}

// The reduced configuration space is the plane {sum_i m_i x_i = 0} carrying
// the kinetic-energy form G(x, y) = sum_i m_i x_i y_i.  On a ring of
// circumference 1 the three collision walls x1=x2, x2=x3, x3=x1+1 cut out a
// triangle in that plane; its vertices are triple-collision configurations.
// Under the validity condition G restricted to the plane is definite, so
// angles are computed metrically (with the global sign flipped when the form
// is negative definite).  This agrees with the arctangent formula for
// positive masses and stays correct when an angle is obtuse.
TriangleAngles beads_to_triangle(double m1, double m2, double m3) {
  if (!beads_masses_valid(m1, m2, m3))
    throw InvalidMassesError("need nonzero masses with (m1+m2+m3)*m1*m2*m3 > 0");

  const double M = m1 + m2 + m3;
  const std::array<double, 3> m = {m1, m2, m3};

  // Triple-collision vertices in bead coordinates (x1, x2, x3):
  //   p: walls 12 and 23 meet      -> angle alpha2
  //   q: walls 12 and 31 meet      -> angle alpha1
  //   r: walls 23 and 31 meet      -> angle alpha3
  const double t = -m3 / M;
  const double u = -(m2 + m3) / M;
  const std::array<double, 3> p = {0.0, 0.0, 0.0};
  const std::array<double, 3> q = {t, t, t + 1.0};
  const std::array<double, 3> r = {u, u + 1.0, u + 1.0};

  auto form = [&m](const std::array<double, 3>& x, const std::array<double, 3>& y) {
    return m[0] * x[0] * y[0] + m[1] * x[1] * y[1] + m[2] * x[2] * y[2];
  };
  auto diff = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return std::array<double, 3>{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  };

  auto e_pq = diff(q, p);
  double sign = form(e_pq, e_pq) > 0.0 ? 1.0 : -1.0;

  auto angle_at = [&](const std::array<double, 3>& v, const std::array<double, 3>& a,
                      const std::array<double, 3>& b) {
    auto ea = diff(a, v);
    auto eb = diff(b, v);
    double gaa = sign * form(ea, ea);
    double gbb = sign * form(eb, eb);
    double gab = sign * form(ea, eb);
    if (!(gaa > 0.0) || !(gbb > 0.0))
      throw InvalidMassesError("kinetic form is not definite on the reduced plane");
    double c = gab / std::sqrt(gaa * gbb);
    c = std::fmax(-1.0, std::fmin(1.0, c));
    return std::acos(c);
  };

  TriangleAngles out;
  out.alpha1 = angle_at(q, p, r);
  out.alpha2 = angle_at(p, q, r);
  out.alpha3 = angle_at(r, p, q);
  out.obtuse = out.alpha1 > 0.5 * kPi || out.alpha2 > 0.5 * kPi || out.alpha3 > 0.5 * kPi;
  return out;
}

}  // namespace carom
