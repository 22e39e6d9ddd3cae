#pragma once

namespace carom {

// Angles of the configuration-space triangle for three elastic beads on a
// unit-circumference ring with masses (m1, m2, m3).  alpha_i sits at the
// vertex where the two collision walls involving bead i meet.
struct TriangleAngles {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double alpha3 = 0.0;
  bool obtuse = false;  // some angle exceeds pi/2 (possible with mixed signs)
};

// Requires all masses nonzero and (m1+m2+m3)*m1*m2*m3 > 0 (the kinetic-energy
// form is then definite on the reduced configuration plane); otherwise throws
// InvalidMassesError.  For positive masses this reproduces
// tan(alpha_i) = sqrt(m_i (m1+m2+m3) / (m_j m_k)) and the triangle is acute.
TriangleAngles beads_to_triangle(double m1, double m2, double m3);

bool beads_masses_valid(double m1, double m2, double m3);

}  // namespace carom
