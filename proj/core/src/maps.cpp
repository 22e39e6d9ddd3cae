#include "carom/maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "carom/errors.hpp"

namespace carom {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

// ---------------------------------------------------------------------------
// classical reflection

PhasePoint birkhoff_step(const BoundaryCurve& curve, const PhasePoint& p) {
  check_phase(curve, p);
  if (curve.kind() == CurveKind::Circle) {
    // On a circle the launch angle is conserved exactly and the footpoint
    // advances by the subtended arc 2*phi*R = phi * perimeter / pi.
    double L = curve.perimeter();
    return {wrap(p.s + p.phi * L / kPi, L), p.phi};
  }
  CurvePoint cp = curve.eval(p.s);
  Vec2 d = launch_direction(cp, p.phi);
  BoundaryCurve::Hit hit = curve.ray_exit(p.s, d);
  CurvePoint cq = curve.eval(hit.s);
  Vec2 out = reflect(d, cq.normal);
  return {hit.s, phase_angle(cq, out)};
}

// ---------------------------------------------------------------------------
// Minkowski chord map

double minkowski_stationarity(const BoundaryCurve& curve, const MinkowskiNorm& N,
                              double s0, double s1, double s2) {
  Vec2 g0 = curve.point(s0);
  CurvePoint c1 = curve.eval(s1);
  Vec2 g2 = curve.point(s2);
  Vec2 in = c1.point - g0;
  Vec2 out = g2 - c1.point;
  return dot(N.gradient(in), c1.tangent) - dot(N.gradient(out), c1.tangent);
}

ChordState minkowski_step(const BoundaryCurve& curve, const MinkowskiNorm& N,
                          const ChordState& c) {
  const double L = curve.perimeter();
  const double delta = 1e-6 * L;

  Vec2 g0 = curve.point(c.s0);
  CurvePoint c1 = curve.eval(c.s1);
  Vec2 in = c1.point - g0;
  if (norm(in) < delta) throw DegenerateChordError("incoming chord is degenerate");
  const double A = dot(N.gradient(in), c1.tangent);

  // residual(u) = A - <grad N(gamma(s1+u) - gamma(s1)), T(s1)>, u in
  // (delta, L - delta).  For a strictly convex norm on a strictly convex
  // table the outgoing term sweeps monotonically, so the root is unique.
  auto residual = [&](double u) {
    Vec2 g2 = curve.point(wrap(c.s1 + u, L));
    return A - dot(N.gradient(g2 - c1.point), c1.tangent);
  };

  const int n = 512;
  double lo = delta, hi = L - delta;
  double prev_u = lo, prev_f = residual(lo);
  double root = std::numeric_limits<double>::quiet_NaN();
  for (int i = 1; i <= n; ++i) {
    double u = lo + (hi - lo) * static_cast<double>(i) / n;
    double f = residual(u);
    if (prev_f == 0.0) {
      root = prev_u;
      break;
    }
    if ((prev_f < 0.0) != (f < 0.0)) {
      double a = prev_u, b = u, fa = prev_f;
      root = bisect(residual, a, b, fa, 1e-15 * L);
      break;
    }
    prev_u = u;
    prev_f = f;
  }
  if (!std::isfinite(root)) {
    double fend = residual(hi);
    if (std::abs(residual(lo)) < 1e-8 || std::abs(fend) < 1e-8)
      throw DegenerateChordError("stationary chord collapses into the corner exclusion");
    throw ReflectionUndefinedError("no stationary outgoing chord found");
  }

  // Secant polish on top of the bisection estimate.
  double u0 = root, f0 = residual(u0);
  double u1 = root + 1e-9 * L, f1 = residual(u1);
  for (int it = 0; it < 30 && std::abs(f0) > 1e-12; ++it) {
    if (f1 == f0) break;
    double u2 = u1 - f1 * (u1 - u0) / (f1 - f0);
    if (!std::isfinite(u2) || u2 <= lo || u2 >= hi) break;
    u0 = u1;
    f0 = f1;
    u1 = u2;
    f1 = residual(u2);
    if (std::abs(f1) < std::abs(f0)) {
      std::swap(u0, u1);
      std::swap(f0, f1);
    }
  }
  double best = std::abs(f0) <= std::abs(residual(root)) ? u0 : root;
  if (std::abs(residual(best)) > 1e-10)
    throw NoConvergenceError("chord stationarity residual did not converge");
  return {c.s1, wrap(c.s1 + best, L)};
}

// ---------------------------------------------------------------------------
// magnetic map

MagneticResult magnetic_step(const BoundaryCurve& curve, double B, int orientation,
                             const PhasePoint& p) {
  check_phase(curve, p);
  if (!(B > 0.0)) throw GeometryError("field strength must be positive");
  CurvePoint cp = curve.eval(p.s);
  Vec2 d = launch_direction(cp, p.phi);
  BoundaryCurve::ArcHit arc = curve.arc_exit(p.s, d, 1.0 / B, orientation);
  CurvePoint cq = curve.eval(arc.s);
  Vec2 out = reflect(arc.velocity, cq.normal);
  return {{arc.s, phase_angle(cq, out)}, arc};
}

// ---------------------------------------------------------------------------
// reflection with boundary slide

DelayFunction DelayFunction::constant(double value) {
  DelayFunction d;
  d.kind_ = Kind::Constant;
  d.value_ = value;
  return d;
}

DelayFunction DelayFunction::half_perimeter() {
  DelayFunction d;
  d.kind_ = Kind::HalfPerimeter;
  return d;
}

DelayFunction DelayFunction::tabulated(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2) throw ConfigError("tabulated delay needs at least two samples");
  std::sort(samples.begin(), samples.end());
  std::vector<double> xs, ys;
  xs.reserve(samples.size());
  ys.reserve(samples.size());
  for (auto& [a, v] : samples) {
    if (!xs.empty() && a <= xs.back())
      throw ConfigError("tabulated delay abscissae must be strictly increasing");
    xs.push_back(a);
    ys.push_back(v);
  }
  DelayFunction d;
  d.kind_ = Kind::Tabulated;
  d.lo_ = xs.front();
  d.hi_ = xs.back();
  d.interp_ = MonotoneCubic(std::move(xs), std::move(ys));
  return d;
}

double DelayFunction::operator()(double phi, double perimeter) const {
  switch (kind_) {
    case Kind::Constant:
      return value_;
    case Kind::HalfPerimeter:
      return 0.5 * perimeter;
    case Kind::Tabulated:
      return interp_(std::clamp(phi, lo_, hi_));
  }
  return 0.0;
}

PhasePoint pensive_step(const BoundaryCurve& curve, const DelayFunction& delay,
                        const PhasePoint& p) {
  PhasePoint q = birkhoff_step(curve, p);
  double L = curve.perimeter();
  return {wrap(q.s + delay(q.phi, L), L), q.phi};
}

// ---------------------------------------------------------------------------
// tangent-chord (symplectic) map

ChordState symplectic_billiard_step(const BoundaryCurve& curve, const ChordState& c) {
  CurvePoint c0 = curve.eval(c.s0);
  CurvePoint c1 = curve.eval(c.s1);
  if (curve.kind() == CurveKind::Circle) {
    // The chord through gamma(s0) parallel to T(s1) lands at the reflection
    // of s0 across s1; exact on the circle.
    double L = curve.perimeter();
    return {c.s1, wrap(2.0 * c.s1 - c.s0, L)};
  }
  double side = dot(c1.tangent, c0.normal);
  if (std::abs(side) < BoundaryCurve::kTangentTol)
    throw ReflectionUndefinedError("pivot tangent is tangential at the launch point");
  Vec2 d = side > 0.0 ? c1.tangent : -c1.tangent;
  BoundaryCurve::Hit hit = curve.ray_exit(c.s0, d);
  return {c.s1, hit.s};
}

// ---------------------------------------------------------------------------
// transverse line-field reflection

TransverseField TransverseField::inward_normal() {
  TransverseField f;
  f.kind_ = Kind::InwardNormal;
  return f;
}

TransverseField TransverseField::concurrent(Vec2 through) {
  TransverseField f;
  f.kind_ = Kind::Concurrent;
  f.through_ = through;
  return f;
}

TransverseField TransverseField::tabulated(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2) throw ConfigError("tabulated field needs at least two samples");
  std::sort(samples.begin(), samples.end());
  TransverseField f;
  f.kind_ = Kind::Tabulated;
  f.samples_ = std::move(samples);
  return f;
}

Vec2 TransverseField::direction(const BoundaryCurve& curve, double s) const {
  switch (kind_) {
    case Kind::InwardNormal:
      return curve.eval(s).normal;
    case Kind::Concurrent: {
      Vec2 v = through_ - curve.point(s);
      double n = norm(v);
      if (n < 1e-12) throw FieldDegenerateError("field base point lies on the boundary");
      return v / n;
    }
    case Kind::Tabulated: {
      double L = curve.perimeter();
      double x = wrap(s, L);
      // periodic linear interpolation of the direction angle
      const auto& tab = samples_;
      std::size_t n = tab.size();
      std::size_t hi = 0;
      while (hi < n && tab[hi].first < x) ++hi;
      double x0, y0, x1, y1;
      if (hi == 0) {
        x0 = tab[n - 1].first - L;
        y0 = tab[n - 1].second;
        x1 = tab[0].first;
        y1 = tab[0].second;
      } else if (hi == n) {
        x0 = tab[n - 1].first;
        y0 = tab[n - 1].second;
        x1 = tab[0].first + L;
        y1 = tab[0].second;
      } else {
        x0 = tab[hi - 1].first;
        y0 = tab[hi - 1].second;
        x1 = tab[hi].first;
        y1 = tab[hi].second;
      }
      double t = (x - x0) / (x1 - x0);
      return unit_dir(y0 + t * (y1 - y0));
    }
  }
  return {0.0, 0.0};
}

void check_transverse(const BoundaryCurve& curve, const TransverseField& field,
                      int samples) {
  double L = curve.perimeter();
  // The field direction varies continuously, so a sign change of the normal
  // component between samples pins a tangency in between.
  std::vector<double> fn(samples);
  for (int i = 0; i < samples; ++i) {
    double s = L * (static_cast<double>(i) + 0.5) / samples;
    CurvePoint cp = curve.eval(s);
    fn[i] = dot(field.direction(curve, s), cp.normal);
    if (std::abs(fn[i]) < 1e-6)
      throw FieldDegenerateError("line field is tangent to the boundary");
  }
  for (int i = 0; i < samples; ++i)
    if ((fn[i] > 0.0) != (fn[(i + 1) % samples] > 0.0))
      throw FieldDegenerateError("line field is tangent to the boundary");
}

PhasePoint projective_step(const BoundaryCurve& curve, const TransverseField& field,
                           const PhasePoint& p) {
  check_phase(curve, p);
  CurvePoint cp = curve.eval(p.s);
  Vec2 d = launch_direction(cp, p.phi);
  BoundaryCurve::Hit hit = curve.ray_exit(p.s, d);
  CurvePoint cq = curve.eval(hit.s);
  Vec2 f = field.direction(curve, hit.s);
  double fn = dot(f, cq.normal);
  if (std::abs(fn) < 1e-6)
    throw FieldDegenerateError("line field is tangent at the landing point");
  if (fn < 0.0) f = -f;  // orient the field into the table
  double den = cross(cq.tangent, f);
  // d = a*T + b*f; reflection keeps a and flips b.
  double a = cross(d, f) / den;
  double b = cross(cq.tangent, d) / den;
  Vec2 out = a * cq.tangent - b * f;
  return {hit.s, phase_angle(cq, out)};
}

// ---------------------------------------------------------------------------
// outer map

namespace {

// Tangency parameters of the two support lines through an exterior point for
// a smooth table: roots of g(s) = cross(T(s), z - gamma(s)).
std::vector<double> smooth_tangency_params(const BoundaryCurve& curve, const Vec2& z) {
  const double L = curve.perimeter();
  auto g = [&](double s) {
    CurvePoint cp = curve.eval(wrap(s, L));
    return cross(cp.tangent, z - cp.point);
  };
  const int n = 1024;
  std::vector<double> roots;
  double prev_s = 0.0, prev_f = g(0.0);
  for (int i = 1; i <= n; ++i) {
    double s = L * static_cast<double>(i) / n;
    double f = g(s);
    if ((prev_f < 0.0) != (f < 0.0)) {
      double r = bisect(g, prev_s, s, prev_f, 1e-15 * L);
      // Newton polish: g'(s) = kappa(s) * cross(N, z - gamma).
      for (int it = 0; it < 3; ++it) {
        CurvePoint cp = curve.eval(wrap(r, L));
        double val = cross(cp.tangent, z - cp.point);
        double der = cp.curvature * cross(cp.normal, z - cp.point);
        if (std::abs(der) < 1e-14) break;
        double rn = r - val / der;
        if (std::abs(rn - r) > L / n) break;
        r = rn;
      }
      roots.push_back(wrap(r, L));
    }
    prev_s = s;
    prev_f = f;
  }
  return roots;
}

}  // namespace

OuterResult outer_billiard_step(const BoundaryCurve& curve, const Vec2& z, int orientation) {
  if (orientation != 1 && orientation != -1)
    throw GeometryError("orientation must be +1 or -1");
  if (curve.contains(z, 1e-12 * curve.perimeter()))
    throw DomainError("outer map is defined only for exterior points");
  const Vec2 interior = curve.interior_point();

  if (curve.kind() == CurveKind::Polygon) {
    const auto& v = curve.vertices();
    const std::size_t n = v.size();
    double scale2 = 0.0;
    for (const auto& q : v) scale2 = std::max(scale2, norm2(q - z));
    const double tol = 1e-12 * scale2;
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      bool all_side = true, tie = false;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        double c = cross(v[i] - z, v[j] - z) * orientation;
        if (c < -tol) {
          all_side = false;
          break;
        }
        if (c <= tol) tie = true;
      }
      if (!all_side) continue;
      if (tie)
        throw TieBreakError("support line through the point contains a full side");
      pick = i;
      break;
    }
    if (pick == n) throw GeometryError("no supporting vertex found");
    double s = 0.0;
    for (std::size_t i = 0; i < pick; ++i) s += dist(v[i], v[(i + 1) % n]);
    return {2.0 * v[pick] - z, v[pick], s};
  }

  std::vector<double> roots = smooth_tangency_params(curve, z);
  for (double s : roots) {
    Vec2 w = curve.point(s);
    double side = cross(w - z, interior - z);
    if (side * orientation > 0.0) return {2.0 * w - z, w, s};
  }
  throw GeometryError("no support tangency with the requested orientation");
}

}  // namespace carom
