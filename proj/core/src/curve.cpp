#include "carom/curve.hpp"

#include <algorithm>
#include <cmath>

#include "carom/errors.hpp"

namespace carom {

namespace {

constexpr int kTableIntervals = 4096;
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// 5-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                           0.5384693101056831, 0.9061798459386640};
constexpr double kGw[5] = {0.2369268850561891, 0.4786286704993665,
                           0.5688888888888889, 0.4786286704993665,
                           0.2369268850561891};

double seg_point_distance(const Vec2& p, const Vec2& a, const Vec2& b, double* u_out) {
  Vec2 e = b - a;
  double u = dot(p - a, e) / norm2(e);
  u = std::clamp(u, 0.0, 1.0);
  if (u_out) *u_out = u;
  return dist(p, a + e * u);
}

}  // namespace

// ---------------------------------------------------------------------------
// construction

BoundaryCurve BoundaryCurve::circle(double radius, Vec2 center) {
  if (!(radius > 0.0)) throw GeometryError("circle radius must be positive");
  BoundaryCurve c;
  c.kind_ = CurveKind::Circle;
  c.radius_ = radius;
  c.center_ = center;
  c.native_period_ = kTwoPi;
  c.perimeter_ = kTwoPi * radius;
  return c;
}

BoundaryCurve BoundaryCurve::ellipse(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw GeometryError("ellipse semi-axes must be positive");
  BoundaryCurve c;
  c.kind_ = CurveKind::Ellipse;
  c.a_ = a;
  c.b_ = b;
  c.native_period_ = kTwoPi;
  c.build_arc_table();
  return c;
}

BoundaryCurve BoundaryCurve::polygon(std::vector<Vec2> vertices) {
  if (vertices.size() < 3) throw GeometryError("polygon needs at least 3 vertices");
  const std::size_t n = vertices.size();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, norm(vertices[i]));
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 e0 = vertices[(i + 1) % n] - vertices[i];
    Vec2 e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
    if (cross(e0, e1) <= 1e-12 * (scale * scale + 1.0))
      throw GeometryError("polygon must be strictly convex and counterclockwise");
  }
  BoundaryCurve c;
  c.kind_ = CurveKind::Polygon;
  c.vertices_ = std::move(vertices);
  c.cum_.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    c.cum_[i + 1] = c.cum_[i] + dist(c.vertices_[i], c.vertices_[(i + 1) % n]);
  c.perimeter_ = c.cum_[n];
  return c;
}

BoundaryCurve BoundaryCurve::regular_polygon(int n, double circumradius) {
  if (n < 3 || !(circumradius > 0.0)) throw GeometryError("invalid regular polygon");
  std::vector<Vec2> v;
  v.reserve(n);
  for (int k = 0; k < n; ++k) {
    double t = kTwoPi * k / n;
    v.push_back({circumradius * std::cos(t), circumradius * std::sin(t)});
  }
  return polygon(std::move(v));
}

BoundaryCurve BoundaryCurve::support_oval(double c0,
                                          std::vector<std::pair<double, double>> fourier) {
  BoundaryCurve c;
  c.kind_ = CurveKind::SupportOval;
  c.c0_ = c0;
  c.fourier_ = std::move(fourier);
  c.native_period_ = kTwoPi;
  double hmax = 0.0;
  for (int i = 0; i < 4096; ++i) {
    double th = kTwoPi * i / 4096;
    double rad = c.oval_h(th) + c.oval_ddh(th);
    hmax = std::max(hmax, std::abs(c.oval_h(th)));
    if (!(rad > 1e-9)) throw GeometryError("support oval is not strictly convex (h + h'' <= 0)");
  }
  (void)hmax;
  c.build_arc_table();
  return c;
}

BoundaryCurve BoundaryCurve::stadium(double half_length, double radius) {
  if (!(half_length > 0.0) || !(radius > 0.0)) throw GeometryError("invalid stadium");
  BoundaryCurve c;
  c.kind_ = CurveKind::Stadium;
  c.half_length_ = half_length;
  c.radius_ = radius;
  c.perimeter_ = 4.0 * half_length + kTwoPi * radius;
  return c;
}

// ---------------------------------------------------------------------------
// support oval basis

double BoundaryCurve::oval_h(double th) const {
  double h = c0_;
  for (std::size_t k = 0; k < fourier_.size(); ++k) {
    double m = static_cast<double>(k + 1);
    h += fourier_[k].first * std::cos(m * th) + fourier_[k].second * std::sin(m * th);
  }
  return h;
}

double BoundaryCurve::oval_dh(double th) const {
  double h = 0.0;
  for (std::size_t k = 0; k < fourier_.size(); ++k) {
    double m = static_cast<double>(k + 1);
    h += m * (-fourier_[k].first * std::sin(m * th) + fourier_[k].second * std::cos(m * th));
  }
  return h;
}

double BoundaryCurve::oval_ddh(double th) const {
  double h = 0.0;
  for (std::size_t k = 0; k < fourier_.size(); ++k) {
    double m = static_cast<double>(k + 1);
    h -= m * m * (fourier_[k].first * std::cos(m * th) + fourier_[k].second * std::sin(m * th));
  }
  return h;
}

// ---------------------------------------------------------------------------
// native parametrization (smooth kinds)

double BoundaryCurve::speed(double t) const {
  switch (kind_) {
    case CurveKind::Ellipse: {
      double st = std::sin(t), ct = std::cos(t);
      return std::sqrt(a_ * a_ * st * st + b_ * b_ * ct * ct);
    }
    case CurveKind::SupportOval:
      return oval_h(t) + oval_ddh(t);
    default:
      return radius_;
  }
}

Vec2 BoundaryCurve::eval_native(double t) const {
  switch (kind_) {
    case CurveKind::Circle:
      return center_ + Vec2{radius_ * std::cos(t), radius_ * std::sin(t)};
    case CurveKind::Ellipse:
      return {a_ * std::cos(t), b_ * std::sin(t)};
    case CurveKind::SupportOval: {
      Vec2 u = unit_dir(t);
      return u * oval_h(t) + perp(u) * oval_dh(t);
    }
    default:
      throw GeometryError("eval_native: not a smooth kind");
  }
}

void BoundaryCurve::build_arc_table() {
  const int n = kTableIntervals;
  table_t_.assign(n + 1, 0.0);
  table_s_.assign(n + 1, 0.0);
  double dt = native_period_ / n;
  for (int i = 0; i < n; ++i) {
    double t0 = i * dt;
    double acc = 0.0;
    for (int g = 0; g < 5; ++g)
      acc += kGw[g] * speed(t0 + 0.5 * dt * (1.0 + kGx[g]));
    table_t_[i + 1] = (i + 1) * dt;
    table_s_[i + 1] = table_s_[i] + 0.5 * dt * acc;
  }
  perimeter_ = table_s_[n];
  inverse_ = MonotoneCubic(table_s_, table_t_);
}

double BoundaryCurve::native_to_arclen(double t) const {
  if (kind_ == CurveKind::Circle) return radius_ * wrap(t, kTwoPi);
  t = wrap(t, native_period_);
  double dt = native_period_ / kTableIntervals;
  int i = std::min(static_cast<int>(t / dt), kTableIntervals - 1);
  double t0 = table_t_[i];
  double acc = 0.0;
  double h = t - t0;
  if (h > 0.0) {
    for (int g = 0; g < 5; ++g)
      acc += kGw[g] * speed(t0 + 0.5 * h * (1.0 + kGx[g]));
    acc *= 0.5 * h;
  }
  return table_s_[i] + acc;
}

double BoundaryCurve::arclen_to_native(double s) const {
  if (kind_ == CurveKind::Circle) return s / radius_;
  s = wrap(s, perimeter_);
  double t = inverse_(s);
  t = std::clamp(t, 0.0, native_period_);
  for (int it = 0; it < 3; ++it) {
    double f = native_to_arclen(t) - s;
    t -= f / speed(t);
    t = std::clamp(t, 0.0, native_period_);
  }
  return t;
}

// ---------------------------------------------------------------------------
// evaluation

Vec2 BoundaryCurve::eval_point(double s) const { return eval(s).point; }

int BoundaryCurve::side_index(double s) const {
  if (kind_ != CurveKind::Polygon) throw GeometryError("side_index: not a polygon");
  s = wrap(s, perimeter_);
  const double vtol = 1e-12 * perimeter_;
  auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
  int i = std::max(0, static_cast<int>(it - cum_.begin()) - 1);
  i = std::min<int>(i, static_cast<int>(vertices_.size()) - 1);
  if (std::abs(s - cum_[i]) < vtol || std::abs(s - cum_[i + 1]) < vtol ||
      std::abs(s - perimeter_) < vtol || s < vtol)
    throw VertexParamError("parameter lies on a polygon vertex");
  return i;
}

CurvePoint BoundaryCurve::eval(double s) const {
  s = wrap(s, perimeter_);
  CurvePoint out;
  switch (kind_) {
    case CurveKind::Circle: {
      double t = s / radius_;
      Vec2 u = unit_dir(t);
      out.point = center_ + u * radius_;
      out.tangent = perp(u);
      out.normal = -u;
      out.curvature = 1.0 / radius_;
      return out;
    }
    case CurveKind::Ellipse: {
      double t = arclen_to_native(s);
      double st = std::sin(t), ct = std::cos(t);
      out.point = {a_ * ct, b_ * st};
      Vec2 g{-a_ * st, b_ * ct};
      out.tangent = normalized(g);
      out.normal = perp(out.tangent);
      double sp = norm(g);
      out.curvature = a_ * b_ / (sp * sp * sp);
      return out;
    }
    case CurveKind::SupportOval: {
      double t = arclen_to_native(s);
      Vec2 u = unit_dir(t);
      out.point = u * oval_h(t) + perp(u) * oval_dh(t);
      out.tangent = perp(u);
      out.normal = -u;
      out.curvature = 1.0 / (oval_h(t) + oval_ddh(t));
      return out;
    }
    case CurveKind::Polygon: {
      int i = side_index(s);
      Vec2 a = vertices_[i], b = vertices_[(i + 1) % vertices_.size()];
      Vec2 e = b - a;
      double len = norm(e);
      Vec2 t = e / len;
      out.point = a + t * (s - cum_[i]);
      out.tangent = t;
      out.normal = perp(t);
      out.curvature = 0.0;
      return out;
    }
    case CurveKind::Stadium: {
      double L = half_length_, r = radius_;
      if (s < 2.0 * L) {
        out.point = {-L + s, -r};
        out.tangent = {1.0, 0.0};
      } else if (s < 2.0 * L + kPi * r) {
        double phi = -0.5 * kPi + (s - 2.0 * L) / r;
        Vec2 u = unit_dir(phi);
        out.point = Vec2{L, 0.0} + u * r;
        out.tangent = perp(u);
        out.curvature = 1.0 / r;
      } else if (s < 4.0 * L + kPi * r) {
        out.point = {L - (s - 2.0 * L - kPi * r), r};
        out.tangent = {-1.0, 0.0};
      } else {
        double phi = 0.5 * kPi + (s - 4.0 * L - kPi * r) / r;
        Vec2 u = unit_dir(phi);
        out.point = Vec2{-L, 0.0} + u * r;
        out.tangent = perp(u);
        out.curvature = 1.0 / r;
      }
      out.normal = perp(out.tangent);
      return out;
    }
  }
  throw GeometryError("eval: unknown curve kind");
}

// ---------------------------------------------------------------------------
// projection

double BoundaryCurve::project_native(const Vec2& p) const {
  switch (kind_) {
    case CurveKind::Circle:
      return wrap(angle_of(p - center_), kTwoPi);
    case CurveKind::Ellipse:
      return wrap(std::atan2(p.y / b_, p.x / a_), kTwoPi);
    case CurveKind::SupportOval: {
      // theta maximizing <p, u(theta)> - h(theta); zero of g = <p,u'> - h'.
      int n = 512;
      double best = 0.0, best_v = -1e300;
      for (int i = 0; i < n; ++i) {
        double th = kTwoPi * i / n;
        double v = dot(p, unit_dir(th)) - oval_h(th);
        if (v > best_v) {
          best_v = v;
          best = th;
        }
      }
      double th = best;
      for (int it = 0; it < 60; ++it) {
        Vec2 u = unit_dir(th);
        double g = dot(p, perp(u)) - oval_dh(th);
        double dg = -dot(p, u) - oval_ddh(th);
        if (std::abs(dg) < 1e-300) break;
        double step = g / dg;
        th -= step;
        if (std::abs(step) < 1e-15) break;
      }
      return wrap(th, kTwoPi);
    }
    default:
      throw GeometryError("project_native: not a smooth kind");
  }
}

double BoundaryCurve::project(const Vec2& p) const {
  switch (kind_) {
    case CurveKind::Circle:
    case CurveKind::Ellipse:
    case CurveKind::SupportOval:
      return native_to_arclen(project_native(p));
    case CurveKind::Polygon: {
      double best_d = 1e300, best_s = 0.0;
      const std::size_t n = vertices_.size();
      for (std::size_t i = 0; i < n; ++i) {
        double u = 0.0;
        double d = seg_point_distance(p, vertices_[i], vertices_[(i + 1) % n], &u);
        if (d < best_d) {
          best_d = d;
          best_s = cum_[i] + u * (cum_[i + 1] - cum_[i]);
        }
      }
      return wrap(best_s, perimeter_);
    }
    case CurveKind::Stadium: {
      double L = half_length_, r = radius_;
      double best_d = 1e300, best_s = 0.0;
      auto consider = [&](double d, double s) {
        if (d < best_d) {
          best_d = d;
          best_s = s;
        }
      };
      if (p.x >= -L && p.x <= L) {
        consider(std::abs(p.y + r), (p.x + L));
        consider(std::abs(p.y - r), 2.0 * L + kPi * r + (L - p.x));
      }
      {
        Vec2 q = p - Vec2{L, 0.0};
        double phi = angle_of(q);
        if (phi >= -0.5 * kPi && phi <= 0.5 * kPi)
          consider(std::abs(norm(q) - r), 2.0 * L + (phi + 0.5 * kPi) * r);
      }
      {
        Vec2 q = p - Vec2{-L, 0.0};
        double phi = angle_of(q);
        if (phi >= 0.5 * kPi || phi <= -0.5 * kPi) {
          double a = (phi >= 0.5 * kPi) ? phi : phi + kTwoPi;
          consider(std::abs(norm(q) - r), 4.0 * L + kPi * r + (a - 0.5 * kPi) * r);
        }
      }
      return wrap(best_s, perimeter_);
    }
  }
  throw GeometryError("project: unknown curve kind");
}

// ---------------------------------------------------------------------------
// support function, interior test

double BoundaryCurve::support(double theta) const {
  Vec2 u = unit_dir(theta);
  switch (kind_) {
    case CurveKind::Circle:
      return dot(center_, u) + radius_;
    case CurveKind::Ellipse: {
      double c = std::cos(theta), s = std::sin(theta);
      return std::sqrt(a_ * a_ * c * c + b_ * b_ * s * s);
    }
    case CurveKind::Polygon: {
      double h = -1e300;
      for (const Vec2& v : vertices_) h = std::max(h, dot(v, u));
      return h;
    }
    case CurveKind::SupportOval:
      return oval_h(theta);
    case CurveKind::Stadium:
      return half_length_ * std::abs(std::cos(theta)) + radius_;
  }
  throw GeometryError("support: unknown curve kind");
}

double BoundaryCurve::implicit(const Vec2& p) const {
  switch (kind_) {
    case CurveKind::Circle:
      return dist(p, center_) - radius_;
    case CurveKind::Ellipse: {
      double q = std::sqrt((p.x / a_) * (p.x / a_) + (p.y / b_) * (p.y / b_));
      return (q - 1.0) * std::min(a_, b_);
    }
    case CurveKind::Polygon: {
      double f = -1e300;
      const std::size_t n = vertices_.size();
      for (std::size_t i = 0; i < n; ++i) {
        Vec2 t = normalized(vertices_[(i + 1) % n] - vertices_[i]);
        Vec2 nout = -perp(t);
        f = std::max(f, dot(p - vertices_[i], nout));
      }
      return f;
    }
    case CurveKind::SupportOval: {
      // max_theta <p,u> - h, refined around the best sample.
      int n = 256;
      double best = -1e300, best_th = 0.0;
      for (int i = 0; i < n; ++i) {
        double th = kTwoPi * i / n;
        double v = dot(p, unit_dir(th)) - oval_h(th);
        if (v > best) {
          best = v;
          best_th = th;
        }
      }
      double lo = best_th - kTwoPi / n, hi = best_th + kTwoPi / n;
      for (int it = 0; it < 80; ++it) {
        double m1 = lo + (hi - lo) * 0.381966, m2 = hi - (hi - lo) * 0.381966;
        double f1 = dot(p, unit_dir(m1)) - oval_h(m1);
        double f2 = dot(p, unit_dir(m2)) - oval_h(m2);
        if (f1 < f2)
          lo = m1;
        else
          hi = m2;
      }
      double th = 0.5 * (lo + hi);
      return dot(p, unit_dir(th)) - oval_h(th);
    }
    case CurveKind::Stadium:
      return seg_point_distance(p, {-half_length_, 0.0}, {half_length_, 0.0}, nullptr) -
             radius_;
  }
  throw GeometryError("implicit: unknown curve kind");
}

bool BoundaryCurve::contains(const Vec2& p, double tol) const {
  return implicit(p) <= tol;
}

Vec2 BoundaryCurve::interior_point() const {
  switch (kind_) {
    case CurveKind::Circle:
      return center_;
    case CurveKind::Ellipse:
    case CurveKind::Stadium:
      return {0.0, 0.0};
    case CurveKind::Polygon: {
      Vec2 c;
      for (const Vec2& v : vertices_) c += v;
      return c / static_cast<double>(vertices_.size());
    }
    case CurveKind::SupportOval: {
      Vec2 c;
      const int n = 64;
      for (int i = 0; i < n; ++i) c += eval_native(kTwoPi * i / n);
      return c / static_cast<double>(n);
    }
  }
  throw GeometryError("interior_point: unknown curve kind");
}

// ---------------------------------------------------------------------------
// line intersections

std::vector<BoundaryCurve::Hit> BoundaryCurve::line_intersections_generic(
    const Vec2& p, const Vec2& dir) const {
  // Sampled sign bracketing of f(t) = cross(dir, gamma(t) - p), bisection to
  // 1e-13 of the native period, then one Newton polish.
  if (!is_smooth()) return line_intersections(p, dir);
  const int n = 1024;
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i)
    f[i] = cross(dir, eval_native(native_period_ * i / n) - p);
  std::vector<Hit> hits;
  for (int i = 0; i < n; ++i) {
    int j = (i + 1) % n;
    if (f[i] == 0.0 || (f[i] > 0.0) == (f[j] > 0.0)) continue;
    double lo = native_period_ * i / n;
    double hi = native_period_ * (i + 1) / n;
    auto ff = [&](double t) { return cross(dir, eval_native(t) - p); };
    double t = bisect(ff, lo, hi, f[i], 1e-13 * native_period_);
    // Newton polish.
    for (int it = 0; it < 2; ++it) {
      Vec2 u = unit_dir(t);
      Vec2 gprime;
      if (kind_ == CurveKind::Circle)
        gprime = perp(u) * radius_;
      else if (kind_ == CurveKind::Ellipse)
        gprime = {-a_ * std::sin(t), b_ * std::cos(t)};
      else
        gprime = perp(u) * (oval_h(t) + oval_ddh(t));
      double df = cross(dir, gprime);
      if (std::abs(df) < 1e-300) break;
      t -= ff(t) / df;
    }
    Hit h;
    h.point = eval_native(wrap(t, native_period_));
    h.s = native_to_arclen(t);
    h.t = dot(h.point - p, dir);
    hits.push_back(h);
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.t < b.t; });
  return hits;
}

std::vector<BoundaryCurve::Hit> BoundaryCurve::line_intersections(const Vec2& p,
                                                                  const Vec2& dir) const {
  std::vector<Hit> hits;
  auto push = [&](double s, const Vec2& q) {
    Hit h;
    h.s = wrap(s, perimeter_);
    h.point = q;
    h.t = dot(q - p, dir);
    hits.push_back(h);
  };
  switch (kind_) {
    case CurveKind::Circle: {
      Vec2 m = p - center_;
      double A = norm2(dir);
      double B = 2.0 * dot(m, dir);
      double C = norm2(m) - radius_ * radius_;
      double disc = B * B - 4.0 * A * C;
      if (disc < 0.0) return {};
      double sq = std::sqrt(disc);
      for (double t : {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)}) {
        Vec2 q = p + dir * t;
        push(radius_ * wrap(angle_of(q - center_), kTwoPi), q);
      }
      break;
    }
    case CurveKind::Ellipse: {
      Vec2 ps{p.x / a_, p.y / b_}, ds{dir.x / a_, dir.y / b_};
      double A = norm2(ds);
      double B = 2.0 * dot(ps, ds);
      double C = norm2(ps) - 1.0;
      double disc = B * B - 4.0 * A * C;
      if (disc < 0.0) return {};
      double sq = std::sqrt(disc);
      for (double t : {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)}) {
        Vec2 q = p + dir * t;
        push(native_to_arclen(wrap(std::atan2(q.y / b_, q.x / a_), kTwoPi)), q);
      }
      break;
    }
    case CurveKind::Polygon: {
      const std::size_t n = vertices_.size();
      for (std::size_t i = 0; i < n; ++i) {
        Vec2 a = vertices_[i], e = vertices_[(i + 1) % n] - vertices_[i];
        double den = cross(dir, e);
        if (std::abs(den) < 1e-15 * (norm(e) + 1.0)) continue;
        double t = cross(a - p, e) / den;
        double u = cross(a - p, dir) / den;
        if (u < -1e-12 || u > 1.0 + 1e-12) continue;
        u = std::clamp(u, 0.0, 1.0);
        push(cum_[i] + u * (cum_[i + 1] - cum_[i]), a + e * u);
      }
      break;
    }
    case CurveKind::SupportOval:
      return line_intersections_generic(p, dir);
    case CurveKind::Stadium: {
      double L = half_length_, r = radius_;
      // straight pieces
      struct Seg {
        Vec2 a, b;
        double s0;
        bool reversed;
      };
      Seg segs[2] = {{{-L, -r}, {L, -r}, 0.0, false},
                     {{L, r}, {-L, r}, 2.0 * L + kPi * r, false}};
      for (const Seg& sg : segs) {
        Vec2 e = sg.b - sg.a;
        double den = cross(dir, e);
        if (std::abs(den) > 1e-15 * (norm(e) + 1.0)) {
          double t = cross(sg.a - p, e) / den;
          double u = cross(sg.a - p, dir) / den;
          if (u >= -1e-12 && u <= 1.0 + 1e-12) {
            u = std::clamp(u, 0.0, 1.0);
            (void)t;
            push(sg.s0 + u * 2.0 * L, sg.a + e * u);
          }
        }
      }
      // caps
      for (int side = 0; side < 2; ++side) {
        Vec2 c{side == 0 ? L : -L, 0.0};
        Vec2 m = p - c;
        double A = norm2(dir);
        double B = 2.0 * dot(m, dir);
        double C = norm2(m) - r * r;
        double disc = B * B - 4.0 * A * C;
        if (disc < 0.0) continue;
        double sq = std::sqrt(disc);
        for (double t : {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)}) {
          Vec2 q = p + dir * t;
          double phi = angle_of(q - c);
          if (side == 0) {
            if (phi >= -0.5 * kPi - 1e-12 && phi <= 0.5 * kPi + 1e-12)
              push(2.0 * L + (std::clamp(phi, -0.5 * kPi, 0.5 * kPi) + 0.5 * kPi) * r, q);
          } else {
            double a = (phi >= 0.0) ? phi : phi + kTwoPi;
            if (a >= 0.5 * kPi - 1e-12 && a <= 1.5 * kPi + 1e-12)
              push(4.0 * L + kPi * r + (std::clamp(a, 0.5 * kPi, 1.5 * kPi) - 0.5 * kPi) * r,
                   q);
          }
        }
      }
      break;
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.t < b.t; });
  // merge duplicates (shared polygon vertices, tangency double roots)
  std::vector<Hit> out;
  double scale = perimeter_;
  for (const Hit& h : hits) {
    if (!out.empty() && std::abs(h.t - out.back().t) < 1e-11 * scale &&
        dist(h.point, out.back().point) < 1e-11 * scale)
      continue;
    out.push_back(h);
  }
  return out;
}

// ---------------------------------------------------------------------------
// exits

BoundaryCurve::Hit BoundaryCurve::ray_exit(double s0, const Vec2& dir) const {
  CurvePoint cp = eval(s0);
  double inward = dot(dir, cp.normal);
  if (std::abs(inward) < kTangentTol)
    throw TangentialRayError("ray launch is tangent to the boundary");
  if (inward < 0.0) throw GeometryError("ray launch points out of the table");
  std::vector<Hit> hits = line_intersections(cp.point, dir);
  const double skip = 1e-9 * perimeter_;
  for (const Hit& h : hits) {
    if (h.t <= skip) continue;
    return h;
  }
  throw GeometryError("ray has no interior crossing with the boundary");
}

BoundaryCurve::Hit BoundaryCurve::ray_from_interior(const Vec2& p, const Vec2& dir) const {
  if (implicit(p) > 0.0) throw DomainError("ray_from_interior: point is outside the table");
  std::vector<Hit> hits = line_intersections(p, dir);
  for (const Hit& h : hits)
    if (h.t > 1e-12 * perimeter_) return h;
  throw GeometryError("interior ray found no boundary hit");
}

BoundaryCurve::ArcHit BoundaryCurve::arc_exit(double s0, const Vec2& dir, double radius,
                                              int orientation) const {
  if (orientation != 1 && orientation != -1)
    throw GeometryError("arc orientation must be +1 or -1");
  if (!(radius > 0.0)) throw GeometryError("arc radius must be positive");
  CurvePoint cp = eval(s0);
  double inward = dot(dir, cp.normal);
  if (std::abs(inward) < kTangentTol)
    throw TangentialRayError("arc launch is tangent to the boundary");
  if (inward < 0.0) throw GeometryError("arc launch points out of the table");

  const double sg = static_cast<double>(orientation);
  const Vec2 center = cp.point + perp(dir) * (radius * sg);
  const Vec2 rad0 = cp.point - center;
  // Displacement form (rot(psi) - I) * rad0 with 1 - cos = 2 sin^2(psi/2):
  // keeps full precision when the radius dwarfs the table.
  auto pos = [&](double psi) {
    const double a = sg * psi;
    const double sn = std::sin(a), vc = 2.0 * std::sin(0.5 * a) * std::sin(0.5 * a);
    return cp.point + Vec2{-vc * rad0.x - sn * rad0.y, sn * rad0.x - vc * rad0.y};
  };
  auto vel = [&](double psi) { return Mat2::rotation(sg * psi) * dir; };
  auto F = [&](double psi) { return implicit(pos(psi)); };
  // Angle resolution worth one part in 1e12 of the table scale.
  const double psi_tol = std::min(1e-13 * kTwoPi, 1e-12 * perimeter_ / radius);

  // Scan: geometric ladder near 0 (weak-curvature exits can be very early),
  // then a uniform sweep of the full turn.
  std::vector<double> nodes;
  for (int k = 46; k >= 12; --k) nodes.push_back(kTwoPi * std::pow(2.0, -k));
  const int n = 2048;
  for (int j = 1; j <= n; ++j) nodes.push_back(kTwoPi * j / n);

  double prev_psi = 0.0;
  double prev_f = -1.0;  // just left the boundary moving inward
  bool first = true;
  double blo = 0.0, bhi = 0.0, flo = 0.0;
  bool found = false;
  for (double psi : nodes) {
    double f = F(psi);
    if (first) {
      first = false;
      if (f > 0.0) {
        // Exits before the first ladder node: bracket against psi -> 0+.
        blo = psi * 0.5;
        flo = F(blo);
        if (flo <= 0.0) {
          bhi = psi;
          found = true;
        }
      }
    }
    if (!found && prev_f <= 0.0 && f > 0.0) {
      blo = prev_psi;
      bhi = psi;
      flo = prev_f;
      found = true;
    }
    if (found) break;
    prev_psi = psi;
    prev_f = f;
  }
  if (!found) throw NoReturnError("arc stays inside the table over a full turn");

  double psi = bisect(F, blo, bhi, flo, psi_tol);
  ArcHit hit;
  hit.psi = psi;
  hit.point = pos(psi);
  hit.velocity = vel(psi);
  hit.s = project(hit.point);
  hit.center = center;
  CurvePoint land = eval(hit.s);
  if (std::abs(dot(hit.velocity, land.normal)) < kTangentTol)
    throw TangentialRayError("arc lands tangent to the boundary");
  return hit;
}

}  // namespace carom
