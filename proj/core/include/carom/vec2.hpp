#pragma once

#include <cmath>

namespace carom {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double c) const { return {x * c, y * c}; }
  Vec2 operator/(double c) const { return {x / c, y / c}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
};

inline Vec2 operator*(double c, const Vec2& v) { return v * c; }

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
// z-component of the 3-d cross product of (a,0) and (b,0).
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm2(const Vec2& v) { return dot(v, v); }
inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }
inline Vec2 normalized(const Vec2& v) { double n = norm(v); return {v.x / n, v.y / n}; }
// Counterclockwise rotation by pi/2.
inline Vec2 perp(const Vec2& v) { return {-v.y, v.x}; }
inline Vec2 unit_dir(double angle) { return {std::cos(angle), std::sin(angle)}; }
inline double angle_of(const Vec2& v) { return std::atan2(v.y, v.x); }
inline double dist(const Vec2& a, const Vec2& b) { return norm(a - b); }

// Column-major 2x2 matrix acting on Vec2.
struct Mat2 {
  // [ a  b ]
  // [ c  d ]
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 rotation(double t) {
    double ct = std::cos(t), st = std::sin(t);
    return {ct, -st, st, ct};
  }
  // Reflection across the line through the origin with unit direction e.
  static Mat2 reflection(const Vec2& e) {
    return {2.0 * e.x * e.x - 1.0, 2.0 * e.x * e.y,
            2.0 * e.x * e.y, 2.0 * e.y * e.y - 1.0};
  }

  Vec2 operator*(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d,
            c * o.a + d * o.c, c * o.b + d * o.d};
  }
  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }
  Mat2 transpose() const { return {a, c, b, d}; }
};

inline double frobenius_dist(const Mat2& m, const Mat2& n) {
  double da = m.a - n.a, db = m.b - n.b, dc = m.c - n.c, dd = m.d - n.d;
  return std::sqrt(da * da + db * db + dc * dc + dd * dd);
}

// Reduce x into [0, period).
inline double wrap(double x, double period) {
  double r = x - period * std::floor(x / period);
  if (r >= period) r -= period;
  if (r < 0.0) r += period;
  return r;
}

// Signed representative of x in [-period/2, period/2).
inline double wrap_signed(double x, double period) {
  double r = wrap(x, period);
  return (r >= 0.5 * period) ? r - period : r;
}

}  // namespace carom
