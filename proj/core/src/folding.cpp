#include "carom/folding.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_set>

#include "carom/errors.hpp"

namespace carom {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}
}  // namespace

FoldIsometry compose(const FoldIsometry& a, const FoldIsometry& b) {
  return {a.Q * b.Q, a.Q * b.t + a.t};
}

FoldIsometry reflection_across_line(const Vec2& point, const Vec2& direction) {
  Mat2 Q = Mat2::reflection(normalized(direction));
  return {Q, point - Q * point};
}

FoldIsometry fold_map(const Tiling& t, const FaceRef& base, const std::vector<int>& edges) {
  FoldIsometry iso;
  FaceRef cur = base;
  for (int e : edges) {
    const auto& poly = t.face_polygon(cur.f);
    const int n = static_cast<int>(poly.size());
    if (e < 0 || e >= n) throw PathError("edge index out of range for the current face");
    Vec2 off = t.cell_offset(cur);
    Vec2 a = poly[e] + off;
    Vec2 b = poly[(e + 1) % n] + off;
    iso = compose(iso, reflection_across_line(a, b - a));
    const EdgeAdjacency& ad = t.adjacency(cur.f, e);
    if (ad.open()) throw PathError("path crosses an open edge of the tiling");
    cur = {cur.i + ad.di, cur.j + ad.dj, ad.face};
  }
  return iso;
}

namespace {

struct ScanState {
  FaceRef face;
  FoldIsometry iso;
};

std::uint64_t state_key(const ScanState& s, double qt) {
  auto q = [qt](double x) {
    return static_cast<std::uint64_t>(static_cast<std::int64_t>(std::llround(x / qt)));
  };
  std::uint64_t h = mix64(static_cast<std::uint64_t>(s.face.f));
  auto add = [&h](std::uint64_t v) {
    h = mix64(h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
  };
  add(static_cast<std::uint64_t>(s.face.i));
  add(static_cast<std::uint64_t>(s.face.j));
  add(q(s.iso.Q.a));
  add(q(s.iso.Q.b));
  add(q(s.iso.Q.c));
  add(q(s.iso.Q.d));
  add(q(s.iso.t.x));
  add(q(s.iso.t.y));
  return h;
}

// Rank-2 lattice test with dense-set detection: Gauss-reduce a candidate
// basis, then absorb the worst non-member residual and repeat.  A basis that
// keeps shrinking signals a non-discrete translation set.
bool lattice_from_translations(std::vector<Vec2> vs, double scale, Vec2& u_out, Vec2& v_out) {
  const double min_len = 1e-7 * scale;
  const double member_tol = 1e-6 * scale;
  for (int round = 0; round < 64; ++round) {
    if (vs.size() < 2) return false;
    std::sort(vs.begin(), vs.end(),
              [](const Vec2& a, const Vec2& b) { return norm2(a) < norm2(b); });
    Vec2 u1 = vs.front();
    if (norm(u1) < min_len) return false;
    Vec2 u2;
    bool found = false;
    for (const Vec2& v : vs) {
      if (std::abs(cross(u1, v)) > 1e-10 * scale * scale) {
        u2 = v;
        found = true;
        break;
      }
    }
    if (!found) return false;  // rank 1 within the horizon
    // Lagrange--Gauss reduction
    for (int it = 0; it < 64; ++it) {
      if (norm2(u2) < norm2(u1)) std::swap(u1, u2);
      double m = std::round(dot(u2, u1) / norm2(u1));
      if (m == 0.0) break;
      u2 = u2 - m * u1;
    }
    if (norm(u1) < min_len || norm(u2) < min_len) return false;
    double det = cross(u1, u2);
    bool all_members = true;
    Vec2 offender;
    for (const Vec2& v : vs) {
      double x = cross(v, u2) / det;
      double y = cross(u1, v) / det;
      Vec2 r = v - std::round(x) * u1 - std::round(y) * u2;
      if (norm(r) > member_tol) {
        offender = r;
        all_members = false;
        break;
      }
    }
    if (all_members) {
      u_out = u1;
      v_out = u2;
      return true;
    }
    vs.push_back(offender);
  }
  return false;
}

}  // namespace

FoldScanReport fold_group_scan(const Tiling& t, int radius, std::size_t node_budget) {
  if (radius < 1) throw PathError("scan radius must be at least 1");
  FoldScanReport rep;
  rep.radius = radius;
  const double scale = std::max(norm(t.lattice_u()), norm(t.lattice_v()));
  const double qt = 1e-9 * std::max(1.0, scale);

  std::vector<Mat2> orth;
  std::vector<Vec2> kernel;
  auto note_isometry = [&](const FoldIsometry& iso) {
    bool fresh = true;
    for (const Mat2& m : orth)
      if (frobenius_dist(m, iso.Q) < 1e-9) {
        fresh = false;
        break;
      }
    if (fresh) orth.push_back(iso.Q);
    if (frobenius_dist(iso.Q, Mat2::identity()) < 1e-9 && norm(iso.t) > qt) {
      bool dup = false;
      for (const Vec2& v : kernel)
        if (dist(v, iso.t) < 1e-9 * std::max(1.0, scale)) {
          dup = true;
          break;
        }
      if (!dup) kernel.push_back(iso.t);
    }
  };

  std::unordered_set<std::uint64_t> seen;
  std::deque<ScanState> frontier;
  ScanState root{{0, 0, 0}, FoldIsometry{}};
  seen.insert(state_key(root, qt));
  note_isometry(root.iso);
  frontier.push_back(root);
  rep.states_explored = 1;

  for (int depth = 0; depth < radius && !frontier.empty(); ++depth) {
    std::deque<ScanState> next;
    for (const ScanState& s : frontier) {
      const auto& poly = t.face_polygon(s.face.f);
      const int n = static_cast<int>(poly.size());
      for (int e = 0; e < n; ++e) {
        const EdgeAdjacency& ad = t.adjacency(s.face.f, e);
        if (ad.open()) continue;
        Vec2 off = t.cell_offset(s.face);
        Vec2 a = poly[e] + off;
        Vec2 b = poly[(e + 1) % n] + off;
        ScanState ns;
        ns.iso = compose(s.iso, reflection_across_line(a, b - a));
        ns.face = {s.face.i + ad.di, s.face.j + ad.dj, ad.face};
        if (!seen.insert(state_key(ns, qt)).second) continue;
        note_isometry(ns.iso);
        ++rep.states_explored;
        if (rep.states_explored >= node_budget) {
          rep.budget_exceeded = true;
          break;
        }
        next.push_back(ns);
      }
      if (rep.budget_exceeded) break;
    }
    if (rep.budget_exceeded) break;
    frontier = std::move(next);
  }

  rep.orthogonal_parts = orth;
  rep.kernel_translations = kernel;

  // C1: finitely many orthogonal parts, closed under composition.
  const std::size_t kGroupCap = 256;
  bool closed = orth.size() <= kGroupCap;
  for (std::size_t i = 0; i < orth.size() && closed; ++i) {
    for (std::size_t j = 0; j < orth.size() && closed; ++j) {
      Mat2 prod = orth[i] * orth[j];
      bool member = false;
      for (const Mat2& m : orth)
        if (frobenius_dist(m, prod) < 1e-7) {
          member = true;
          break;
        }
      closed = member;
    }
  }
  rep.c1 = closed;

  rep.c2 = lattice_from_translations(kernel, std::max(1.0, scale), rep.lattice_u,
                                     rep.lattice_v);
  return rep;
}

namespace {

bool nearly_rational(double x, long max_den, double tol) {
  if (std::abs(x - std::round(x)) <= tol) return true;
  // continued-fraction convergents p/q until the denominator bound
  long p0 = 1, q0 = 0;
  long p1 = static_cast<long>(std::floor(x)), q1 = 1;
  double frac = x - std::floor(x);
  for (int it = 0; it < 64; ++it) {
    if (frac < 1e-15) break;
    double a = 1.0 / frac;
    double ai_f = std::floor(a);
    if (ai_f > 4e18) break;
    long ai = static_cast<long>(ai_f);
    frac = a - ai_f;
    long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den || q2 <= 0) break;
    if (std::abs(x - static_cast<double>(p2) / q2) <= tol) return true;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
  }
  return false;
}

}  // namespace

bool check_foldability(double alpha, double a, double b) {
  static const double admissible[] = {kPi / 12, 5 * kPi / 12, kPi / 6, kPi / 3,
                                      kPi / 8,  3 * kPi / 8,  kPi / 4};
  bool listed = false;
  for (double ang : admissible)
    if (std::abs(alpha - ang) <= 1e-12) listed = true;
  if (!listed) return false;

  // rotation by 4*alpha in the (a_vec, b_vec) basis
  double c = std::cos(4.0 * alpha), s = std::sin(4.0 * alpha);
  Mat2 R{c, -s, s, c};
  Mat2 B{a, b * std::cos(alpha), 0.0, b * std::sin(alpha)};
  double det = B.det();
  Mat2 Binv{B.d / det, -B.b / det, -B.c / det, B.a / det};
  Mat2 M = Binv * (R * B);
  const long max_den = 1000000;
  const double tol = 1e-9;
  return nearly_rational(M.a, max_den, tol) && nearly_rational(M.b, max_den, tol) &&
         nearly_rational(M.c, max_den, tol) && nearly_rational(M.d, max_den, tol);
}

double local_defect(const Tiling& t, const FaceRef& at, int corner) {
  std::vector<double> angles;
  std::int64_t ri = 0, rj = 0;  // displacement relative to the start cell
  int f = at.f, c = corner;
  const int cap = 128;
  for (int it = 0; it < cap; ++it) {
    angles.push_back(t.corner_angle(f, c));
    const EdgeAdjacency& ad = t.adjacency(f, c);  // corner's outgoing edge
    if (ad.open()) throw GeometryError("vertex touches an open edge");
    ri += ad.di;
    rj += ad.dj;
    f = ad.face;
    c = (ad.edge + 1) % static_cast<int>(t.face_polygon(f).size());
    if (ri == 0 && rj == 0 && f == at.f && c == corner) break;
    if (it + 1 == cap) throw GeometryError("vertex walk did not close");
  }
  if (angles.size() % 2 != 0)
    throw NotAlternatingError("odd valence: alternating angle sum is undefined");
  double defect = 0.0;
  for (std::size_t k = 0; k < angles.size(); ++k)
    defect += (k % 2 == 0 ? 1.0 : -1.0) * angles[k];
  return defect;
}

}  // namespace carom
