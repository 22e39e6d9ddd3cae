#include "carom/tiling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>
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

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
}

double polygon_area2(const std::vector<Vec2>& p) {
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2& u = p[i];
    const Vec2& v = p[(i + 1) % p.size()];
    a += cross(u, v);
  }
  return a;
}

}  // namespace

// ---------------------------------------------------------------------------
// construction

void Tiling::finalize() {
  if (kind_ == TilingKind::WindTree) {
    scale_ = 1.0;
    coloring_ = TwoColoring{{0, 1}, 0, 0};  // obstacles vs. complement
    return;
  }
  scale_ = 0.0;
  for (const auto& poly : faces_) {
    if (poly.size() < 3) throw GeometryError("tiling face needs at least 3 vertices");
    if (polygon_area2(poly) <= 0.0)
      throw GeometryError("tiling faces must be listed counterclockwise");
    for (std::size_t i = 0; i < poly.size(); ++i)
      for (std::size_t j = i + 1; j < poly.size(); ++j)
        scale_ = std::max(scale_, dist(poly[i], poly[j]));
  }
  if (std::abs(cross(u_, v_)) < 1e-12 * scale_ * scale_)
    throw GeometryError("lattice vectors are collinear");

  const double tol = 1e-9 * scale_;
  adj_.assign(faces_.size(), {});
  for (std::size_t f = 0; f < faces_.size(); ++f)
    adj_[f].assign(faces_[f].size(), EdgeAdjacency{});

  for (std::size_t f = 0; f < faces_.size(); ++f) {
    const auto& poly = faces_[f];
    const std::size_t n = poly.size();
    for (std::size_t e = 0; e < n; ++e) {
      Vec2 a = poly[e], b = poly[(e + 1) % n];
      bool found = false;
      for (std::size_t f2 = 0; f2 < faces_.size() && !found; ++f2) {
        const auto& q = faces_[f2];
        const std::size_t n2 = q.size();
        for (std::size_t e2 = 0; e2 < n2 && !found; ++e2) {
          for (int di = -1; di <= 1 && !found; ++di) {
            for (int dj = -1; dj <= 1 && !found; ++dj) {
              if (f2 == f && e2 == e && di == 0 && dj == 0) continue;
              Vec2 shift{di * u_.x + dj * v_.x, di * u_.y + dj * v_.y};
              Vec2 a2 = q[e2] + shift, b2 = q[(e2 + 1) % n2] + shift;
              if (dist(a, b2) < tol && dist(b, a2) < tol) {
                adj_[f][e] = {static_cast<int>(f2), static_cast<int>(e2), di, dj};
                found = true;
              }
            }
          }
        }
      }
      if (!found && kind_ != TilingKind::Custom)
        throw GeometryError("generated tiling has an unmatched edge");
    }
  }

  // 2-coloring: unknowns are one bit per face plus the lattice parities x, y.
  // Every adjacency demands  b_f + b_f' + x*di + y*dj = 1  over GF(2).
  const std::size_t nf = faces_.size();
  coloring_.reset();
  if (nf + 2 <= 62) {
    std::vector<std::pair<std::uint64_t, int>> rows;
    for (std::size_t f = 0; f < nf; ++f) {
      for (std::size_t e = 0; e < faces_[f].size(); ++e) {
        const EdgeAdjacency& ad = adj_[f][e];
        if (ad.open()) continue;
        std::uint64_t mask = 0;
        mask ^= 1ull << f;
        mask ^= 1ull << ad.face;
        if (ad.di & 1) mask ^= 1ull << nf;
        if (ad.dj & 1) mask ^= 1ull << (nf + 1);
        rows.push_back({mask, 1});
      }
    }
    std::vector<std::pair<std::uint64_t, int>> pivots;  // reduced rows
    bool consistent = true;
    for (auto [mask, rhs] : rows) {
      for (const auto& [pm, pr] : pivots) {
        std::uint64_t lead = pm & ~(pm - 1);  // lowest set bit of the pivot row
        if (mask & lead) {
          mask ^= pm;
          rhs ^= pr;
        }
      }
      if (mask == 0) {
        if (rhs == 1) {
          consistent = false;
          break;
        }
        continue;
      }
      pivots.push_back({mask, rhs});
      std::sort(pivots.begin(), pivots.end(),
                [](const auto& l, const auto& r) {
                  return (l.first & ~(l.first - 1)) < (r.first & ~(r.first - 1));
                });
    }
    if (consistent) {
      std::uint64_t solution = 0;
      // back-substitute from the highest pivot down; free unknowns stay 0
      for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
        std::uint64_t lead = it->first & ~(it->first - 1);
        int val = it->second ^ (__builtin_popcountll(it->first & solution & ~lead) & 1);
        if (val) solution |= lead;
      }
      TwoColoring col;
      col.base.resize(nf);
      for (std::size_t f = 0; f < nf; ++f) col.base[f] = (solution >> f) & 1;
      col.x = (solution >> nf) & 1;
      col.y = (solution >> (nf + 1)) & 1;
      coloring_ = col;
    }
  }
}

std::vector<Vec2> Tiling::polygon(const FaceRef& r) const {
  if (kind_ == TilingKind::WindTree) {
    if (r.f != 1) throw GeometryError("the wind-tree complement is unbounded");
    Vec2 c = cell_offset(r);
    double hx = 0.5 * tree_a_, hy = 0.5 * tree_b_;
    return {c + Vec2{-hx, -hy}, c + Vec2{hx, -hy}, c + Vec2{hx, hy}, c + Vec2{-hx, hy}};
  }
  std::vector<Vec2> out = faces_[r.f];
  Vec2 off = cell_offset(r);
  for (auto& p : out) p = p + off;
  return out;
}

double Tiling::corner_angle(int f, int c) const {
  const auto& poly = faces_[f];
  const int n = static_cast<int>(poly.size());
  Vec2 prev = poly[(c + n - 1) % n] - poly[c];
  Vec2 next = poly[(c + 1) % n] - poly[c];
  double d = dot(normalized(prev), normalized(next));
  return std::acos(std::fmax(-1.0, std::fmin(1.0, d)));
}

Tiling Tiling::triangle_central_symmetry(double alpha, double beta) {
  double gamma = kPi - alpha - beta;
  if (!(alpha > 0.0) || !(beta > 0.0) || !(gamma > 0.0))
    throw GeometryError("triangle angles must be positive and sum below pi");
  Vec2 A{0.0, 0.0}, B{1.0, 0.0};
  double ac = std::sin(beta) / std::sin(gamma);
  Vec2 C{ac * std::cos(alpha), ac * std::sin(alpha)};
  Tiling t;
  t.kind_ = TilingKind::TriangleCentral;
  t.faces_ = {{A, B, C}, {B, B + C, C}};
  t.u_ = B;
  t.v_ = C;
  t.finalize();
  return t;
}

Tiling Tiling::parallelogram(double a, double b, double alpha) {
  if (!(a > 0.0) || !(b > 0.0) || !(alpha > 0.0) || !(alpha < kPi))
    throw GeometryError("need a, b > 0 and 0 < alpha < pi");
  Vec2 av{a, 0.0};
  Vec2 bv{b * std::cos(alpha), b * std::sin(alpha)};
  Tiling t;
  t.kind_ = TilingKind::Parallelogram;
  t.faces_ = {{Vec2{0.0, 0.0}, av, av + bv, bv}};
  t.u_ = av;
  t.v_ = bv;
  t.finalize();
  return t;
}

Tiling Tiling::brick(double theta) {
  if (!(theta > 0.0) || !(theta < 1.0)) throw GeometryError("need 0 < theta < 1");
  double th = theta;
  Tiling t;
  t.kind_ = TilingKind::Brick;
  // Both rows as hexagons: the T-junction points where the neighbouring row's
  // verticals abut are genuine tiling vertices, so they must be face vertices
  // (with straight angles) for the edge matching to be one-to-one.
  t.faces_ = {
      {Vec2{0.0, 0.0}, Vec2{th, 0.0}, Vec2{1.0, 0.0}, Vec2{1.0, 1.0}, Vec2{th, 1.0},
       Vec2{0.0, 1.0}},
      {Vec2{th, 1.0}, Vec2{1.0, 1.0}, Vec2{1.0 + th, 1.0}, Vec2{1.0 + th, 2.0},
       Vec2{1.0, 2.0}, Vec2{th, 2.0}},
  };
  t.u_ = {1.0, 0.0};
  t.v_ = {0.0, 2.0};
  t.finalize();
  return t;
}

Tiling Tiling::wind_tree(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !(a < 1.0) || !(b < 1.0))
    throw GeometryError("obstacles must satisfy 0 < a, b < 1 on the unit lattice");
  Tiling t;
  t.kind_ = TilingKind::WindTree;
  t.u_ = {1.0, 0.0};
  t.v_ = {0.0, 1.0};
  t.tree_a_ = a;
  t.tree_b_ = b;
  t.finalize();
  return t;
}

Tiling Tiling::custom(std::vector<std::vector<Vec2>> faces, Vec2 u, Vec2 v) {
  Tiling t;
  t.kind_ = TilingKind::Custom;
  t.faces_ = std::move(faces);
  t.u_ = u;
  t.v_ = v;
  t.finalize();
  return t;
}

// ---------------------------------------------------------------------------
// refraction step

namespace {

Vec2 refract_across(const Vec2& d, const Vec2& edge_dir) {
  Vec2 e = normalized(edge_dir);
  Vec2 out = d - 2.0 * dot(d, e) * e;
  return normalized(out);
}

RefractState wind_tree_step(const Tiling& t, const RefractState& st) {
  const double hx = 0.5 * t.tree_a(), hy = 0.5 * t.tree_b();
  const double vtol = 1e-10 * std::min(t.tree_a(), t.tree_b());
  Vec2 p = st.point;
  Vec2 d = normalized(st.dir);

  auto corner_hit = [&](const Vec2& q) {
    return (std::abs(std::abs(q.x) - hx) < vtol && std::abs(std::abs(q.y) - hy) < vtol);
  };

  if (st.face.f == 1) {
    // Inside the obstacle at the anchor cell: leave through one of 4 sides.
    double best = std::numeric_limits<double>::infinity();
    bool vertical = false;
    if (d.x > 0.0) {
      double tt = (hx - p.x) / d.x;
      if (tt > 1e-14 && tt < best) best = tt, vertical = true;
    }
    if (d.x < 0.0) {
      double tt = (-hx - p.x) / d.x;
      if (tt > 1e-14 && tt < best) best = tt, vertical = true;
    }
    if (d.y > 0.0) {
      double tt = (hy - p.y) / d.y;
      if (tt > 1e-14 && tt < best) best = tt, vertical = false;
    }
    if (d.y < 0.0) {
      double tt = (-hy - p.y) / d.y;
      if (tt > 1e-14 && tt < best) best = tt, vertical = false;
    }
    if (!std::isfinite(best)) throw GeometryError("direction does not leave the obstacle");
    Vec2 q = p + best * d;
    q.x = std::fmax(-hx, std::fmin(hx, q.x));
    q.y = std::fmax(-hy, std::fmin(hy, q.y));
    if (vertical)
      q.x = d.x > 0.0 ? hx : -hx;
    else
      q.y = d.y > 0.0 ? hy : -hy;
    if (corner_hit(q)) throw VertexHitError("trajectory meets an obstacle corner");
    Vec2 nd = vertical ? Vec2{d.x, -d.y} : Vec2{-d.x, d.y};
    return {{st.face.i, st.face.j, 0}, q, nd};
  }

  // In the complement: march the dual cells (one lattice point each, walls at
  // half-integer offsets) until the ray meets an obstacle.  Coordinates stay
  // relative to the current cell to avoid precision loss far from the origin.
  std::int64_t I = st.face.i, J = st.face.j;
  const long cap = 4000000;
  for (long iter = 0; iter < cap; ++iter) {
    // entry parameter into the obstacle slab [-hx,hx] x [-hy,hy]
    double t_in = 0.0, t_out = std::numeric_limits<double>::infinity();
    bool vertical = false;
    bool miss = false;
    if (d.x != 0.0) {
      double t1 = (-hx - p.x) / d.x, t2 = (hx - p.x) / d.x;
      if (t1 > t2) std::swap(t1, t2);
      if (t1 > t_in) t_in = t1, vertical = true;
      t_out = std::min(t_out, t2);
    } else if (std::abs(p.x) > hx) {
      miss = true;
    }
    if (!miss && d.y != 0.0) {
      double t1 = (-hy - p.y) / d.y, t2 = (hy - p.y) / d.y;
      if (t1 > t2) std::swap(t1, t2);
      if (t1 > t_in) t_in = t1, vertical = false;
      t_out = std::min(t_out, t2);
    } else if (!miss && std::abs(p.y) > hy) {
      miss = true;
    }
    if (!miss && t_in > 1e-12 && t_in <= t_out) {
      Vec2 q = p + t_in * d;
      if (corner_hit(q)) throw VertexHitError("trajectory meets an obstacle corner");
      Vec2 nd = vertical ? Vec2{d.x, -d.y} : Vec2{-d.x, d.y};
      return {{I, J, 1}, q, nd};
    }
    // advance to the next dual-cell wall and re-anchor
    double tx = std::numeric_limits<double>::infinity();
    double ty = std::numeric_limits<double>::infinity();
    if (d.x > 0.0) tx = (0.5 - p.x) / d.x;
    if (d.x < 0.0) tx = (-0.5 - p.x) / d.x;
    if (d.y > 0.0) ty = (0.5 - p.y) / d.y;
    if (d.y < 0.0) ty = (-0.5 - p.y) / d.y;
    double tc = std::min(tx, ty);
    if (!std::isfinite(tc)) throw WindowExhaustedError("ray is stationary");
    p = p + tc * d;
    if (tx <= ty) {
      I += d.x > 0.0 ? 1 : -1;
      p.x -= d.x > 0.0 ? 1.0 : -1.0;
    }
    if (ty <= tx) {
      J += d.y > 0.0 ? 1 : -1;
      p.y -= d.y > 0.0 ? 1.0 : -1.0;
    }
  }
  throw WindowExhaustedError("ray crossed the search budget without meeting an obstacle");
}

}  // namespace

RefractState refract_step(const Tiling& t, const RefractState& st) {
  if (t.kind() == TilingKind::WindTree) return wind_tree_step(t, st);
  if (st.face.f < 0 || st.face.f >= t.face_count())
    throw GeometryError("face index out of range");
  const auto& poly = t.face_polygon(st.face.f);
  const int n = static_cast<int>(poly.size());
  Vec2 d = normalized(st.dir);

  int exit_e = -1;
  double exit_t = std::numeric_limits<double>::infinity();
  Vec2 hit;
  for (int e = 0; e < n; ++e) {
    Vec2 a = poly[e], b = poly[(e + 1) % n];
    Vec2 ed = b - a;
    Vec2 outward{ed.y, -ed.x};
    double den = dot(d, outward);
    if (den <= 1e-15 * norm(ed)) continue;  // parallel or moving inward
    double tt = dot(a - st.point, outward) / den;
    if (tt < 0.0) continue;
    Vec2 h = st.point + tt * d;
    double len2 = norm2(ed);
    double uu = dot(h - a, ed) / len2;
    if (uu < -1e-9 || uu > 1.0 + 1e-9) continue;
    if (tt < exit_t) {
      exit_t = tt;
      exit_e = e;
      hit = h;
    }
  }
  if (exit_e < 0) throw GeometryError("no exit edge found (state outside its face?)");

  {
    Vec2 a = poly[exit_e], b = poly[(exit_e + 1) % n];
    double len = dist(a, b);
    if (dist(hit, a) < 1e-10 * len || dist(hit, b) < 1e-10 * len)
      throw VertexHitError("trajectory passes through a tiling vertex");
  }

  const EdgeAdjacency& ad = t.adjacency(st.face.f, exit_e);
  if (ad.open()) throw WindowExhaustedError("crossed an open edge of the tiling window");

  Vec2 edge_dir = poly[(exit_e + 1) % n] - poly[exit_e];
  Vec2 nd = refract_across(d, edge_dir);

  FaceRef nf{st.face.i + ad.di, st.face.j + ad.dj, ad.face};
  Vec2 local = hit - Vec2{ad.di * t.lattice_u().x + ad.dj * t.lattice_v().x,
                          ad.di * t.lattice_u().y + ad.dj * t.lattice_v().y};
  // snap onto the matched edge line of the new face to stop transversal drift
  const auto& poly2 = t.face_polygon(ad.face);
  Vec2 a2 = poly2[ad.edge];
  Vec2 e2 = normalized(poly2[(ad.edge + 1) % poly2.size()] - a2);
  local = a2 + dot(local - a2, e2) * e2;
  return {nf, local, nd};
}

// ---------------------------------------------------------------------------
// simulation and classification

const char* to_string(TrajectoryClass c) {
  switch (c) {
    case TrajectoryClass::Periodic: return "periodic";
    case TrajectoryClass::LinearEscape: return "linear-escape";
    case TrajectoryClass::BandTrapped: return "band-trapped";
    case TrajectoryClass::SelfIntersecting: return "self-intersecting";
    case TrajectoryClass::VertexHit: return "vertex-hit";
    case TrajectoryClass::BudgetExhausted: return "budget-exhausted";
  }
  return "unknown";
}

namespace {

struct StateKey {
  std::uint64_t h;
  bool operator==(const StateKey& o) const { return h == o.h; }
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const { return k.h; }
};

StateKey quantize_state(const RefractState& s, double tol) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(s.face.f));
  auto q = [tol](double x) {
    return static_cast<std::uint64_t>(static_cast<std::int64_t>(std::llround(x / tol)));
  };
  h = hash_combine(h, q(s.point.x));
  h = hash_combine(h, q(s.point.y));
  h = hash_combine(h, q(s.dir.x));
  h = hash_combine(h, q(s.dir.y));
  return {h};
}

struct SeenEntry {
  long step;
  std::int64_t i, j;
  int f;
  Vec2 point, dir;
};

bool states_close(const RefractState& a, const SeenEntry& b, double tol) {
  return std::abs(a.point.x - b.point.x) <= tol && std::abs(a.point.y - b.point.y) <= tol &&
         std::abs(a.dir.x - b.dir.x) <= tol && std::abs(a.dir.y - b.dir.y) <= tol;
}

// Spatial hash over trajectory segments in global coordinates; reports the
// first earlier segment crossed transversally.
class SegmentGrid {
 public:
  explicit SegmentGrid(double cell) : cell_(std::fmax(cell, 1e-9)) {}

  long check(const Vec2& a, const Vec2& b, long index) const {
    long found = -1;
    visit_cells(a, b, [&](std::uint64_t key) {
      auto it = grid_.find(key);
      if (it == grid_.end()) return;
      for (long idx : it->second) {
        if (idx >= index - 1) continue;  // consecutive segments share a point
        if (found >= 0 && idx >= found) continue;
        const auto& s = segs_[static_cast<std::size_t>(idx)];
        if (proper_cross(s[0], s[1], a, b)) found = found < 0 ? idx : std::min(found, idx);
      }
    });
    return found;
  }

  void insert(const Vec2& a, const Vec2& b, long index) {
    segs_.push_back({a, b});  // indices are consecutive from 0 by construction
    visit_cells(a, b, [&](std::uint64_t key) { grid_[key].push_back(index); });
  }

 private:
  static bool proper_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    double d1 = cross(b - a, c - a);
    double d2 = cross(b - a, d - a);
    double d3 = cross(d - c, a - c);
    double d4 = cross(d - c, b - c);
    return ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) &&
           ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0));
  }

  template <typename F>
  void visit_cells(const Vec2& a, const Vec2& b, F&& f) const {
    double x0 = std::fmin(a.x, b.x), x1 = std::fmax(a.x, b.x);
    double y0 = std::fmin(a.y, b.y), y1 = std::fmax(a.y, b.y);
    auto cx0 = static_cast<std::int64_t>(std::floor(x0 / cell_));
    auto cx1 = static_cast<std::int64_t>(std::floor(x1 / cell_));
    auto cy0 = static_cast<std::int64_t>(std::floor(y0 / cell_));
    auto cy1 = static_cast<std::int64_t>(std::floor(y1 / cell_));
    for (std::int64_t cx = cx0; cx <= cx1; ++cx)
      for (std::int64_t cy = cy0; cy <= cy1; ++cy)
        f(hash_combine(mix64(static_cast<std::uint64_t>(cx)),
                       static_cast<std::uint64_t>(cy)));
  }

  double cell_;
  std::unordered_map<std::uint64_t, std::vector<long>> grid_;
  std::vector<std::array<Vec2, 2>> segs_;
};

std::uint64_t face_key(const FaceRef& r) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(r.f));
  h = hash_combine(h, static_cast<std::uint64_t>(r.i));
  h = hash_combine(h, static_cast<std::uint64_t>(r.j));
  return h;
}

// Re-run one full cycle from `from` and require the same displacement and a
// matching final state; guards the recurrence verdict against hash luck.
bool confirm_cycle(const Tiling& t, const RefractState& from, long period, double tol,
                   std::int64_t want_di, std::int64_t want_dj) {
  RefractState cur = from;
  for (long k = 0; k < period; ++k) {
    try {
      cur = refract_step(t, cur);
    } catch (const Error&) {
      return false;
    }
  }
  if (cur.face.f != from.face.f) return false;
  if (cur.face.i - from.face.i != want_di || cur.face.j - from.face.j != want_dj) return false;
  SeenEntry e{0, from.face.i, from.face.j, from.face.f, from.point, from.dir};
  return states_close(cur, e, tol);
}

}  // namespace

TilingTrajectory simulate(const Tiling& t, const RefractState& start,
                          const SimulateOptions& opt) {
  TilingTrajectory out;
  RefractState cur = start;
  cur.dir = normalized(cur.dir);

  std::unordered_map<StateKey, SeenEntry, StateKeyHash> seen;
  std::unordered_set<std::uint64_t> visited_faces;
  const bool track_faces = opt.track_face_visits && t.kind() != TilingKind::WindTree;
  SegmentGrid grid(2.0 * t.scale());

  auto record = [&](const RefractState& s) {
    if (out.steps.size() < opt.record_limit) out.steps.push_back(s);
  };

  // The start state sits mid-face rather than on an edge, so it is not an
  // entry event; counting it would flag the closing step of a simple loop as
  // a revisit.
  record(cur);
  std::int64_t imin = cur.face.i, imax = cur.face.i;
  std::int64_t jmin = cur.face.j, jmax = cur.face.j;

  bool classified = false;
  long k = 0;
  while (k < opt.max_steps && !classified) {
    RefractState nxt;
    try {
      nxt = refract_step(t, cur);
    } catch (const VertexHitError&) {
      out.classification = TrajectoryClass::VertexHit;
      classified = true;
      break;
    } catch (const WindowExhaustedError&) {
      out.classification = TrajectoryClass::BudgetExhausted;
      classified = true;
      break;
    }
    ++k;

    StateKey key = quantize_state(nxt, opt.tolerance);
    auto it = seen.find(key);
    if (it != seen.end() && nxt.face.f == it->second.f &&
        states_close(nxt, it->second, opt.tolerance)) {
      long period = k - it->second.step;
      std::int64_t di = nxt.face.i - it->second.i;
      std::int64_t dj = nxt.face.j - it->second.j;
      if (confirm_cycle(t, nxt, period, 10.0 * opt.tolerance, di, dj)) {
        out.period = period;
        out.drift_i = di;
        out.drift_j = dj;
        if (di == 0 && dj == 0) {
          out.classification = TrajectoryClass::Periodic;
        } else {
          out.classification = TrajectoryClass::LinearEscape;
          Vec2 u = t.lattice_u(), v = t.lattice_v();
          out.escape_vector = {di * u.x + dj * v.x, di * u.y + dj * v.y};
        }
        classified = true;
        out.step_count = k;
        record(nxt);
        break;
      }
    }
    if (it == seen.end())
      seen.emplace(key, SeenEntry{k, nxt.face.i, nxt.face.j, nxt.face.f, nxt.point, nxt.dir});

    if (track_faces && !visited_faces.insert(face_key(nxt.face)).second &&
        out.face_revisit_step < 0)
      out.face_revisit_step = k;

    if (opt.detect_self_intersections) {
      Vec2 g0 = cur.point + t.cell_offset(cur.face);
      Vec2 g1 = nxt.point + t.cell_offset(nxt.face);
      long hit = grid.check(g0, g1, k - 1);
      if (hit >= 0) {
        out.classification = TrajectoryClass::SelfIntersecting;
        out.cross_a = hit;
        out.cross_b = k - 1;
        classified = true;
        out.step_count = k;
        record(nxt);
        break;
      }
      grid.insert(g0, g1, k - 1);
    }

    imin = std::min(imin, nxt.face.i);
    imax = std::max(imax, nxt.face.i);
    jmin = std::min(jmin, nxt.face.j);
    jmax = std::max(jmax, nxt.face.j);
    record(nxt);
    cur = nxt;
  }

  if (!classified) {
    out.step_count = k;
    std::int64_t ri = imax - imin, rj = jmax - jmin;
    const std::int64_t w = opt.band_window;
    if ((ri <= w && rj >= 4 * w) || (rj <= w && ri >= 4 * w))
      out.classification = TrajectoryClass::BandTrapped;
    else
      out.classification = TrajectoryClass::BudgetExhausted;
  } else if (out.step_count == 0) {
    out.step_count = k;
  }
  return out;
}

}  // namespace carom
