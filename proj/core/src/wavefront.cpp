#include "carom/wavefront.hpp"

#include <algorithm>
#include <cmath>

#include "carom/errors.hpp"
#include "carom/phase.hpp"

namespace carom {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct RayPath {
  std::vector<Vec2> pts;    // source, then each bounce, last entry past t_max
  std::vector<double> cum;  // path length at pts[i]
  bool dropped = false;
};

RayPath trace_ray(const BoundaryCurve& table, const Vec2& source, const Vec2& dir,
                  double t_max) {
  RayPath path;
  path.pts.push_back(source);
  path.cum.push_back(0.0);
  Vec2 pos = source;
  Vec2 d = dir;
  while (path.cum.back() < t_max) {
    BoundaryCurve::Hit hit;
    CurvePoint cp;
    try {
      hit = table.ray_from_interior(pos, d);
      cp = table.eval(hit.s);
    } catch (const Error&) {  // tangential or corner hit: drop the ray
      path.dropped = true;
      break;
    }
    path.pts.push_back(hit.point);
    path.cum.push_back(path.cum.back() + dist(pos, hit.point));
    pos = hit.point;
    d = reflect(d, cp.normal);
  }
  return path;
}

// Position and bounce count at path length t (requires t <= cum.back()).
std::pair<Vec2, int> at_length(const RayPath& path, double t, std::size_t& cursor) {
  while (cursor + 1 < path.cum.size() && path.cum[cursor + 1] < t) ++cursor;
  const std::size_t i = cursor;
  const double seg = path.cum[i + 1] - path.cum[i];
  const double u = seg > 0.0 ? (t - path.cum[i]) / seg : 0.0;
  return {path.pts[i] + u * (path.pts[i + 1] - path.pts[i]), static_cast<int>(i)};
}

}  // namespace

double WaveFront::length() const {
  double total = 0.0;
  for (const FrontPiece& piece : pieces)
    for (std::size_t i = 0; i + 1 < piece.points.size(); ++i)
      total += dist(piece.points[i], piece.points[i + 1]);
  return total;
}

WaveFront wave_front(const BoundaryCurve& table, const Vec2& source, double t, int ray_count) {
  if (!table.contains(source) ) throw DomainError("front source must lie inside the table");
  if (t <= 0.0) throw DomainError("front time must be positive");
  if (ray_count < 8) throw DomainError("need at least 8 rays");

  struct Sample {
    Vec2 point;
    int count = 0;
    bool valid = false;
  };
  std::vector<Sample> fan(ray_count);
  WaveFront front;
  front.t = t;
  for (int k = 0; k < ray_count; ++k) {
    const double a = 2.0 * kPi * k / ray_count;
    RayPath path = trace_ray(table, source, {std::cos(a), std::sin(a)}, t);
    if (path.dropped && path.cum.back() < t) {
      ++front.dropped_rays;
      continue;
    }
    std::size_t cursor = 0;
    auto [pt, bounces] = at_length(path, t, cursor);
    fan[k] = {pt, bounces, true};
  }

  // Split the cyclic fan where rays vanish or the reflection count jumps.
  auto breaks_before = [&](int k) {
    const int prev = (k + ray_count - 1) % ray_count;
    if (!fan[k].valid) return true;
    if (!fan[prev].valid) return true;
    return fan[k].count != fan[prev].count;
  };
  int first_break = -1;
  for (int k = 0; k < ray_count; ++k) {
    if (breaks_before(k)) {
      first_break = k;
      break;
    }
  }

  if (first_break < 0) {  // one smooth closed front
    FrontPiece piece;
    piece.reflections = fan[0].count;
    for (const Sample& s : fan) piece.points.push_back(s.point);
    piece.points.push_back(fan[0].point);
    front.pieces.push_back(std::move(piece));
    return front;
  }

  FrontPiece piece;
  bool open = false;
  for (int step = 0; step < ray_count; ++step) {
    const int k = (first_break + step) % ray_count;
    if (step > 0 && breaks_before(k)) {
      if (open && piece.points.size() >= 2) front.pieces.push_back(piece);
      piece = FrontPiece{};
      open = false;
    }
    if (fan[k].valid) {
      if (!open) {
        piece.reflections = fan[k].count;
        open = true;
      }
      piece.points.push_back(fan[k].point);
    }
  }
  if (open && piece.points.size() >= 2) front.pieces.push_back(piece);
  return front;
}

DensityCurve front_density(const BoundaryCurve& table, const Vec2& source, double T, double eps,
                           int ray_count, int times_per_unit) {
  if (!table.contains(source)) throw DomainError("front source must lie inside the table");
  if (T <= 0.0 || eps <= 0.0) throw DomainError("horizon and grid size must be positive");

  const double x_lo = -table.support(kPi), x_hi = table.support(0.0);
  const double y_lo = -table.support(1.5 * kPi), y_hi = table.support(0.5 * kPi);
  const int nx = std::max(1, static_cast<int>(std::ceil((x_hi - x_lo) / eps)));
  const int ny = std::max(1, static_cast<int>(std::ceil((y_hi - y_lo) / eps)));

  std::vector<char> interior(static_cast<std::size_t>(nx) * ny, 0);
  long interior_count = 0;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const Vec2 c{x_lo + (ix + 0.5) * eps, y_lo + (iy + 0.5) * eps};
      if (table.contains(c)) {
        interior[static_cast<std::size_t>(iy) * nx + ix] = 1;
        ++interior_count;
      }
    }
  }
  if (interior_count == 0) throw DomainError("grid too coarse for the table");

  DensityCurve curve;
  std::vector<RayPath> paths;
  paths.reserve(ray_count);
  for (int k = 0; k < ray_count; ++k) {
    const double a = 2.0 * kPi * k / ray_count;
    RayPath p = trace_ray(table, source, {std::cos(a), std::sin(a)}, T);
    if (p.dropped && p.cum.back() < T) ++curve.dropped_rays;
    paths.push_back(std::move(p));
  }

  std::vector<std::size_t> cursors(paths.size(), 0);
  std::vector<char> marked(interior.size(), 0);
  long covered = 0;
  const long samples = static_cast<long>(std::floor(T * times_per_unit));
  for (long j = 1; j <= samples; ++j) {
    const double t = static_cast<double>(j) / times_per_unit;
    for (std::size_t r = 0; r < paths.size(); ++r) {
      const RayPath& path = paths[r];
      if (path.cum.back() < t) continue;  // dropped early
      auto [pt, bounces] = at_length(path, t, cursors[r]);
      (void)bounces;
      int ix = static_cast<int>(std::floor((pt.x - x_lo) / eps));
      int iy = static_cast<int>(std::floor((pt.y - y_lo) / eps));
      ix = std::clamp(ix, 0, nx - 1);
      iy = std::clamp(iy, 0, ny - 1);
      const std::size_t cell = static_cast<std::size_t>(iy) * nx + ix;
      if (interior[cell] && !marked[cell]) {
        marked[cell] = 1;
        ++covered;
      }
    }
    curve.time.push_back(t);
    curve.covered.push_back(static_cast<double>(covered) / static_cast<double>(interior_count));
  }
  return curve;
}

}  // namespace carom
