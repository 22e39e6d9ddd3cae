#include <cmath>
#include <vector>

#include "carom/curve.hpp"
#include "carom/errors.hpp"
#include "carom/hyperbolic.hpp"
#include "carom/norm.hpp"
#include "carom/phase.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace carom;

namespace {
constexpr double kPi = oracle::kPi;

BoundaryCurve unit_square() {
  return BoundaryCurve::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}
}  // namespace

TEST_CASE("curve evaluation on the unit circle") {
  const BoundaryCurve c = BoundaryCurve::circle(1.0);
  const CurvePoint p0 = c.eval(0.0);
  CHECK(p0.point.x == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p0.point.y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p0.tangent.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p0.tangent.y == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p0.normal.x == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(p0.normal.y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p0.curvature == doctest::Approx(1.0));

  const CurvePoint pq = c.eval(kPi / 2.0);
  CHECK(pq.point.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(pq.point.y == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("polygon corners reject tangent evaluation") {
  const BoundaryCurve sq = unit_square();
  CHECK_THROWS_AS(sq.eval(1.0), VertexParamError);
  CHECK_THROWS_AS(sq.eval(0.0), VertexParamError);
  CHECK_NOTHROW(sq.eval(0.5));
}

TEST_CASE("evaluation is periodic in the parameter") {
  const std::vector<BoundaryCurve> tables = {
      BoundaryCurve::circle(1.3),
      BoundaryCurve::ellipse(2.0, 1.0),
      unit_square(),
      BoundaryCurve::support_oval(1.0, {{0.1, 0.0}, {0.0, 0.05}}),
      BoundaryCurve::stadium(1.0, 0.5),
  };
  oracle::Rng rng(11);
  for (const auto& c : tables) {
    const double L = c.perimeter();
    for (int k = 0; k < 20; ++k) {
      const double s = rng.uniform(0.01, 0.99) * L;
      const Vec2 a = c.point(s);
      const Vec2 b = c.point(s + L);
      CHECK(dist(a, b) <= 1e-12 * std::max(1.0, L));
    }
  }
}

TEST_CASE("ray exit on circle: diameter and inscribed-angle chords") {
  const BoundaryCurve c = BoundaryCurve::circle(1.0);
  const auto hit = c.ray_exit(0.0, {-1.0, 0.0});
  CHECK(hit.s == doctest::Approx(kPi).epsilon(1e-12));

  // Launch at angle pi/4 to the tangent: chord subtends central angle pi/2.
  const CurvePoint p0 = c.eval(0.0);
  const auto hit2 = c.ray_exit(0.0, launch_direction(p0, kPi / 4.0));
  CHECK(hit2.s == doctest::Approx(kPi / 2.0).epsilon(1e-10));
}

TEST_CASE("ray exit retraces when reversed") {
  const std::vector<BoundaryCurve> tables = {
      BoundaryCurve::circle(1.0), BoundaryCurve::ellipse(2.0, 1.0),
      BoundaryCurve::support_oval(1.0, {{0.12, -0.03}, {0.0, 0.04}}),
      BoundaryCurve::stadium(0.8, 0.6)};
  oracle::Rng rng(7);
  for (const auto& c : tables) {
    const double L = c.perimeter();
    for (int k = 0; k < 50; ++k) {
      const double s0 = rng.uniform(0.0, L);
      const double phi = rng.uniform(0.15, kPi - 0.15);
      CurvePoint cp;
      try {
        cp = c.eval(s0);
      } catch (const VertexParamError&) {
        continue;
      }
      const Vec2 d = launch_direction(cp, phi);
      const auto hit = c.ray_exit(s0, d);
      const auto back = c.ray_exit(hit.s, -d);
      CHECK(std::abs(wrap_signed(back.s - s0, L)) <= 1e-9 * L);
    }
  }
}

TEST_CASE("ray exit on the ellipse axis") {
  const BoundaryCurve e = BoundaryCurve::ellipse(2.0, 1.0);
  const auto hit = e.ray_exit(0.0, {-1.0, 0.0});
  CHECK(hit.point.x == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(hit.point.y == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("analytic chord solving agrees with the generic bracketing path") {
  const std::vector<BoundaryCurve> tables = {BoundaryCurve::circle(1.4),
                                             BoundaryCurve::ellipse(2.0, 1.0)};
  oracle::Rng rng(23);
  for (const auto& c : tables) {
    for (int k = 0; k < 40; ++k) {
      const Vec2 p{rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)};
      const Vec2 d = unit_dir(rng.uniform(0.0, 2.0 * kPi));
      const auto fast = c.line_intersections(p, d);
      const auto slow = c.line_intersections_generic(p, d);
      REQUIRE(fast.size() == slow.size());
      for (std::size_t i = 0; i < fast.size(); ++i)
        CHECK(dist(fast[i].point, slow[i].point) <= 1e-9);
    }
  }
}

TEST_CASE("larmor arcs approach straight chords as the radius grows") {
  const BoundaryCurve c = BoundaryCurve::circle(1.0);
  const CurvePoint p0 = c.eval(0.3);
  const Vec2 d = launch_direction(p0, 1.1);
  const auto ray = c.ray_exit(0.3, d);
  double prev_err = 1.0;
  for (double r : {1e2, 1e3, 1e4, 1e5, 1e6}) {
    const auto arc = c.arc_exit(0.3, d, r, +1);
    const double err = std::abs(wrap_signed(arc.s - ray.s, c.perimeter()));
    CHECK(err <= 10.0 / r);
    CHECK(err <= prev_err + 1e-14);
    prev_err = err;
  }
  const auto arc6 = c.arc_exit(0.3, d, 1e6, +1);
  CHECK(std::abs(wrap_signed(arc6.s - ray.s, c.perimeter())) <= 1e-5);
}

TEST_CASE("larmor arc landing matches dense sampling of the arc") {
  // Unit-radius Larmor circle launched along the inward normal from s0 = 0.
  const BoundaryCurve c = BoundaryCurve::circle(1.0);
  const CurvePoint p0 = c.eval(0.0);
  const Vec2 d = p0.normal;
  const auto hit = c.arc_exit(0.0, d, 1.0, +1);

  // Oracle: walk the arc z(psi) = center + rot(psi) (start - center) and
  // bisect the first boundary crossing of the implicit function.
  const Vec2 center = hit.center;
  CHECK(dist(center, p0.point) == doctest::Approx(1.0).epsilon(1e-9));
  auto on_arc = [&](double psi) {
    const Vec2 r0 = p0.point - center;
    const double cs = std::cos(psi), sn = std::sin(psi);
    return Vec2{center.x + cs * r0.x - sn * r0.y, center.y + sn * r0.x + cs * r0.y};
  };
  auto f = [&](double psi) { return c.implicit(on_arc(psi)); };
  const int N = 200000;
  double lo = 1e-6, hi = 0.0;
  double flo = f(lo);
  bool found = false;
  for (int i = 1; i <= N; ++i) {
    const double psi = 1e-6 + (2.0 * kPi - 2e-6) * i / N;
    const double fv = f(psi);
    if (flo < 0.0 && fv >= 0.0) {
      hi = psi;
      found = true;
      break;
    }
    lo = psi;
    flo = fv;
  }
  REQUIRE(found);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  CHECK(dist(on_arc(0.5 * (lo + hi)), hit.point) <= 1e-6);
}

TEST_CASE("tangential arc launches are rejected") {
  const BoundaryCurve c = BoundaryCurve::circle(1.0);
  const CurvePoint p0 = c.eval(0.0);
  CHECK_THROWS_AS(c.arc_exit(0.0, p0.tangent, 0.2, +1), TangentialRayError);
}

TEST_CASE("klein distance closed forms") {
  CHECK(klein_distance({0.0, 0.0}, {0.5, 0.0}) ==
        doctest::Approx(std::atanh(0.5)).epsilon(1e-12));
  CHECK(klein_distance({0.2, 0.1}, {0.2, 0.1}) == doctest::Approx(0.0));
  oracle::Rng rng(3);
  for (int k = 0; k < 100; ++k) {
    const Vec2 a{rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6)};
    const Vec2 b{rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6)};
    const double dab = klein_distance(a, b);
    CHECK(dab == doctest::Approx(oracle::klein_distance_closed_form(a, b)).epsilon(1e-10));
    CHECK(dab == doctest::Approx(klein_distance(b, a)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(klein_distance({1.0, 0.0}, {0.0, 0.0}), ModelError);
  CHECK_THROWS_AS(klein_distance({0.0, 0.0}, {1.2, 0.0}), ModelError);
}

TEST_CASE("hyperbolic table chord lengths") {
  const HyperbolicTable table(BoundaryCurve::circle(0.5));
  const double L = table.curve().perimeter();
  // Antipodal boundary points: hyperbolic diameter 2 artanh(0.5).
  CHECK(table.chord_length(0.0, L / 2.0) ==
        doctest::Approx(2.0 * std::atanh(0.5)).epsilon(1e-10));
  CHECK(table.chord_length(0.3, 1.1) ==
        doctest::Approx(table.chord_length(1.1, 0.3)).epsilon(1e-15));
}

TEST_CASE("minkowski norm homogeneity and convexity") {
  const std::vector<MinkowskiNorm> norms = {
      MinkowskiNorm::euclidean(), MinkowskiNorm::scaled(2.0), MinkowskiNorm::p_gauge(4.0),
      MinkowskiNorm::radial_gauge(1.0, {{0.15, -0.1}, {0.0, 0.05}})};
  oracle::Rng rng(5);
  for (const auto& N : norms) {
    for (int k = 0; k < 1000; ++k) {
      const Vec2 v{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
      if (norm(v) < 1e-6) continue;
      CHECK(N(v * 2.0) == doctest::Approx(2.0 * N(v)).epsilon(1e-12));
      CHECK(N(v * 0.5) == doctest::Approx(0.5 * N(v)).epsilon(1e-12));
      CHECK(N(v) > 0.0);
    }
    // Midpoint strict convexity on the unit sphere of N.
    for (int k = 0; k < 200; ++k) {
      Vec2 u = unit_dir(rng.uniform(0.0, 2.0 * kPi));
      Vec2 w = unit_dir(rng.uniform(0.0, 2.0 * kPi));
      if (std::abs(cross(u, w)) < 1e-3) continue;
      u = u / N(u);
      w = w / N(w);
      CHECK(N((u + w) * 0.5) < 0.5 * (N(u) + N(w)) + 1e-12);
    }
  }
  const MinkowskiNorm asym = MinkowskiNorm::radial_gauge(1.0, {{0.15, -0.1}});
  CHECK_FALSE(asym.is_symmetric());
  CHECK(MinkowskiNorm::euclidean().is_symmetric());
}

TEST_CASE("support function and projection round trips") {
  const BoundaryCurve e = BoundaryCurve::ellipse(2.0, 1.0);
  oracle::Rng rng(9);
  for (int k = 0; k < 50; ++k) {
    const double s = rng.uniform(0.0, e.perimeter());
    CHECK(std::abs(wrap_signed(e.project(e.point(s)) - s, e.perimeter())) <=
          1e-9 * e.perimeter());
  }
  for (int k = 0; k < 50; ++k) {
    const double th = rng.uniform(0.0, 2.0 * kPi);
    // Support of the ellipse: sqrt(a^2 cos^2 + b^2 sin^2).
    const double href = std::sqrt(4.0 * std::cos(th) * std::cos(th) +
                                  std::sin(th) * std::sin(th));
    CHECK(e.support(th) == doctest::Approx(href).epsilon(1e-8));
  }
}
