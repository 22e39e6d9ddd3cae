#include <algorithm>
#include <cmath>
#include <vector>

#include "carom/analysis.hpp"
#include "carom/curve.hpp"
#include "carom/errors.hpp"
#include "carom/lines.hpp"
#include "carom/maps.hpp"
#include "carom/phase.hpp"
#include "carom/wavefront.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace carom;

namespace {
constexpr double kPi = oracle::kPi;

std::vector<PhasePoint> birkhoff_orbit(const BoundaryCurve& c, PhasePoint p, int n) {
  std::vector<PhasePoint> orbit;
  orbit.reserve(n);
  for (int i = 0; i < n; ++i) {
    orbit.push_back(p);
    p = birkhoff_step(c, p);
  }
  return orbit;
}
}  // namespace

TEST_CASE("side labelings partition the boundary") {
  const BoundaryCurve sq = BoundaryCurve::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const SideLabeling sides = SideLabeling::polygon_sides(sq);
  CHECK(sides.alphabet_size() == 4);
  CHECK(sides.label(0.5) == 0);
  CHECK(sides.label(1.5) == 1);
  CHECK(sides.label(2.5) == 2);
  CHECK(sides.label(3.5) == 3);
  CHECK_THROWS_AS(sides.label(1.0), LabelAmbiguousError);
  CHECK_THROWS_AS(sides.label(1.0 + 1e-12), LabelAmbiguousError);

  const BoundaryCurve e = BoundaryCurve::ellipse(2.0, 1.0);
  const double L = e.perimeter();
  const SideLabeling halves =
      SideLabeling::from_breakpoints(L, {L / 4.0, 3.0 * L / 4.0});
  CHECK(halves.alphabet_size() == 2);
  // The arc through s = 0 (right vertex) wraps around.
  CHECK(halves.label(0.0) == halves.label(L - 0.01));
  CHECK(halves.label(L / 2.0) != halves.label(0.0));

  const SideLabeling arcs = SideLabeling::uniform_arcs(e, 6);
  CHECK(arcs.alphabet_size() == 6);
  CHECK(arcs.label(0.01) == 0);
  CHECK(arcs.label(L - 0.01) == 5);
}

TEST_CASE("orbit codes on the square at forty-five degrees cycle the four sides") {
  const BoundaryCurve sq = BoundaryCurve::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const SideLabeling sides = SideLabeling::polygon_sides(sq);
  // Launch from the bottom side at 45 degrees: the orbit is the inscribed
  // square visiting sides in rotation.
  PhasePoint p{0.3, kPi / 4.0};
  std::vector<double> bounces;
  for (int k = 0; k < 64; ++k) {
    bounces.push_back(p.s);
    p = birkhoff_step(sq, p);
  }
  const SymbolicCode code = symbolic_code(sides, bounces);
  REQUIRE(code.word.size() == 64);
  for (std::size_t i = 0; i < code.word.size(); ++i)
    CHECK(code.word[i] == static_cast<int>(i % 4));

  const std::vector<long> p_n = complexity({code.word}, 8);
  REQUIRE(p_n.size() == 8);
  for (long v : p_n) CHECK(v == 4);
}

TEST_CASE("factor counts match a brute-force substring oracle") {
  const std::vector<std::vector<int>> corpus = {
      {0, 1, 0, 2, 1, 0, 1, 2, 2, 0, 1},
      {1, 2, 0, 0, 1},
  };
  const int n_max = 6;
  const std::vector<long> got = complexity(corpus, n_max);
  const std::vector<long> want = oracle::subword_counts(corpus, n_max);
  REQUIRE(got.size() == want.size());
  for (int i = 0; i < n_max; ++i) CHECK(got[i] == want[i]);
}

TEST_CASE("factor counts obey the subword laws on random corpora") {
  oracle::Rng rng(509);
  for (int rep = 0; rep < 10; ++rep) {
    const int alphabet = 2 + static_cast<int>(rng.uniform(0.0, 3.0));
    std::vector<std::vector<int>> corpus;
    const int words = 1 + static_cast<int>(rng.uniform(0.0, 3.0));
    for (int w = 0; w < words; ++w) {
      std::vector<int> word;
      const int len = 5 + static_cast<int>(rng.uniform(0.0, 40.0));
      for (int i = 0; i < len; ++i)
        word.push_back(static_cast<int>(rng.uniform(0.0, alphabet)) % alphabet);
      corpus.push_back(word);
    }
    const int n_max = 7;
    const std::vector<long> p = complexity(corpus, n_max);
    for (int n = 1; n < n_max; ++n) {
      CHECK(p[n] >= p[n - 1]);                  // monotone
      CHECK(p[n] <= alphabet * p[n - 1]);       // bounded growth
    }
    for (int n = 1; n <= n_max; ++n)
      for (int m = 1; n + m <= n_max; ++m)
        CHECK(p[n + m - 1] <= p[n - 1] * p[m - 1]);  // submultiplicative
  }
}

TEST_CASE("empty corpora cannot be analyzed") {
  CHECK_THROWS_AS(complexity({}, 4), InsufficientDataError);
  CHECK_THROWS_AS(complexity({{}, {}}, 4), InsufficientDataError);
}

TEST_CASE("circle orbits lie on horizontal invariant graphs") {
  const BoundaryCurve c = BoundaryCurve::circle(1.0);
  const std::vector<PhasePoint> orbit = birkhoff_orbit(c, {0.1, 1.0}, 400);
  const GraphReport rep = invariant_graph_detect(orbit, c.perimeter());
  CHECK(rep.verdict == GraphVerdict::Graph);
  CHECK(rep.residual <= 1e-9);
}

TEST_CASE("ellipse orbits lie on invariant graphs") {
  const BoundaryCurve c = BoundaryCurve::ellipse(2.0, 1.0);
  const std::vector<PhasePoint> orbit = birkhoff_orbit(c, {0.3, 1.1}, 2000);
  const GraphReport rep = invariant_graph_detect(orbit, c.perimeter(), 1e-6);
  CHECK(rep.verdict == GraphVerdict::Graph);
  CHECK(rep.residual <= 1e-6);
}

TEST_CASE("tangent-pivot stadium orbits are flagged as non-graphs") {
  const BoundaryCurve stad = BoundaryCurve::stadium(1.0, 0.5);
  const double L = stad.perimeter();
  ChordState ch{0.05, 0.8};
  std::vector<PhasePoint> pts;
  pts.reserve(10000);
  for (int k = 0; k < 10000; ++k) {
    const Vec2 a = stad.point(ch.s0);
    const Vec2 b = stad.point(ch.s1);
    const CurvePoint cp = stad.eval(ch.s0);
    pts.push_back({ch.s0, phase_angle(cp, normalized(b - a))});
    ch = symplectic_billiard_step(stad, ch);
  }
  (void)L;
  const GraphReport rep = invariant_graph_detect(pts, L);
  CHECK(rep.verdict == GraphVerdict::NonGraph);
  CHECK(rep.fold_gap > 1e-2);
}

TEST_CASE("too few samples give no graph verdict") {
  const BoundaryCurve c = BoundaryCurve::circle(1.0);
  const std::vector<PhasePoint> orbit = birkhoff_orbit(c, {0.1, 1.0}, 50);
  CHECK_THROWS_AS(invariant_graph_detect(orbit, c.perimeter()), InsufficientDataError);
}

TEST_CASE("rotation numbers of circle orbits") {
  const BoundaryCurve c = BoundaryCurve::circle(1.0);

  // Periodic: phi = pi/3 advances exactly a third of the boundary per bounce.
  const std::vector<PhasePoint> per = birkhoff_orbit(c, {0.2, kPi / 3.0}, 600);
  const RotationReport r3 = rotation_number(per, c.perimeter());
  CHECK(r3.converged);
  CHECK(r3.value == doctest::Approx(1.0 / 3.0).epsilon(1e-10));

  // Quasi-periodic: phi = 1 gives rotation number 1/pi.
  const std::vector<PhasePoint> qp = birkhoff_orbit(c, {0.2, 1.0}, 4000);
  const RotationReport rq = rotation_number(qp, c.perimeter(), 1e-8);
  CHECK(rq.converged);
  CHECK(rq.value == doctest::Approx(1.0 / kPi).epsilon(1e-8));
}

TEST_CASE("chaotic stadium orbits fail to produce a confident rotation number") {
  const BoundaryCurve stad = BoundaryCurve::stadium(1.0, 0.5);
  std::vector<PhasePoint> orbit;
  PhasePoint p{0.3, 0.7};
  for (int k = 0; k < 1200; ++k) {
    orbit.push_back(p);
    p = birkhoff_step(stad, p);
  }
  const RotationReport r = rotation_number(orbit, stad.perimeter(), 1e-9);
  CHECK_FALSE(r.converged);
  CHECK(r.half_width > 1e-9);
}

TEST_CASE("the domain of lines meeting the disc is a band") {
  const BoundaryCurve c = BoundaryCurve::circle(1.0);
  const LineDomain dom = line_domain(c, 64);
  REQUIRE(dom.theta.size() == 64);
  for (std::size_t i = 0; i < dom.theta.size(); ++i) {
    CHECK(dom.p_lo[i] == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(dom.p_hi[i] == doctest::Approx(1.0).epsilon(1e-8));
  }

  // Translated disc: the fiber shifts by the projection of the center.
  const BoundaryCurve shifted = BoundaryCurve::circle(1.0, {0.3, -0.2});
  const LineDomain ds = line_domain(shifted, 32);
  for (std::size_t i = 0; i < ds.theta.size(); ++i) {
    const double u = dot({0.3, -0.2}, unit_dir(ds.theta[i]));
    CHECK(ds.p_hi[i] == doctest::Approx(u + 1.0).epsilon(1e-7));
    CHECK(ds.p_lo[i] == doctest::Approx(u - 1.0).epsilon(1e-7));
  }
}

TEST_CASE("ellipse line fibers follow the support function") {
  const BoundaryCurve e = BoundaryCurve::ellipse(2.0, 1.0);
  const LineDomain dom = line_domain(e, 128);
  for (std::size_t i = 0; i < dom.theta.size(); ++i) {
    const double th = dom.theta[i];
    const double h = std::sqrt(4.0 * std::cos(th) * std::cos(th) +
                               std::sin(th) * std::sin(th));
    // Central symmetry: the fiber is [-h(theta), h(theta)].
    CHECK(std::abs(dom.p_hi[i] - h) <= 1e-8);
    CHECK(std::abs(dom.p_lo[i] + h) <= 1e-8);
  }
  // Fibers at theta = 0: endpoints +-2; at theta = pi/2: +-1.
  const double h0 = std::sqrt(4.0);
  CHECK(dom.p_hi[0] == doctest::Approx(h0).epsilon(1e-8));
}

TEST_CASE("interior lines are inside the domain by a positive margin") {
  const BoundaryCurve e = BoundaryCurve::ellipse(2.0, 1.0);
  oracle::Rng rng(601);
  for (int k = 0; k < 100; ++k) {
    // A chord through a random interior point always meets the table.
    const Vec2 z{rng.uniform(-1.0, 1.0), rng.uniform(-0.45, 0.45)};
    const double th = rng.uniform(0.0, 2.0 * kPi);
    const LineCoords lc{th, dot(z, unit_dir(th))};
    CHECK(line_domain_margin(e, lc) > 0.0);
  }
  // A line far outside misses the table.
  CHECK(line_domain_margin(e, {0.0, 5.0}) < 0.0);
}

TEST_CASE("phase and line charts are mutually inverse") {
  const std::vector<BoundaryCurve> tables = {BoundaryCurve::circle(1.0),
                                             BoundaryCurve::ellipse(2.0, 1.0)};
  oracle::Rng rng(607);
  for (const auto& c : tables) {
    const double L = c.perimeter();
    for (int k = 0; k < 100; ++k) {
      const PhasePoint q{rng.uniform(0.0, L), rng.uniform(0.1, kPi - 0.1)};
      const LineCoords lc = phase_to_line(c, q);
      const PhasePoint back = line_to_phase(c, lc);
      CHECK(std::abs(wrap_signed(back.s - q.s, L)) <= 1e-8);
      CHECK(back.phi == doctest::Approx(q.phi).epsilon(1e-8));
      // The chart encodes the launched chord: the boundary point lies on the
      // line and the direction matches.
      const Vec2 z = c.point(q.s);
      CHECK(dot(z, line_normal(lc)) == doctest::Approx(lc.p).epsilon(1e-10));
      const Vec2 d = launch_direction(c.eval(q.s), q.phi);
      const double align = std::abs(dot(d, line_direction(lc)));
      CHECK(align == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("the line-chart bounce conjugates the boundary map") {
  const BoundaryCurve c = BoundaryCurve::ellipse(2.0, 1.0);
  oracle::Rng rng(613);
  for (int k = 0; k < 60; ++k) {
    const PhasePoint q{rng.uniform(0.0, c.perimeter()), rng.uniform(0.2, kPi - 0.2)};
    const LineCoords moved = line_billiard_step(c, phase_to_line(c, q));
    const LineCoords direct = phase_to_line(c, birkhoff_step(c, q));
    CHECK(std::abs(wrap_signed(moved.theta - direct.theta, 2.0 * kPi)) <= 1e-8);
    CHECK(moved.p == doctest::Approx(direct.p).epsilon(1e-8));
  }
}

TEST_CASE("the bounce map preserves the line-chart area form") {
  const std::vector<BoundaryCurve> tables = {BoundaryCurve::circle(1.0),
                                             BoundaryCurve::ellipse(2.0, 1.0)};
  oracle::Rng rng(617);
  for (const auto& c : tables) {
    for (int k = 0; k < 50; ++k) {
      const PhasePoint q{rng.uniform(0.0, c.perimeter()), rng.uniform(0.4, kPi - 0.4)};
      const LineCoords lc = phase_to_line(c, q);
      const LineJacobian J = line_map_jacobian(c, lc);
      CHECK(std::abs(J.det - 1.0) <= 1e-5);
    }
  }
}

TEST_CASE("near-tangent lines cannot be differenced") {
  const BoundaryCurve c = BoundaryCurve::circle(1.0);
  CHECK_THROWS_AS(line_map_jacobian(c, {0.3, 1.0 - 1e-8}), BoundaryStateError);
}

TEST_CASE("young wave fronts are circles of the elapsed length") {
  const BoundaryCurve c = BoundaryCurve::ellipse(2.0, 1.0);
  const Vec2 source{0.3, 0.1};
  // Distance from the source to the boundary exceeds 0.5 in every direction.
  const WaveFront f = wave_front(c, source, 0.5, 4096);
  REQUIRE(!f.pieces.empty());
  for (const auto& piece : f.pieces) CHECK(piece.reflections == 0);
  CHECK(f.length() == doctest::Approx(2.0 * kPi * 0.5).epsilon(1e-6));
  for (const auto& piece : f.pieces)
    for (const Vec2& z : piece.points)
      CHECK(dist(z, source) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("center sources in the disc refocus at the far side") {
  const double R = 1.0;
  const BoundaryCurve c = BoundaryCurve::circle(R);
  const WaveFront f = wave_front(c, {0.0, 0.0}, 2.0 * R, 2048);
  // Every ray has reflected once and returned to the center.
  double dia = 0.0;
  for (const auto& piece : f.pieces) {
    CHECK(piece.reflections == 1);
    for (const Vec2& z : piece.points) dia = std::max(dia, norm(z));
  }
  CHECK(dia <= 1e-6);
}

TEST_CASE("front coverage grows monotonically") {
  const BoundaryCurve c = BoundaryCurve::ellipse(2.0, 1.0);
  const DensityCurve d = front_density(c, {0.3, 0.1}, 4.0, 0.1, 512, 16);
  REQUIRE(d.time.size() == d.covered.size());
  REQUIRE(d.time.size() >= 8);
  for (std::size_t i = 1; i < d.covered.size(); ++i) {
    CHECK(d.covered[i] >= d.covered[i - 1]);
    CHECK(d.time[i] > d.time[i - 1]);
  }
  CHECK(d.covered.front() >= 0.0);
  CHECK(d.covered.back() <= 1.0);
  CHECK(d.covered.back() > d.covered.front());
}
