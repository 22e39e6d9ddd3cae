// Microbenchmarks for the hot paths: bounce maps, tiling refraction, action
// gradients, periodic-orbit solves, flow integration, and word complexity.

#include <cmath>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "carom/action.hpp"
#include "carom/analysis.hpp"
#include "carom/curve.hpp"
#include "carom/flows.hpp"
#include "carom/maps.hpp"
#include "carom/periodic.hpp"
#include "carom/phase.hpp"
#include "carom/tiling.hpp"

using namespace carom;

namespace {

constexpr double kPi = 3.14159265358979323846;

void bm_birkhoff_circle(benchmark::State& state) {
  const BoundaryCurve table = BoundaryCurve::circle(1.0);
  PhasePoint p{0.2, 0.813};
  for (auto _ : state) {
    p = birkhoff_step(table, p);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(bm_birkhoff_circle);

void bm_birkhoff_ellipse(benchmark::State& state) {
  const BoundaryCurve table = BoundaryCurve::ellipse(2.0, 1.0);
  PhasePoint p{0.37, 1.1};
  for (auto _ : state) {
    p = birkhoff_step(table, p);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(bm_birkhoff_ellipse);

void bm_symplectic_ellipse(benchmark::State& state) {
  const BoundaryCurve table = BoundaryCurve::ellipse(2.0, 1.0);
  ChordState c{0.3, 3.1};
  for (auto _ : state) {
    c = symplectic_billiard_step(table, c);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(bm_symplectic_ellipse);

void bm_refract_triangle(benchmark::State& state) {
  const Tiling t = Tiling::triangle_central_symmetry(0.9, 1.1);
  const RefractState start{{0, 0, 0}, {0.4, 0.2}, {std::cos(0.7), std::sin(0.7)}};
  RefractState s = start;
  long k = 0;
  for (auto _ : state) {
    s = refract_step(t, s);
    benchmark::DoNotOptimize(s);
    if (++k % 4096 == 0) s = start;  // bounded cell indices
  }
}
BENCHMARK(bm_refract_triangle);

void bm_action_gradient(benchmark::State& state) {
  const ActionFunctional F = ActionFunctional::euclidean(BoundaryCurve::ellipse(2.0, 1.0));
  const int n = static_cast<int>(state.range(0));
  const double L = F.curve().perimeter();
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) s[i] = (i + 0.3) * L / n;
  for (auto _ : state) {
    benchmark::DoNotOptimize(action(F, s));
  }
}
BENCHMARK(bm_action_gradient)->Arg(4)->Arg(16)->Arg(64);

void bm_periodic_solve(benchmark::State& state) {
  const ActionFunctional F = ActionFunctional::euclidean(BoundaryCurve::ellipse(2.0, 1.0));
  SearchOptions opts;
  opts.multistarts = 4;
  opts.compute_index = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(search_periodic(F, 5, 2, opts));
  }
}
BENCHMARK(bm_periodic_solve);

void bm_flow_constant(benchmark::State& state) {
  const auto H = [](const Eigen::VectorXd& x, const Eigen::VectorXd& p) {
    return 0.5 * (p.squaredNorm() + x.squaredNorm());
  };
  const auto dHdx = [](const Eigen::VectorXd& x, const Eigen::VectorXd&) { return x; };
  const auto dHdp = [](const Eigen::VectorXd&, const Eigen::VectorXd& p) { return p; };
  const ConformalSystem sys = ConformalSystem::constant_rate(1, H, dHdx, dHdp, 0.1);
  FlowState s0;
  s0.x = Eigen::VectorXd::Constant(1, 1.0);
  s0.p = Eigen::VectorXd::Constant(1, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(flow_constant(sys, s0, 10.0, 1e-10));
  }
}
BENCHMARK(bm_flow_constant);

void bm_complexity(benchmark::State& state) {
  std::mt19937_64 g(7);
  std::uniform_int_distribution<int> sym(0, 3);
  std::vector<std::vector<int>> corpus(50, std::vector<int>(256));
  for (auto& word : corpus)
    for (int& c : word) c = sym(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(complexity(corpus, 8));
  }
}
BENCHMARK(bm_complexity);

}  // namespace

BENCHMARK_MAIN();
