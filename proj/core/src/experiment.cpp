#include "carom/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "carom/action.hpp"
#include "carom/analysis.hpp"
#include "carom/csv.hpp"
#include "carom/curve.hpp"
#include "carom/errors.hpp"
#include "carom/flows.hpp"
#include "carom/folding.hpp"
#include "carom/lines.hpp"
#include "carom/maps.hpp"
#include "carom/periodic.hpp"
#include "carom/phase.hpp"
#include "carom/rng.hpp"
#include "carom/tiling.hpp"
#include "carom/wavefront.hpp"

namespace carom {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) { return CsvTable::format_number(v); }

// Accumulates summary rows plus named data tables; nothing touches the
// filesystem until the experiment has finished (or failed), so a run either
// leaves a complete artifact set or a summary describing the error.
struct Artifacts {
  CsvTable summary{{"key", "value"}};
  std::vector<std::pair<std::string, CsvTable>> data;

  void note(const std::string& key, const std::string& value) {
    summary.add_row({key, value});
  }
  void note(const std::string& key, double value) { note(key, fmt(value)); }
  void note(const std::string& key, long value) { note(key, std::to_string(value)); }
  CsvTable& table(const std::string& name, std::vector<std::string> header) {
    data.emplace_back(name, CsvTable(std::move(header)));
    return data.back().second;
  }
};

double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

PhasePoint random_phase(std::mt19937_64& g, double perimeter) {
  return {uniform(g, 0.0, perimeter), uniform(g, 0.1, kPi - 0.1)};
}

// ---- orbit-sweep ----------------------------------------------------------

void run_orbit_sweep(const ExperimentConfig& cfg, Artifacts& art) {
  const BoundaryCurve table = make_table(cfg.raw("table"));
  const bool symplectic = cfg.raw("map") == "symplectic";
  const long orbits = cfg.get_int("orbits");
  const long steps = cfg.get_int("steps");
  const double L = table.perimeter();
  SeedSequence seq(cfg.seed);

  CsvTable& sweep = art.table("sweep.csv", symplectic
                                               ? std::vector<std::string>{"orbit", "step", "s0", "s1"}
                                               : std::vector<std::string>{"orbit", "step", "s", "phi"});
  CsvTable& rot = art.table("rotation.csv", {"orbit", "rotation", "half-width", "converged"});

  long truncated = 0;
  for (long k = 0; k < orbits; ++k) {
    auto g = seq.stream(static_cast<std::uint64_t>(k));
    if (symplectic) {
      ChordState c{uniform(g, 0.0, L), 0.0};
      c.s1 = std::fmod(c.s0 + uniform(g, 0.05 * L, 0.45 * L), L);
      std::vector<double> bounces{c.s0, c.s1};
      sweep.add_numeric_row({double(k), 0.0, c.s0, c.s1});
      for (long i = 1; i <= steps; ++i) {
        try {
          c = symplectic_billiard_step(table, c);
        } catch (const Error&) {
          ++truncated;
          break;
        }
        bounces.push_back(c.s1);
        sweep.add_numeric_row({double(k), double(i), c.s0, c.s1});
      }
      std::vector<PhasePoint> trace;
      trace.reserve(bounces.size());
      for (double s : bounces) trace.push_back({s, kPi / 2});
      if (trace.size() >= 100) {
        RotationReport r = rotation_number(trace, L);
        rot.add_row({std::to_string(k), fmt(r.value), fmt(r.half_width),
                     r.converged ? "1" : "0"});
      }
    } else {
      PhasePoint p = random_phase(g, L);
      std::vector<PhasePoint> trace{p};
      sweep.add_numeric_row({double(k), 0.0, p.s, p.phi});
      for (long i = 1; i <= steps; ++i) {
        try {
          p = birkhoff_step(table, p);
        } catch (const Error&) {
          ++truncated;
          break;
        }
        trace.push_back(p);
        sweep.add_numeric_row({double(k), double(i), p.s, p.phi});
      }
      if (trace.size() >= 100) {
        RotationReport r = rotation_number(trace, L);
        rot.add_row({std::to_string(k), fmt(r.value), fmt(r.half_width),
                     r.converged ? "1" : "0"});
      }
    }
  }
  art.note("orbits", orbits);
  art.note("steps", steps);
  art.note("truncated-orbits", truncated);
}

// ---- periodic-search / count-PT ---------------------------------------------

SearchOptions search_options(const ExperimentConfig& cfg) {
  SearchOptions opts;
  opts.seed = cfg.seed;
  opts.threads = static_cast<unsigned>(cfg.threads);
  if (cfg.has("multistarts")) opts.multistarts = static_cast<int>(cfg.get_int("multistarts"));
  if (cfg.has("grad-tol")) opts.grad_tol = cfg.get_double("grad-tol");
  return opts;
}

void run_periodic_search(const ExperimentConfig& cfg, Artifacts& art) {
  const BoundaryCurve table = make_table(cfg.raw("table"));
  const ActionFunctional F = cfg.raw("geometry") == "hyperbolic"
                                 ? ActionFunctional::hyperbolic(table)
                                 : ActionFunctional::euclidean(table);
  const int n_max = static_cast<int>(cfg.get_int("n-max"));
  const std::vector<PeriodicOrbit> db = orbit_database(F, n_max, search_options(cfg));

  CsvTable& orbs = art.table("orbits.csv", {"orbit", "bounces", "winding", "length",
                                            "grad-norm", "morse-index", "primitive"});
  CsvTable& pts = art.table("orbit_points.csv", {"orbit", "vertex", "s", "x", "y"});
  double shortest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < db.size(); ++k) {
    const PeriodicOrbit& o = db[k];
    shortest = std::min(shortest, o.length);
    orbs.add_row({std::to_string(k), std::to_string(o.period), std::to_string(o.winding),
                  fmt(o.length), fmt(o.grad_norm), std::to_string(o.morse_index),
                  o.primitive ? "1" : "0"});
    for (std::size_t v = 0; v < o.s.size(); ++v) {
      const Vec2 z = table.point(o.s[v]);
      pts.add_numeric_row({double(k), double(v), o.s[v], z.x, z.y});
    }
  }
  art.note("orbit-count", static_cast<long>(db.size()));
  if (!db.empty()) art.note("shortest-length", shortest);
}

void run_count_pt(const ExperimentConfig& cfg, Artifacts& art) {
  const BoundaryCurve table = make_table(cfg.raw("table"));
  const ActionFunctional F = ActionFunctional::euclidean(table);
  const int n_max = static_cast<int>(cfg.get_int("n-max"));
  const double t_min = cfg.get_double("t-min");
  const double t_max = cfg.get_double("t-max");
  const long m = cfg.get_int("t-samples");
  if (t_max <= t_min) throw ConfigError("key 't-max': must exceed t-min");

  std::vector<double> thresholds(m);
  for (long i = 0; i < m; ++i)
    thresholds[i] = t_min + (t_max - t_min) * double(i) / double(m - 1);
  const std::vector<long> counts = count_orbit_curve(F, thresholds, n_max, search_options(cfg));

  CsvTable& out = art.table("counts.csv", {"T", "P"});
  std::vector<std::pair<double, long>> samples;
  for (long i = 0; i < m; ++i) {
    out.add_row({fmt(thresholds[i]), std::to_string(counts[i])});
    samples.emplace_back(thresholds[i], counts[i]);
  }
  art.note("growth-exponent", growth_exponent(samples));
}

// ---- tiling-sim / fold-scan -------------------------------------------------

Vec2 random_face_point(const Tiling& t, int face, std::mt19937_64& g) {
  if (t.kind() == TilingKind::WindTree) {
    const double hx = 0.5 * t.tree_a(), hy = 0.5 * t.tree_b();
    for (int tries = 0; tries < 256; ++tries) {
      Vec2 p{uniform(g, -0.5, 0.5), uniform(g, -0.5, 0.5)};
      if (std::abs(p.x) > hx + 0.02 || std::abs(p.y) > hy + 0.02) return p;
    }
    return {0.5 * (hx + 0.5), 0.5 * (hy + 0.5)};
  }
  const std::vector<Vec2>& poly = t.face_polygon(face);
  // Random strictly-interior point of a convex face: normalized positive
  // weights over the vertices.
  std::vector<double> w(poly.size());
  double total = 0.0;
  for (double& wi : w) total += (wi = uniform(g, 0.2, 1.0));
  Vec2 p{0.0, 0.0};
  for (std::size_t i = 0; i < poly.size(); ++i) {
    p.x += w[i] / total * poly[i].x;
    p.y += w[i] / total * poly[i].y;
  }
  return p;
}

void run_tiling_sim(const ExperimentConfig& cfg, Artifacts& art) {
  const Tiling tiling = make_tiling(cfg.raw("tiling"));
  const long starts = cfg.get_int("starts");
  SimulateOptions opt;
  opt.max_steps = cfg.get_int("steps");
  opt.record_limit = 0;  // classification only; keep artifacts small
  SeedSequence seq(cfg.seed);

  CsvTable& out = art.table("trajectories.csv",
                            {"start", "classification", "steps", "period", "drift-i",
                             "drift-j", "face-revisit-step"});
  std::map<std::string, long> tally;
  for (long k = 0; k < starts; ++k) {
    auto g = seq.stream(static_cast<std::uint64_t>(k));
    const double ang = uniform(g, 0.0, 2.0 * kPi);
    RefractState start{{0, 0, 0}, random_face_point(tiling, 0, g), {std::cos(ang), std::sin(ang)}};
    std::string cls;
    TilingTrajectory tr;
    try {
      tr = simulate(tiling, start, opt);
      cls = to_string(tr.classification);
    } catch (const Error&) {
      cls = "vertex-hit";
      tr.step_count = 0;
    }
    ++tally[cls];
    out.add_row({std::to_string(k), cls, std::to_string(tr.step_count),
                 std::to_string(tr.period), std::to_string(tr.drift_i),
                 std::to_string(tr.drift_j), std::to_string(tr.face_revisit_step)});
  }
  for (const auto& [cls, count] : tally) art.note("count-" + cls, count);
}

void run_fold_scan(const ExperimentConfig& cfg, Artifacts& art) {
  const Tiling tiling = make_tiling(cfg.raw("tiling"));
  const FoldScanReport rep = fold_group_scan(tiling, static_cast<int>(cfg.get_int("radius")),
                                             static_cast<std::size_t>(cfg.get_int("budget")));
  CsvTable& out = art.table("folds.csv", {"entry", "kind", "q00", "q01", "q10", "q11", "tx", "ty"});
  for (std::size_t k = 0; k < rep.orthogonal_parts.size(); ++k) {
    const Mat2& Q = rep.orthogonal_parts[k];
    out.add_row({std::to_string(k), "orthogonal-part", fmt(Q.a), fmt(Q.b), fmt(Q.c), fmt(Q.d),
                 "0", "0"});
  }
  for (std::size_t k = 0; k < rep.kernel_translations.size(); ++k) {
    const Vec2& v = rep.kernel_translations[k];
    out.add_row({std::to_string(k), "kernel-translation", "1", "0", "0", "1", fmt(v.x), fmt(v.y)});
  }
  art.note("closure-of-orthogonal-parts", rep.c1 ? std::string("1") : std::string("0"));
  art.note("kernel-lattice-rank-2", rep.c2 ? std::string("1") : std::string("0"));
  art.note("verdict", rep.verdict() ? std::string("1") : std::string("0"));
  art.note("states-explored", static_cast<long>(rep.states_explored));
  art.note("budget-exceeded", rep.budget_exceeded ? std::string("1") : std::string("0"));
  if (rep.c2) {
    art.note("lattice-u", fmt(rep.lattice_u.x) + " " + fmt(rep.lattice_u.y));
    art.note("lattice-v", fmt(rep.lattice_v.x) + " " + fmt(rep.lattice_v.y));
  }
}

// ---- flow / strobe ----------------------------------------------------------

void run_flow(const ExperimentConfig& cfg, Artifacts& art) {
  const double c = cfg.get_double("c");
  const double t_max = cfg.get_double("t-max");
  const long samples = cfg.get_int("samples");
  const double eta = cfg.get_double("eta");
  const double tol = cfg.get_double("tolerance");

  auto H = [](const Eigen::VectorXd& x, const Eigen::VectorXd& p) {
    return 0.5 * (p.squaredNorm() + x.squaredNorm());
  };
  auto dHdx = [](const Eigen::VectorXd& x, const Eigen::VectorXd&) { return x; };
  auto dHdp = [](const Eigen::VectorXd&, const Eigen::VectorXd& p) { return p; };

  const bool constant = eta == 0.0;
  ConformalSystem sys =
      constant ? ConformalSystem::constant_rate(1, H, dHdx, dHdp, c)
               : ConformalSystem::pinned(1, H, dHdx, dHdp, c,
                                         [eta](const Eigen::VectorXd&, const Eigen::VectorXd&) {
                                           return Eigen::VectorXd::Constant(1, eta).eval();
                                         },
                                         {});

  FlowState s0;
  s0.x = Eigen::VectorXd::Constant(1, cfg.get_double("x0"));
  s0.p = Eigen::VectorXd::Constant(1, cfg.get_double("p0"));

  std::vector<double> times(samples);
  for (long i = 0; i < samples; ++i) times[i] = t_max * double(i) / double(samples - 1);
  const auto path = tangent_flow_path(sys, s0, times, tol);

  std::vector<std::string> header{"t", "x", "p", "energy", "factor", "one-form-pairing"};
  if (constant) header.push_back("area-defect");
  CsvTable& out = art.table("flow.csv", std::move(header));

  double max_defect = 0.0, max_drift = 0.0;
  double ref = std::numeric_limits<double>::quiet_NaN();
  for (const auto& [st, J] : path) {
    const auto d = sys.derivative(st.x, st.p);
    const double invariant = d.f - d.iota_eta;
    if (!std::isfinite(ref)) ref = invariant;
    max_drift = std::max(max_drift, std::abs(invariant - ref));
    std::vector<double> row{st.t, st.x[0], st.p[0], sys.hamiltonian(st.x, st.p), d.f,
                            d.iota_eta};
    if (constant) {
      const double defect = conformal_defect(J, c, st.t);
      max_defect = std::max(max_defect, defect);
      row.push_back(defect);
    }
    out.add_numeric_row(row);
  }
  art.note("final-x", path.back().first.x[0]);
  art.note("final-p", path.back().first.p[0]);
  art.note("max-factor-drift", max_drift);
  if (constant) art.note("max-area-defect", max_defect);
}

void run_strobe(const ExperimentConfig& cfg, Artifacts& art) {
  const double amp = cfg.get_double("amp");
  const double n = double(cfg.get_int("n"));
  const double m = double(cfg.get_int("m"));
  NewtonSystem sys([=](double u, double t) { return amp * std::cos(2.0 * kPi * (n * u + m * t)); },
                   [=](double u, double t) {
                     return -2.0 * kPi * n * amp * std::sin(2.0 * kPi * (n * u + m * t));
                   });
  const auto orbit = newton_strobe_orbit(sys, {cfg.get_double("u0"), cfg.get_double("p0")},
                                         static_cast<int>(cfg.get_int("iterations")),
                                         cfg.get_double("tolerance"));
  CsvTable& out = art.table("strobe.csv", {"k", "u", "p"});
  for (std::size_t k = 0; k < orbit.size(); ++k)
    out.add_numeric_row({double(k), orbit[k].u, orbit[k].p});
  art.note("final-u", orbit.back().u);
  art.note("final-p", orbit.back().p);
}

// ---- complexity --------------------------------------------------------------

void run_complexity(const ExperimentConfig& cfg, Artifacts& art) {
  const BoundaryCurve table = make_table(cfg.raw("table"));
  const bool symplectic = cfg.raw("map") == "symplectic";
  const std::string labels = cfg.raw("labels");
  const SideLabeling labeling = labels == "sides"
                                    ? SideLabeling::polygon_sides(table)
                                    : SideLabeling::uniform_arcs(
                                          table, static_cast<int>(std::stol(labels)));
  const long orbits = cfg.get_int("orbits");
  const long steps = cfg.get_int("steps");
  const int n_max = static_cast<int>(cfg.get_int("n-max"));
  const double L = table.perimeter();
  SeedSequence seq(cfg.seed);

  std::vector<std::vector<int>> corpus;
  long skipped = 0;
  for (long k = 0; k < orbits; ++k) {
    auto g = seq.stream(static_cast<std::uint64_t>(k));
    std::vector<double> bounces;
    try {
      if (symplectic) {
        ChordState c{uniform(g, 0.0, L), 0.0};
        c.s1 = std::fmod(c.s0 + uniform(g, 0.05 * L, 0.45 * L), L);
        bounces = {c.s0, c.s1};
        for (long i = 1; i < steps; ++i) {
          c = symplectic_billiard_step(table, c);
          bounces.push_back(c.s1);
        }
      } else {
        PhasePoint p = random_phase(g, L);
        bounces.push_back(p.s);
        for (long i = 1; i <= steps; ++i) {
          p = birkhoff_step(table, p);
          bounces.push_back(p.s);
        }
      }
      corpus.push_back(symbolic_code(labeling, bounces).word);
    } catch (const Error&) {
      ++skipped;
    }
  }
  const std::vector<long> p = complexity(corpus, n_max);

  CsvTable& out = art.table("complexity.csv", {"n", "p"});
  bool monotone = true, submultiplicative = true;
  for (int i = 0; i < n_max; ++i) {
    out.add_row({std::to_string(i + 1), std::to_string(p[i])});
    if (i > 0 && p[i] < p[i - 1]) monotone = false;
  }
  for (int a = 1; a <= n_max; ++a)
    for (int b = 1; a + b <= n_max; ++b)
      if (p[a + b - 1] > p[a - 1] * p[b - 1]) submultiplicative = false;
  art.note("alphabet", static_cast<long>(labeling.alphabet_size()));
  art.note("words", static_cast<long>(corpus.size()));
  art.note("skipped-orbits", skipped);
  art.note("monotone", monotone ? std::string("1") : std::string("0"));
  art.note("submultiplicative", submultiplicative ? std::string("1") : std::string("0"));
}

// ---- front / line-domain -------------------------------------------------------

void run_front(const ExperimentConfig& cfg, Artifacts& art) {
  const BoundaryCurve table = make_table(cfg.raw("table"));
  const Vec2 source{cfg.get_double("source-x"), cfg.get_double("source-y")};
  const double t_max = cfg.get_double("t-max");
  const int rays = static_cast<int>(cfg.get_int("rays"));

  const WaveFront front = wave_front(table, source, t_max, rays);
  CsvTable& fr = art.table("front.csv", {"piece", "vertex", "x", "y", "reflections"});
  for (std::size_t k = 0; k < front.pieces.size(); ++k)
    for (std::size_t v = 0; v < front.pieces[k].points.size(); ++v)
      fr.add_numeric_row({double(k), double(v), front.pieces[k].points[v].x,
                          front.pieces[k].points[v].y, double(front.pieces[k].reflections)});

  const DensityCurve density =
      front_density(table, source, t_max, cfg.get_double("eps"), rays);
  CsvTable& de = art.table("density.csv", {"time", "covered"});
  for (std::size_t i = 0; i < density.time.size(); ++i)
    de.add_numeric_row({density.time[i], density.covered[i]});

  art.note("front-length", front.length());
  art.note("front-pieces", static_cast<long>(front.pieces.size()));
  art.note("dropped-rays", static_cast<long>(front.dropped_rays));
  art.note("final-covered", density.covered.empty() ? 0.0 : density.covered.back());
}

void run_line_domain(const ExperimentConfig& cfg, Artifacts& art) {
  const BoundaryCurve table = make_table(cfg.raw("table"));
  const int grid = static_cast<int>(cfg.get_int("grid"));
  const long states = cfg.get_int("states");

  const LineDomain dom = line_domain(table, grid);
  CsvTable& d = art.table("domain.csv", {"theta", "p-lo", "p-hi"});
  for (std::size_t i = 0; i < dom.theta.size(); ++i)
    d.add_numeric_row({dom.theta[i], dom.p_lo[i], dom.p_hi[i]});

  CsvTable& j = art.table("jacobians.csv", {"state", "theta", "p", "det"});
  SeedSequence seq(cfg.seed);
  double worst = 0.0;
  for (long k = 0; k < states; ++k) {
    auto g = seq.stream(static_cast<std::uint64_t>(k));
    const double theta = uniform(g, 0.0, 2.0 * kPi);
    const double lo = -table.support(theta + kPi), hi = table.support(theta);
    const double w = hi - lo;
    LineCoords lc{theta, uniform(g, lo + 0.1 * w, hi - 0.1 * w)};
    const LineJacobian lj = line_map_jacobian(table, lc);
    worst = std::max(worst, std::abs(lj.det - 1.0));
    j.add_numeric_row({double(k), lc.theta, lc.p, lj.det});
  }
  art.note("fibers", static_cast<long>(dom.theta.size()));
  art.note("max-det-error", worst);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  Artifacts art;
  art.note("kind", config.raw("kind"));
  art.note("seed", config.raw("seed"));
  art.note("threads", config.raw("threads"));

  ExperimentResult result;
  std::string error;
  try {
    switch (config.kind) {
      case ExperimentKind::OrbitSweep: run_orbit_sweep(config, art); break;
      case ExperimentKind::PeriodicSearch: run_periodic_search(config, art); break;
      case ExperimentKind::CountPT: run_count_pt(config, art); break;
      case ExperimentKind::TilingSim: run_tiling_sim(config, art); break;
      case ExperimentKind::FoldScan: run_fold_scan(config, art); break;
      case ExperimentKind::Flow: run_flow(config, art); break;
      case ExperimentKind::Strobe: run_strobe(config, art); break;
      case ExperimentKind::Complexity: run_complexity(config, art); break;
      case ExperimentKind::Front: run_front(config, art); break;
      case ExperimentKind::LineDomain: run_line_domain(config, art); break;
    }
  } catch (const std::exception& e) {
    error = e.what();
  }

  art.note("status", error.empty() ? std::string("ok") : std::string("error"));
  art.note("error", error);

  result.summary_path = (fs::path(out_dir) / "summary.csv").string();
  art.summary.write_file(result.summary_path);
  result.files.push_back(result.summary_path);
  if (error.empty()) {
    for (const auto& [name, csv] : art.data) {
      const std::string path = (fs::path(out_dir) / name).string();
      csv.write_file(path);
      result.files.push_back(path);
    }
  } else {
    result.exit_code = 1;
    result.error = error;
  }
  return result;
}

}  // namespace carom
