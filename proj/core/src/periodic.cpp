#include "carom/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include <Eigen/Dense>

#include "carom/errors.hpp"
#include "carom/rng.hpp"
#include "carom/util.hpp"

namespace carom {

namespace {

double grad_sup(const std::vector<double>& g) {
  double m = 0.0;
  for (double v : g) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> gap_vector(const std::vector<double>& sw, double L) {
  const std::size_t n = sw.size();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = wrap(sw[(i + 1) % n] - sw[i], L);
  return g;
}

struct NewtonResult {
  std::vector<double> s;
  double grad_norm = 0.0;
  ActionResult res;
};

std::optional<ActionResult> try_action(const ActionFunctional& F, const std::vector<double>& s) {
  try {
    return action(F, s);
  } catch (const Error&) {
    return std::nullopt;
  }
}

// Damped Newton on the gradient of the cyclic length.  Away from singular
// Hessians this is the plain Newton step; otherwise (and whenever the plain
// step fails to shrink the gradient) it falls back to the least-squares step
// (H^2 + lambda I)^-1 H g, which is well-posed for indefinite H.
std::optional<NewtonResult> newton_orbit(const ActionFunctional& F, std::vector<double> s,
                                         const SearchOptions& opts) {
  const int n = static_cast<int>(s.size());
  const double L = F.curve().perimeter();
  auto cur = try_action(F, s);
  if (!cur) return std::nullopt;
  double gn = grad_sup(cur->gradient);

  const double step_cap = 0.25 * L;
  double lambda = 0.0;

  for (int it = 0; it < opts.max_iterations && gn > opts.grad_tol; ++it) {
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) g(i) = cur->gradient[i];
    const Eigen::MatrixXd& H = cur->hessian;
    const double hscale = std::max(1.0, H.cwiseAbs().maxCoeff());

    bool accepted = false;
    for (int attempt = 0; attempt < 14 && !accepted; ++attempt) {
      Eigen::VectorXd d;
      if (lambda == 0.0) {
        d = H.ldlt().solve(-g);
      } else {
        Eigen::MatrixXd A = H * H;
        A.diagonal().array() += lambda;
        d = A.llt().solve(-(H * g));
      }
      if (!d.allFinite()) {
        lambda = std::max(lambda * 8.0, 1e-10 * hscale * hscale);
        continue;
      }
      const double dmax = d.cwiseAbs().maxCoeff();
      if (dmax > step_cap) d *= step_cap / dmax;

      std::vector<double> cand(s);
      for (int i = 0; i < n; ++i) cand[i] += d(i);
      auto rc = try_action(F, cand);
      if (rc && grad_sup(rc->gradient) < gn) {
        s = std::move(cand);
        cur = std::move(rc);
        gn = grad_sup(cur->gradient);
        lambda = (lambda < 1e-9 * hscale * hscale) ? 0.0 : lambda * 0.25;
        accepted = true;
      } else {
        lambda = std::max(lambda * 8.0, 1e-10 * hscale * hscale);
      }
    }
    if (!accepted) break;
  }
  if (gn > opts.grad_tol) return std::nullopt;
  return NewtonResult{std::move(s), gn, std::move(*cur)};
}

bool tuple_primitive(const std::vector<double>& sw, double L, double tol) {
  const int n = static_cast<int>(sw.size());
  for (int k = 1; k < n; ++k) {
    if (n % k != 0) continue;
    bool repeats = true;
    for (int i = 0; i < n && repeats; ++i)
      if (std::abs(wrap_signed(sw[(i + k) % n] - sw[i], L)) > tol) repeats = false;
    if (repeats) return false;
  }
  return true;
}

int morse_index_of(const Eigen::MatrixXd& H) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double thr = 1e-7 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  int idx = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) < -thr) ++idx;
  return idx;
}

std::optional<PeriodicOrbit> make_orbit(const ActionFunctional& F, const NewtonResult& nr,
                                        const SearchOptions& opts) {
  const double L = F.curve().perimeter();
  const int n = static_cast<int>(nr.s.size());
  std::vector<double> sw(n);
  for (int i = 0; i < n; ++i) sw[i] = wrap(nr.s[i], L);
  const int rot = static_cast<int>(std::min_element(sw.begin(), sw.end()) - sw.begin());
  std::rotate(sw.begin(), sw.begin() + rot, sw.end());

  const std::vector<double> gaps = gap_vector(sw, L);
  double gsum = 0.0;
  for (double g : gaps) {
    if (g < 1e-9 * L) return std::nullopt;  // collapsed vertices
    gsum += g;
  }
  const int winding = static_cast<int>(std::llround(gsum / L));
  if (winding < 1 || winding > n - 1) return std::nullopt;

  PeriodicOrbit orb;
  orb.s = std::move(sw);
  orb.period = n;
  orb.winding = winding;
  orb.length = action_value(F, orb.s);
  orb.grad_norm = nr.grad_norm;
  orb.primitive = tuple_primitive(orb.s, L, opts.cluster_tol * L);
  if (opts.compute_index) orb.morse_index = morse_index_of(nr.res.hessian);
  return orb;
}

bool gaps_match(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  const int n = static_cast<int>(a.size());
  for (int r = 0; r < n; ++r) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      if (std::abs(a[(i + r) % n] - b[i]) > tol) ok = false;
    if (ok) return true;
  }
  return false;
}

// Two finds are one orbit when their bounce-gap vectors agree up to cyclic
// shift (and, in symmetric geometries, traversal reversal) and their lengths
// agree.  Gap vectors rather than raw positions collapse the rotational
// families of circular tables to a single representative.
bool same_orbit(const PeriodicOrbit& a, const PeriodicOrbit& b, double L, double tol,
                bool allow_reversal) {
  if (a.period != b.period) return false;
  const int n = a.period;
  if (std::min(a.winding, n - a.winding) != std::min(b.winding, n - b.winding)) return false;
  if (std::abs(a.length - b.length) > tol * std::max(1.0, std::abs(a.length))) return false;

  const std::vector<double> ga = gap_vector(a.s, L);
  const std::vector<double> gb = gap_vector(b.s, L);
  if (gaps_match(ga, gb, tol * L)) return true;
  if (allow_reversal) {
    std::vector<double> gr(n);
    for (int i = 0; i < n; ++i) gr[i] = L - gb[n - 1 - i];
    if (gaps_match(ga, gr, tol * L)) return true;
  }
  return false;
}

void dedup_insert(std::vector<PeriodicOrbit>& pool, PeriodicOrbit orb, double L, double tol,
                  bool allow_reversal) {
  for (const PeriodicOrbit& p : pool)
    if (same_orbit(p, orb, L, tol, allow_reversal)) return;
  pool.push_back(std::move(orb));
}

std::vector<double> star_seed(int n, int p, double L, double offset) {
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) s[i] = offset + static_cast<double>(i) * p * L / n;
  return s;
}

std::uint64_t start_key(int n, int p, int k) {
  return (static_cast<std::uint64_t>(n) << 42) ^ (static_cast<std::uint64_t>(p) << 21) ^
         static_cast<std::uint64_t>(k);
}

}  // namespace

PeriodicOrbit find_periodic(const ActionFunctional& F, const std::vector<double>& initial,
                            const SearchOptions& opts) {
  auto nr = newton_orbit(F, initial, opts);
  if (!nr) throw NoConvergenceError("gradient did not reach tolerance from this start");
  auto orb = make_orbit(F, *nr, opts);
  if (!orb) throw NoConvergenceError("limit configuration is degenerate");
  if (!orb->primitive) throw NotPrimitiveError("limit is a repetition of a shorter orbit");
  return *orb;
}

std::vector<PeriodicOrbit> search_periodic(const ActionFunctional& F, int n, int p,
                                           const SearchOptions& opts) {
  if (n < 2) throw DomainError("orbit needs at least two bounces");
  if (p < 1 || p >= n) throw DomainError("winding must lie strictly between 0 and the period");
  const double L = F.curve().perimeter();
  const SeedSequence seq(opts.seed);
  const int starts = std::max(1, opts.multistarts);

  std::vector<std::optional<PeriodicOrbit>> found(starts);
  parallel_for(static_cast<std::size_t>(starts), opts.threads, [&](std::size_t k) {
    std::vector<double> s0;
    if (k == 0) {
      s0 = star_seed(n, p, L, 0.0);
    } else {
      auto rng = seq.stream(start_key(n, p, static_cast<int>(k)));
      std::uniform_real_distribution<double> offset(0.0, L);
      std::uniform_real_distribution<double> jitter(-0.35 * L / n, 0.35 * L / n);
      s0 = star_seed(n, p, L, offset(rng));
      for (double& v : s0) v += jitter(rng);
    }
    auto nr = newton_orbit(F, s0, opts);
    if (!nr) return;
    auto orb = make_orbit(F, *nr, opts);
    if (orb && orb->primitive) found[k] = std::move(*orb);
  });

  std::vector<PeriodicOrbit> pool;
  for (auto& f : found)
    if (f) dedup_insert(pool, std::move(*f), L, opts.cluster_tol, F.symmetric());
  return pool;
}

PeriodicOrbit find_periodic(const ActionFunctional& F, int n, int p, const SearchOptions& opts) {
  auto pool = search_periodic(F, n, p, opts);
  const int cls = std::min(p, n - p);
  const PeriodicOrbit* best = nullptr;
  for (const PeriodicOrbit& orb : pool) {
    if (std::min(orb.winding, n - orb.winding) != cls) continue;
    if (!best || orb.length < best->length) best = &orb;
  }
  if (!best) throw NoConvergenceError("no orbit with the requested winding class was found");
  return *best;
}

std::vector<PeriodicOrbit> orbit_database(const ActionFunctional& F, int n_max,
                                          const SearchOptions& opts) {
  if (n_max < 2) throw DomainError("n_max must be at least 2");
  const double L = F.curve().perimeter();
  std::vector<PeriodicOrbit> pool;
  for (int n = 2; n <= n_max; ++n) {
    for (int p = 1; 2 * p <= n; ++p) {
      if (std::gcd(n, p) != 1) continue;
      for (PeriodicOrbit& orb : search_periodic(F, n, p, opts))
        dedup_insert(pool, std::move(orb), L, opts.cluster_tol, F.symmetric());
    }
  }
  return pool;
}

PeriodicOrbit shortest_closed(const ActionFunctional& F, int n_max, const SearchOptions& opts) {
  auto pool = orbit_database(F, n_max, opts);
  const PeriodicOrbit* best = nullptr;
  for (const PeriodicOrbit& orb : pool)
    if (!best || orb.length < best->length) best = &orb;
  if (!best) throw NoConvergenceError("no closed orbit found up to the requested period");
  return *best;
}

long count_orbits(const ActionFunctional& F, double T, int n_max, const SearchOptions& opts) {
  auto pool = orbit_database(F, n_max, opts);
  long count = 0;
  for (const PeriodicOrbit& orb : pool)
    if (orb.length <= T + 1e-9) ++count;
  return count;
}

std::vector<long> count_orbit_curve(const ActionFunctional& F, const std::vector<double>& T,
                                    int n_max, const SearchOptions& opts) {
  auto pool = orbit_database(F, n_max, opts);
  std::vector<long> out(T.size(), 0);
  for (std::size_t i = 0; i < T.size(); ++i)
    for (const PeriodicOrbit& orb : pool)
      if (orb.length <= T[i] + 1e-9) ++out[i];
  return out;
}

double growth_exponent(const std::vector<std::pair<double, long>>& samples) {
  std::vector<double> x, y;
  for (const auto& [t, p] : samples) {
    if (p > 0 && t > 0.0) {
      x.push_back(std::log(t));
      y.push_back(std::log(static_cast<double>(p)));
    }
  }
  if (x.size() < 4) throw InsufficientDataError("need at least 4 samples with positive counts");
  const double xm = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  const double ym = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  if (sxx <= 0.0) throw InsufficientDataError("threshold samples must span distinct values");
  return sxy / sxx;
}

}  // namespace carom
