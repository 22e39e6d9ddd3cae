#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "carom/action.hpp"

namespace carom {

// A closed billiard polygon: critical point of the cyclic chord-length sum.
struct PeriodicOrbit {
  std::vector<double> s;   // boundary parameters, wrapped, rotated so s[0] is minimal
  int period = 0;          // number of bounces n
  int winding = 0;         // how many times the polygon wraps the boundary
  double length = 0.0;     // total (geometry-dependent) chord length
  double grad_norm = 0.0;  // final sup-norm of the length gradient
  int morse_index = -1;    // negative eigenvalue count of the Hessian; -1 if skipped
  bool primitive = true;
};

struct SearchOptions {
  int multistarts = 48;
  int max_iterations = 120;
  double grad_tol = 1e-9;
  // Orbits whose bounce-gap vectors agree within cluster_tol * perimeter (up
  // to cyclic shift and, for symmetric geometries, reversal) are one orbit.
  double cluster_tol = 1e-6;
  std::uint64_t seed = 20260813ULL;
  unsigned threads = 1;
  bool compute_index = true;
};

// Newton (with least-squares damping) on the gradient of the cyclic length,
// from an explicit initial parameter tuple.  Throws NoConvergenceError if the
// gradient cannot be driven below grad_tol, NotPrimitiveError if the limit is
// a repetition of a shorter orbit.
PeriodicOrbit find_periodic(const ActionFunctional& F, const std::vector<double>& initial,
                            const SearchOptions& opts = {});

// Multistart search for orbits with n bounces winding p times; returns every
// distinct orbit found (any winding), deduplicated.
std::vector<PeriodicOrbit> search_periodic(const ActionFunctional& F, int n, int p,
                                           const SearchOptions& opts = {});

// First found orbit whose unoriented winding class matches p.
PeriodicOrbit find_periodic(const ActionFunctional& F, int n, int p,
                            const SearchOptions& opts = {});

// All distinct primitive orbits with at most n_max bounces.
std::vector<PeriodicOrbit> orbit_database(const ActionFunctional& F, int n_max,
                                          const SearchOptions& opts = {});

// Shortest closed orbit with between 2 and n_max bounces.
PeriodicOrbit shortest_closed(const ActionFunctional& F, int n_max,
                              const SearchOptions& opts = {});

// Certified lower bound for the number of distinct primitive orbits of total
// length at most T, using at most n_max bounces.
long count_orbits(const ActionFunctional& F, double T, int n_max,
                  const SearchOptions& opts = {});

// Evaluate the count at many thresholds from one orbit database.
std::vector<long> count_orbit_curve(const ActionFunctional& F, const std::vector<double>& T,
                                    int n_max, const SearchOptions& opts = {});

// Least-squares slope of log P against log T over samples with P > 0.
// Throws InsufficientDataError with fewer than 4 usable samples.
double growth_exponent(const std::vector<std::pair<double, long>>& samples);

}  // namespace carom
