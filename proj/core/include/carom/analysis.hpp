#pragma once

#include <vector>

#include "carom/curve.hpp"
#include "carom/phase.hpp"

namespace carom {

// Partition of the boundary into labeled arcs (breakpoints in arc length).
class SideLabeling {
 public:
  // One label per polygon side, breakpoints at the corners.
  static SideLabeling polygon_sides(const BoundaryCurve& curve);
  // k equal arcs starting at s = 0.
  static SideLabeling uniform_arcs(const BoundaryCurve& curve, int k);
  static SideLabeling from_breakpoints(double perimeter, std::vector<double> cuts);

  int alphabet_size() const { return static_cast<int>(cuts_.size()); }
  double perimeter() const { return perimeter_; }
  // Label of the arc containing s; throws LabelAmbiguousError when s lies
  // within tol * perimeter of a breakpoint.
  int label(double s, double tol = 1e-9) const;

 private:
  double perimeter_ = 0.0;
  std::vector<double> cuts_;  // sorted, first at 0
};

struct SymbolicCode {
  std::vector<int> word;
  int alphabet = 0;
};

// Label sequence of an orbit's bounce parameters.
SymbolicCode symbolic_code(const SideLabeling& labeling, const std::vector<double>& bounces,
                           double boundary_tol = 1e-9);

// Number of distinct length-n factors, n = 1..n_max, over a corpus of words.
// Each word is read cyclically (exact for periodic orbits; for truncated
// samples this is the periodic approximant, which keeps the subword laws
// p(n) <= p(n+1) <= |A| p(n) and p(n+m) <= p(n) p(m) valid on every corpus).
// Throws InsufficientDataError when the corpus has no nonempty word.
std::vector<long> complexity(const std::vector<std::vector<int>>& corpus, int n_max);

enum class GraphVerdict { Graph, NonGraph, Inconclusive };

struct GraphReport {
  GraphVerdict verdict = GraphVerdict::Inconclusive;
  double residual = 0.0;  // max interpolation residual (graph test)
  double fold_gap = 0.0;  // largest phi gap at coincident s (non-graph test)
};

// Decides whether an orbit lies on a curve phi = g(s): sorts by s, fits each
// odd-index point by a local cubic through the four nearest even-index
// points (periodic in s) and measures the residual.  Verdict graph when the residual is below graph_tol;
// non-graph when two points share s within s_tol but differ in phi by more
// than phi_tol.  Needs at least 100 points, else InsufficientDataError.
GraphReport invariant_graph_detect(const std::vector<PhasePoint>& orbit, double perimeter,
                                   double graph_tol = 1e-4 * 3.14159265358979323846,
                                   double s_tol = 1e-6,
                                   double phi_tol = 1e-2);

struct RotationReport {
  double value = 0.0;
  double half_width = 0.0;  // split-sample confidence half-width
  bool converged = false;   // half_width <= requested tolerance
};

// Average lifted boundary advance per step divided by the perimeter, with
// smooth-bump weighted (Birkhoff) averaging; the confidence interval comes
// from comparing the two half-sample estimates.  Needs >= 100 points.
RotationReport rotation_number(const std::vector<PhasePoint>& orbit, double perimeter,
                               double tolerance = 1e-9);

}  // namespace carom
