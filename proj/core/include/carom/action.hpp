#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "carom/curve.hpp"
#include "carom/hyperbolic.hpp"
#include "carom/norm.hpp"

namespace carom {

enum class ChordGeometry { Euclidean, Minkowski, Hyperbolic };

// Chord-length generator L(s_a, s_b) for closed polygons inscribed in a
// convex table; the geometry decides how a straight chord is measured.
class ActionFunctional {
 public:
  static ActionFunctional euclidean(BoundaryCurve curve);
  static ActionFunctional minkowski(BoundaryCurve curve, MinkowskiNorm norm);
  // Klein-model table: chords are straight segments measured hyperbolically.
  static ActionFunctional hyperbolic(BoundaryCurve curve);

  double chord(double sa, double sb) const;
  ChordGeometry geometry() const { return geom_; }
  const BoundaryCurve& curve() const { return curve_; }
  const MinkowskiNorm& norm() const { return norm_; }
  bool symmetric() const;

 private:
  ActionFunctional(ChordGeometry g, BoundaryCurve c)
      : geom_(g), curve_(std::move(c)), norm_(MinkowskiNorm::euclidean()) {}

  ChordGeometry geom_;
  BoundaryCurve curve_;
  MinkowskiNorm norm_;
  std::optional<HyperbolicTable> hyp_;
};

struct ActionResult {
  double value = 0.0;
  std::vector<double> gradient;
  Eigen::MatrixXd hessian;
};

// Cyclic total length sum_i L(s_i, s_{i+1}) with gradient and Hessian:
// analytic for Euclidean chords, central finite differences (step
// 1e-6 * perimeter) otherwise.  Throws DegenerateChordError when consecutive
// points coincide.
ActionResult action(const ActionFunctional& F, const std::vector<double>& s);

// Pure finite-difference version, kept as an independent cross-check.
ActionResult action_fd(const ActionFunctional& F, const std::vector<double>& s);

double action_value(const ActionFunctional& F, const std::vector<double>& s);

}  // namespace carom
