#pragma once

#include <utility>
#include <vector>

#include "carom/vec2.hpp"

namespace carom {

enum class NormKind { Euclidean, Scaled, PGauge, RadialGauge };

// A (possibly asymmetric) Minkowski norm on the plane: positively homogeneous
// of degree 1, positive away from the origin, with a strictly convex unit
// ball.  RadialGauge defines N(v) = |v| * rho(arg v) with rho a positive
// finite trigonometric polynomial; odd harmonics give asymmetric gauges.
class MinkowskiNorm {
 public:
  static MinkowskiNorm euclidean();
  static MinkowskiNorm scaled(double factor);
  static MinkowskiNorm p_gauge(double p);
  static MinkowskiNorm radial_gauge(double rho0,
                                    std::vector<std::pair<double, double>> fourier);

  NormKind kind() const { return kind_; }
  double operator()(const Vec2& v) const;
  Vec2 gradient(const Vec2& v) const;
  bool is_symmetric() const;

 private:
  MinkowskiNorm() = default;
  void check_convexity() const;
  double rho(double th) const;
  double drho(double th) const;
  double ddrho(double th) const;

  NormKind kind_ = NormKind::Euclidean;
  double factor_ = 1.0;
  double p_ = 2.0;
  double rho0_ = 1.0;
  std::vector<std::pair<double, double>> fourier_;
};

}  // namespace carom
