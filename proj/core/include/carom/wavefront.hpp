#pragma once

#include <vector>

#include "carom/curve.hpp"

namespace carom {

// Polyline piece of a propagating front; rays in one piece share the same
// reflection count (the front is discontinuous where the count changes).
struct FrontPiece {
  std::vector<Vec2> points;
  int reflections = 0;
};

struct WaveFront {
  double t = 0.0;
  std::vector<FrontPiece> pieces;
  int dropped_rays = 0;  // tangential rays removed from the fan

  double length() const;
};

// Locus of ray endpoints at path length t for a fan of rays from an interior
// source, propagated with specular reflections.
WaveFront wave_front(const BoundaryCurve& table, const Vec2& source, double t,
                     int ray_count = 4096);

struct DensityCurve {
  std::vector<double> time;
  std::vector<double> covered;  // fraction of interior grid cells touched so far
  int dropped_rays = 0;
};

// Covering fraction of an eps-grid over the table by the fronts sampled at
// times_per_unit equally spaced times per unit of path length, up to T.
DensityCurve front_density(const BoundaryCurve& table, const Vec2& source, double T, double eps,
                           int ray_count = 4096, int times_per_unit = 64);

}  // namespace carom
