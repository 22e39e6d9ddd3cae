#pragma once

#include <cstddef>
#include <vector>

#include "carom/tiling.hpp"
#include "carom/vec2.hpp"

namespace carom {

// Plane isometry x -> Q x + t with orthogonal Q; reflections allowed.
struct FoldIsometry {
  Mat2 Q = Mat2::identity();
  Vec2 t;
  Vec2 apply(const Vec2& x) const { return Q * x + t; }
};

// a after b: (a o b)(x) = a(b(x)).
FoldIsometry compose(const FoldIsometry& a, const FoldIsometry& b);
FoldIsometry reflection_across_line(const Vec2& point, const Vec2& direction);

// Composition s_{e1} o ... o s_{en} of axial symmetries across the edges a
// path crosses, listed in crossing order starting from the base face.  The
// empty path gives the identity.  Invalid edge indices or open edges raise
// PathError.
FoldIsometry fold_map(const Tiling& t, const FaceRef& base, const std::vector<int>& edges);

struct FoldScanReport {
  std::vector<Mat2> orthogonal_parts;
  std::vector<Vec2> kernel_translations;  // nonzero translations with Q ~ I
  bool c1 = false;  // orthogonal parts finite and closed under composition
  bool c2 = false;  // kernel translations form a rank-2 lattice
  Vec2 lattice_u, lattice_v;  // reduced lattice basis when c2 holds
  int radius = 0;
  std::size_t states_explored = 0;
  // The enumeration horizon was cut short; c1/c2 describe the partial data.
  bool budget_exceeded = false;
  bool verdict() const { return c1 && c2; }
};

// Breadth-first enumeration of fold over all paths of length <= radius from
// the base face (0,0,0); isometries are deduplicated at 1e-9.  Verdicts are
// statements about the enumerated horizon, never proofs.
FoldScanReport fold_group_scan(const Tiling& t, int radius,
                               std::size_t node_budget = 400000);

// Parallelogram-tiling angle criterion: alpha must be one of the seven
// admissible angles {pi/12, 5pi/12, pi/6, pi/3, pi/8, 3pi/8, pi/4} (within
// 1e-12) and the rotation by 4*alpha written in the basis of the side vectors
// (a, 0), (b cos alpha, b sin alpha) must have all rational entries
// (denominators up to 1e6, matched to 1e-9).
bool check_foldability(double alpha, double a, double b);

// Alternating sum of the interior angles around the tiling vertex given as
// corner `corner` of face `at`; throws NotAlternatingError when the valence
// is odd.  The overall sign depends on the starting corner.
double local_defect(const Tiling& t, const FaceRef& at, int corner);

}  // namespace carom
