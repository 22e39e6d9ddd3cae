#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "carom/vec2.hpp"

namespace carom {

enum class TilingKind { TriangleCentral, Parallelogram, Brick, WindTree, Custom };

// One concrete tile: local face index inside the fundamental domain plus
// integer lattice coordinates.
struct FaceRef {
  std::int64_t i = 0, j = 0;
  int f = 0;
};

inline bool operator==(const FaceRef& a, const FaceRef& b) {
  return a.i == b.i && a.j == b.j && a.f == b.f;
}

// The matching edge on the other side of an edge of a local face; the
// neighbouring face lives at the current cell shifted by (di, dj).
struct EdgeAdjacency {
  int face = -1;
  int edge = -1;
  int di = 0, dj = 0;
  bool open() const { return face < 0; }
};

// Proper 2-coloring of the infinite tiling, when one exists:
// color(i, j, f) = base[f] + x*i + y*j  (mod 2).
struct TwoColoring {
  std::vector<int> base;
  int x = 0, y = 0;
  int color(const FaceRef& r) const {
    return (base[r.f] + x * static_cast<int>(r.i & 1) + y * static_cast<int>(r.j & 1)) & 1;
  }
};

// Periodic polygonal tiling given by a fundamental domain of faces repeated
// along an integer lattice.  Faces are stored once in local coordinates; the
// tile at (i, j) is the local polygon translated by i*u + j*v.  Adjacency is
// derived by matching edges modulo lattice shifts.  The wind-tree kind keeps
// only the obstacle dimensions and is handled analytically by refract_step.
class Tiling {
 public:
  // Tiling by one triangle (angles alpha, beta at the unit-length base) and
  // its image under central symmetry, filling a parallelogram cell.
  static Tiling triangle_central_symmetry(double alpha, double beta);
  // Tiling by parallelograms spanned by (a, 0) and (b cos alpha, b sin alpha);
  // alpha is the interior angle between the sides.
  static Tiling parallelogram(double a, double b, double alpha);
  // Rows of unit squares, consecutive rows offset horizontally by theta.
  static Tiling brick(double theta);
  // Rectangular a x b obstacles centered at the integer lattice points.
  static Tiling wind_tree(double a, double b);
  static Tiling custom(std::vector<std::vector<Vec2>> faces, Vec2 u, Vec2 v);

  TilingKind kind() const { return kind_; }
  int face_count() const { return static_cast<int>(faces_.size()); }
  const std::vector<Vec2>& face_polygon(int f) const { return faces_[f]; }
  Vec2 lattice_u() const { return u_; }
  Vec2 lattice_v() const { return v_; }
  Vec2 cell_offset(const FaceRef& r) const {
    return {r.i * u_.x + r.j * v_.x, r.i * u_.y + r.j * v_.y};
  }
  std::vector<Vec2> polygon(const FaceRef& r) const;
  const EdgeAdjacency& adjacency(int f, int e) const { return adj_[f][e]; }
  const std::optional<TwoColoring>& two_coloring() const { return coloring_; }
  bool two_colorable() const { return coloring_.has_value(); }
  // Longest face diameter; used to scale tolerances.
  double scale() const { return scale_; }

  double tree_a() const { return tree_a_; }
  double tree_b() const { return tree_b_; }

  // Interior angle of face f at vertex c.
  double corner_angle(int f, int c) const;

 private:
  Tiling() = default;
  void finalize();  // derive adjacency, scale, and the 2-coloring

  TilingKind kind_ = TilingKind::Custom;
  std::vector<std::vector<Vec2>> faces_;
  Vec2 u_{1.0, 0.0}, v_{0.0, 1.0};
  std::vector<std::vector<EdgeAdjacency>> adj_;
  std::optional<TwoColoring> coloring_;
  double scale_ = 1.0;
  double tree_a_ = 0.0, tree_b_ = 0.0;
};

// ---------------------------------------------------------------------------
// refraction dynamics

// Trajectory state: the point is stored in cell-local coordinates
// (global position = point + i*u + j*v), which keeps positions O(cell size)
// no matter how far the trajectory travels.
struct RefractState {
  FaceRef face;
  Vec2 point;
  Vec2 dir;
};

// Advance to the first edge crossing of the current face, cross into the
// neighbouring face, and flip the component of the direction along the
// crossed edge (refraction with coefficient -1: the new ray is the axial
// reflection of the incoming ray across the edge line, traversed forward).
// Throws VertexHitError when the crossing lands within 1e-10 edge lengths of
// a tiling vertex and WindowExhaustedError when there is no face on the other
// side (open custom edges; wind-tree rays that never meet an obstacle).
RefractState refract_step(const Tiling& t, const RefractState& state);

enum class TrajectoryClass {
  Periodic,
  LinearEscape,
  BandTrapped,
  SelfIntersecting,
  VertexHit,
  BudgetExhausted,
};

const char* to_string(TrajectoryClass c);

struct SimulateOptions {
  long max_steps = 100000;
  // Recurrence matching tolerance (cell-local coordinates and direction).
  double tolerance = 1e-9;
  // Band verdict: one lattice coordinate confined to this many cells while
  // the other spreads over at least 4x as many.
  int band_window = 8;
  bool detect_self_intersections = true;
  bool track_face_visits = true;
  std::size_t record_limit = std::numeric_limits<std::size_t>::max();
};

struct TilingTrajectory {
  std::vector<RefractState> steps;  // recorded entry states (step 0 = start)
  TrajectoryClass classification = TrajectoryClass::BudgetExhausted;
  long step_count = 0;
  // Periodic / linear escape: recurrence length in steps and the lattice
  // displacement accumulated over one recurrence.
  long period = 0;
  std::int64_t drift_i = 0, drift_j = 0;
  Vec2 escape_vector;
  // Self-intersection: indices of the two crossing segments.
  long cross_a = -1, cross_b = -1;
  // First face that was entered twice before any recurrence closed (stays -1
  // on locally foldable tilings).
  long face_revisit_step = -1;
};

TilingTrajectory simulate(const Tiling& t, const RefractState& start,
                          const SimulateOptions& opt = {});

}  // namespace carom
