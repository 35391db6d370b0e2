#pragma once

#include <cstdlib>
#include <map>
#include <stdexcept>
#include <variant>
#include <vector>

#include "flatland/complex.hpp"

namespace flatland {

/// Raised when a computation exceeds its cell/crossing cap.
struct NonTermination : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RadiusTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Cell cap for develop/immerse BFS; FLATLAND_CELL_CAP overrides the default.
size_t cell_cap();

// ---------------------------------------------------------------------------
// Geodesic tracing

struct TraceEndpoint {
  PolyId polygon = 0;
  Point point;
};

struct TraceHitPuncture {
  PolyId polygon = 0;  // a corner representing the vertex class hit
  int vertex = 0;
  Rat dist2;  // squared distance traveled when hitting the cone point
};

using TraceResult = std::variant<TraceEndpoint, TraceHitPuncture>;

/// Follows the geodesic from `start` in direction `dir` for length sqrt(len2).
/// len2 / |dir|^2 must be a rational square (throws std::invalid_argument
/// otherwise: endpoints of other geodesics are irrational).
TraceResult trace(const SurfacePresentation& s, PolyId start_poly,
                  const Point& start, const Vec2& dir, const Rat& len2);

// ---------------------------------------------------------------------------
// Development of universal-cover disks

/// Develops the closed disk of squared radius r2 about the basepoint.
/// Cells are placed polygons; punctures strictly inside the disk become
/// singular marks. Around a cone point the development is truncated at total
/// angle 2π (a planar disk cannot wrap further); the two coincident boundary
/// rays are left unglued.
DevelopedComplex develop_disk(const SurfacePresentation& s, const Rat& r2);

// ---------------------------------------------------------------------------
// Immersions of disk complexes

/// One maximal piece of the immersion: on extent (⊆ cell `cell`'s polygon),
/// the map is z ↦ z + tau landing in target polygon `target`.
struct ImmersionPiece {
  int cell = 0;
  PolyId target = 0;
  Vec2 tau;
  ConvexPolygon extent;
};

struct ImmersionMap {
  DevelopedComplex source;
  SurfacePresentation target;
  std::vector<ImmersionPiece> pieces;
};

struct NoImmersion {
  Point witness;  // developed point of D where continuation meets a puncture
};

using ImmersionResult = std::variant<ImmersionMap, NoImmersion>;

/// Unique basepoint-respecting immersion of the disk complex D into S, by
/// analytic continuation of the germ 0 ↦ o_S. `reverse_order` flips BFS
/// tie-breaking (the result may not depend on it; used by property tests).
ImmersionResult immerse(const DevelopedComplex& d, const SurfacePresentation& s,
                        bool reverse_order = false);

struct Embedded {
  ImmersionMap map;
};

struct Overlap {
  Point x, y;  // distinct developed points of D with equal image
  ImmersionMap map;
};

using EmbedsResult = std::variant<Embedded, Overlap, NoImmersion>;

EmbedsResult embeds(const DevelopedComplex& d, const SurfacePresentation& s);

// ---------------------------------------------------------------------------
// Fibers

struct FiberPoint {
  int cell = 0;
  Point position;  // developed coordinates
};

struct BasepointFiber {
  std::vector<FiberPoint> points;  // duplicate-free, sorted by position
};

BasepointFiber point_fiber(const ImmersionMap& im, PolyId target_polygon,
                           const Point& target_point);

// ---------------------------------------------------------------------------
// Embedding radii

struct BindingEvent {
  enum class Kind { Singularity, SelfOverlap } kind = Kind::Singularity;
  Rat r2;
  Point position;  // singular lift, or overlap midpoint witness
};

struct EmbeddingRadius {
  SqRadius er2;
  std::vector<BindingEvent> events;  // all events binding at er2 (ties listed)
};

EmbeddingRadius embedding_radius(const SurfacePresentation& s, PolyId poly,
                                 const Point& point);

/// The open eps-ball about s embedded into S (basepoint moved to s):
/// an ImmersionMap whose source covers B_eps. Requires 0 < eps2 < ER^2.
ImmersionMap ball_embed(const SurfacePresentation& s, PolyId poly,
                        const Point& point, const Rat& eps2);

/// min over the compact region of ER(s)^2; rects may be degenerate (points,
/// segments). Throws RegionTouchesPuncture (as std::invalid_argument) when a
/// region point lies at a cone point.
SqRadius er_compact(const SurfacePresentation& s,
                    const std::vector<std::pair<PolyId, Rect>>& region);

}  // namespace flatland
