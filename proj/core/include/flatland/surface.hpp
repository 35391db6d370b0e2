#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flatland/geom.hpp"

namespace flatland {

using PolyId = std::int64_t;

struct Polygon {
  PolyId id = 0;
  ConvexPolygon vertices;  // CCW, convex, >= 3 vertices
  int edge_count() const { return int(vertices.size()); }
  Point edge_start(int e) const { return vertices[size_t(e)]; }
  Point edge_end(int e) const { return vertices[(size_t(e) + 1) % vertices.size()]; }
};

struct EdgeRef {
  PolyId polygon = 0;
  int edge = 0;
  bool operator==(const EdgeRef& o) const {
    return polygon == o.polygon && edge == o.edge;
  }
  bool operator<(const EdgeRef& o) const {
    if (polygon != o.polygon) return polygon < o.polygon;
    return edge < o.edge;
  }
};

/// Identification of two parallel equal-length edges by a translation.
/// A point x in the left polygon's chart corresponds to x + translation in the
/// right polygon's chart; the left edge is carried onto the right edge
/// reversed.
struct Gluing {
  EdgeRef left, right;
  Vec2 translation;
  Gluing flipped() const { return {right, left, -translation}; }
};

/// Deterministic, pure description of a (possibly infinite) polygon complex.
/// Repeated queries must return identical answers.
class SurfaceProvider {
 public:
  virtual ~SurfaceProvider() = default;
  virtual Polygon polygon(PolyId id) const = 0;
  virtual Gluing gluing(const EdgeRef& e) const = 0;  // oriented: left == e
  virtual PolyId seed() const = 0;
  /// True when the developing map is globally injective and there are no
  /// singularities (the plane); lets radius computations return Infinite.
  virtual bool planar_no_singularities() const { return false; }
  /// A single chart covering the disk of squared radius r2 about the
  /// basepoint, when the provider can offer one (the plane).
  virtual std::optional<ConvexPolygon> planar_chart(const Rat& r2) const {
    (void)r2;
    return std::nullopt;
  }
};

struct SurfacePresentation {
  std::string name;
  std::map<PolyId, Polygon> polygons;  // finite presentations
  std::vector<Gluing> gluings;         // canonical orientation, finite case
  std::shared_ptr<const SurfaceProvider> provider;  // infinite presentations
  PolyId basepoint_polygon = 0;
  Point basepoint;

  bool finite() const { return provider == nullptr; }
  Polygon polygon(PolyId id) const;
  /// The gluing in which edge e participates, oriented so left == e.
  Gluing gluing(const EdgeRef& e) const;

  bool operator==(const SurfacePresentation& o) const;
};

struct MarkedSurface {
  SurfacePresentation surface;
  PolyId mark_polygon = 0;
  Point mark;
};

struct Violation {
  std::string code;    // stable identifier, e.g. "unpaired edge"
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
};

/// Total: never throws on malformed finite input. Provider-backed
/// presentations get local (seed-area) checks only.
ValidationReport validate(const SurfacePresentation& p);

struct VertexClassReport {
  std::vector<std::pair<PolyId, int>> corners;  // (polygon, vertex index)
  int cone_order = 1;   // total angle 2*pi*k; k >= 2 means puncture
  bool boundary = false;  // corner chain hits an unglued edge; cone_order unset
};

/// Corner classes with exact cone orders. Finite presentations only.
std::vector<VertexClassReport> vertex_links(const SurfacePresentation& p);

/// Cone order of the corner class containing (poly, vertex), by walking the
/// corner cycle. Works on provider-backed surfaces; throws on walk overflow.
int cone_order_at(const SurfacePresentation& s, PolyId poly, int vertex,
                  size_t cap = 100000);

/// The full corner cycle through (poly, vertex), in rotation order.
std::vector<std::pair<PolyId, int>> corner_cycle(const SurfacePresentation& s,
                                                 PolyId poly, int vertex,
                                                 size_t cap = 100000);

// Builtin families -----------------------------------------------------------

SurfacePresentation builtin_torus(const Vec2& v1, const Vec2& v2);
/// h, v: permutations of {0..n-1} as image lists; the group they generate
/// must act transitively.
SurfacePresentation builtin_origami(const std::vector<int>& h,
                                    const std::vector<int>& v);
/// Finite staircase approximation with n unit squares (h = cyclic shift,
/// v = adjacent transpositions).
SurfacePresentation builtin_staircase(int n);
/// Infinite staircase, provider-backed.
SurfacePresentation builtin_staircase_infinite();
/// The plane as a provider-backed unit grid with basepoint at the origin.
SurfacePresentation builtin_plane();

/// The L-shaped three-square origami with globally placed squares at
/// (0,0), (1,0), (0,1) and opposite-side identifications.
SurfacePresentation lshape_origami();

}  // namespace flatland
