#pragma once

#include <optional>
#include <set>
#include <vector>

#include "flatland/surface.hpp"

namespace flatland {

/// A squared radius; distances between rational points have rational squares.
struct SqRadius {
  bool infinite = false;
  Rat value;

  SqRadius() = default;
  explicit SqRadius(Rat v) : value(std::move(v)) {}
  static SqRadius inf() {
    SqRadius r;
    r.infinite = true;
    return r;
  }
  bool operator==(const SqRadius& o) const {
    if (infinite != o.infinite) return false;
    return infinite || value == o.value;
  }
};

enum class ComplexKind {
  Developed,       // built by developing a surface; cells may overlap in the plane
  PlanarEmbedded,  // an embedded plane region (rectangular-union disk, chart)
};

struct DevCell {
  int id = 0;
  PolyId source = -1;   // -1 for synthetic cells (rect unions, plane charts)
  Vec2 placement;       // developed position = source-local point + placement
  ConvexPolygon poly;   // the placed cell, in developed coordinates
};

/// Identification of (a portion of) two cell edges. The shared developed
/// segment runs seg_a -> seg_b as seen along cell_a's edge orientation.
struct DevAdjacency {
  int cell_a = 0, edge_a = 0;
  int cell_b = 0, edge_b = 0;
  Point seg_a, seg_b;
};

struct SingularMark {
  Point position;  // developed coordinates
  Rat dist2;       // squared distance from the origin
};

struct DevelopedComplex {
  ComplexKind kind = ComplexKind::Developed;
  std::vector<DevCell> cells;
  std::vector<DevAdjacency> adjacency;
  std::vector<SingularMark> marks;
  int basepoint_cell = 0;  // the basepoint develops to (0,0) in this cell
  bool is_disk = false;
  std::optional<Rat> r2;            // set when built by develop_disk
  std::optional<RectUnion> region;  // set for PlanarEmbedded rect complexes

  // Interiority bookkeeping for Developed complexes: edges covered by an
  // adjacency, and corners whose vertex fan closed up (regular points).
  std::set<std::pair<int, int>> glued_edges;        // (cell, edge)
  std::set<std::pair<int, int>> closed_fan_corners; // (cell, vertex)

  const DevCell& cell(int id) const { return cells[size_t(id)]; }
};

/// Builds a PlanarEmbedded disk complex from a rectangular union containing
/// (0,0), one cell per canonical rect, adjacencies along shared boundary
/// segments. Throws std::invalid_argument when (0,0) is not in the union.
DevelopedComplex rect_complex(const RectUnion& u);

/// A single synthetic chart cell (used for the plane).
DevelopedComplex single_chart_complex(const ConvexPolygon& chart);

/// Is the developed point z, known to lie in the closed cell `cell`, in the
/// topological interior of the complex?
bool complex_point_interior(const DevelopedComplex& d, int cell, const Point& z);

/// Euler characteristic of the complex (corners and edges identified through
/// adjacencies). 1 for disks.
int complex_euler_characteristic(const DevelopedComplex& d);

/// Total area (doubled) of the cells.
Rat complex_area2(const DevelopedComplex& d);

}  // namespace flatland
