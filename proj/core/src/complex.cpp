#include "flatland/complex.hpp"

#include <functional>
#include <numeric>
#include <stdexcept>

namespace flatland {

DevelopedComplex rect_complex(const RectUnion& u) {
  DevelopedComplex d;
  d.kind = ComplexKind::PlanarEmbedded;
  d.region = u;
  d.is_disk = u.is_disk;
  for (size_t i = 0; i < u.rects.size(); ++i) {
    DevCell c;
    c.id = int(i);
    c.source = -1;
    c.poly = u.rects[i].to_polygon();
    d.cells.push_back(std::move(c));
  }
  // Canonical slabs only touch across horizontal boundaries.
  for (size_t i = 0; i < u.rects.size(); ++i) {
    for (size_t j = 0; j < u.rects.size(); ++j) {
      if (i == j) continue;
      const Rect &a = u.rects[i], &b = u.rects[j];
      if (a.hi.y != b.lo.y) continue;
      Rat x0 = rat_max(a.lo.x, b.lo.x), x1 = rat_min(a.hi.x, b.hi.x);
      if (x0 >= x1) continue;
      DevAdjacency adj;
      adj.cell_a = int(i);
      adj.edge_a = 2;  // top of a, running right to left
      adj.cell_b = int(j);
      adj.edge_b = 0;  // bottom of b, running left to right
      adj.seg_a = Point(x1, a.hi.y);
      adj.seg_b = Point(x0, a.hi.y);
      d.adjacency.push_back(std::move(adj));
    }
  }
  int base = -1;
  for (size_t i = 0; i < u.rects.size(); ++i) {
    if (u.rects[i].contains_closed(Point(0, 0))) {
      base = int(i);
      break;
    }
  }
  if (base < 0)
    throw std::invalid_argument("disk complex must contain the origin");
  d.basepoint_cell = base;
  return d;
}

DevelopedComplex single_chart_complex(const ConvexPolygon& chart) {
  DevelopedComplex d;
  d.kind = ComplexKind::PlanarEmbedded;
  d.is_disk = true;
  DevCell c;
  c.id = 0;
  c.source = -1;
  c.poly = chart;
  d.cells.push_back(std::move(c));
  d.basepoint_cell = 0;
  if (chart.size() == 4 && chart[0].x == chart[3].x && chart[0].y == chart[1].y &&
      chart[2].x == chart[1].x && chart[2].y == chart[3].y &&
      chart[0].x < chart[2].x && chart[0].y < chart[2].y) {
    d.region = rect_union_normalize({Rect(chart[0], chart[2])});
  }
  if (polygon_contains(chart, Point(0, 0)) == Containment::Outside)
    throw std::invalid_argument("chart complex must contain the origin");
  return d;
}

bool complex_point_interior(const DevelopedComplex& d, int cell, const Point& z) {
  const DevCell& c = d.cell(cell);
  if (d.kind == ComplexKind::PlanarEmbedded) {
    if (d.region) return d.region->member_interior(z);
    return polygon_contains(c.poly, z) == Containment::Inside;
  }
  Containment loc = polygon_contains(c.poly, z);
  if (loc == Containment::Inside) return true;
  if (loc == Containment::Outside) return false;
  size_t n = c.poly.size();
  for (size_t v = 0; v < n; ++v) {
    if (z == c.poly[v]) return d.closed_fan_corners.count({cell, int(v)}) > 0;
  }
  for (size_t e = 0; e < n; ++e) {
    const Point &a = c.poly[e], &b = c.poly[(e + 1) % n];
    if (cross(b - a, z - a) == 0 && dot(z - a, b - a) > 0 &&
        dot(z - b, a - b) > 0) {
      return d.glued_edges.count({cell, int(e)}) > 0;
    }
  }
  return false;
}

int complex_euler_characteristic(const DevelopedComplex& d) {
  if (d.kind != ComplexKind::Developed)
    throw std::invalid_argument(
        "euler characteristic supported for developed complexes only");
  // Union-find over corners (cell, vertex).
  std::vector<size_t> offset(d.cells.size() + 1, 0);
  for (size_t i = 0; i < d.cells.size(); ++i)
    offset[i + 1] = offset[i] + d.cells[i].poly.size();
  std::vector<size_t> parent(offset.back());
  std::iota(parent.begin(), parent.end(), size_t(0));
  std::function<size_t(size_t)> find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](size_t a, size_t b) { parent[find(a)] = find(b); };
  auto corner = [&](int cell, int v) {
    size_t n = d.cells[size_t(cell)].poly.size();
    return offset[size_t(cell)] + size_t(v) % n;
  };
  for (const DevAdjacency& a : d.adjacency) {
    // Full-edge identification: start of edge_a meets end of edge_b.
    unite(corner(a.cell_a, a.edge_a), corner(a.cell_b, a.edge_b + 1));
    unite(corner(a.cell_a, a.edge_a + 1), corner(a.cell_b, a.edge_b));
  }
  std::set<size_t> roots;
  for (size_t i = 0; i < parent.size(); ++i) roots.insert(find(i));
  long V = long(roots.size());
  long E = long(offset.back()) - long(d.adjacency.size());
  long F = long(d.cells.size());
  return int(V - E + F);
}

Rat complex_area2(const DevelopedComplex& d) {
  Rat a = 0;
  for (const DevCell& c : d.cells) a += polygon_area2(c.poly);
  return a;
}

}  // namespace flatland
