#pragma once

#include "flatland/surface.hpp"
#include "flatland/complex.hpp"

namespace flatland::testing {

/// The square torus presented as two triangles glued along the diagonal —
/// a different presentation of the same surface as builtin_torus((1,0),(0,1)).
inline SurfacePresentation torus_triangles() {
  SurfacePresentation s;
  s.name = "torus-triangles";
  Polygon p0;
  p0.id = 0;
  p0.vertices = {Point(0, 0), Point(1, 0), Point(1, 1)};
  Polygon p1;
  p1.id = 1;
  p1.vertices = {Point(0, 0), Point(1, 1), Point(0, 1)};
  s.polygons[0] = p0;
  s.polygons[1] = p1;
  s.gluings.push_back({{0, 2}, {1, 0}, Vec2(0, 0)});
  s.gluings.push_back({{0, 0}, {1, 1}, Vec2(0, 1)});
  s.gluings.push_back({{0, 1}, {1, 2}, Vec2(-1, 0)});
  s.basepoint_polygon = 0;
  s.basepoint = Point(Rat(1, 2), Rat(1, 2));
  return s;
}

inline DevelopedComplex square_disk(const Rat& r) {
  return rect_complex(rect_union_normalize({Rect(Point(-r, -r), Point(r, r))}));
}

}  // namespace flatland::testing
