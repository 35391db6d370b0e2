#include "flatland/transform.hpp"

#include <algorithm>
#include <stdexcept>

namespace flatland {

SurfacePresentation gl2_act(const Mat2& a, const SurfacePresentation& s) {
  Rat det = a.det();
  if (det == 0) throw std::invalid_argument("singular matrix");
  if (det < 0) throw std::invalid_argument("orientation-reversing matrix");
  if (!s.finite())
    throw std::invalid_argument("gl2_act requires a finite presentation");
  SurfacePresentation out = s;
  for (auto& [id, poly] : out.polygons)
    for (Point& v : poly.vertices) v = a.apply(v);
  for (Gluing& g : out.gluings) g.translation = a.apply(g.translation);
  out.basepoint = a.apply(out.basepoint);
  return out;
}

SurfacePresentation basepoint_change(const MarkedSurface& m) {
  const SurfacePresentation& s = m.surface;
  Polygon poly = s.polygon(m.mark_polygon);
  if (polygon_contains(poly.vertices, m.mark) == Containment::Outside)
    throw std::invalid_argument("mark outside its polygon");
  for (int v = 0; v < poly.edge_count(); ++v) {
    if (!(m.mark == poly.vertices[size_t(v)])) continue;
    int k;
    try {
      k = cone_order_at(s, m.mark_polygon, v);
    } catch (const std::exception&) {
      k = -1;  // walk overflow: infinite angle, treated as a puncture
    }
    if (k != 1) throw std::invalid_argument("mark at a puncture");
  }
  SurfacePresentation out = s;
  out.basepoint_polygon = m.mark_polygon;
  out.basepoint = m.mark;
  return out;
}

DevelopedComplex fusion(const DevelopedComplex& p, const DevelopedComplex& q) {
  if (p.kind != ComplexKind::PlanarEmbedded || !p.region ||
      q.kind != ComplexKind::PlanarEmbedded || !q.region)
    throw std::invalid_argument(
        "fusion requires planar rect-union complexes with basepoints at the origin");
  std::vector<Rect> rects = p.region->rects;
  rects.insert(rects.end(), q.region->rects.begin(), q.region->rects.end());
  return rect_complex(rect_union_normalize(rects));
}

namespace {

// Fiber positions inside the closed r-disk; placed cells can poke past the
// disk, and those stray lifts must not enter the comparison.
std::vector<Point> fiber_positions(const ImmersionMap& im, PolyId poly,
                                   const Point& pt, const Rat& r2) {
  BasepointFiber f = point_fiber(im, poly, pt);
  std::vector<Point> out;
  for (const FiberPoint& p : f.points)
    if (norm2(p.position) <= r2) out.push_back(p.position);
  return out;
}

void split(const std::vector<Point>& a, const std::vector<Point>& b,
           std::vector<Point>* common, std::vector<Point>* only_a) {
  for (const Point& p : a) {
    if (std::find(b.begin(), b.end(), p) != b.end()) {
      if (common) common->push_back(p);
    } else {
      only_a->push_back(p);
    }
  }
}

std::optional<Point> pick_witness(const std::vector<Point>& diff) {
  std::optional<Point> w;
  for (const Point& p : diff) {
    if (!w || norm2(p) < norm2(*w) ||
        (norm2(p) == norm2(*w) && lex_less(*w, p)))
      w = p;
  }
  return w;
}

}  // namespace

IsoResult iso_at_radius(const SurfacePresentation& s,
                        const SurfacePresentation& t, const Rat& r2) {
  IsoResult res;
  DevelopedComplex ds = develop_disk(s, r2);
  DevelopedComplex dt = develop_disk(t, r2);
  ImmersionResult st = immerse(ds, t);
  if (auto* ni = std::get_if<NoImmersion>(&st)) {
    res.witness = ni->witness;
    return res;
  }
  ImmersionResult ts = immerse(dt, s);
  if (auto* ni = std::get_if<NoImmersion>(&ts)) {
    res.witness = ni->witness;
    return res;
  }
  ImmersionResult ss = immerse(ds, s);
  ImmersionResult tt = immerse(dt, t);
  std::vector<Point> fs = fiber_positions(std::get<ImmersionMap>(ss),
                                          s.basepoint_polygon, s.basepoint, r2);
  std::vector<Point> fst = fiber_positions(std::get<ImmersionMap>(st),
                                           t.basepoint_polygon, t.basepoint, r2);
  std::vector<Point> ft = fiber_positions(std::get<ImmersionMap>(tt),
                                          t.basepoint_polygon, t.basepoint, r2);
  std::vector<Point> fts = fiber_positions(std::get<ImmersionMap>(ts),
                                           s.basepoint_polygon, s.basepoint, r2);
  std::vector<Point> diff;
  split(fs, fst, &res.alignment.matched, &res.alignment.only_s);
  split(fst, fs, nullptr, &res.alignment.only_t);
  diff = res.alignment.only_s;
  diff.insert(diff.end(), res.alignment.only_t.begin(),
              res.alignment.only_t.end());
  std::vector<Point> d2a, d2b;
  split(ft, fts, nullptr, &d2a);
  split(fts, ft, nullptr, &d2b);
  diff.insert(diff.end(), d2a.begin(), d2a.end());
  diff.insert(diff.end(), d2b.begin(), d2b.end());
  if (diff.empty()) {
    res.value = true;
  } else {
    res.witness = pick_witness(diff);
  }
  return res;
}

AutomorphismVerdict is_affine_automorphism(const SurfacePresentation& s,
                                           const Mat2& a, PolyId mark_polygon,
                                           const Point& mark, const Rat& r2) {
  MarkedSurface m{s, mark_polygon, mark};
  SurfacePresentation moved = gl2_act(a, basepoint_change(m));
  IsoResult iso = iso_at_radius(moved, s, r2);
  return {iso.value, r2, iso.witness};
}

}  // namespace flatland
