#include "flatland/surface.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace flatland {

namespace {

std::string edge_str(const EdgeRef& e) {
  std::ostringstream os;
  os << "polygon " << e.polygon << " edge " << e.edge;
  return os.str();
}

}  // namespace

Polygon SurfacePresentation::polygon(PolyId id) const {
  if (provider) return provider->polygon(id);
  auto it = polygons.find(id);
  if (it == polygons.end())
    throw std::out_of_range("no polygon with id " + std::to_string(id));
  return it->second;
}

Gluing SurfacePresentation::gluing(const EdgeRef& e) const {
  if (provider) return provider->gluing(e);
  for (const Gluing& g : gluings) {
    if (g.left == e) return g;
    if (g.right == e) return g.flipped();
  }
  throw std::out_of_range("no gluing for " + edge_str(e));
}

bool SurfacePresentation::operator==(const SurfacePresentation& o) const {
  auto poly_eq = [](const std::map<PolyId, Polygon>& a,
                    const std::map<PolyId, Polygon>& b) {
    if (a.size() != b.size()) return false;
    for (auto ita = a.begin(), itb = b.begin(); ita != a.end(); ++ita, ++itb) {
      if (ita->first != itb->first) return false;
      if (ita->second.vertices != itb->second.vertices) return false;
    }
    return true;
  };
  auto gluing_eq = [](const std::vector<Gluing>& a, const std::vector<Gluing>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
      const Gluing &x = a[i], &y = b[i];
      bool same = x.left == y.left && x.right == y.right &&
                  x.translation == y.translation;
      bool flip = x.left == y.right && x.right == y.left &&
                  x.translation == -y.translation;
      if (!same && !flip) return false;
    }
    return true;
  };
  return provider == o.provider && poly_eq(polygons, o.polygons) &&
         gluing_eq(gluings, o.gluings) &&
         basepoint_polygon == o.basepoint_polygon && basepoint == o.basepoint;
}

// ---------------------------------------------------------------------------
// Corner cycles and cone orders

namespace {

// One step of the corner walk, rotating counterclockwise around the vertex:
// cross the incoming edge (v-1 -> v) of the current corner. Returns nullopt
// when that edge is unglued.
std::optional<std::pair<PolyId, int>> corner_step(const SurfacePresentation& s,
                                                  PolyId poly, int vertex) {
  Polygon p = s.polygon(poly);
  int n = p.edge_count();
  int e_in = (vertex - 1 + n) % n;
  Gluing g;
  try {
    g = s.gluing({poly, e_in});
  } catch (const std::out_of_range&) {
    return std::nullopt;
  }
  // The gluing carries vertex v (the end of edge e_in) to the start vertex of
  // the partner edge.
  return std::make_pair(g.right.polygon, g.right.edge);
}

// Does the CCW arc (a, b], of angular width in (0, pi], contain direction r?
bool arc_contains(const Vec2& a, const Vec2& b, const Vec2& r) {
  Rat ab = cross(a, b);
  if (ab > 0) return cross(a, r) > 0 && cross(r, b) >= 0;
  // width exactly pi: b is opposite a
  return cross(a, r) > 0 || (cross(a, r) == 0 && dot(a, r) < 0);
}

struct CornerWalk {
  std::vector<std::pair<PolyId, int>> corners;
  int cone_order = 0;
  bool boundary = false;
};

CornerWalk walk_corner(const SurfacePresentation& s, PolyId poly, int vertex,
                       size_t cap) {
  CornerWalk w;
  std::pair<PolyId, int> start{poly, vertex}, cur = start;
  // Outgoing-ray direction of the starting corner, the reference for counting
  // full turns. Gluings are translations, so polygon-local edge directions
  // are development directions.
  Polygon p0 = s.polygon(poly);
  Vec2 ref = p0.edge_end(vertex) - p0.edge_start(vertex);
  int turns = 0;
  for (size_t steps = 0;; ++steps) {
    if (steps > cap)
      throw std::runtime_error("corner cycle exceeds cap; singular class too large or invalid gluings");
    w.corners.push_back(cur);
    auto next = corner_step(s, cur.first, cur.second);
    if (!next) {
      w.boundary = true;
      return w;
    }
    // The wedge crossed spans CCW from this corner's outgoing ray to the
    // next corner's outgoing ray; count passes of the reference direction.
    Polygon pc = s.polygon(cur.first);
    Vec2 a = pc.edge_end(cur.second) - pc.edge_start(cur.second);
    Polygon pn = s.polygon(next->first);
    Vec2 b = pn.edge_end(next->second) - pn.edge_start(next->second);
    if (arc_contains(a, b, ref)) ++turns;
    if (*next == start) break;
    cur = *next;
  }
  w.cone_order = turns;
  return w;
}

}  // namespace

std::vector<std::pair<PolyId, int>> corner_cycle(const SurfacePresentation& s,
                                                 PolyId poly, int vertex,
                                                 size_t cap) {
  return walk_corner(s, poly, vertex, cap).corners;
}

int cone_order_at(const SurfacePresentation& s, PolyId poly, int vertex,
                  size_t cap) {
  CornerWalk w = walk_corner(s, poly, vertex, cap);
  if (w.boundary)
    throw std::runtime_error("corner class at " +
                             edge_str({poly, vertex}) + " hits an unglued edge");
  return w.cone_order;
}

std::vector<VertexClassReport> vertex_links(const SurfacePresentation& p) {
  if (!p.finite())
    throw std::invalid_argument("vertex_links requires a finite presentation");
  std::vector<VertexClassReport> out;
  std::set<std::pair<PolyId, int>> seen;
  for (const auto& [id, poly] : p.polygons) {
    for (int v = 0; v < poly.edge_count(); ++v) {
      if (seen.count({id, v})) continue;
      CornerWalk w = walk_corner(p, id, v, 16 * p.polygons.size() * 16 + 64);
      if (w.boundary) {
        // Walk clockwise from the start as well so the chain is complete.
        std::pair<PolyId, int> cur{id, v};
        std::vector<std::pair<PolyId, int>> back;
        for (;;) {
          // Inverse step: cross the outgoing edge (v -> v+1).
          Gluing g;
          try {
            g = p.gluing({cur.first, cur.second});
          } catch (const std::out_of_range&) {
            break;
          }
          Polygon q = p.polygon(g.right.polygon);
          cur = {g.right.polygon, (g.right.edge + 1) % q.edge_count()};
          back.push_back(cur);
        }
        std::reverse(back.begin(), back.end());
        back.insert(back.end(), w.corners.begin(), w.corners.end());
        w.corners = std::move(back);
      }
      VertexClassReport r;
      r.corners = w.corners;
      r.boundary = w.boundary;
      r.cone_order = w.boundary ? 0 : w.cone_order;
      out.push_back(r);
      for (auto& c : r.corners) seen.insert(c);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void check_gluing_geometry(const SurfacePresentation& p, const Gluing& g,
                           ValidationReport& rep) {
  const Polygon pl = p.polygon(g.left.polygon);
  const Polygon pr = p.polygon(g.right.polygon);
  Point a1 = pl.edge_start(g.left.edge), b1 = pl.edge_end(g.left.edge);
  Point a2 = pr.edge_start(g.right.edge), b2 = pr.edge_end(g.right.edge);
  Vec2 d1 = b1 - a1, d2 = b2 - a2;
  if (cross(d1, d2) != 0) {
    rep.violations.push_back({"paired edges not parallel",
                              edge_str(g.left) + " vs " + edge_str(g.right)});
    return;
  }
  if (norm2(d1) != norm2(d2)) {
    rep.violations.push_back({"length mismatch",
                              edge_str(g.left) + " vs " + edge_str(g.right)});
    return;
  }
  // Translation must carry the left edge onto the right edge reversed.
  if (a1 + g.translation != b2 || b1 + g.translation != a2) {
    rep.violations.push_back({"bad gluing translation",
                              edge_str(g.left) + " vs " + edge_str(g.right)});
  }
}

void check_basepoint(const SurfacePresentation& p, ValidationReport& rep,
                     bool structure_ok) {
  Polygon bp;
  try {
    bp = p.polygon(p.basepoint_polygon);
  } catch (const std::exception&) {
    rep.violations.push_back({"unknown polygon",
                              "basepoint polygon " +
                                  std::to_string(p.basepoint_polygon)});
    return;
  }
  if (polygon_contains(bp.vertices, p.basepoint) == Containment::Outside) {
    rep.violations.push_back({"basepoint outside polygon", ""});
    return;
  }
  if (!structure_ok) return;
  for (int v = 0; v < bp.edge_count(); ++v) {
    if (p.basepoint == bp.vertices[size_t(v)]) {
      int k;
      try {
        k = cone_order_at(p, p.basepoint_polygon, v);
      } catch (const std::exception&) {
        return;  // already reported as a structural violation
      }
      if (k >= 2)
        rep.violations.push_back({"basepoint in singular class",
                                  "cone order " + std::to_string(k)});
    }
  }
}

}  // namespace

ValidationReport validate(const SurfacePresentation& p) {
  ValidationReport rep;
  if (p.provider) {
    // Local checks at the seed only; the provider contract covers the rest.
    Polygon seed = p.provider->polygon(p.provider->seed());
    if (!polygon_is_convex_ccw(seed.vertices))
      rep.violations.push_back({"non-convex polygon",
                                "seed polygon " + std::to_string(seed.id)});
    check_basepoint(p, rep, false);
    return rep;
  }

  if (p.polygons.empty()) {
    rep.violations.push_back({"empty presentation", ""});
    return rep;
  }
  bool polys_ok = true;
  for (const auto& [id, poly] : p.polygons) {
    if (poly.id != id)
      rep.violations.push_back({"polygon id mismatch", std::to_string(id)});
    if (!polygon_is_convex_ccw(poly.vertices)) {
      rep.violations.push_back({"non-convex polygon", std::to_string(id)});
      polys_ok = false;
    }
  }
  if (!polys_ok) {
    check_basepoint(p, rep, false);
    return rep;
  }

  // Every edge in exactly one gluing.
  std::map<EdgeRef, int> uses;
  bool refs_ok = true;
  for (const Gluing& g : p.gluings) {
    for (const EdgeRef& e : {g.left, g.right}) {
      auto it = p.polygons.find(e.polygon);
      if (it == p.polygons.end()) {
        rep.violations.push_back({"unknown polygon", edge_str(e)});
        refs_ok = false;
        continue;
      }
      if (e.edge < 0 || e.edge >= it->second.edge_count()) {
        rep.violations.push_back({"bad edge index", edge_str(e)});
        refs_ok = false;
        continue;
      }
      ++uses[e];
    }
    if (g.left == g.right) {
      rep.violations.push_back({"edge glued to itself", edge_str(g.left)});
      refs_ok = false;
    }
  }
  bool pairing_ok = refs_ok;
  for (const auto& [id, poly] : p.polygons) {
    for (int e = 0; e < poly.edge_count(); ++e) {
      int u = uses.count({id, e}) ? uses[{id, e}] : 0;
      if (u == 0) {
        rep.violations.push_back({"unpaired edge", edge_str({id, e})});
        pairing_ok = false;
      } else if (u > 1) {
        rep.violations.push_back({"edge glued twice", edge_str({id, e})});
        pairing_ok = false;
      }
    }
  }

  bool geometry_ok = true;
  if (refs_ok) {
    size_t before = rep.violations.size();
    for (const Gluing& g : p.gluings) check_gluing_geometry(p, g, rep);
    geometry_ok = rep.violations.size() == before;
  }

  // Connectivity of the gluing graph.
  if (refs_ok && !p.polygons.empty()) {
    std::map<PolyId, PolyId> parent;
    for (const auto& [id, _] : p.polygons) parent[id] = id;
    std::function<PolyId(PolyId)> find = [&](PolyId x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const Gluing& g : p.gluings)
      parent[find(g.left.polygon)] = find(g.right.polygon);
    PolyId root = find(p.polygons.begin()->first);
    for (const auto& [id, _] : p.polygons) {
      if (find(id) != root) {
        rep.violations.push_back({"disconnected gluing graph", ""});
        break;
      }
    }
  }

  check_basepoint(p, rep, pairing_ok && geometry_ok);
  return rep;
}

// ---------------------------------------------------------------------------
// Builtin families

SurfacePresentation builtin_torus(const Vec2& v1, const Vec2& v2) {
  Vec2 a = v1, b = v2;
  Rat c = cross(a, b);
  if (c == 0)
    throw std::invalid_argument("torus vectors must be linearly independent");
  if (c < 0) std::swap(a, b);
  SurfacePresentation s;
  s.name = "torus";
  Polygon p;
  p.id = 0;
  p.vertices = {Point(0, 0), a, a + b, b};
  s.polygons[0] = p;
  // edge 0 (0 -> a) onto edge 2 (a+b -> b) reversed; edge 1 onto edge 3.
  s.gluings.push_back({{0, 0}, {0, 2}, b});
  s.gluings.push_back({{0, 1}, {0, 3}, -a});
  s.basepoint_polygon = 0;
  s.basepoint = (a + b) * Rat(1, 2);
  return s;
}

namespace {

void check_permutation(const std::vector<int>& f, size_t n, const char* which) {
  if (f.size() != n)
    throw std::invalid_argument(std::string(which) + " permutation has wrong size");
  std::vector<bool> hit(n, false);
  for (int x : f) {
    if (x < 0 || size_t(x) >= n || hit[size_t(x)])
      throw std::invalid_argument(std::string(which) + " is not a permutation");
    hit[size_t(x)] = true;
  }
}

}  // namespace

SurfacePresentation builtin_origami(const std::vector<int>& h,
                                    const std::vector<int>& v) {
  size_t n = h.size();
  if (n == 0) throw std::invalid_argument("origami needs at least one square");
  check_permutation(h, n, "h");
  check_permutation(v, n, "v");
  // Transitivity of <h, v>.
  {
    std::vector<bool> seen(n, false);
    std::vector<int> stack{0};
    seen[0] = true;
    size_t cnt = 1;
    std::vector<int> hinv(n), vinv(n);
    for (size_t i = 0; i < n; ++i) hinv[size_t(h[i])] = int(i);
    for (size_t i = 0; i < n; ++i) vinv[size_t(v[i])] = int(i);
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (int j : {h[size_t(i)], v[size_t(i)], hinv[size_t(i)], vinv[size_t(i)]}) {
        if (!seen[size_t(j)]) {
          seen[size_t(j)] = true;
          ++cnt;
          stack.push_back(j);
        }
      }
    }
    if (cnt != n)
      throw std::invalid_argument("origami permutation group is not transitive");
  }
  SurfacePresentation s;
  s.name = "origami";
  ConvexPolygon unit = {Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)};
  for (size_t i = 0; i < n; ++i) {
    Polygon p;
    p.id = PolyId(i);
    p.vertices = unit;
    s.polygons[p.id] = p;
  }
  for (size_t i = 0; i < n; ++i) {
    // right edge of i onto left edge of h(i); top of i onto bottom of v(i).
    s.gluings.push_back({{PolyId(i), 1}, {PolyId(h[i]), 3}, Vec2(-1, 0)});
    s.gluings.push_back({{PolyId(i), 2}, {PolyId(v[i]), 0}, Vec2(0, -1)});
  }
  s.basepoint_polygon = 0;
  s.basepoint = Point(Rat(1, 2), Rat(1, 2));
  return s;
}

SurfacePresentation builtin_staircase(int n) {
  if (n < 1) throw std::invalid_argument("staircase needs n >= 1");
  // h swaps {2k, 2k+1}; v swaps {2k+1, 2k+2}; unmatched squares stay fixed.
  std::vector<int> h(size_t(n), 0), v(size_t(n), 0);
  for (int i = 0; i < n; ++i) {
    h[size_t(i)] = (i % 2 == 0) ? (i + 1 < n ? i + 1 : i) : i - 1;
    v[size_t(i)] = (i % 2 == 1) ? (i + 1 < n ? i + 1 : i) : (i > 0 ? i - 1 : i);
  }
  SurfacePresentation s = builtin_origami(h, v);
  s.name = "staircase-" + std::to_string(n);
  return s;
}

namespace {

class StaircaseProvider final : public SurfaceProvider {
 public:
  Polygon polygon(PolyId id) const override {
    Polygon p;
    p.id = id;
    p.vertices = {Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)};
    return p;
  }
  Gluing gluing(const EdgeRef& e) const override {
    PolyId i = e.polygon;
    PolyId hi = (i % 2 == 0) ? i + 1 : i - 1;        // h swaps {2k, 2k+1}
    PolyId vi = ((i % 2 + 2) % 2 == 1) ? i + 1 : i - 1;  // v swaps {2k+1, 2k+2}
    switch (e.edge) {
      case 1: return {{i, 1}, {hi, 3}, Vec2(-1, 0)};
      case 3: return {{i, 3}, {hi, 1}, Vec2(1, 0)};
      case 2: return {{i, 2}, {vi, 0}, Vec2(0, -1)};
      case 0: return {{i, 0}, {vi, 2}, Vec2(0, 1)};
      default: throw std::out_of_range("bad edge index");
    }
  }
  PolyId seed() const override { return 0; }
};

class PlaneProvider final : public SurfaceProvider {
 public:
  static PolyId pack(std::int64_t i, std::int64_t j) {
    std::uint64_t u = (std::uint64_t(std::uint32_t(std::int32_t(i))) << 32) |
                      std::uint32_t(std::int32_t(j));
    return PolyId(u);
  }
  static std::pair<std::int64_t, std::int64_t> unpack(PolyId id) {
    std::uint64_t u = std::uint64_t(id);
    std::int64_t i = std::int32_t(std::uint32_t(u >> 32));
    std::int64_t j = std::int32_t(std::uint32_t(u));
    return {i, j};
  }
  Polygon polygon(PolyId id) const override {
    auto [i, j] = unpack(id);
    Polygon p;
    p.id = id;
    p.vertices = {Point(i, j), Point(i + 1, j), Point(i + 1, j + 1),
                  Point(i, j + 1)};
    return p;
  }
  Gluing gluing(const EdgeRef& e) const override {
    auto [i, j] = unpack(e.polygon);
    // Global coordinates: neighbors share edges, all translations zero.
    switch (e.edge) {
      case 0: return {e, {pack(i, j - 1), 2}, Vec2(0, 0)};
      case 1: return {e, {pack(i + 1, j), 3}, Vec2(0, 0)};
      case 2: return {e, {pack(i, j + 1), 0}, Vec2(0, 0)};
      case 3: return {e, {pack(i - 1, j), 1}, Vec2(0, 0)};
      default: throw std::out_of_range("bad edge index");
    }
  }
  PolyId seed() const override { return pack(0, 0); }
  bool planar_no_singularities() const override { return true; }
  std::optional<ConvexPolygon> planar_chart(const Rat& r2) const override {
    Rat r = sqrt_upper(r2);
    Int R = rat_num(r) / rat_den(r) + 1;
    return ConvexPolygon{Point(Rat(-R), Rat(-R)), Point(Rat(R), Rat(-R)),
                         Point(Rat(R), Rat(R)), Point(Rat(-R), Rat(R))};
  }
};

}  // namespace

SurfacePresentation builtin_staircase_infinite() {
  SurfacePresentation s;
  s.name = "staircase";
  s.provider = std::make_shared<StaircaseProvider>();
  s.basepoint_polygon = 0;
  s.basepoint = Point(Rat(1, 2), Rat(1, 2));
  return s;
}

SurfacePresentation builtin_plane() {
  SurfacePresentation s;
  s.name = "plane";
  auto pp = std::make_shared<PlaneProvider>();
  s.basepoint_polygon = pp->seed();
  s.provider = pp;
  s.basepoint = Point(0, 0);
  return s;
}

SurfacePresentation lshape_origami() {
  SurfacePresentation s;
  s.name = "l-origami";
  auto square = [](Rat x, Rat y) {
    return ConvexPolygon{Point(x, y), Point(x + 1, y), Point(x + 1, y + 1),
                         Point(x, y + 1)};
  };
  s.polygons[0] = {0, square(0, 0)};
  s.polygons[1] = {1, square(1, 0)};
  s.polygons[2] = {2, square(0, 1)};
  s.gluings = {
      {{0, 1}, {1, 3}, Vec2(0, 0)},   // shared edge x=1
      {{1, 1}, {0, 3}, Vec2(-2, 0)},  // outer right onto outer left
      {{2, 1}, {2, 3}, Vec2(-1, 0)},  // top square wraps horizontally
      {{0, 2}, {2, 0}, Vec2(0, 0)},   // shared edge y=1
      {{2, 2}, {0, 0}, Vec2(0, -2)},  // outer top onto outer bottom
      {{1, 2}, {1, 0}, Vec2(0, -1)},  // right square wraps vertically
  };
  s.basepoint_polygon = 0;
  s.basepoint = Point(Rat(1, 2), Rat(1, 2));
  return s;
}

}  // namespace flatland
