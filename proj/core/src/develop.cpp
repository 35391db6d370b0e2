#include "flatland/develop.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace flatland {

size_t cell_cap() {
  if (const char* env = std::getenv("FLATLAND_CELL_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return size_t(v);
  }
  return 100000;
}

namespace {

constexpr size_t kCornerWalkCap = 4096;

// Cone order of the class through (poly, vertex): k >= 1, or -1 when the walk
// does not close (infinite-angle classes on provider surfaces, or unglued
// edges). Memoized across a whole class.
int corner_order(const SurfacePresentation& s, PolyId poly, int vertex,
                 std::map<std::pair<PolyId, int>, int>& memo) {
  auto it = memo.find({poly, vertex});
  if (it != memo.end()) return it->second;
  int k;
  std::vector<std::pair<PolyId, int>> cyc;
  try {
    cyc = corner_cycle(s, poly, vertex, kCornerWalkCap);
    k = cone_order_at(s, poly, vertex, kCornerWalkCap);
  } catch (const std::exception&) {
    memo[{poly, vertex}] = -1;
    return -1;
  }
  for (const auto& c : cyc) memo[c] = k;
  return k;
}

bool order_is_singular(int k) { return k < 0 || k >= 2; }

// Does the CCW arc (a, b], of width in (0, pi], contain direction r?
bool arc_contains_dir(const Vec2& a, const Vec2& b, const Vec2& r) {
  Rat ab = cross(a, b);
  if (ab > 0) return cross(a, r) > 0 && cross(r, b) >= 0;
  return cross(a, r) > 0 || (cross(a, r) == 0 && dot(a, r) < 0);
}

bool same_ray(const Vec2& a, const Vec2& b) {
  return cross(a, b) == 0 && dot(a, b) > 0;
}

}  // namespace

// ---------------------------------------------------------------------------
// Geodesic tracing

TraceResult trace(const SurfacePresentation& s, PolyId start_poly,
                  const Point& start, const Vec2& dir, const Rat& len2) {
  if (dir.is_zero()) throw std::invalid_argument("trace direction is zero");
  if (len2 < 0) throw std::invalid_argument("trace length negative");
  Rat t_total;
  if (!rat_sqrt_exact(len2 / norm2(dir), &t_total))
    throw std::invalid_argument(
        "trace length is not commensurable with the direction (irrational endpoint)");
  std::map<std::pair<PolyId, int>, int> memo;
  PolyId p = start_poly;
  Polygon poly = s.polygon(p);
  if (polygon_contains(poly.vertices, start) == Containment::Outside)
    throw std::invalid_argument("trace start outside its polygon");
  Point x = start;
  Rat remaining = t_total;
  size_t cap = cell_cap();
  for (size_t steps = 0;; ++steps) {
    if (steps > cap) throw NonTermination("trace crossing cap exceeded");
    if (remaining == 0) return TraceEndpoint{p, x};
    ExitError err = ExitError::None;
    auto er = exit_edge(poly.vertices, x, dir, &err);
    if (!er) throw std::invalid_argument("trace left the surface (invalid state)");
    if (er->t >= remaining) return TraceEndpoint{p, x + dir * remaining};
    remaining -= er->t;
    if (er->vertex_hit) {
      int v = er->vertex_index;
      int k = corner_order(s, p, v, memo);
      if (order_is_singular(k)) {
        Rat traveled = t_total - remaining;
        return TraceHitPuncture{p, v, traveled * traveled * norm2(dir)};
      }
      // Regular vertex: continue into the wedge containing the direction.
      std::pair<PolyId, int> cur{p, v};
      bool placed = false;
      for (size_t i = 0; i <= kCornerWalkCap; ++i) {
        Polygon cp = s.polygon(cur.first);
        int n = cp.edge_count();
        Vec2 a = cp.edge_end(cur.second) - cp.edge_start(cur.second);
        int epre = (cur.second - 1 + n) % n;
        Vec2 b = cp.edge_start(epre) - cp.edge_end(epre);
        if ((cross(a, dir) > 0 && cross(dir, b) > 0) ||
            (cross(a, dir) == 0 && dot(a, dir) > 0)) {
          p = cur.first;
          poly = cp;
          x = cp.vertices[size_t(cur.second)];
          placed = true;
          break;
        }
        Gluing g = s.gluing({cur.first, epre});
        cur = {g.right.polygon, g.right.edge};
      }
      if (!placed) throw std::logic_error("no wedge contains the trace direction");
      continue;
    }
    Gluing g = s.gluing({p, er->edge_index});
    x = er->exit_point + g.translation;
    p = g.right.polygon;
    poly = s.polygon(p);
  }
}

// ---------------------------------------------------------------------------
// The development engine

namespace {

struct Developer {
  const SurfacePresentation& s;
  std::optional<Rat> r2;  // closed-disk bound; nullopt = event-driven
  size_t cap = 100000;
  bool collect_events = false;

  DevelopedComplex out;
  std::vector<Rat> reach;  // squared bottleneck radius per cell
  std::map<std::pair<PolyId, int>, int> order_memo;

  struct CornerInfo {
    int fan = -1;
    bool linked_out = false, linked_in = false;
  };
  std::map<std::pair<int, int>, CornerInfo> corners;
  struct Fan {
    Point apex;
    std::deque<std::pair<int, int>> chain;
    bool closed = false;
    bool dead = false;
  };
  std::vector<Fan> fans;

  std::optional<Rat> best_event;
  std::vector<BindingEvent> events;

  struct Cand {
    Rat key;
    Vec2 place;
    PolyId src = 0;
    int cell = 0, edge = 0;
  };
  struct CandLess {
    bool operator()(const Cand& a, const Cand& b) const {
      if (a.key != b.key) return a.key < b.key;
      if (a.place != b.place) return lex_less(a.place, b.place);
      if (a.src != b.src) return a.src < b.src;
      if (a.cell != b.cell) return a.cell < b.cell;
      return a.edge < b.edge;
    }
  };
  std::multiset<Cand, CandLess> queue;

  explicit Developer(const SurfacePresentation& surf) : s(surf) {}

  int corner_count(int cell) const { return int(out.cells[size_t(cell)].poly.size()); }

  Vec2 ray_out(const std::pair<int, int>& c) const {
    const ConvexPolygon& p = out.cells[size_t(c.first)].poly;
    size_t n = p.size();
    return p[(size_t(c.second) + 1) % n] - p[size_t(c.second)];
  }
  Vec2 ray_in(const std::pair<int, int>& c) const {
    const ConvexPolygon& p = out.cells[size_t(c.first)].poly;
    size_t n = p.size();
    return p[(size_t(c.second) + n - 1) % n] - p[size_t(c.second)];
  }

  // --- coverage -------------------------------------------------------------

  // Smallest |p|^2 over points p of edge e of `cell` whose far side is not
  // covered by any placed cell. nullopt when fully covered.
  std::optional<Rat> uncovered_min(int cell, int edge) const {
    const ConvexPolygon& poly = out.cells[size_t(cell)].poly;
    size_t n = poly.size();
    Point a = poly[size_t(edge)], b = poly[(size_t(edge) + 1) % n];
    Vec2 d = b - a;
    Vec2 nfar(d.y, -d.x);  // outward normal (interior is to the left)

    struct Iv {
      Rat lo, hi;
      bool lo_closed, hi_closed;
    };
    std::vector<Iv> covered;
    for (const DevCell& c : out.cells) {
      if (c.id == cell) continue;
      Rat t0, t1;
      if (!clip_segment_to_polygon(c.poly, a, b, &t0, &t1)) continue;
      if (t0 == t1) {
        Point p = a + d * t0;
        if (advances_into(c.poly, p, nfar)) covered.push_back({t0, t1, true, true});
        continue;
      }
      Point mid = a + d * ((t0 + t1) / 2);
      if (!advances_into(c.poly, mid, nfar)) continue;
      bool lc = advances_into(c.poly, a + d * t0, nfar);
      bool hc = advances_into(c.poly, a + d * t1, nfar);
      covered.push_back({t0, t1, lc, hc});
    }

    // Breakpoints partition [0,1]; test each open piece and each point.
    std::vector<Rat> bps{Rat(0), Rat(1)};
    for (const Iv& iv : covered) {
      if (iv.lo > 0 && iv.lo < 1) bps.push_back(iv.lo);
      if (iv.hi > 0 && iv.hi < 1) bps.push_back(iv.hi);
    }
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    auto pt_covered = [&](const Rat& t) {
      for (const Iv& iv : covered) {
        if (t < iv.lo || t > iv.hi) continue;
        if (t == iv.lo && !iv.lo_closed) continue;
        if (t == iv.hi && !iv.hi_closed) continue;
        return true;
      }
      return false;
    };
    auto open_covered = [&](const Rat& t) {  // t = midpoint of an open piece
      for (const Iv& iv : covered) {
        if (iv.lo < t && t < iv.hi) return true;
      }
      return false;
    };
    Rat tstar_num = -dot(a, d), tstar_den = norm2(d);  // argmin of |a + t d|^2
    Rat tstar = tstar_den == 0 ? Rat(0) : tstar_num / tstar_den;
    auto seg_min = [&](const Rat& u, const Rat& v) {
      Rat t = tstar;
      if (t < u) t = u;
      if (t > v) t = v;
      return norm2(a + d * t);
    };
    std::optional<Rat> best;
    auto consider = [&](const Rat& val) {
      if (!best || val < *best) best = val;
    };
    for (size_t i = 0; i < bps.size(); ++i) {
      if (!pt_covered(bps[i])) consider(seg_min(bps[i], bps[i]));
      if (i + 1 < bps.size()) {
        Rat mid = (bps[i] + bps[i + 1]) / 2;
        if (!open_covered(mid)) consider(seg_min(bps[i], bps[i + 1]));
      }
    }
    return best;
  }

  // --- fans -----------------------------------------------------------------

  void link_corners(std::pair<int, int> x, bool x_out, std::pair<int, int> y,
                    bool y_out, const Point& apex) {
    auto& ix = corners[x];
    auto& iy = corners[y];
    (x_out ? ix.linked_out : ix.linked_in) = true;
    (y_out ? iy.linked_out : iy.linked_in) = true;
    int fx = ix.fan, fy = iy.fan;
    if (fx < 0 && fy < 0) {
      Fan f;
      f.apex = apex;
      f.chain = {x, y};
      fans.push_back(std::move(f));
      ix.fan = iy.fan = int(fans.size()) - 1;
      check_closure(ix.fan);
      return;
    }
    if (fx >= 0 && fy < 0) {
      attach(fx, x, y);
      iy.fan = fx;
      check_closure(fx);
      return;
    }
    if (fy >= 0 && fx < 0) {
      attach(fy, y, x);
      ix.fan = fy;
      check_closure(fy);
      return;
    }
    if (fx == fy) {
      fans[size_t(fx)].closed = true;
      for (const auto& c : fans[size_t(fx)].chain) out.closed_fan_corners.insert(c);
      return;
    }
    // Merge: orient both chains so the junction corners are adjacent.
    Fan& a = fans[size_t(fx)];
    Fan& b = fans[size_t(fy)];
    if (a.chain.front() == x) std::reverse(a.chain.begin(), a.chain.end());
    if (a.chain.back() != x) throw std::logic_error("fan link not at a chain end");
    if (b.chain.back() == y) std::reverse(b.chain.begin(), b.chain.end());
    if (b.chain.front() != y) throw std::logic_error("fan link not at a chain end");
    for (const auto& c : b.chain) {
      a.chain.push_back(c);
      corners[c].fan = fx;
    }
    b.dead = true;
    b.chain.clear();
    check_closure(fx);
  }

  void attach(int fan, const std::pair<int, int>& at, const std::pair<int, int>& nw) {
    Fan& f = fans[size_t(fan)];
    if (f.chain.front() == at)
      f.chain.push_front(nw);
    else if (f.chain.back() == at)
      f.chain.push_back(nw);
    else
      throw std::logic_error("fan link not at a chain end");
  }

  // The unglued wedge edge of a chain-end corner: cell-local edge index.
  std::optional<int> free_edge(const std::pair<int, int>& c) const {
    auto it = corners.find(c);
    if (it == corners.end()) return std::nullopt;
    int n = corner_count(c.first);
    if (!it->second.linked_out) return c.second;
    if (!it->second.linked_in) return (c.second - 1 + n) % n;
    return std::nullopt;
  }

  void check_closure(int fan) {
    Fan& f = fans[size_t(fan)];
    if (f.closed || f.dead || f.chain.size() < 2) return;
    auto F = f.chain.front(), B = f.chain.back();
    auto eF = free_edge(F), eB = free_edge(B);
    if (!eF || !eB) return;
    const DevCell &cF = out.cells[size_t(F.first)], &cB = out.cells[size_t(B.first)];
    size_t nF = cF.poly.size(), nB = cB.poly.size();
    Point fa = cF.poly[size_t(*eF)], fb = cF.poly[(size_t(*eF) + 1) % nF];
    Point ba = cB.poly[size_t(*eB)], bb = cB.poly[(size_t(*eB) + 1) % nB];
    if (!(fa == bb && fb == ba)) return;  // must coincide with reversed orientation
    Gluing g;
    try {
      g = s.gluing({cF.source, *eF});
    } catch (const std::exception&) {
      return;
    }
    if (!(g.right.polygon == cB.source && g.right.edge == *eB)) return;
    if (cB.placement != cF.placement - g.translation) return;
    // Total angle must be exactly 2*pi: walk counterclockwise, counting
    // passes of the reference ray.
    std::vector<std::pair<int, int>> walk(f.chain.begin(), f.chain.end());
    if (walk.size() >= 2 && !same_ray(ray_in(walk[0]), ray_out(walk[1])))
      std::reverse(walk.begin(), walk.end());
    Vec2 ref = ray_out(walk[0]);
    int passes = 0;
    for (const auto& c : walk) {
      if (arc_contains_dir(ray_out(c), ray_in(c), ref)) ++passes;
    }
    if (passes != 1) return;
    add_adjacency(F.first, *eF, B.first, *eB);
  }

  // --- adjacency / cells ----------------------------------------------------

  void add_adjacency(int c1, int e1, int c2, int e2) {
    const DevCell& a = out.cells[size_t(c1)];
    size_t n1 = a.poly.size(), n2 = out.cells[size_t(c2)].poly.size();
    DevAdjacency adj;
    adj.cell_a = c1;
    adj.edge_a = e1;
    adj.cell_b = c2;
    adj.edge_b = e2;
    adj.seg_a = a.poly[size_t(e1)];
    adj.seg_b = a.poly[(size_t(e1) + 1) % n1];
    out.adjacency.push_back(adj);
    out.glued_edges.insert({c1, e1});
    out.glued_edges.insert({c2, e2});
    // Corner links at the two shared endpoints.
    link_corners({c1, e1}, true, {c2, int((size_t(e2) + 1) % n2)}, false,
                 adj.seg_a);
    link_corners({c1, int((size_t(e1) + 1) % n1)}, false, {c2, e2}, true,
                 adj.seg_b);
  }

  int add_cell(PolyId source, const Vec2& place, const Rat& cell_reach) {
    if (out.cells.size() >= cap)
      throw NonTermination("cell cap exceeded while developing");
    DevCell c;
    c.id = int(out.cells.size());
    c.source = source;
    c.placement = place;
    c.poly = polygon_translate(s.polygon(source).vertices, place);
    out.cells.push_back(c);
    reach.push_back(cell_reach);
    if (collect_events) record_events(c.id);
    push_candidates(c.id);
    return c.id;
  }

  void push_candidates(int cell) {
    const DevCell& c = out.cells[size_t(cell)];
    size_t n = c.poly.size();
    for (size_t e = 0; e < n; ++e) {
      if (out.glued_edges.count({cell, int(e)})) continue;
      auto um = uncovered_min(cell, int(e));
      if (!um) continue;
      Rat key = rat_max(reach[size_t(cell)], *um);
      if (r2 && key >= *r2) continue;
      Gluing g;
      try {
        g = s.gluing({c.source, int(e)});
      } catch (const std::exception&) {
        continue;  // unglued surface edge (invalid surfaces): leave open
      }
      Cand cd;
      cd.key = key;
      cd.src = g.right.polygon;
      cd.place = c.placement - g.translation;
      cd.cell = cell;
      cd.edge = int(e);
      queue.insert(cd);
    }
  }

  void record_events(int cell) {
    const DevCell& c = out.cells[size_t(cell)];
    size_t n = c.poly.size();
    for (size_t v = 0; v < n; ++v) {
      int k = corner_order(s, c.source, int(v), order_memo);
      if (!order_is_singular(k)) continue;
      Rat val = rat_max(norm2(c.poly[v]), reach[size_t(cell)]);
      offer_event({BindingEvent::Kind::Singularity, val, c.poly[v]});
    }
    ConvexPolygon local = s.polygon(c.source).vertices;
    for (const DevCell& o : out.cells) {
      if (o.id == cell || o.source != c.source || o.placement == c.placement)
        continue;
      Point argmin;
      Rat mm = min_max_dist_sq(local, -o.placement, -c.placement, &argmin);
      Rat val = rat_max(mm, rat_max(reach[size_t(o.id)], reach[size_t(cell)]));
      offer_event({BindingEvent::Kind::SelfOverlap, val, argmin + c.placement});
    }
  }

  void offer_event(BindingEvent ev) {
    if (best_event && ev.r2 > *best_event) return;
    if (!best_event || ev.r2 < *best_event) {
      best_event = ev.r2;
      events.clear();
    }
    for (const BindingEvent& e : events) {
      if (e.kind == ev.kind && e.position == ev.position) return;
    }
    events.push_back(std::move(ev));
  }

  void run(PolyId base_poly, const Point& base_point) {
    out.kind = ComplexKind::Developed;
    out.is_disk = true;
    out.r2 = r2;
    out.basepoint_cell = 0;
    add_cell(base_poly, -base_point, Rat(0));
    while (!queue.empty()) {
      Cand cd = *queue.begin();
      queue.erase(queue.begin());
      if (best_event && cd.key > *best_event) break;
      if (out.glued_edges.count({cd.cell, cd.edge})) continue;
      auto um = uncovered_min(cd.cell, cd.edge);
      if (!um) continue;
      Rat key = rat_max(reach[size_t(cd.cell)], *um);
      if (r2 && key >= *r2) continue;
      if (key > cd.key) {
        cd.key = key;
        queue.insert(cd);
        continue;
      }
      const DevCell& c = out.cells[size_t(cd.cell)];
      Gluing g = s.gluing({c.source, cd.edge});
      int nc = add_cell(g.right.polygon, c.placement - g.translation, key);
      add_adjacency(cd.cell, cd.edge, nc, g.right.edge);
    }
    // Marks: unclosed singular fans strictly inside the disk.
    for (const Fan& f : fans) {
      if (f.dead || f.closed || f.chain.empty()) continue;
      auto [cell, v] = f.chain.front();
      int k = corner_order(s, out.cells[size_t(cell)].source, v, order_memo);
      if (!order_is_singular(k)) continue;
      Rat d2 = norm2(f.apex);
      if (r2 && d2 >= *r2) continue;
      out.marks.push_back({f.apex, d2});
    }
    std::sort(out.marks.begin(), out.marks.end(),
              [](const SingularMark& a, const SingularMark& b) {
                if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
                return lex_less(a.position, b.position);
              });
  }
};

}  // namespace

DevelopedComplex develop_disk(const SurfacePresentation& s, const Rat& r2) {
  if (r2 < 0) throw std::invalid_argument("negative squared radius");
  if (s.provider && s.provider->planar_no_singularities()) {
    if (auto chart = s.provider->planar_chart(r2)) {
      DevelopedComplex d = single_chart_complex(*chart);
      d.r2 = r2;
      return d;
    }
  }
  Developer dev(s);
  dev.r2 = r2;
  dev.cap = cell_cap();
  dev.run(s.basepoint_polygon, s.basepoint);
  if (complex_euler_characteristic(dev.out) != 1)
    throw std::logic_error("developed disk is not simply connected");
  return std::move(dev.out);
}

// ---------------------------------------------------------------------------
// Immersion by analytic continuation

namespace {

struct VecLess {
  bool operator()(const Vec2& a, const Vec2& b) const { return lex_less(a, b); }
};

struct PieceKey {
  int cell;
  PolyId tp;
  Vec2 tau;
  bool operator<(const PieceKey& o) const {
    if (cell != o.cell) return cell < o.cell;
    if (tp != o.tp) return tp < o.tp;
    return lex_less(tau, o.tau);
  }
};

}  // namespace

ImmersionResult immerse(const DevelopedComplex& d, const SurfacePresentation& s,
                        bool reverse_order) {
  if (!d.is_disk)
    throw std::invalid_argument("immerse requires a disk-flagged complex");
  std::map<std::pair<PolyId, int>, int> order_memo;
  size_t cap = cell_cap();

  // Adjacency lookup per cell.
  std::vector<std::vector<int>> adj_of(d.cells.size());
  for (size_t i = 0; i < d.adjacency.size(); ++i) {
    adj_of[size_t(d.adjacency[i].cell_a)].push_back(int(i));
    adj_of[size_t(d.adjacency[i].cell_b)].push_back(int(i));
  }

  std::vector<ImmersionPiece> pieces;
  std::vector<std::vector<int>> pieces_of(d.cells.size());
  std::map<PieceKey, int> seen;
  std::deque<int> frontier;
  bool conflict = false;

  auto make_piece = [&](int cell, PolyId tp, const Vec2& tau) {
    PieceKey k{cell, tp, tau};
    if (seen.count(k)) return;
    if (pieces.size() >= cap)
      throw NonTermination("piece cap exceeded while immersing");
    ConvexPolygon chart =
        polygon_translate(s.polygon(tp).vertices, -tau);
    ConvexPolygon extent = convex_intersect(d.cells[size_t(cell)].poly, chart);
    if (extent.empty() || polygon_area2(extent) == 0) return;
    for (int pi : pieces_of[size_t(cell)]) {
      ConvexPolygon inter = convex_intersect(pieces[size_t(pi)].extent, extent);
      if (!inter.empty() && polygon_area2(inter) > 0) conflict = true;
    }
    seen[k] = int(pieces.size());
    pieces_of[size_t(cell)].push_back(int(pieces.size()));
    pieces.push_back({cell, tp, tau, std::move(extent)});
    frontier.push_back(int(pieces.size()) - 1);
  };

  {
    // The basepoint may sit on an edge or corner of its target polygon, in
    // which case the germ is split over every chart in the fan around it.
    std::set<std::tuple<PolyId, Rat, Rat>> seeded;
    std::deque<std::pair<PolyId, Vec2>> work;
    work.push_back({s.basepoint_polygon, s.basepoint});
    seeded.insert({s.basepoint_polygon, s.basepoint.x, s.basepoint.y});
    size_t fan_steps = 0;
    while (!work.empty()) {
      if (++fan_steps > 64)
        throw std::invalid_argument("basepoint fan does not close");
      auto [tp, tau] = work.front();
      work.pop_front();
      make_piece(d.basepoint_cell, tp, tau);
      ConvexPolygon chart = polygon_translate(s.polygon(tp).vertices, -tau);
      size_t n = chart.size();
      for (size_t e = 0; e < n; ++e) {
        const Point &a = chart[e], &b = chart[(e + 1) % n];
        // origin on the closed segment [a, b]
        bool on_edge = cross(b - a, -a) == 0 && dot(a, a - b) >= 0 &&
                       dot(b, b - a) >= 0;
        if (!on_edge) continue;
        Gluing g = s.gluing({tp, int(e)});
        Vec2 ntau = tau + g.translation;
        if (seeded.insert({g.right.polygon, ntau.x, ntau.y}).second)
          work.push_back({g.right.polygon, ntau});
      }
    }
    if (pieces.empty())
      throw std::invalid_argument("basepoint germ has empty extent");
  }

  while (!frontier.empty()) {
    int pi = frontier.front();
    frontier.pop_front();
    ImmersionPiece p = pieces[size_t(pi)];  // copy: pieces may reallocate
    const DevCell& cell = d.cells[size_t(p.cell)];
    ConvexPolygon chart = polygon_translate(s.polygon(p.target).vertices, -p.tau);
    size_t cn = chart.size();

    // Puncture lifts interior to D stop the continuation.
    std::vector<Point> hits;
    for (size_t v = 0; v < cn; ++v) {
      if (polygon_contains(cell.poly, chart[v]) == Containment::Outside) continue;
      if (!complex_point_interior(d, p.cell, chart[v])) continue;
      int k = corner_order(s, p.target, int(v), order_memo);
      if (order_is_singular(k)) hits.push_back(chart[v]);
    }
    if (!hits.empty()) {
      Point w = hits[0];
      for (const Point& h : hits) {
        if (norm2(h) < norm2(w) || (norm2(h) == norm2(w) && lex_less(w, h))) w = h;
      }
      return NoImmersion{w};
    }

    struct Next {
      int cell;
      PolyId tp;
      Vec2 tau;
    };
    std::vector<Next> nexts;
    // Continue across target gluings inside the same cell.
    for (size_t e = 0; e < cn; ++e) {
      Point a = chart[e], b = chart[(e + 1) % cn];
      Rat t0, t1;
      if (!clip_segment_to_polygon(cell.poly, a, b, &t0, &t1) || t0 == t1)
        continue;
      Vec2 dvec = b - a;
      Point mid = a + dvec * ((t0 + t1) / 2);
      Vec2 nfar(dvec.y, -dvec.x);
      if (!advances_into(cell.poly, mid, nfar)) continue;
      Gluing g;
      try {
        g = s.gluing({p.target, int(e)});
      } catch (const std::exception&) {
        continue;
      }
      nexts.push_back({p.cell, g.right.polygon, p.tau + g.translation});
    }
    // Continue across the complex's own adjacencies. When the adjacency
    // segment lies on the chart boundary, the step also crosses the chart's
    // gluing (cell switch and chart switch coincide).
    for (int ai : adj_of[size_t(p.cell)]) {
      const DevAdjacency& adj = d.adjacency[size_t(ai)];
      bool from_a = adj.cell_a == p.cell;
      int other = from_a ? adj.cell_b : adj.cell_a;
      Rat t0, t1;
      if (!clip_segment_to_polygon(chart, adj.seg_a, adj.seg_b, &t0, &t1) ||
          t0 == t1)
        continue;
      Vec2 dvec = adj.seg_b - adj.seg_a;
      Point mid = adj.seg_a + dvec * ((t0 + t1) / 2);
      Vec2 nout = from_a ? Vec2(dvec.y, -dvec.x) : Vec2(-dvec.y, dvec.x);
      if (advances_into(chart, mid, nout)) {
        nexts.push_back({other, p.target, p.tau});
        continue;
      }
      for (size_t e = 0; e < cn; ++e) {
        Point a = chart[e], b = chart[(e + 1) % cn];
        Vec2 ed = b - a;
        if (cross(ed, mid - a) != 0) continue;
        Rat t = dot(mid - a, ed);
        if (t < 0 || t > norm2(ed)) continue;
        if (cross(ed, nout) > 0) continue;  // edge crossed outward only
        Gluing g;
        try {
          g = s.gluing({p.target, int(e)});
        } catch (const std::exception&) {
          continue;
        }
        nexts.push_back({other, g.right.polygon, p.tau + g.translation});
      }
    }
    if (reverse_order) std::reverse(nexts.begin(), nexts.end());
    for (const Next& nx : nexts) make_piece(nx.cell, nx.tp, nx.tau);
  }

  if (conflict)
    throw std::logic_error("inconsistent continuation without a puncture witness");
  // The pieces must tile every cell exactly.
  for (size_t c = 0; c < d.cells.size(); ++c) {
    Rat total = 0;
    for (int pi : pieces_of[c]) total += polygon_area2(pieces[size_t(pi)].extent);
    if (total != polygon_area2(d.cells[c].poly))
      throw std::logic_error("immersion did not cover the complex");
  }
  ImmersionMap im;
  im.source = d;
  im.target = s;
  im.pieces = std::move(pieces);
  return im;
}

EmbedsResult embeds(const DevelopedComplex& d, const SurfacePresentation& s) {
  ImmersionResult ir = immerse(d, s);
  if (std::holds_alternative<NoImmersion>(ir))
    return std::get<NoImmersion>(ir);
  ImmersionMap im = std::move(std::get<ImmersionMap>(ir));
  for (size_t i = 0; i < im.pieces.size(); ++i) {
    for (size_t j = i + 1; j < im.pieces.size(); ++j) {
      const ImmersionPiece &a = im.pieces[i], &b = im.pieces[j];
      if (a.target != b.target) continue;
      if (a.tau == b.tau) {
        if (d.kind == ComplexKind::PlanarEmbedded) continue;  // same points
        ConvexPolygon inter = convex_intersect(a.extent, b.extent);
        if (inter.empty() || polygon_area2(inter) == 0) continue;
        Point p;
        min_max_dist_sq(inter, a.tau, b.tau, &p);
        return Overlap{p, p, std::move(im)};
      }
      ConvexPolygon ia = polygon_translate(a.extent, a.tau);
      ConvexPolygon ib = polygon_translate(b.extent, b.tau);
      ConvexPolygon inter = convex_intersect(ia, ib);
      if (inter.empty()) continue;
      Point p;
      if (polygon_area2(inter) > 0) {
        min_max_dist_sq(inter, a.tau, b.tau, &p);
      } else {
        p = inter[0];
        for (const Point& q : inter)
          if (lex_less(q, p)) p = q;
      }
      Point x = p - a.tau, y = p - b.tau;
      if (lex_less(y, x)) std::swap(x, y);
      return Overlap{x, y, std::move(im)};
    }
  }
  return Embedded{std::move(im)};
}

BasepointFiber point_fiber(const ImmersionMap& im, PolyId target_polygon,
                           const Point& target_point) {
  // All chart representations of the target point: a point on a glued edge
  // (or at a regular vertex) appears in several polygons' charts.
  std::vector<std::pair<PolyId, Point>> reps{{target_polygon, target_point}};
  for (size_t i = 0; i < reps.size(); ++i) {
    auto [tp, pt] = reps[i];
    Polygon poly = im.target.polygon(tp);
    for (int e = 0; e < poly.edge_count(); ++e) {
      Point a = poly.edge_start(e), b = poly.edge_end(e);
      if (cross(b - a, pt - a) != 0) continue;
      Rat t = dot(pt - a, b - a);
      if (t < 0 || t > norm2(b - a)) continue;
      Gluing g;
      try {
        g = im.target.gluing({tp, e});
      } catch (const std::exception&) {
        continue;
      }
      std::pair<PolyId, Point> rep{g.right.polygon, pt + g.translation};
      if (std::find(reps.begin(), reps.end(), rep) == reps.end())
        reps.push_back(rep);
    }
  }
  std::vector<FiberPoint> raw;
  for (const ImmersionPiece& p : im.pieces) {
    for (const auto& [tp, pt] : reps) {
      if (p.target != tp) continue;
      Point z = pt - p.tau;
      if (polygon_contains(p.extent, z) == Containment::Outside) continue;
      raw.push_back({p.cell, z});
    }
  }
  // Deduplicate: same developed position, same point of D.
  std::vector<FiberPoint> out;
  for (const FiberPoint& f : raw) {
    bool dup = false;
    for (const FiberPoint& g : out) {
      if (!(g.position == f.position)) continue;
      if (im.source.kind == ComplexKind::PlanarEmbedded || g.cell == f.cell) {
        dup = true;
        break;
      }
      for (const DevAdjacency& a : im.source.adjacency) {
        bool pair = (a.cell_a == f.cell && a.cell_b == g.cell) ||
                    (a.cell_a == g.cell && a.cell_b == f.cell);
        if (!pair) continue;
        Vec2 e = a.seg_b - a.seg_a;
        Rat t = dot(f.position - a.seg_a, e);
        if (cross(e, f.position - a.seg_a) == 0 && t >= 0 && t <= norm2(e)) {
          dup = true;
          break;
        }
      }
      if (!dup) {
        // Shared closed-fan vertices: both cells carry the position as a
        // corner of a closed fan.
        auto is_closed_corner = [&](int cell) {
          const ConvexPolygon& poly = im.source.cells[size_t(cell)].poly;
          for (size_t v = 0; v < poly.size(); ++v) {
            if (poly[v] == f.position &&
                im.source.closed_fan_corners.count({cell, int(v)}))
              return true;
          }
          return false;
        };
        if (is_closed_corner(f.cell) && is_closed_corner(g.cell)) dup = true;
      }
      if (dup) break;
    }
    if (!dup) out.push_back(f);
  }
  std::sort(out.begin(), out.end(), [](const FiberPoint& a, const FiberPoint& b) {
    if (!(a.position == b.position)) return lex_less(a.position, b.position);
    return a.cell < b.cell;
  });
  return BasepointFiber{std::move(out)};
}

// ---------------------------------------------------------------------------
// Embedding radii

namespace {

SurfacePresentation rebase(const SurfacePresentation& s, PolyId poly,
                           const Point& point) {
  SurfacePresentation t = s;
  t.basepoint_polygon = poly;
  t.basepoint = point;
  return t;
}

void check_regular_point(const SurfacePresentation& s, PolyId poly,
                         const Point& point,
                         std::map<std::pair<PolyId, int>, int>& memo) {
  Polygon p = s.polygon(poly);
  if (polygon_contains(p.vertices, point) == Containment::Outside)
    throw std::invalid_argument("point outside its polygon");
  for (int v = 0; v < p.edge_count(); ++v) {
    if (point == p.vertices[size_t(v)] &&
        order_is_singular(corner_order(s, poly, v, memo)))
      throw std::invalid_argument("point lies at a cone point");
  }
}

}  // namespace

EmbeddingRadius embedding_radius(const SurfacePresentation& s, PolyId poly,
                                 const Point& point) {
  if (s.provider && s.provider->planar_no_singularities())
    return {SqRadius::inf(), {}};
  std::map<std::pair<PolyId, int>, int> memo;
  check_regular_point(s, poly, point, memo);
  SurfacePresentation sp = rebase(s, poly, point);
  Developer d2(sp);
  d2.cap = cell_cap();
  d2.collect_events = true;
  d2.run(poly, point);
  if (!d2.best_event) return {SqRadius::inf(), {}};
  std::sort(d2.events.begin(), d2.events.end(),
            [](const BindingEvent& a, const BindingEvent& b) {
              if (a.kind != b.kind) return a.kind < b.kind;
              return lex_less(a.position, b.position);
            });
  return {SqRadius(*d2.best_event), std::move(d2.events)};
}

ImmersionMap ball_embed(const SurfacePresentation& s, PolyId poly,
                        const Point& point, const Rat& eps2) {
  if (eps2 <= 0) throw RadiusTooLarge("ball radius must be positive");
  EmbeddingRadius er = embedding_radius(s, poly, point);
  if (!er.er2.infinite && eps2 >= er.er2.value)
    throw RadiusTooLarge("ball radius reaches the embedding radius");
  SurfacePresentation sp = rebase(s, poly, point);
  DevelopedComplex d = develop_disk(sp, eps2);
  ImmersionResult ir = immerse(d, sp);
  if (!std::holds_alternative<ImmersionMap>(ir))
    throw std::logic_error("ball below the embedding radius failed to immerse");
  return std::move(std::get<ImmersionMap>(ir));
}

SqRadius er_compact(const SurfacePresentation& s,
                    const std::vector<std::pair<PolyId, Rect>>& region) {
  if (region.empty()) throw std::invalid_argument("empty region");
  if (s.provider && s.provider->planar_no_singularities()) return SqRadius::inf();
  std::map<std::pair<PolyId, int>, int> memo;

  std::optional<Rat> best;
  for (const auto& [poly, rect] : region) {
    if (rect.lo.x > rect.hi.x || rect.lo.y > rect.hi.y)
      throw std::invalid_argument("malformed region rect");
    Polygon pg = s.polygon(poly);
    std::vector<Point> corners_pts{rect.lo, Point(rect.hi.x, rect.lo.y), rect.hi,
                                   Point(rect.lo.x, rect.hi.y)};
    for (const Point& c : corners_pts) {
      if (polygon_contains(pg.vertices, c) == Containment::Outside)
        throw std::invalid_argument("region leaves its polygon");
    }
    // A region point at a cone point is rejected.
    for (int v = 0; v < pg.edge_count(); ++v) {
      const Point& vv = pg.vertices[size_t(v)];
      if (rect.contains_closed(vv) &&
          order_is_singular(corner_order(s, poly, v, memo)))
        throw std::invalid_argument("region touches a puncture");
    }
    Point center((rect.lo.x + rect.hi.x) / 2, (rect.lo.y + rect.hi.y) / 2);
    check_regular_point(s, poly, center, memo);

    EmbeddingRadius at_center = embedding_radius(s, poly, center);
    if (at_center.er2.infinite) continue;  // no events anywhere
    Rat diam2 = dist2(rect.lo, rect.hi);
    Rat radius = sqrt_upper(at_center.er2.value) + sqrt_upper(diam2) + 1;
    Rat big = radius * radius;

    SurfacePresentation sp = rebase(s, poly, center);
    Developer dv(sp);
    dv.cap = cell_cap();
    dv.r2 = big;
    dv.run(poly, center);
    const DevelopedComplex& dc = dv.out;

    // Region in developed coordinates about the center.
    Rect reg(rect.lo - center, rect.hi - center);
    ConvexPolygon reg_poly;
    {
      std::vector<Point> pts{reg.lo, Point(reg.hi.x, reg.lo.y), reg.hi,
                             Point(reg.lo.x, reg.hi.y)};
      // Deduplicate degenerate rect corners.
      for (const Point& p : pts) {
        bool dup = false;
        for (const Point& q : reg_poly) dup = dup || q == p;
        if (!dup) reg_poly.push_back(p);
      }
    }
    ConvexPolygon neg_reg;
    for (auto it = reg_poly.rbegin(); it != reg_poly.rend(); ++it)
      neg_reg.push_back(-*it);

    struct Candidate {
      Rat value;
      Point argmin_center;  // developed coords about `center`
    };
    std::vector<Candidate> cands;
    for (const SingularMark& m : dc.marks) {
      Point nearest;
      Rat dd;
      if (reg_poly.size() == 1) {
        nearest = reg_poly[0];
        dd = dist2(nearest, m.position);
      } else if (reg_poly.size() == 2) {
        dd = segment_closest_sq(reg_poly[0], reg_poly[1], m.position, &nearest);
      } else {
        dd = polygon_closest_sq(reg_poly, m.position, &nearest);
      }
      cands.push_back({dd, nearest});
    }
    for (size_t i = 0; i < dc.cells.size(); ++i) {
      for (size_t j = i + 1; j < dc.cells.size(); ++j) {
        const DevCell &a = dc.cells[i], &b = dc.cells[j];
        if (a.source != b.source || a.placement == b.placement) continue;
        Vec2 t = b.placement - a.placement;
        ConvexPolygon dom = minkowski_sum(a.poly, neg_reg);
        Point qstar;
        Rat val = min_max_dist_sq(dom, Point(0, 0), -t, &qstar);
        if (best && val >= *best) continue;
        // Recover a region point attaining the value: shat with
        // qstar + shat in a.poly.
        ConvexPolygon feas =
            convex_intersect(reg_poly.size() >= 3 ? reg_poly
                                                  : ConvexPolygon(),
                             polygon_translate(a.poly, -qstar));
        Point shat;
        if (reg_poly.size() >= 3 && !feas.empty()) {
          shat = feas[0];
          for (const Point& q : feas)
            if (lex_less(q, shat)) shat = q;
        } else if (reg_poly.size() < 3) {
          // Degenerate region: clip the segment/point to the translated cell.
          if (reg_poly.size() == 1) {
            shat = reg_poly[0];
          } else {
            Rat t0, t1;
            if (clip_segment_to_polygon(polygon_translate(a.poly, -qstar),
                                        reg_poly[0], reg_poly[1], &t0, &t1)) {
              shat = reg_poly[0] + (reg_poly[1] - reg_poly[0]) * t0;
            } else {
              shat = reg_poly[0];
            }
          }
        } else {
          continue;  // numerical mismatch; the pointwise check would reject it
        }
        cands.push_back({val, shat});
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      return a.value < b.value;
    });
    // Verify candidates pointwise until one matches exactly.
    for (const Candidate& cd : cands) {
      if (best && cd.value >= *best) break;
      Point spt = center + cd.argmin_center;
      EmbeddingRadius at = embedding_radius(s, poly, spt);
      if (!at.er2.infinite && at.er2.value == cd.value) {
        best = cd.value;
        break;
      }
      if (!at.er2.infinite && (!best || at.er2.value < *best))
        best = at.er2.value;  // the point is witnessed even if the event moved
    }
    // Region corners are always candidates.
    for (const Point& c : reg_poly) {
      EmbeddingRadius at = embedding_radius(s, poly, center + c);
      if (!at.er2.infinite && (!best || at.er2.value < *best))
        best = at.er2.value;
    }
  }
  if (!best) return SqRadius::inf();
  return SqRadius(*best);
}

}  // namespace flatland
