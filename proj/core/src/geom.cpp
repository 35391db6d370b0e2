#include "flatland/geom.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace flatland {

Rat polygon_area2(const ConvexPolygon& p) {
  Rat s = 0;
  for (size_t i = 0; i < p.size(); ++i) s += cross(p[i], p[(i + 1) % p.size()]);
  return s;
}

bool polygon_is_convex_ccw(const ConvexPolygon& p) {
  size_t n = p.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i) {
    if (p[i] == p[(i + 1) % n]) return false;  // zero-length edge
    if (orient(p[i], p[(i + 1) % n], p[(i + 2) % n]) < 0) return false;
  }
  return polygon_area2(p) > 0;
}

Containment polygon_contains(const ConvexPolygon& p, const Point& q) {
  size_t n = p.size();
  bool on_edge = false;
  for (size_t i = 0; i < n; ++i) {
    int s = orient(p[i], p[(i + 1) % n], q);
    if (s < 0) return Containment::Outside;
    if (s == 0) on_edge = true;
  }
  return on_edge ? Containment::Boundary : Containment::Inside;
}

ConvexPolygon polygon_translate(const ConvexPolygon& p, const Vec2& t) {
  ConvexPolygon r;
  r.reserve(p.size());
  for (const auto& v : p) r.push_back(v + t);
  return r;
}

ConvexPolygon polygon_transform(const ConvexPolygon& p, const Mat2& m) {
  ConvexPolygon r;
  r.reserve(p.size());
  for (const auto& v : p) r.push_back(m.apply(v));
  return r;
}

ConvexPolygon clip_halfplane(const ConvexPolygon& p, const Point& a, const Point& b) {
  ConvexPolygon out;
  size_t n = p.size();
  if (n == 0) return out;
  Vec2 e = b - a;
  auto side = [&](const Point& q) { return cross(e, q - a); };
  for (size_t i = 0; i < n; ++i) {
    const Point& cur = p[i];
    const Point& nxt = p[(i + 1) % n];
    Rat sc = side(cur), sn = side(nxt);
    if (sc >= 0) out.push_back(cur);
    if ((sc > 0 && sn < 0) || (sc < 0 && sn > 0)) {
      Rat t = sc / (sc - sn);
      out.push_back(cur + (nxt - cur) * t);
    }
  }
  // remove consecutive duplicates
  ConvexPolygon dedup;
  for (const auto& v : out)
    if (dedup.empty() || !(dedup.back() == v)) dedup.push_back(v);
  while (dedup.size() > 1 && dedup.front() == dedup.back()) dedup.pop_back();
  return dedup;
}

ConvexPolygon convex_intersect(const ConvexPolygon& p, const ConvexPolygon& q) {
  ConvexPolygon r = p;
  size_t n = q.size();
  for (size_t i = 0; i < n && !r.empty(); ++i)
    r = clip_halfplane(r, q[i], q[(i + 1) % n]);
  return r;
}

static ConvexPolygon convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(),
            [](const Point& a, const Point& b) { return lex_less(a, b); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull;
  auto build = [&](auto begin, auto end) {
    size_t base = hull.size();
    for (auto it = begin; it != end; ++it) {
      while (hull.size() >= base + 2 &&
             orient(hull[hull.size() - 2], hull.back(), *it) <= 0)
        hull.pop_back();
      hull.push_back(*it);
    }
  };
  build(pts.begin(), pts.end());
  hull.pop_back();
  build(pts.rbegin(), pts.rend());
  hull.pop_back();
  return hull;
}

ConvexPolygon minkowski_sum(const ConvexPolygon& p, const ConvexPolygon& q) {
  std::vector<Point> sums;
  sums.reserve(p.size() * q.size());
  for (const auto& a : p)
    for (const auto& b : q) sums.push_back(a + b);
  return convex_hull(std::move(sums));
}

Rat segment_closest_sq(const Point& a, const Point& b, const Point& q, Point* nearest) {
  Vec2 e = b - a;
  Rat len2 = norm2(e);
  if (len2 == 0) {
    if (nearest) *nearest = a;
    return dist2(a, q);
  }
  Rat t = dot(q - a, e) / len2;
  if (t < 0) t = 0;
  if (t > 1) t = 1;
  Point n = a + e * t;
  if (nearest) *nearest = n;
  return dist2(n, q);
}

Rat polygon_closest_sq(const ConvexPolygon& p, const Point& q, Point* nearest) {
  if (polygon_contains(p, q) != Containment::Outside) {
    if (nearest) *nearest = q;
    return Rat(0);
  }
  Rat best = -1;
  Point best_pt;
  size_t n = p.size();
  for (size_t i = 0; i < n; ++i) {
    Point cand;
    Rat d = segment_closest_sq(p[i], p[(i + 1) % n], q, &cand);
    if (best < 0 || d < best) {
      best = d;
      best_pt = cand;
    }
  }
  if (nearest) *nearest = best_pt;
  return best;
}

/// Clips the line m + t*d to the polygon; returns the param range if nonempty.
static bool line_clip(const ConvexPolygon& poly, const Point& m, const Vec2& d,
                      Rat* t0, Rat* t1) {
  Rat lo = 0, hi = 0;
  bool bounded = false;
  // Solve constraints cross(e_i, m + t d - v_i) >= 0.
  size_t n = poly.size();
  Rat tlo, thi;
  bool have_lo = false, have_hi = false;
  for (size_t i = 0; i < n; ++i) {
    Vec2 e = poly[(i + 1) % n] - poly[i];
    Rat c0 = cross(e, m - poly[i]);
    Rat c1 = cross(e, d);
    if (c1 == 0) {
      if (c0 < 0) return false;
      continue;
    }
    Rat t = -c0 / c1;
    if (c1 > 0) {
      if (!have_lo || t > tlo) tlo = t, have_lo = true;
    } else {
      if (!have_hi || t < thi) thi = t, have_hi = true;
    }
  }
  (void)lo;
  (void)hi;
  (void)bounded;
  if (!have_lo || !have_hi || tlo > thi) return false;
  *t0 = tlo;
  *t1 = thi;
  return true;
}

bool clip_segment_to_polygon(const ConvexPolygon& poly, const Point& a,
                             const Point& b, Rat* t0, Rat* t1) {
  Rat lo, hi;
  if (!line_clip(poly, a, b - a, &lo, &hi)) return false;
  if (lo < 0) lo = 0;
  if (hi > 1) hi = 1;
  if (lo > hi) return false;
  *t0 = lo;
  *t1 = hi;
  return true;
}

bool advances_into(const ConvexPolygon& poly, const Point& m, const Vec2& n) {
  size_t k = poly.size();
  for (size_t i = 0; i < k; ++i) {
    const Point &p = poly[i], &q = poly[(i + 1) % k];
    Vec2 e = q - p;
    Rat side = cross(e, m - p);
    if (side < 0) return false;  // m outside
    if (side == 0) {
      // m on the edge line; active only if within the closed segment.
      Rat t = dot(m - p, e);
      if (t < 0 || t > norm2(e)) continue;
      if (cross(e, n) < 0) return false;
    }
  }
  return true;
}

Rat min_max_dist_sq(const ConvexPolygon& poly, const Point& c1, const Point& c2,
                    Point* argmin) {
  if (c1 == c2) return polygon_closest_sq(poly, c1, argmin);
  Rat best = -1;
  Point best_pt;
  auto consider = [&](const Point& p, const Rat& val) {
    if (best < 0 || val < best) {
      best = val;
      best_pt = p;
    }
  };
  // Closest point to each center, valid where that center is the farther one.
  Point p1, p2;
  polygon_closest_sq(poly, c1, &p1);
  if (dist2(p1, c1) >= dist2(p1, c2)) consider(p1, dist2(p1, c1));
  polygon_closest_sq(poly, c2, &p2);
  if (dist2(p2, c2) >= dist2(p2, c1)) consider(p2, dist2(p2, c2));
  // Perpendicular bisector of [c1,c2] clipped to the polygon.
  Point m = (c1 + c2) * Rat(1, 2);
  Vec2 dir{c1.y - c2.y, c2.x - c1.x};
  Rat t0, t1;
  if (line_clip(poly, m, dir, &t0, &t1)) {
    // minimize |m + t dir - c1|^2 over [t0, t1]
    Vec2 w = m - c1;
    Rat tstar = -dot(w, dir) / norm2(dir);
    if (tstar < t0) tstar = t0;
    if (tstar > t1) tstar = t1;
    Point p = m + dir * tstar;
    consider(p, dist2(p, c1));
  }
  if (argmin) *argmin = best_pt;
  return best;
}

std::optional<ExitResult> exit_edge(const ConvexPolygon& poly, const Point& start,
                                    const Vec2& dir, ExitError* err) {
  if (err) *err = ExitError::None;
  if (dir.is_zero()) {
    if (err) *err = ExitError::ZeroDirection;
    return std::nullopt;
  }
  if (polygon_contains(poly, start) == Containment::Outside) {
    if (err) *err = ExitError::StartOutside;
    return std::nullopt;
  }
  size_t n = poly.size();
  std::optional<ExitResult> best;
  auto consider = [&](const Rat& t, int edge, const Point& p, bool vhit, int vidx) {
    if (t <= 0) return;
    if (!best || t < best->t) {
      ExitResult r;
      r.edge_index = edge;
      r.exit_point = p;
      r.t = t;
      r.vertex_hit = vhit;
      r.vertex_index = vidx;
      best = r;
    }
  };
  for (size_t i = 0; i < n; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % n];
    Vec2 e = b - a;
    Rat denom = cross(dir, e);
    if (denom == 0) {
      // Parallel; relevant only if collinear.
      if (cross(a - start, dir) != 0) continue;
      Rat len2 = norm2(dir);
      Rat ta = dot(a - start, dir) / len2;
      Rat tb = dot(b - start, dir) / len2;
      consider(ta, int(i), a, true, int(i));
      consider(tb, int(i), b, true, int((i + 1) % n));
      continue;
    }
    Rat t = cross(a - start, e) / denom;
    if (t <= 0) continue;
    Point p = start + dir * t;
    // Check p within the closed edge using the dominant axis.
    Rat u;
    if (e.x != 0)
      u = (p.x - a.x) / e.x;
    else
      u = (p.y - a.y) / e.y;
    if (u < 0 || u > 1) continue;
    if (u == 0)
      consider(t, int(i), a, true, int(i));
    else if (u == 1)
      consider(t, int(i), b, true, int((i + 1) % n));
    else
      consider(t, int(i), p, false, -1);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Rectangular unions

bool RectUnion::member_closed(const Point& p) const {
  for (const auto& r : rects)
    if (r.contains_closed(p)) return true;
  return false;
}

bool RectUnion::member_interior(const Point& p) const {
  // Interior iff every quadrant direction around p has a rect with strict room.
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) {
      bool covered = false;
      for (const auto& r : rects) {
        if (!r.contains_closed(p)) continue;
        bool room_x = sx > 0 ? p.x < r.hi.x : p.x > r.lo.x;
        bool room_y = sy > 0 ? p.y < r.hi.y : p.y > r.lo.y;
        if (room_x && room_y) {
          covered = true;
          break;
        }
      }
      if (!covered) return false;
    }
  }
  return true;
}

Rect RectUnion::bbox() const {
  Rect b = rects.front();
  for (const auto& r : rects) {
    b.lo.x = rat_min(b.lo.x, r.lo.x);
    b.lo.y = rat_min(b.lo.y, r.lo.y);
    b.hi.x = rat_max(b.hi.x, r.hi.x);
    b.hi.y = rat_max(b.hi.y, r.hi.y);
  }
  return b;
}

Rat rect_closest_sq(const Rect& r, const Point& q) {
  Rat x = q.x, y = q.y;
  if (x < r.lo.x) x = r.lo.x;
  if (x > r.hi.x) x = r.hi.x;
  if (y < r.lo.y) y = r.lo.y;
  if (y > r.hi.y) y = r.hi.y;
  return dist2({x, y}, q);
}

namespace {

struct Interval {
  Rat lo, hi;
  bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
};

std::vector<Interval> slab_intervals(const std::vector<Rect>& rects, const Rat& y0,
                                     const Rat& y1) {
  std::vector<Interval> iv;
  for (const auto& r : rects)
    if (r.lo.y <= y0 && r.hi.y >= y1) iv.push_back({r.lo.x, r.hi.x});
  std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.hi < b.hi;
  });
  std::vector<Interval> merged;
  for (const auto& i : iv) {
    if (!merged.empty() && i.lo <= merged.back().hi)
      merged.back().hi = rat_max(merged.back().hi, i.hi);
    else
      merged.push_back(i);
  }
  return merged;
}

}  // namespace

RectUnion rect_union_normalize(const std::vector<Rect>& rects) {
  if (rects.empty()) throw std::invalid_argument("rect_union_normalize: empty input");
  for (const auto& r : rects)
    if (!r.valid()) throw std::invalid_argument("rect_union_normalize: degenerate rect");

  std::vector<Rat> ys;
  for (const auto& r : rects) {
    ys.push_back(r.lo.y);
    ys.push_back(r.hi.y);
  }
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  RectUnion u;
  // Open rects being grown upward: (interval, y_start), matched slab to slab.
  std::vector<std::pair<Interval, Rat>> open;
  std::vector<Interval> prev;
  for (size_t k = 0; k + 1 < ys.size(); ++k) {
    auto cur = slab_intervals(rects, ys[k], ys[k + 1]);
    bool same = (cur == prev) && k > 0 && !open.empty();
    // A gap slab (no intervals) always breaks runs.
    if (!same) {
      for (auto& [iv, y0] : open)
        u.rects.push_back(Rect{{iv.lo, y0}, {iv.hi, ys[k]}});
      open.clear();
      for (const auto& iv : cur) open.push_back({iv, ys[k]});
    }
    prev = cur;
    if (cur.empty()) prev.clear();
  }
  for (auto& [iv, y0] : open) u.rects.push_back(Rect{{iv.lo, y0}, {iv.hi, ys.back()}});

  std::sort(u.rects.begin(), u.rects.end(), [](const Rect& a, const Rect& b) {
    if (a.lo.y != b.lo.y) return a.lo.y < b.lo.y;
    return a.lo.x < b.lo.x;
  });

  // Connectivity over closed rects (touching counts).
  size_t n = u.rects.size();
  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<size_t(size_t)> find = [&](size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      const Rect &a = u.rects[i], &b = u.rects[j];
      bool touch = a.lo.x <= b.hi.x && b.lo.x <= a.hi.x && a.lo.y <= b.hi.y &&
                   b.lo.y <= a.hi.y;
      if (touch) parent[find(i)] = find(j);
    }
  size_t roots = 0;
  for (size_t i = 0; i < n; ++i)
    if (find(i) == i) ++roots;
  u.is_connected = roots == 1;
  u.is_disk = rect_union_is_disk(u);
  return u;
}

bool rect_union_is_disk(const RectUnion& u) {
  if (u.rects.empty()) return false;
  std::vector<Rat> xs, ys;
  for (const auto& r : u.rects) {
    xs.push_back(r.lo.x);
    xs.push_back(r.hi.x);
    ys.push_back(r.lo.y);
    ys.push_back(r.hi.y);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  size_t nx = xs.size() - 1, ny = ys.size() - 1;
  auto occupied = [&](size_t i, size_t j) -> bool {
    if (i >= nx || j >= ny) return false;
    Point c{(xs[i] + xs[i + 1]) / 2, (ys[j] + ys[j + 1]) / 2};
    return u.member_closed(c);
  };
  // Face/edge/vertex counts of the occupied closed complex.
  long F = 0, E = 0, V = 0;
  size_t occ_count = 0;
  std::vector<std::pair<size_t, size_t>> occ_cells;
  for (size_t i = 0; i < nx; ++i)
    for (size_t j = 0; j < ny; ++j)
      if (occupied(i, j)) {
        ++F;
        ++occ_count;
        occ_cells.push_back({i, j});
      }
  if (occ_count == 0) return false;
  // vertical edges at (i, j): between cells (i-1,j) and (i,j)
  for (size_t i = 0; i <= nx; ++i)
    for (size_t j = 0; j < ny; ++j)
      if ((i > 0 && occupied(i - 1, j)) || occupied(i, j)) ++E;
  for (size_t j = 0; j <= ny; ++j)
    for (size_t i = 0; i < nx; ++i)
      if ((j > 0 && occupied(i, j - 1)) || occupied(i, j)) ++E;
  for (size_t i = 0; i <= nx; ++i)
    for (size_t j = 0; j <= ny; ++j) {
      bool sw = i > 0 && j > 0 && occupied(i - 1, j - 1);
      bool se = j > 0 && occupied(i, j - 1);
      bool nw = i > 0 && occupied(i - 1, j);
      bool ne = occupied(i, j);
      if (sw || se || nw || ne) ++V;
      // Pinch vertex: exactly two diagonal cells occupied.
      if ((sw && ne && !se && !nw) || (se && nw && !sw && !ne)) return false;
    }
  if (V - E + F != 1) return false;
  // Edge-connectivity of occupied cells.
  std::map<std::pair<size_t, size_t>, size_t> index;
  for (size_t k = 0; k < occ_cells.size(); ++k) index[occ_cells[k]] = k;
  std::vector<size_t> parent(occ_cells.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<size_t(size_t)> find = [&](size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& [cell, k] : index) {
    auto [i, j] = cell;
    if (i + 1 < nx && occupied(i + 1, j)) parent[find(k)] = find(index[{i + 1, j}]);
    if (j + 1 < ny && occupied(i, j + 1)) parent[find(k)] = find(index[{i, j + 1}]);
  }
  size_t roots = 0;
  for (size_t k = 0; k < occ_cells.size(); ++k)
    if (find(k) == k) ++roots;
  return roots == 1;
}

}  // namespace flatland
