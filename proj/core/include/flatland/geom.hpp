#pragma once

#include <optional>
#include <vector>

#include "flatland/rational.hpp"

namespace flatland {

struct Vec2 {
  Rat x, y;
  Vec2() : x(0), y(0) {}
  Vec2(Rat x_, Rat y_) : x(std::move(x_)), y(std::move(y_)) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2 operator*(const Rat& s) const { return {x * s, y * s}; }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
  bool operator!=(const Vec2& o) const { return !(*this == o); }
  bool is_zero() const { return x == 0 && y == 0; }
};

using Point = Vec2;

inline Rat dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline Rat cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline Rat norm2(const Vec2& a) { return dot(a, a); }
inline Rat dist2(const Point& a, const Point& b) { return norm2(a - b); }

/// Lexicographic order (x, then y).
inline bool lex_less(const Vec2& a, const Vec2& b) {
  if (a.x != b.x) return a.x < b.x;
  return a.y < b.y;
}

/// Sign of the signed area of triangle a,b,c: >0 for CCW.
inline int orient(const Point& a, const Point& b, const Point& c) {
  Rat v = cross(b - a, c - a);
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

struct Mat2 {
  Rat a, b, c, d;  // row-major: [[a,b],[c,d]]
  Mat2() : a(1), b(0), c(0), d(1) {}
  Mat2(Rat a_, Rat b_, Rat c_, Rat d_)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

  Rat det() const { return a * d - b * c; }
  Vec2 apply(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Mat2 inverse() const {
    Rat dt = det();
    if (dt == 0) throw std::invalid_argument("singular matrix");
    return {d / dt, -b / dt, -c / dt, a / dt};
  }
  bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
};

// ---------------------------------------------------------------------------
// Convex polygons (CCW vertex lists)

using ConvexPolygon = std::vector<Point>;

Rat polygon_area2(const ConvexPolygon& p);  // twice the signed area
bool polygon_is_convex_ccw(const ConvexPolygon& p);

enum class Containment { Outside, Boundary, Inside };
Containment polygon_contains(const ConvexPolygon& p, const Point& q);

ConvexPolygon polygon_translate(const ConvexPolygon& p, const Vec2& t);
ConvexPolygon polygon_transform(const ConvexPolygon& p, const Mat2& m);

/// Clips p to the half-plane { q : cross(b-a, q-a) >= 0 }.
ConvexPolygon clip_halfplane(const ConvexPolygon& p, const Point& a, const Point& b);

/// Intersection of two convex polygons; may be degenerate (area 0) or empty.
ConvexPolygon convex_intersect(const ConvexPolygon& p, const ConvexPolygon& q);

/// Minkowski sum of two convex polygons (both CCW).
ConvexPolygon minkowski_sum(const ConvexPolygon& p, const ConvexPolygon& q);

/// Squared distance from q to the closed polygon, and the nearest point.
Rat polygon_closest_sq(const ConvexPolygon& p, const Point& q, Point* nearest = nullptr);

/// Squared distance from the origin-based point q to closed segment [a,b].
Rat segment_closest_sq(const Point& a, const Point& b, const Point& q,
                       Point* nearest = nullptr);

/// Parameter interval [t0, t1] ⊆ [0, 1] of the segment a + t(b-a) inside the
/// closed polygon; returns false when the intersection is empty.
bool clip_segment_to_polygon(const ConvexPolygon& poly, const Point& a,
                             const Point& b, Rat* t0, Rat* t1);

/// True iff m + eps*n lies in the closed polygon for all small eps > 0.
/// m must lie in the closed polygon.
bool advances_into(const ConvexPolygon& poly, const Point& m, const Vec2& n);

/// min over p in poly of max(|p-c1|, |p-c2|), returned squared, with the
/// minimizing point. poly must be nondegenerate convex CCW.
Rat min_max_dist_sq(const ConvexPolygon& poly, const Point& c1, const Point& c2,
                    Point* argmin = nullptr);

// ---------------------------------------------------------------------------
// Ray exit from a convex polygon

struct ExitResult {
  int edge_index = -1;      // edge hit (edge i joins vertex i to i+1)
  Point exit_point;
  Rat t;                    // parameter along the ray
  bool vertex_hit = false;  // exit passes exactly through a vertex
  int vertex_index = -1;    // valid when vertex_hit
};

enum class ExitError { None, StartOutside, ZeroDirection };

/// First boundary point hit by start + t*dir with t > 0.
/// start must be inside or on the boundary of the convex CCW polygon.
std::optional<ExitResult> exit_edge(const ConvexPolygon& poly, const Point& start,
                                    const Vec2& dir, ExitError* err = nullptr);

// ---------------------------------------------------------------------------
// Axis-aligned rectangles and canonical rectangular unions

struct Rect {
  Point lo, hi;  // lo.x < hi.x, lo.y < hi.y
  Rect() = default;
  Rect(Point lo_, Point hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {}
  bool valid() const { return lo.x < hi.x && lo.y < hi.y; }
  bool contains_closed(const Point& p) const {
    return lo.x <= p.x && p.x <= hi.x && lo.y <= p.y && p.y <= hi.y;
  }
  bool contains_open(const Point& p) const {
    return lo.x < p.x && p.x < hi.x && lo.y < p.y && p.y < hi.y;
  }
  ConvexPolygon to_polygon() const {
    return {lo, {hi.x, lo.y}, hi, {lo.x, hi.y}};
  }
  bool operator==(const Rect& o) const { return lo == o.lo && hi == o.hi; }
};

/// Canonical form: maximal horizontal-slab decomposition, sorted
/// lexicographically by (lo.y, lo.x). Unique for a given closed point set.
struct RectUnion {
  std::vector<Rect> rects;
  bool is_connected = false;
  bool is_disk = false;

  bool member_closed(const Point& p) const;
  /// True iff p lies in the topological interior of the union.
  bool member_interior(const Point& p) const;
  Rect bbox() const;
  bool operator==(const RectUnion& o) const { return rects == o.rects; }
};

/// Canonicalizes a nonempty list of nondegenerate rects.
/// Throws std::invalid_argument on empty input or a degenerate rect.
RectUnion rect_union_normalize(const std::vector<Rect>& rects);

bool rect_union_is_disk(const RectUnion& u);

/// Squared distance from point q to the closed rect.
Rat rect_closest_sq(const Rect& r, const Point& q);

}  // namespace flatland
