#include <doctest.h>

#include "flatland/geom.hpp"

using namespace flatland;

TEST_CASE("rational parse and format round-trip") {
  CHECK(rat_str(rat_parse("3/4")) == "3/4");
  CHECK(rat_str(rat_parse("-6/8")) == "-3/4");
  CHECK(rat_str(rat_parse("5")) == "5");
  CHECK(rat_parse("0/7") == 0);
  CHECK_THROWS_AS(rat_parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(rat_parse("a"), std::invalid_argument);
}

TEST_CASE("square-root comparison lemmas are exact") {
  // sqrt(2) + 1 <= sqrt(9) but not <= sqrt(5) (sqrt(5) ~ 2.236 < 2.414).
  CHECK(sqrt_plus_leq_sqrt(Rat(2), Rat(1), Rat(9)));
  CHECK(!sqrt_plus_leq_sqrt(Rat(2), Rat(1), Rat(5)));
  // Equality case: sqrt(1) + 1 <= sqrt(4).
  CHECK(sqrt_plus_leq_sqrt(Rat(1), Rat(1), Rat(4)));
  // Negative displacement: sqrt(9) - 2 <= sqrt(2) (1 <= 1.414...).
  CHECK(sqrt_plus_leq_sqrt(Rat(9), Rat(-2), Rat(2)));
  CHECK(!sqrt_plus_leq_sqrt(Rat(9), Rat(-1), Rat(2)));

  CHECK(sqrt_diff_leq_sqrt(Rat(9), Rat(4), Rat(1)));
  CHECK(!sqrt_diff_leq_sqrt(Rat(9), Rat(4), Rat(1, 2)));
  CHECK(sqrt_diff_leq_sqrt(Rat(2), Rat(2), Rat(0)));

  Rat root;
  CHECK(rat_sqrt_exact(Rat(9, 16), &root));
  CHECK(root == Rat(3, 4));
  CHECK(!rat_sqrt_exact(Rat(2), &root));
  Rat lo = sqrt_lower(Rat(2)), hi = sqrt_upper(Rat(2));
  CHECK(lo * lo <= 2);
  CHECK(hi * hi >= 2);
}

TEST_CASE("convex polygon primitives") {
  ConvexPolygon sq = {Point(0, 0), Point(2, 0), Point(2, 2), Point(0, 2)};
  CHECK(polygon_is_convex_ccw(sq));
  CHECK(polygon_area2(sq) == 8);
  CHECK(polygon_contains(sq, Point(1, 1)) == Containment::Inside);
  CHECK(polygon_contains(sq, Point(0, 1)) == Containment::Boundary);
  CHECK(polygon_contains(sq, Point(3, 1)) == Containment::Outside);

  auto halved = clip_halfplane(sq, Point(1, 0), Point(1, 2));
  CHECK(polygon_area2(halved) == 4);

  ConvexPolygon tri = {Point(1, 1), Point(3, 1), Point(1, 3)};
  auto inter = convex_intersect(sq, tri);
  CHECK(polygon_area2(inter) == 2);  // the unit square [1,2]^2

  auto mink = minkowski_sum(sq, tri);
  CHECK(polygon_area2(mink) > polygon_area2(sq) + polygon_area2(tri));

  Point nearest;
  CHECK(polygon_closest_sq(sq, Point(3, 1), &nearest) == 1);
  CHECK(nearest == Point(2, 1));
  CHECK(segment_closest_sq(Point(0, 0), Point(2, 0), Point(1, 1)) == 1);
}

TEST_CASE("ray exit from a convex polygon") {
  ConvexPolygon sq = {Point(0, 0), Point(2, 0), Point(2, 2), Point(0, 2)};
  auto r = exit_edge(sq, Point(1, 1), Vec2(1, 0));
  REQUIRE(r.has_value());
  CHECK(r->exit_point == Point(2, 1));
  CHECK(r->edge_index == 1);
  CHECK(!r->vertex_hit);

  auto v = exit_edge(sq, Point(1, 1), Vec2(1, 1));
  REQUIRE(v.has_value());
  CHECK(v->vertex_hit);
  CHECK(v->exit_point == Point(2, 2));

  ExitError err = ExitError::None;
  CHECK(!exit_edge(sq, Point(3, 3), Vec2(1, 0), &err).has_value());
  CHECK(err == ExitError::StartOutside);
}

TEST_CASE("advances_into and min_max_dist_sq") {
  ConvexPolygon sq = {Point(0, 0), Point(2, 0), Point(2, 2), Point(0, 2)};
  CHECK(advances_into(sq, Point(0, 1), Vec2(1, 0)));
  CHECK(!advances_into(sq, Point(0, 1), Vec2(-1, 0)));
  CHECK(advances_into(sq, Point(0, 1), Vec2(0, 1)));  // along the edge
  CHECK(!advances_into(sq, Point(0, 0), Vec2(-1, 1)));

  Point arg;
  Rat m = min_max_dist_sq(sq, Point(-1, 1), Point(3, 1), &arg);
  CHECK(m == 4);  // best point (1,1), two units from both centers
  CHECK(arg == Point(1, 1));
}

TEST_CASE("rect union canonical form") {
  // Merge of aligned overlapping rects.
  auto merged = rect_union_normalize(
      {Rect(Point(0, 0), Point(2, 1)), Rect(Point(1, 0), Point(3, 1))});
  REQUIRE(merged.rects.size() == 1);
  CHECK(merged.rects[0] == Rect(Point(0, 0), Point(3, 1)));
  CHECK(merged.is_connected);
  CHECK(merged.is_disk);

  // Identity.
  auto one = rect_union_normalize({Rect(Point(0, 0), Point(1, 1))});
  REQUIRE(one.rects.size() == 1);
  CHECK(one.is_disk);

  // Disconnected pieces.
  auto two = rect_union_normalize(
      {Rect(Point(0, 0), Point(1, 1)), Rect(Point(2, 0), Point(3, 1))});
  CHECK(!two.is_connected);
  CHECK(!two.is_disk);

  // Square annulus: connected but not simply connected.
  auto ring = rect_union_normalize({Rect(Point(0, 0), Point(3, 1)),
                                    Rect(Point(0, 2), Point(3, 3)),
                                    Rect(Point(0, 0), Point(1, 3)),
                                    Rect(Point(2, 0), Point(3, 3))});
  CHECK(ring.is_connected);
  CHECK(!ring.is_disk);
  CHECK(ring.member_closed(Point(Rat(3, 2), Rat(1, 2))));
  CHECK(!ring.member_closed(Point(Rat(3, 2), Rat(3, 2))));
  CHECK(!ring.member_interior(Point(0, 0)));
  CHECK(ring.member_interior(Point(Rat(1, 2), Rat(1, 2))));

  // Canonical form is representation-independent.
  auto a = rect_union_normalize({Rect(Point(0, 0), Point(2, 2))});
  auto b = rect_union_normalize(
      {Rect(Point(0, 0), Point(1, 2)), Rect(Point(1, 0), Point(2, 2))});
  CHECK(a == b);

  CHECK_THROWS_AS(rect_union_normalize({}), std::invalid_argument);
  CHECK_THROWS_AS(rect_union_normalize({Rect(Point(0, 0), Point(0, 1))}),
                  std::invalid_argument);
}

TEST_CASE("matrix algebra") {
  Mat2 a(1, 1, 0, 1), b(2, 0, 1, 3);
  CHECK((a * b).det() == a.det() * b.det());
  CHECK(a * a.inverse() == Mat2());
  CHECK(a.apply(Vec2(1, 2)) == Vec2(3, 2));
  CHECK_THROWS_AS(Mat2(1, 2, 2, 4).inverse(), std::invalid_argument);
}
