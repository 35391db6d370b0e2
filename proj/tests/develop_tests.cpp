#include <doctest.h>

#include <cstdlib>

#include "flatland/develop.hpp"
#include "helpers.hpp"

using namespace flatland;
using flatland::testing::square_disk;

TEST_CASE("square torus development at r2 = 9/16") {
  auto t = builtin_torus(Vec2(1, 0), Vec2(0, 1));
  auto d = develop_disk(t, Rat(9, 16));
  CHECK(d.cells.size() == 9);  // 3x3 block of unit squares covers the 3/4-disk
  CHECK(d.marks.empty());
  CHECK(d.is_disk);
  CHECK(complex_euler_characteristic(d) == 1);
  // the basepoint develops to the origin, so its unit square is centered
  CHECK(polygon_contains(d.cells[d.basepoint_cell].poly, Point(0, 0)) ==
        Containment::Inside);
  CHECK(polygon_area2(d.cells[d.basepoint_cell].poly) == 2);
}

TEST_CASE("plane development is a single chart") {
  auto d = develop_disk(builtin_plane(), Rat(100));
  CHECK(d.cells.size() == 1);
  CHECK(d.marks.empty());
}

TEST_CASE("l-origami development finds the cone-point marks") {
  auto d = develop_disk(lshape_origami(), Rat(1));
  REQUIRE(!d.marks.empty());
  for (auto& m : d.marks) CHECK(m.dist2 == Rat(1, 2));
  CHECK(complex_euler_characteristic(d) == 1);
}

TEST_CASE("development is monotone in the radius") {
  auto t = builtin_torus(Vec2(1, 0), Vec2(0, 1));
  auto d1 = develop_disk(t, Rat(1, 16));
  auto d2 = develop_disk(t, Rat(9, 16));
  REQUIRE(d1.cells.size() <= d2.cells.size());
  for (size_t i = 0; i < d1.cells.size(); ++i) {
    CHECK(d1.cells[i].source == d2.cells[i].source);
    CHECK(d1.cells[i].placement == d2.cells[i].placement);
  }
}

TEST_CASE("staircase surfaces develop, finite and infinite") {
  auto d = develop_disk(builtin_staircase(3), Rat(1, 4));
  CHECK(complex_euler_characteristic(d) == 1);
  auto di = develop_disk(builtin_staircase_infinite(), Rat(1, 4));
  CHECK(complex_euler_characteristic(di) == 1);
}

TEST_CASE("cell cap raises NonTermination") {
  // A large disk on the infinite staircase exceeds a tiny cap.
  setenv("FLATLAND_CELL_CAP", "4", 1);
  CHECK_THROWS_AS(develop_disk(builtin_staircase_infinite(), Rat(25)),
                  NonTermination);
  unsetenv("FLATLAND_CELL_CAP");
}

TEST_CASE("geodesic tracing") {
  auto t = builtin_torus(Vec2(1, 0), Vec2(0, 1));
  SUBCASE("closed geodesic on the torus") {
    auto r = trace(t, 0, Point(Rat(1, 4), Rat(1, 4)), Vec2(1, 0), Rat(4));
    auto* e = std::get_if<TraceEndpoint>(&r);
    REQUIRE(e);
    CHECK(e->point == Point(Rat(1, 4), Rat(1, 4)));
  }
  SUBCASE("diagonal into the l-origami cone point") {
    auto r = trace(lshape_origami(), 0, Point(Rat(1, 2), Rat(1, 2)), Vec2(1, 1),
                   Rat(2));
    auto* h = std::get_if<TraceHitPuncture>(&r);
    REQUIRE(h);
    CHECK(h->dist2 == Rat(1, 2));
  }
  SUBCASE("straight line in the plane") {
    auto r = trace(builtin_plane(), 0, Point(0, 0), Vec2(3, 4), Rat(25));
    auto* e = std::get_if<TraceEndpoint>(&r);
    REQUIRE(e);
    CHECK(e->point == Point(3, 4));
  }
  SUBCASE("irrational length rejected") {
    CHECK_THROWS_AS(trace(t, 0, Point(Rat(1, 4), Rat(1, 4)), Vec2(1, 1), Rat(3)),
                    std::invalid_argument);
  }
}

TEST_CASE("immersion into the l-origami fails at the cone point") {
  auto r = immerse(square_disk(Rat(1)), lshape_origami());
  auto* ni = std::get_if<NoImmersion>(&r);
  REQUIRE(ni);
  CHECK(ni->witness == Point(Rat(1, 2), Rat(1, 2)));
}

TEST_CASE("immersion is independent of BFS tie order") {
  auto D = square_disk(Rat(1, 4));
  auto a = immerse(D, lshape_origami(), false);
  auto b = immerse(D, lshape_origami(), true);
  auto* ia = std::get_if<ImmersionMap>(&a);
  auto* ib = std::get_if<ImmersionMap>(&b);
  REQUIRE(ia);
  REQUIRE(ib);
  REQUIRE(ia->pieces.size() == ib->pieces.size());
  for (auto& p : ia->pieces) {
    bool found = false;
    for (auto& q : ib->pieces)
      found |= p.cell == q.cell && p.target == q.target && p.tau == q.tau;
    CHECK(found);
  }
}

TEST_CASE("embedding decision on the square torus") {
  auto t = builtin_torus(Vec2(1, 0), Vec2(0, 1));
  CHECK(std::holds_alternative<Embedded>(embeds(square_disk(Rat(1, 4)), t)));

  auto r = embeds(square_disk(Rat(3, 4)), t);
  auto* ov = std::get_if<Overlap>(&r);
  REQUIRE(ov);
  // the colliding developed points differ by a nonzero lattice vector
  Vec2 diff = ov->x - ov->y;
  CHECK(rat_den(diff.x) == 1);
  CHECK(rat_den(diff.y) == 1);
  CHECK(!diff.is_zero());
}

TEST_CASE("basepoint fibers") {
  auto D = square_disk(Rat(5, 4));
  SUBCASE("square torus: 3x3 lattice points") {
    auto t = builtin_torus(Vec2(1, 0), Vec2(0, 1));
    auto r = immerse(D, t);
    auto* im = std::get_if<ImmersionMap>(&r);
    REQUIRE(im);
    CHECK(point_fiber(*im, t.basepoint_polygon, t.basepoint).points.size() == 9);
  }
  SUBCASE("tall torus: only the horizontal lattice fits") {
    auto t = builtin_torus(Vec2(1, 0), Vec2(0, 2));
    auto r = immerse(D, t);
    auto* im = std::get_if<ImmersionMap>(&r);
    REQUIRE(im);
    auto f = point_fiber(*im, t.basepoint_polygon, t.basepoint);
    REQUIRE(f.points.size() == 3);
    CHECK(f.points[0].position == Point(-1, 0));
    CHECK(f.points[1].position == Point(0, 0));
    CHECK(f.points[2].position == Point(1, 0));
  }
  SUBCASE("plane: a single lift") {
    auto p = builtin_plane();
    auto r = immerse(D, p);
    auto* im = std::get_if<ImmersionMap>(&r);
    REQUIRE(im);
    auto f = point_fiber(*im, p.basepoint_polygon, p.basepoint);
    REQUIRE(f.points.size() == 1);
    CHECK(f.points[0].position == Point(0, 0));
  }
}

TEST_CASE("embedding radius") {
  SUBCASE("square torus: the length-1 loop gives ER2 = 1/4") {
    auto t = builtin_torus(Vec2(1, 0), Vec2(0, 1));
    auto er = embedding_radius(t, t.basepoint_polygon, t.basepoint);
    REQUIRE(!er.er2.infinite);
    CHECK(er.er2.value == Rat(1, 4));
    bool overlap = false;
    for (auto& e : er.events) overlap |= e.kind == BindingEvent::Kind::SelfOverlap;
    CHECK(overlap);
  }
  SUBCASE("l-origami center: cone point and loop tie at 1/2") {
    auto er = embedding_radius(lshape_origami(), 0, Point(Rat(1, 2), Rat(1, 2)));
    REQUIRE(!er.er2.infinite);
    CHECK(er.er2.value == Rat(1, 2));
    bool sing = false, overlap = false;
    for (auto& e : er.events) {
      sing |= e.kind == BindingEvent::Kind::Singularity;
      overlap |= e.kind == BindingEvent::Kind::SelfOverlap;
    }
    CHECK(sing);
    CHECK(overlap);
  }
  SUBCASE("l-origami point (3/2,1/2)") {
    auto er = embedding_radius(lshape_origami(), 1, Point(Rat(3, 2), Rat(1, 2)));
    REQUIRE(!er.er2.infinite);
    CHECK(er.er2.value == Rat(1, 4));
  }
  SUBCASE("plane: infinite") {
    CHECK(embedding_radius(builtin_plane(), 0, Point(0, 0)).er2.infinite);
  }
}

TEST_CASE("ball embedding below the radius, rejection at it") {
  auto t = builtin_torus(Vec2(1, 0), Vec2(0, 1));
  auto im = ball_embed(t, 0, t.basepoint, Rat(1, 8));
  CHECK(!im.pieces.empty());
  CHECK_THROWS_AS(ball_embed(t, 0, t.basepoint, Rat(1, 4)), RadiusTooLarge);
}

TEST_CASE("embedding radius over compact regions") {
  auto t = builtin_torus(Vec2(1, 0), Vec2(0, 1));
  auto r = er_compact(
      t, {{0, Rect(Point(Rat(1, 8), Rat(1, 8)), Point(Rat(7, 8), Rat(7, 8)))}});
  REQUIRE(!r.infinite);
  CHECK(r.value == Rat(1, 4));  // ER is 1/4 at every point of a flat torus

  auto L = lshape_origami();
  auto rl = er_compact(
      L, {{1, Rect(Point(Rat(11, 8), Rat(3, 8)), Point(Rat(13, 8), Rat(5, 8)))}});
  auto corner = embedding_radius(L, 1, Point(Rat(13, 8), Rat(5, 8)));
  REQUIRE(!rl.infinite);
  CHECK(rl.value <= corner.er2.value);  // the min is at most any sample point
}
