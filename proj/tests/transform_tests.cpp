#include <doctest.h>

#include "flatland/transform.hpp"
#include "helpers.hpp"

using namespace flatland;
using flatland::testing::square_disk;
using flatland::testing::torus_triangles;

TEST_CASE("gl2 action") {
  auto torus = builtin_torus(Vec2(1, 0), Vec2(0, 1));
  Mat2 A(1, 1, 0, 1), B(2, 0, 1, 3);

  CHECK(gl2_act(Mat2(), torus) == torus);
  CHECK(gl2_act(A * B, torus) == gl2_act(A, gl2_act(B, torus)));

  auto scaled = gl2_act(Mat2(2, 0, 0, 2), torus);
  auto er = embedding_radius(scaled, scaled.basepoint_polygon, scaled.basepoint);
  REQUIRE(!er.er2.infinite);
  CHECK(er.er2.value == Rat(1));  // lattice (2Z)^2: shortest loop length 2

  // A shear preserves Z^2, so the sheared torus is the same surface.
  CHECK(iso_at_radius(gl2_act(A, torus), torus, Rat(4)).value);

  CHECK_THROWS_AS(gl2_act(Mat2(1, 0, 0, -1), torus), std::invalid_argument);
  CHECK_THROWS_AS(gl2_act(Mat2(1, 2, 2, 4), torus), std::invalid_argument);
}

TEST_CASE("basepoint change") {
  auto torus = builtin_torus(Vec2(1, 0), Vec2(0, 1));
  auto moved = basepoint_change({torus, 0, Point(Rat(1, 4), Rat(1, 4))});
  CHECK(moved.basepoint == Point(Rat(1, 4), Rat(1, 4)));
  CHECK(basepoint_change({moved, torus.basepoint_polygon, torus.basepoint}) ==
        torus);
  CHECK(iso_at_radius(moved, torus, Rat(4)).value);  // tori are homogeneous

  auto L = lshape_origami();
  auto Lm = basepoint_change({L, 1, Point(Rat(3, 2), Rat(1, 2))});
  auto er = embedding_radius(Lm, Lm.basepoint_polygon, Lm.basepoint);
  REQUIRE(!er.er2.infinite);
  CHECK(er.er2.value == Rat(1, 4));  // bound by the vertical length-1 loop

  CHECK_THROWS_AS(basepoint_change({L, 0, Point(1, 1)}), std::invalid_argument);
  CHECK_THROWS_AS(basepoint_change({torus, 0, Point(5, 5)}),
                  std::invalid_argument);
}

TEST_CASE("fusion of planar rect complexes") {
  auto P = rect_complex(
      rect_union_normalize({Rect(Point(-1, Rat(-1, 4)), Point(1, Rat(1, 4)))}));
  auto Q = rect_complex(
      rect_union_normalize({Rect(Point(Rat(-1, 4), -1), Point(Rat(1, 4), 1))}));
  auto R = fusion(P, Q);
  REQUIRE(R.region.has_value());
  CHECK(R.region->rects.size() == 3);  // the cross, in three horizontal slabs

  CHECK(fusion(P, P).region == P.region);
  CHECK(fusion(R, Q).region == R.region);  // Q already immerses into R
  CHECK(fusion(P, Q).region == fusion(Q, P).region);
}

TEST_CASE("iso at radius") {
  auto torus = builtin_torus(Vec2(1, 0), Vec2(0, 1));
  auto tall = builtin_torus(Vec2(1, 0), Vec2(0, 2));

  CHECK(iso_at_radius(torus, torus, Rat(4)).value);

  auto iso = iso_at_radius(torus, tall, Rat(4));
  CHECK(!iso.value);
  REQUIRE(iso.witness.has_value());
  CHECK(*iso.witness == Point(0, 1));  // in the square torus fiber, not the tall

  // One square and two triangles present the same torus.
  CHECK(iso_at_radius(torus, torus_triangles(), Rat(1)).value);
  CHECK(iso_at_radius(torus, torus_triangles(), Rat(4)).value);
}

TEST_CASE("affine automorphisms") {
  auto torus = builtin_torus(Vec2(1, 0), Vec2(0, 1));
  auto idv = is_affine_automorphism(torus, Mat2(), 0, torus.basepoint, Rat(4));
  CHECK(idv.certified);
  auto shear = is_affine_automorphism(torus, Mat2(1, 1, 0, 1), 0,
                                      torus.basepoint, Rat(4));
  CHECK(shear.certified);
  auto squeeze = is_affine_automorphism(torus, Mat2(2, 0, 0, Rat(1, 2)), 0,
                                        torus.basepoint, Rat(4));
  CHECK(!squeeze.certified);
  CHECK(squeeze.witness.has_value());
}
