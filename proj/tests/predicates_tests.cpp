#include <doctest.h>

#include "flatland/predicates.hpp"
#include "helpers.hpp"

using namespace flatland;
using flatland::testing::square_disk;
using flatland::testing::torus_triangles;

namespace {

Region open_box_at(const Point& c, const Rat& h) {
  Region r;
  r.openness = Region::Openness::Open;
  r.pieces = {{0, Rect(c - Vec2(h, h), c + Vec2(h, h))}};
  return r;
}

}  // namespace

TEST_CASE("subbasis membership on tori") {
  auto torus = builtin_torus(Vec2(1, 0), Vec2(0, 1));
  auto tall = builtin_torus(Vec2(1, 0), Vec2(0, 2));
  auto D = square_disk(Rat(5, 4));

  SubbasisSet plus;
  plus.tag = SubbasisSet::Tag::Plus;
  plus.disk = D;
  Region u;
  u.openness = Region::Openness::Open;
  u.pieces = {{0, Rect(Point(Rat(-1, 4), Rat(3, 4)), Point(Rat(1, 4), Rat(9, 8)))}};
  plus.u = u;

  SUBCASE("Plus sees the fiber point (0,1) on the square torus") {
    auto r = member(plus, torus);
    CHECK(r.value);
    bool found = false;
    for (auto& f : r.witness.fiber) found |= f.position == Point(0, 1);
    CHECK(found);
  }
  SUBCASE("Minus holds on the tall torus, fails on the square one") {
    SubbasisSet minus;
    minus.tag = SubbasisSet::Tag::Minus;
    minus.disk = D;
    minus.u = u.closure();
    auto r = member(minus, tall);
    CHECK(r.value);
    CHECK(r.witness.fiber.size() == 3);  // {(-1,0),(0,0),(1,0)} avoids K
    CHECK(!member(minus, torus).value);
  }
  SUBCASE("Disjoint distinguishes lattice from non-lattice shifts") {
    SubbasisSet dis;
    dis.tag = SubbasisSet::Tag::Disjoint;
    dis.disk = D;
    Region k1;
    k1.openness = Region::Openness::Closed;
    k1.pieces = {{0, Rect(Point(Rat(-1, 8), Rat(-1, 8)), Point(Rat(1, 8), Rat(1, 8)))}};
    Region k2 = k1;
    k2.pieces[0].second.lo = k2.pieces[0].second.lo + Vec2(1, 0);
    k2.pieces[0].second.hi = k2.pieces[0].second.hi + Vec2(1, 0);
    dis.u = k1;
    dis.k2 = k2;
    auto r = member(dis, torus);
    CHECK(!r.value);
    REQUIRE(r.witness.image_pair.has_value());
    auto [x, y] = *r.witness.image_pair;
    bool ok = (x == Point(0, 0) && y == Point(1, 0)) ||
              (x == Point(1, 0) && y == Point(0, 0));
    CHECK(ok);  // (1,0) is in the deck group, so the images collide

    Region k2half = k1;
    k2half.pieces[0].second.lo = k2half.pieces[0].second.lo + Vec2(Rat(1, 2), 0);
    k2half.pieces[0].second.hi = k2half.pieces[0].second.hi + Vec2(Rat(1, 2), 0);
    dis.k2 = k2half;
    CHECK(member(dis, torus).value);
  }
  SUBCASE("EPlus at the basepoint degenerates to Plus") {
    SubbasisSet eplus = plus;
    eplus.tag = SubbasisSet::Tag::EPlus;
    MarkedSurface ms{torus, torus.basepoint_polygon, torus.basepoint};
    CHECK(member(eplus, ms).value == member(plus, torus).value);
  }
  SUBCASE("EMinus requires a marked subject") {
    SubbasisSet em;
    em.tag = SubbasisSet::Tag::EMinus;
    em.disk = D;
    em.u = u.closure();
    CHECK_THROWS_AS(member(em, torus), std::invalid_argument);
  }
  SUBCASE("malformed payloads are rejected") {
    SubbasisSet bad;
    bad.tag = SubbasisSet::Tag::Plus;
    bad.disk = D;  // no region payload
    CHECK_THROWS_AS(member(bad, torus), std::invalid_argument);
    bad.u = u.closure();  // Plus requires an open region
    CHECK_THROWS_AS(member(bad, torus), std::invalid_argument);
  }
}

TEST_CASE("Immerses / NotImmerses / EmbedsSet tags") {
  auto torus = builtin_torus(Vec2(1, 0), Vec2(0, 1));
  SubbasisSet im;
  im.tag = SubbasisSet::Tag::Immerses;
  im.disk = square_disk(Rat(5, 4));
  CHECK(member(im, torus).value);
  CHECK(member(im, builtin_plane()).value);

  SubbasisSet emb;
  emb.tag = SubbasisSet::Tag::EmbedsSet;
  emb.disk = square_disk(Rat(1, 4));
  CHECK(member(emb, torus).value);
  emb.disk = square_disk(Rat(3, 4));
  auto r = member(emb, torus);
  CHECK(!r.value);
  CHECK(r.witness.image_pair.has_value());

  SubbasisSet ni;
  ni.tag = SubbasisSet::Tag::NotImmerses;
  ni.disk = square_disk(Rat(1));
  Region whole;
  whole.openness = Region::Openness::Open;
  whole.pieces = {{0, Rect(Point(-1, -1), Point(1, 1))}};
  ni.u = whole;
  CHECK(member(ni, lshape_origami()).value);  // the cone point obstructs
  CHECK(!member(ni, torus).value);
}

TEST_CASE("separating certificate for distinct tori") {
  auto torus = builtin_torus(Vec2(1, 0), Vec2(0, 1));
  auto tall = builtin_torus(Vec2(1, 0), Vec2(0, 2));
  auto res = separating_certificate(torus, tall, Rat(4));
  auto* cert = std::get_if<Certificate>(&res);
  REQUIRE(cert);
  CHECK(cert->reason == Certificate::Reason::PlusMinusPair);
  // soundness: the emitted sets re-verify via member on both sides
  CHECK(member(cert->set_for_s, torus).value);
  CHECK(member(cert->set_for_t, tall).value);
  // structural disjointness: Plus(D,U) against Minus(D, closure(U))
  CHECK(cert->set_for_s.tag == SubbasisSet::Tag::Plus);
  CHECK(cert->set_for_t.tag == SubbasisSet::Tag::Minus);
  REQUIRE(cert->set_for_s.u.has_value());
  REQUIRE(cert->set_for_t.u.has_value());
  CHECK(cert->set_for_s.u->pieces[0].second == cert->set_for_t.u->pieces[0].second);
  // crossing the sets fails
  CHECK(!member(cert->set_for_s, tall).value);
  CHECK(!member(cert->set_for_t, torus).value);
}

TEST_CASE("same surface under two presentations is not separated") {
  auto torus = builtin_torus(Vec2(1, 0), Vec2(0, 1));
  auto res = separating_certificate(torus, torus_triangles(), Rat(9));
  auto* ns = std::get_if<NotSeparatedUpTo>(&res);
  REQUIRE(ns);
  CHECK(ns->radii_tried == std::vector<Rat>{Rat(1), Rat(4), Rat(9)});
}

TEST_CASE("immersion-failure separation") {
  // The l-origami's disk of radius 1 does not immerse into itself shifted...
  // use torus vs l-origami: the torus 1-disk immerses in the torus but not in
  // the l-origami (cone point at distance^2 1/2).
  auto torus = builtin_torus(Vec2(1, 0), Vec2(0, 1));
  auto res = separating_certificate(torus, lshape_origami(), Rat(4));
  auto* cert = std::get_if<Certificate>(&res);
  REQUIRE(cert);
  CHECK(member(cert->set_for_s, torus).value);
  CHECK(member(cert->set_for_t, lshape_origami()).value);
}
