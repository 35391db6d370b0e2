#include <doctest.h>

#include "flatland/converge.hpp"
#include "helpers.hpp"

using namespace flatland;
using flatland::testing::torus_triangles;

TEST_CASE("convergence of torus((1,0),(0,1+1/n)) to the square torus") {
  auto torus = builtin_torus(Vec2(1, 0), Vec2(0, 1));
  SurfaceSequence seq{
      [](int n) {
        return builtin_torus(Vec2(1, 0), Vec2(0, Rat(Int(n) + 1, Int(n))));
      },
      "torus((1,0),(0,1+1/n))"};
  auto rep = certify_convergence(seq, torus, Rat(4), Rat(1, 10), 1, 50);
  CHECK(rep.verdict == ConvergenceReport::Verdict::CertifiedAtRadius);
  // hand-derived threshold: the fiber point (0,1+1/n) sits within 1/10 of
  // (0,1) exactly from n = 10 on
  CHECK(rep.threshold_n == 10);
}

TEST_CASE("alternating sequence is refuted at the first even index") {
  auto torus = builtin_torus(Vec2(1, 0), Vec2(0, 1));
  SurfaceSequence alt{
      [](int n) {
        return n % 2 == 0 ? builtin_torus(Vec2(1, 0), Vec2(0, 2))
                          : builtin_torus(Vec2(1, 0), Vec2(0, 1));
      },
      "alternating"};
  auto rep = certify_convergence(alt, torus, Rat(4), Rat(1, 10), 1, 8);
  CHECK(rep.verdict == ConvergenceReport::Verdict::RefutedAtRadius);
  CHECK(rep.refuted_n == 2);
  REQUIRE(rep.witness.has_value());
  CHECK(*rep.witness == Point(0, 1));
}

TEST_CASE("a constant sequence certifies from the start of the range") {
  auto torus = builtin_torus(Vec2(1, 0), Vec2(0, 1));
  SurfaceSequence cst{[torus](int) { return torus; }, "constant"};
  auto rep = certify_convergence(cst, torus, Rat(4), Rat(1, 10), 3, 7);
  CHECK(rep.verdict == ConvergenceReport::Verdict::CertifiedAtRadius);
  CHECK(rep.threshold_n == 3);
}

TEST_CASE("marked convergence tracks the mark fiber") {
  auto torus = builtin_torus(Vec2(1, 0), Vec2(0, 1));
  MarkedSequence seq{
      [](int n) {
        return MarkedSurface{builtin_torus(Vec2(1, 0), Vec2(0, 1)), 0,
                             Point(Rat(1, 2) + Rat(1, Int(n)), Rat(1, 2))};
      },
      "drifting mark"};
  MarkedSurface lim{torus, 0, Point(Rat(1, 2), Rat(1, 2))};
  auto rep = certify_convergence_marked(seq, lim, Rat(4), Rat(1, 10), 1, 20);
  CHECK(rep.verdict == ConvergenceReport::Verdict::CertifiedAtRadius);
  CHECK(rep.threshold_n == 10);  // the mark is within 1/10 once 1/n <= 1/10
}

TEST_CASE("clustering by finite-radius isomorphism") {
  auto torus = builtin_torus(Vec2(1, 0), Vec2(0, 1));
  auto tall = builtin_torus(Vec2(1, 0), Vec2(0, 2));
  std::vector<SurfacePresentation> list{torus, torus_triangles(), tall};
  auto rep = cluster_at_radius(list, Rat(4));
  REQUIRE(rep.clusters.size() == 2);
  CHECK(rep.clusters[0] == std::vector<int>{0, 1});
  CHECK(rep.clusters[1] == std::vector<int>{2});
  CHECK(rep.representatives == std::vector<int>{0, 2});
}

TEST_CASE("compactness probe on a short prefix") {
  SurfaceSequence seq{
      [](int n) { return builtin_torus(Vec2(1, 0), Vec2(0, n)); },
      "torus((1,0),(0,n))"};
  auto probe = compactness_probe(seq, Rat(1, 16), Rat(4), 6);
  CHECK(probe.precheck_failures.empty());
  // Indices are 0-based over terms n = 1..6. The n = 1 and n = 2 tori are
  // distinguishable at radius 2; every term with n >= 3 looks the same there.
  REQUIRE(probe.clusters.clusters.size() == 3);
  CHECK(probe.clusters.clusters[probe.largest_cluster] ==
        std::vector<int>{2, 3, 4, 5});
  CHECK(!probe.note.empty());
}
