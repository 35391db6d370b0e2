#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "flatland/develop.hpp"

namespace flatland {

/// A rect-union region carried inside a planar disk complex. Pieces pin each
/// rect to the cell of the complex it lies in; membership tests are geometric
/// on the union (open = interior, closed = closure), which agrees with the
/// piecewise reading because the complexes here are embedded in the plane.
struct Region {
  enum class Openness { Open, Closed };
  std::vector<std::pair<int, Rect>> pieces;  // (cell id, rect), rects may be fat only
  Openness openness = Openness::Closed;

  bool contains(const Point& p) const;
  Region closure() const;
};

/// One generating set of the immersive topology, with its payload.
struct SubbasisSet {
  enum class Tag {
    Immerses,    // D immerses into the subject
    NotImmerses, // the open region U fails to immerse
    Plus,        // D immerses and some basepoint-fiber point lies in open U
    Minus,       // D immerses and no basepoint-fiber point lies in closed K
    EmbedsSet,   // D embeds
    Disjoint,    // D immerses and the images of K1, K2 are disjoint
    EPlus,       // marked variant of Plus (fiber of the mark)
    EMinus,      // marked variant of Minus
  };
  Tag tag = Tag::Immerses;
  DevelopedComplex disk;
  std::optional<Region> u;   // Plus/EPlus (open), Minus/EMinus (closed), NotImmerses
  std::optional<Region> k2;  // Disjoint only (u holds K1)
};

struct MemberWitness {
  std::optional<ImmersionMap> map;
  std::vector<FiberPoint> fiber;                      // relevant fiber points
  std::optional<Point> no_immersion;                  // puncture witness
  std::optional<std::pair<Point, Point>> image_pair;  // colliding preimages
};

struct MemberResult {
  bool value = false;
  MemberWitness witness;
};

/// Exact membership of a surface in a subbasis set. Throws
/// std::invalid_argument (MalformedSet) when the payload breaks the tag's
/// invariants. EPlus/EMinus require the marked overload.
MemberResult member(const SubbasisSet& set, const SurfacePresentation& subject);
MemberResult member(const SubbasisSet& set, const MarkedSurface& subject);

struct Certificate {
  enum class Reason { PlusMinusPair, ImmersesNotImmerses };
  SubbasisSet set_for_s;
  SubbasisSet set_for_t;
  Reason reason = Reason::PlusMinusPair;
  Rat r2;  // the radius at which the separation was found
};

struct NotSeparatedUpTo {
  Rat r2_max;
  std::vector<Rat> radii_tried;
};

using SeparationResult = std::variant<Certificate, NotSeparatedUpTo>;

/// Searches radii r^2 = 1, 4, 9, ... up to r2_max (inclusive; r2_max itself is
/// tried last when it is not a perfect square) for a pair of disjoint subbasis
/// sets separating S and T. Inconclusive outcomes are explicit, never coerced
/// to equality.
SeparationResult separating_certificate(const SurfacePresentation& s,
                                        const SurfacePresentation& t,
                                        const Rat& r2_max);

}  // namespace flatland
