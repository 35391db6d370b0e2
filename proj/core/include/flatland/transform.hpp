#pragma once

#include <optional>
#include <vector>

#include "flatland/develop.hpp"

namespace flatland {

/// Applies A ∈ GL(2,ℚ), det(A) > 0, to every vertex, gluing translation, and
/// the basepoint. Finite presentations only. Throws std::invalid_argument for
/// singular or orientation-reversing matrices.
SurfacePresentation gl2_act(const Mat2& a, const SurfacePresentation& s);

/// Moves the basepoint to the mark. The basepoint-changing isomorphism is the
/// identity on polygon data. Throws std::invalid_argument when the mark is
/// outside its polygon or at a cone point.
SurfacePresentation basepoint_change(const MarkedSurface& m);

/// Fusion P ⋎ Q of two planar rect-union complexes with basepoints at the
/// origin: the smallest planar surface both immerse into. For embedded plane
/// regions this is exactly the union of the regions.
DevelopedComplex fusion(const DevelopedComplex& p, const DevelopedComplex& q);

struct Alignment {
  std::vector<Point> matched;  // common basepoint-fiber positions within r
  std::vector<Point> only_s, only_t;
};

struct IsoResult {
  bool value = false;
  Alignment alignment;
  std::optional<Point> witness;  // a mismatched fiber position when false
};

/// True iff the r-disks of the universal covers mutually immerse with equal
/// basepoint fibers (exact set equality of developed positions).
IsoResult iso_at_radius(const SurfacePresentation& s,
                        const SurfacePresentation& t, const Rat& r2);

struct AutomorphismVerdict {
  bool certified = false;  // finite-radius evidence only, never unconditional
  Rat r2;
  std::optional<Point> witness;
};

/// Checks whether A is the derivative of an affine automorphism of S carrying
/// the basepoint to s, at radius r: iso_at_radius(A · S^s, S, r²).
AutomorphismVerdict is_affine_automorphism(const SurfacePresentation& s,
                                           const Mat2& a, PolyId mark_polygon,
                                           const Point& mark, const Rat& r2);

}  // namespace flatland
