#pragma once

#include <string>
#include <vector>

#include "flatland/develop.hpp"

namespace flatland {

struct RenderOptions {
  double scale = 80.0;                // pixels per unit
  std::vector<Point> fiber_points;    // drawn as dots
  bool draw_basepoint = true;
};

/// Deterministic SVG: one path per cell, singular marks as crosses, the
/// basepoint and fiber points as dots. Coordinates are 12-digit decimal
/// expansions of the exact rationals (display only; never parsed back).
std::string render_svg(const DevelopedComplex& d, const RenderOptions& options = {});

/// The decimal expansion used by the renderer (truncated at 12 digits).
std::string decimal12(const Rat& r);

}  // namespace flatland
