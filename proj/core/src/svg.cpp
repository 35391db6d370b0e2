#include "flatland/svg.hpp"

#include <sstream>

namespace flatland {

std::string decimal12(const Rat& r) {
  Int p = rat_num(r), q = rat_den(r);
  bool neg = p < 0;
  if (neg) p = -p;
  Int whole = p / q, rem = p % q;
  std::string out = (neg && (whole != 0 || rem != 0)) ? "-" : "";
  out += whole.str();
  if (rem != 0) {
    out += ".";
    for (int i = 0; i < 12 && rem != 0; ++i) {
      rem *= 10;
      Int digit = rem / q;
      out += digit.str();
      rem %= q;
    }
  }
  return out;
}

namespace {

struct Mapper {
  double scale;
  Rat min_x, max_y;
  Rat margin;
  std::string x(const Rat& v) const { return decimal12((v - min_x + margin) * Rat(Int(scale))); }
  // SVG y grows downward; flip about the top of the bounding box.
  std::string y(const Rat& v) const { return decimal12((max_y - v + margin) * Rat(Int(scale))); }
};

}  // namespace

std::string render_svg(const DevelopedComplex& d, const RenderOptions& options) {
  Rat min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  bool first = true;
  for (const DevCell& c : d.cells) {
    for (const Point& v : c.poly) {
      if (first || v.x < min_x) min_x = v.x;
      if (first || v.x > max_x) max_x = v.x;
      if (first || v.y < min_y) min_y = v.y;
      if (first || v.y > max_y) max_y = v.y;
      first = false;
    }
  }
  Mapper m{options.scale, min_x, max_y, Rat(1, 2)};
  Rat w = (max_x - min_x + 1) * Rat(Int(options.scale));
  Rat h = (max_y - min_y + 1) * Rat(Int(options.scale));

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << decimal12(w)
      << "\" height=\"" << decimal12(h) << "\" viewBox=\"0 0 " << decimal12(w)
      << " " << decimal12(h) << "\">\n";
  for (const DevCell& c : d.cells) {
    svg << "  <path d=\"";
    for (size_t i = 0; i < c.poly.size(); ++i) {
      svg << (i == 0 ? "M " : "L ") << m.x(c.poly[i].x) << " "
          << m.y(c.poly[i].y) << " ";
    }
    svg << "Z\" fill=\"#dce8f5\" fill-opacity=\"0.6\" stroke=\"#3c6e9f\" "
           "stroke-width=\"1\"/>\n";
  }
  double cr = options.scale * 0.06;
  for (const SingularMark& mk : d.marks) {
    std::string cx = m.x(mk.position.x), cy = m.y(mk.position.y);
    svg << "  <g class=\"mark\" stroke=\"#c03030\" stroke-width=\"1.5\" "
           "transform=\"translate("
        << cx << "," << cy << ")\">"
        << "<line x1=\"-" << cr << "\" y1=\"-" << cr << "\" x2=\"" << cr
        << "\" y2=\"" << cr << "\"/>"
        << "<line x1=\"-" << cr << "\" y1=\"" << cr << "\" x2=\"" << cr
        << "\" y2=\"-" << cr << "\"/></g>\n";
  }
  for (const Point& p : options.fiber_points) {
    svg << "  <circle class=\"fiber\" cx=\"" << m.x(p.x) << "\" cy=\""
        << m.y(p.y) << "\" r=\"" << options.scale * 0.04
        << "\" fill=\"#2f8f4e\"/>\n";
  }
  if (options.draw_basepoint) {
    svg << "  <circle class=\"basepoint\" cx=\"" << m.x(Rat(0)) << "\" cy=\""
        << m.y(Rat(0)) << "\" r=\"" << options.scale * 0.05
        << "\" fill=\"#1b1b1b\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace flatland
