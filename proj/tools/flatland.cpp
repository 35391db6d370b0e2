#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "flatland/json_io.hpp"
#include "flatland/svg.hpp"

using namespace flatland;
using nlohmann::json;

namespace {

// Exit codes: 0 success/true, 1 false/refuted, 2 error.
constexpr int kTrue = 0;
constexpr int kFalse = 1;
constexpr int kError = 2;

struct Output {
  bool as_json = false;
  void emit(const json& j, const std::string& text) const {
    if (as_json)
      std::cout << j.dump(2) << "\n";
    else
      std::cout << text;
  }
};

std::string point_str(const Point& p) {
  return "(" + rat_str(p.x) + "," + rat_str(p.y) + ")";
}

Point parse_point_arg(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("point must be x,y");
  return Point(eval_rat_expr(s.substr(0, comma)), eval_rat_expr(s.substr(comma + 1)));
}

int cmd_validate(const std::string& surface, const Output& out) {
  // validate is total; parse errors still exit 2.
  SurfacePresentation s = load_surface(surface);
  ValidationReport rep = validate(s);
  std::string text = rep.valid() ? "valid\n" : "";
  for (const Violation& v : rep.violations)
    text += v.code + ": " + v.detail + "\n";
  out.emit(validation_to_json(rep), text);
  return rep.valid() ? kTrue : kFalse;
}

int cmd_links(const std::string& surface, const Output& out) {
  SurfacePresentation s = load_surface(surface);
  auto links = vertex_links(s);
  std::string text;
  for (const auto& c : links) {
    text += "class:";
    for (auto& [p, v] : c.corners)
      text += " (" + std::to_string(p) + "," + std::to_string(v) + ")";
    text += c.boundary ? " boundary\n"
                       : " cone_order " + std::to_string(c.cone_order) + "\n";
  }
  out.emit(links_to_json(links), text);
  return kTrue;
}

int cmd_develop(const std::string& surface, const std::string& r2s,
                const Output& out) {
  SurfacePresentation s = load_surface(surface);
  DevelopedComplex d = develop_disk(s, eval_rat_expr(r2s));
  std::string text = "cells " + std::to_string(d.cells.size()) + ", adjacencies " +
                     std::to_string(d.adjacency.size()) + ", marks " +
                     std::to_string(d.marks.size()) + "\n";
  for (const SingularMark& m : d.marks)
    text += "mark " + point_str(m.position) + " dist2 " + rat_str(m.dist2) + "\n";
  out.emit(complex_to_json(d), text);
  return kTrue;
}

int cmd_immerse(const std::string& surface, const std::string& disk,
                const Output& out) {
  SurfacePresentation s = load_surface(surface);
  DevelopedComplex d = rect_complex(load_rect_union(disk));
  ImmersionResult ir = immerse(d, s);
  if (auto* im = std::get_if<ImmersionMap>(&ir)) {
    out.emit(immersion_to_json(*im),
             "immerses: " + std::to_string(im->pieces.size()) + " pieces\n");
    return kTrue;
  }
  Point w = std::get<NoImmersion>(ir).witness;
  json j;
  j["immerses"] = false;
  j["witness"] = json_point(w);
  out.emit(j, "no immersion, witness " + point_str(w) + "\n");
  return kFalse;
}

int cmd_embed(const std::string& surface, const std::string& disk,
              const Output& out) {
  SurfacePresentation s = load_surface(surface);
  DevelopedComplex d = rect_complex(load_rect_union(disk));
  EmbedsResult er = embeds(d, s);
  std::string text;
  if (std::holds_alternative<Embedded>(er)) {
    text = "embedded\n";
  } else if (auto* o = std::get_if<Overlap>(&er)) {
    text = "overlap: " + point_str(o->x) + " and " + point_str(o->y) +
           " share an image\n";
  } else {
    text = "no immersion, witness " +
           point_str(std::get<NoImmersion>(er).witness) + "\n";
  }
  out.emit(embeds_to_json(er), text);
  return std::holds_alternative<Embedded>(er) ? kTrue : kFalse;
}

int cmd_er(const std::string& surface, const std::string& polygon,
           const std::string& point, const std::string& region,
           const Output& out) {
  SurfacePresentation s = load_surface(surface);
  if (!region.empty()) {
    // region entries "polyid:lo_x,lo_y,hi_x,hi_y" separated by ';'
    std::vector<std::pair<PolyId, Rect>> entries;
    std::stringstream ss(region);
    std::string one;
    while (std::getline(ss, one, ';')) {
      auto colon = one.find(':');
      if (colon == std::string::npos)
        throw std::invalid_argument("region entry must be polygon:lo_x,lo_y,hi_x,hi_y");
      PolyId pid = std::stoll(one.substr(0, colon));
      std::stringstream cs(one.substr(colon + 1));
      std::vector<Rat> vals;
      std::string tok;
      while (std::getline(cs, tok, ',')) vals.push_back(eval_rat_expr(tok));
      if (vals.size() != 4)
        throw std::invalid_argument("region rect needs four coordinates");
      entries.push_back({pid, Rect(Point(vals[0], vals[1]), Point(vals[2], vals[3]))});
    }
    SqRadius r = er_compact(s, entries);
    json j;
    j["er2"] = r.infinite ? json("infinite") : json(rat_str(r.value));
    out.emit(j, "er2 " + (r.infinite ? std::string("infinite") : rat_str(r.value)) + "\n");
    return kTrue;
  }
  PolyId pid = polygon.empty() ? s.basepoint_polygon : std::stoll(polygon);
  Point pt = point.empty() ? s.basepoint : parse_point_arg(point);
  EmbeddingRadius er = embedding_radius(s, pid, pt);
  std::string text = "er2 " +
                     (er.er2.infinite ? std::string("infinite") : rat_str(er.er2.value)) + "\n";
  for (const BindingEvent& e : er.events)
    text += std::string(e.kind == BindingEvent::Kind::Singularity ? "singularity "
                                                                  : "self-overlap ") +
            point_str(e.position) + "\n";
  out.emit(er_to_json(er), text);
  return kTrue;
}

int cmd_predicate(const std::string& surface, const std::string& set_file,
                  const std::string& mark, const std::string& mark_polygon,
                  const Output& out) {
  SurfacePresentation s = load_surface(surface);
  std::ifstream in(set_file);
  if (!in) throw std::invalid_argument("cannot open set file: " + set_file);
  json j = json::parse(in);
  SubbasisSet set = subbasis_from_json(j);
  MemberResult res;
  if (!mark.empty()) {
    MarkedSurface ms{s, mark_polygon.empty() ? s.basepoint_polygon
                                             : std::stoll(mark_polygon),
                     parse_point_arg(mark)};
    res = member(set, ms);
  } else {
    res = member(set, s);
  }
  out.emit(member_to_json(res), res.value ? "member\n" : "not a member\n");
  return res.value ? kTrue : kFalse;
}

int cmd_separate(const std::string& sa, const std::string& sb,
                 const std::string& r2max, const Output& out) {
  SurfacePresentation s = load_surface(sa), t = load_surface(sb);
  SeparationResult res = separating_certificate(s, t, eval_rat_expr(r2max));
  std::string text;
  if (auto* c = std::get_if<Certificate>(&res)) {
    text = std::string("separated (") +
           (c->reason == Certificate::Reason::PlusMinusPair
                ? "plus-minus"
                : "immerses-not-immerses") +
           ") at r2 " + rat_str(c->r2) + "\n";
  } else {
    text = "not separated up to r2 " + r2max + "\n";
  }
  out.emit(separation_to_json(res), text);
  return std::holds_alternative<Certificate>(res) ? kTrue : kFalse;
}

int cmd_act(const std::string& surface, const std::string& matrix,
            const Output& out) {
  SurfacePresentation s = load_surface(surface);
  std::stringstream ss(matrix);
  std::vector<Rat> m;
  std::string tok;
  while (std::getline(ss, tok, ',')) m.push_back(eval_rat_expr(tok));
  if (m.size() != 4) throw std::invalid_argument("--matrix needs a,b,c,d");
  SurfacePresentation r = gl2_act(Mat2(m[0], m[1], m[2], m[3]), s);
  out.emit(json::parse(serialize_surface(r)), serialize_surface(r));
  return kTrue;
}

int cmd_rebase(const std::string& surface, const std::string& polygon,
               const std::string& point, const Output& out) {
  SurfacePresentation s = load_surface(surface);
  MarkedSurface m{s, polygon.empty() ? s.basepoint_polygon : std::stoll(polygon),
                  parse_point_arg(point)};
  SurfacePresentation r = basepoint_change(m);
  out.emit(json::parse(serialize_surface(r)), serialize_surface(r));
  return kTrue;
}

int cmd_fuse(const std::string& da, const std::string& db, const Output& out) {
  DevelopedComplex p = rect_complex(load_rect_union(da));
  DevelopedComplex q = rect_complex(load_rect_union(db));
  DevelopedComplex r = fusion(p, q);
  out.emit(json::parse(serialize_rect_union(*r.region)),
           serialize_rect_union(*r.region));
  return kTrue;
}

int cmd_iso(const std::string& sa, const std::string& sb, const std::string& r2,
            const Output& out) {
  SurfacePresentation s = load_surface(sa), t = load_surface(sb);
  IsoResult res = iso_at_radius(s, t, eval_rat_expr(r2));
  std::string text = res.value ? "isomorphic at radius\n" : "not isomorphic";
  if (!res.value && res.witness) text += ", witness " + point_str(*res.witness);
  if (!res.value) text += "\n";
  out.emit(iso_to_json(res), text);
  return res.value ? kTrue : kFalse;
}

int cmd_converge(const std::string& limit, const std::string& seq_uri,
                 const std::string& r2, const std::string& delta,
                 const std::string& range, const Output& out) {
  SurfacePresentation lim = load_surface(limit);
  SurfaceSequence seq = sequence_from_uri(seq_uri);
  auto comma = range.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("--range needs a,b");
  int n0 = std::stoi(range.substr(0, comma));
  int n1 = std::stoi(range.substr(comma + 1));
  ConvergenceReport rep =
      certify_convergence(seq, lim, eval_rat_expr(r2), eval_rat_expr(delta), n0, n1);
  std::string text;
  switch (rep.verdict) {
    case ConvergenceReport::Verdict::CertifiedAtRadius:
      text = "certified, N=" + std::to_string(rep.threshold_n) + "\n";
      break;
    case ConvergenceReport::Verdict::RefutedAtRadius:
      text = "refuted at n=" + std::to_string(rep.refuted_n);
      if (rep.witness) text += ", witness " + point_str(*rep.witness);
      text += "\n";
      break;
    case ConvergenceReport::Verdict::Inconclusive:
      text = "inconclusive\n";
      break;
  }
  out.emit(convergence_to_json(rep), text);
  return rep.verdict == ConvergenceReport::Verdict::CertifiedAtRadius ? kTrue
                                                                      : kFalse;
}

int cmd_cluster(const std::vector<std::string>& surfaces, const std::string& r2,
                const Output& out) {
  std::vector<SurfacePresentation> list;
  for (const std::string& s : surfaces) list.push_back(load_surface(s));
  ClusterReport rep = cluster_at_radius(list, eval_rat_expr(r2));
  std::string text;
  for (size_t c = 0; c < rep.clusters.size(); ++c) {
    text += "cluster " + std::to_string(c) + ":";
    for (int i : rep.clusters[c]) text += " " + std::to_string(i);
    text += "\n";
  }
  out.emit(cluster_to_json(rep), text);
  return kTrue;
}

int cmd_render(const std::string& surface, const std::string& r2,
               const std::string& disk, const std::string& out_path) {
  DevelopedComplex d;
  if (!disk.empty()) {
    d = rect_complex(load_rect_union(disk));
  } else {
    SurfacePresentation s = load_surface(surface);
    d = develop_disk(s, eval_rat_expr(r2));
  }
  std::string svg = render_svg(d);
  if (out_path.empty() || out_path == "-") {
    std::cout << svg;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + out_path);
    f << svg;
  }
  return kTrue;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flatland: exact computations on translation surfaces"};
  app.require_subcommand(1);
  Output out;
  app.add_flag("--json", out.as_json, "machine-readable JSON output");

  std::string surface, surface_b, disk, disk_b, r2 = "1", delta, range, matrix,
                                                 point, polygon, region, set_file,
                                                 seq_uri, out_path, r2max = "4";
  std::vector<std::string> surfaces;

  auto* c_validate = app.add_subcommand("validate", "check a presentation");
  c_validate->add_option("surface", surface)->required();

  auto* c_links = app.add_subcommand("links", "vertex classes and cone orders");
  c_links->add_option("surface", surface)->required();

  auto* c_develop = app.add_subcommand("develop", "develop the closed r-disk");
  c_develop->add_option("surface", surface)->required();
  c_develop->add_option("--r2", r2, "squared radius (rational)")->required();

  auto* c_immerse = app.add_subcommand("immerse", "immerse a rect-union disk");
  c_immerse->add_option("surface", surface)->required();
  c_immerse->add_option("--disk", disk, "rect union (file or rect:...)")->required();

  auto* c_embed = app.add_subcommand("embed", "test embedding of a disk");
  c_embed->add_option("surface", surface)->required();
  c_embed->add_option("--disk", disk)->required();

  auto* c_er = app.add_subcommand("er", "embedding radius (squared)");
  c_er->add_option("surface", surface)->required();
  c_er->add_option("--polygon", polygon);
  c_er->add_option("--point", point);
  c_er->add_option("--region", region, "compact region polygon:lo_x,lo_y,hi_x,hi_y;...");

  auto* c_pred = app.add_subcommand("predicate", "subbasis membership");
  c_pred->add_option("surface", surface)->required();
  c_pred->add_option("--set", set_file, "SubbasisSet JSON file")->required();
  c_pred->add_option("--mark", point, "mark x,y for eplus/eminus");
  c_pred->add_option("--mark-polygon", polygon);

  auto* c_sep = app.add_subcommand("separate", "separating certificate");
  c_sep->add_option("surface_s", surface)->required();
  c_sep->add_option("surface_t", surface_b)->required();
  c_sep->add_option("--r2max", r2max);

  auto* c_act = app.add_subcommand("act", "apply a GL(2,Q) matrix");
  c_act->add_option("surface", surface)->required();
  c_act->add_option("--matrix", matrix, "a,b,c,d row-major")->required();

  auto* c_rebase = app.add_subcommand("rebase", "move the basepoint");
  c_rebase->add_option("surface", surface)->required();
  c_rebase->add_option("--point", point)->required();
  c_rebase->add_option("--polygon", polygon);

  auto* c_fuse = app.add_subcommand("fuse", "fuse two planar rect unions");
  c_fuse->add_option("disk_p", disk)->required();
  c_fuse->add_option("disk_q", disk_b)->required();

  auto* c_iso = app.add_subcommand("iso", "r-isomorphism test");
  c_iso->add_option("surface_s", surface)->required();
  c_iso->add_option("surface_t", surface_b)->required();
  c_iso->add_option("--radius2,--r2", r2)->required();

  auto* c_conv = app.add_subcommand("converge", "certify convergence");
  c_conv->add_option("--limit", surface)->required();
  c_conv->add_option("--seq", seq_uri, "builtin URI with variable n")->required();
  c_conv->add_option("--r2", r2)->required();
  c_conv->add_option("--delta", delta)->required();
  c_conv->add_option("--range", range, "n0,n1")->required();

  auto* c_cluster = app.add_subcommand("cluster", "cluster by r-isomorphism");
  c_cluster->add_option("surfaces", surfaces)->required()->expected(-1);
  c_cluster->add_option("--r2", r2)->required();

  auto* c_render = app.add_subcommand("render", "SVG figure");
  c_render->add_option("surface", surface);
  c_render->add_option("--r2", r2);
  c_render->add_option("--disk", disk);
  c_render->add_option("--out", out_path, "output path (default stdout)");

  // Let the global --json flag appear after the subcommand name too.
  for (CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; }))
    sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }

  try {
    if (app.got_subcommand(c_validate)) return cmd_validate(surface, out);
    if (app.got_subcommand(c_links)) return cmd_links(surface, out);
    if (app.got_subcommand(c_develop)) return cmd_develop(surface, r2, out);
    if (app.got_subcommand(c_immerse)) return cmd_immerse(surface, disk, out);
    if (app.got_subcommand(c_embed)) return cmd_embed(surface, disk, out);
    if (app.got_subcommand(c_er)) return cmd_er(surface, polygon, point, region, out);
    if (app.got_subcommand(c_pred))
      return cmd_predicate(surface, set_file, point, polygon, out);
    if (app.got_subcommand(c_sep)) return cmd_separate(surface, surface_b, r2max, out);
    if (app.got_subcommand(c_act)) return cmd_act(surface, matrix, out);
    if (app.got_subcommand(c_rebase)) return cmd_rebase(surface, polygon, point, out);
    if (app.got_subcommand(c_fuse)) return cmd_fuse(disk, disk_b, out);
    if (app.got_subcommand(c_iso)) return cmd_iso(surface, surface_b, r2, out);
    if (app.got_subcommand(c_conv))
      return cmd_converge(surface, seq_uri, r2, delta, range, out);
    if (app.got_subcommand(c_cluster)) return cmd_cluster(surfaces, r2, out);
    if (app.got_subcommand(c_render)) {
      if (disk.empty() && surface.empty())
        throw std::invalid_argument("render needs a surface with --r2 or --disk");
      return cmd_render(surface, r2, disk, out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
