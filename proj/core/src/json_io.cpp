#include "flatland/json_io.hpp"

#include <fstream>
#include <sstream>

using nlohmann::json;

namespace flatland {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument(what);
}

Rat rat_field(const json& j, const char* ctx) {
  if (!j.is_string()) fail(std::string("rational must be a string at ") + ctx);
  return rat_parse(j.get<std::string>());
}

Point point_field(const json& j, const char* ctx) {
  if (!j.is_array() || j.size() != 2)
    fail(std::string("point must be a 2-array at ") + ctx);
  return Point(rat_field(j[0], ctx), rat_field(j[1], ctx));
}

json rat_json(const Rat& r) { return rat_str(r); }

json point_json_arr(const Point& p) {
  return json::array({rat_json(p.x), rat_json(p.y)});
}

}  // namespace

json json_point(const Point& p) { return point_json_arr(p); }

SurfacePresentation parse_surface_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  SurfacePresentation s;
  if (j.contains("name")) s.name = j.at("name").get<std::string>();
  if (!j.contains("polygons") || !j["polygons"].is_array())
    fail("missing polygons array");
  for (const json& jp : j["polygons"]) {
    Polygon p;
    p.id = jp.at("id").get<PolyId>();
    for (const json& jv : jp.at("vertices"))
      p.vertices.push_back(point_field(jv, "polygons.vertices"));
    if (s.polygons.count(p.id)) fail("duplicate polygon id");
    s.polygons[p.id] = std::move(p);
  }
  if (j.contains("gluings")) {
    for (const json& jg : j["gluings"]) {
      auto ref = [&](const json& r, const char* side) {
        if (!r.is_array() || r.size() != 2)
          fail(std::string("gluing ") + side + " must be [polygon, edge]");
        return EdgeRef{r[0].get<PolyId>(), r[1].get<int>()};
      };
      Gluing g;
      g.left = ref(jg.at("left"), "left");
      g.right = ref(jg.at("right"), "right");
      // The translation carries the left edge onto the right edge reversed;
      // validation reports any geometric mismatch.
      auto pl = s.polygons.find(g.left.polygon);
      auto pr = s.polygons.find(g.right.polygon);
      if (pl != s.polygons.end() && pr != s.polygons.end() &&
          g.left.edge >= 0 && g.left.edge < pl->second.edge_count() &&
          g.right.edge >= 0 && g.right.edge < pr->second.edge_count()) {
        g.translation =
            pr->second.edge_end(g.right.edge) - pl->second.edge_start(g.left.edge);
      }
      s.gluings.push_back(g);
    }
  }
  if (j.contains("basepoint")) {
    const json& b = j["basepoint"];
    s.basepoint_polygon = b.at("polygon").get<PolyId>();
    s.basepoint = point_field(b.at("coords"), "basepoint.coords");
  }
  return s;
}

std::string serialize_surface(const SurfacePresentation& s) {
  if (!s.finite())
    fail("provider-backed surfaces have no JSON serialization");
  json j;
  j["name"] = s.name;
  j["polygons"] = json::array();
  for (const auto& [id, p] : s.polygons) {
    json jp;
    jp["id"] = id;
    jp["vertices"] = json::array();
    for (const Point& v : p.vertices) jp["vertices"].push_back(point_json_arr(v));
    j["polygons"].push_back(std::move(jp));
  }
  j["gluings"] = json::array();
  for (const Gluing& g : s.gluings) {
    json jg;
    jg["left"] = json::array({g.left.polygon, g.left.edge});
    jg["right"] = json::array({g.right.polygon, g.right.edge});
    j["gluings"].push_back(std::move(jg));
  }
  j["basepoint"] = {{"polygon", s.basepoint_polygon},
                    {"coords", point_json_arr(s.basepoint)}};
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Rational expressions and builtin URIs

Rat eval_rat_expr(const std::string& text, long long n) {
  if (text.empty()) fail("empty rational expression");
  auto token = [&](const std::string& t) -> Rat {
    if (t == "n") {
      if (n < 0) fail("variable n not available here");
      return Rat(n);
    }
    return Rat(Int(t));
  };
  Rat total = 0;
  size_t i = 0;
  while (i < text.size()) {
    int sign = 1;
    if (text[i] == '+') {
      ++i;
    } else if (text[i] == '-') {
      sign = -1;
      ++i;
    }
    size_t j = i;
    while (j < text.size() && text[j] != '+' && text[j] != '-') ++j;
    std::string term = text.substr(i, j - i);
    if (term.empty()) fail("malformed rational expression: " + text);
    Rat value;
    auto slash = term.find('/');
    try {
      if (slash == std::string::npos) {
        value = token(term);
      } else {
        Rat num = token(term.substr(0, slash));
        Rat den = token(term.substr(slash + 1));
        if (den == 0) fail("zero denominator in rational: " + term);
        value = num / den;
      }
    } catch (const std::runtime_error&) {
      fail("malformed rational expression: " + text);
    }
    total += sign * value;
    i = j;
  }
  return total;
}

namespace {

std::map<std::string, std::string> parse_query(const std::string& q) {
  std::map<std::string, std::string> out;
  size_t i = 0;
  while (i < q.size()) {
    size_t amp = q.find('&', i);
    if (amp == std::string::npos) amp = q.size();
    std::string kv = q.substr(i, amp - i);
    size_t eq = kv.find('=');
    if (eq == std::string::npos) fail("malformed builtin query: " + kv);
    out[kv.substr(0, eq)] = kv.substr(eq + 1);
    i = amp + 1;
  }
  return out;
}

Vec2 vec_param(const std::map<std::string, std::string>& params,
               const std::string& key, long long n) {
  auto it = params.find(key);
  if (it == params.end()) fail("missing builtin parameter " + key);
  auto comma = it->second.find(',');
  if (comma == std::string::npos) fail("vector parameter needs two components");
  return Vec2(eval_rat_expr(it->second.substr(0, comma), n),
              eval_rat_expr(it->second.substr(comma + 1), n));
}

std::vector<int> perm_param(const std::map<std::string, std::string>& params,
                            const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) fail("missing builtin parameter " + key);
  std::vector<int> out;
  std::stringstream ss(it->second);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

SurfacePresentation builtin_impl(const std::string& uri, long long n) {
  const std::string prefix = "builtin:";
  if (uri.rfind(prefix, 0) != 0) fail("not a builtin URI: " + uri);
  std::string rest = uri.substr(prefix.size());
  std::string name = rest;
  std::map<std::string, std::string> params;
  auto qm = rest.find('?');
  if (qm != std::string::npos) {
    name = rest.substr(0, qm);
    params = parse_query(rest.substr(qm + 1));
  }
  if (name == "torus")
    return builtin_torus(vec_param(params, "v1", n), vec_param(params, "v2", n));
  if (name == "origami")
    return builtin_origami(perm_param(params, "h"), perm_param(params, "v"));
  if (name == "lshape") return lshape_origami();
  if (name == "staircase") {
    auto it = params.find("n");
    if (it == params.end()) return builtin_staircase_infinite();
    Rat k = eval_rat_expr(it->second, n);
    if (rat_den(k) != 1 || k < 1) fail("staircase n must be a positive integer");
    return builtin_staircase(int(rat_num(k)));
  }
  if (name == "plane") return builtin_plane();
  fail("unknown builtin surface: " + name);
}

}  // namespace

SurfacePresentation builtin_from_uri(const std::string& uri) {
  return builtin_impl(uri, -1);
}

SurfacePresentation builtin_from_uri_n(const std::string& uri, int n) {
  return builtin_impl(uri, n);
}

SurfacePresentation load_surface(const std::string& arg) {
  if (arg.rfind("builtin:", 0) == 0) return builtin_from_uri(arg);
  std::ifstream in(arg);
  if (!in) fail("cannot open surface file: " + arg);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_surface_json(ss.str());
}

SurfaceSequence sequence_from_uri(const std::string& uri) {
  SurfaceSequence seq;
  seq.description = uri;
  seq.generator = [uri](int n) { return builtin_impl(uri, n); };
  return seq;
}

// ---------------------------------------------------------------------------
// Rect unions

RectUnion parse_rect_union_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (!j.contains("rects") || !j["rects"].is_array()) fail("missing rects array");
  std::vector<Rect> rects;
  for (const json& jr : j["rects"])
    rects.push_back(Rect(point_field(jr.at("lo"), "rects.lo"),
                         point_field(jr.at("hi"), "rects.hi")));
  return rect_union_normalize(rects);
}

std::string serialize_rect_union(const RectUnion& u) {
  json j;
  j["rects"] = json::array();
  for (const Rect& r : u.rects)
    j["rects"].push_back(
        {{"lo", point_json_arr(r.lo)}, {"hi", point_json_arr(r.hi)}});
  return j.dump(2) + "\n";
}

RectUnion load_rect_union(const std::string& arg) {
  const std::string inline_prefix = "rect:";
  if (arg.rfind(inline_prefix, 0) == 0) {
    std::vector<Rect> rects;
    std::stringstream ss(arg.substr(inline_prefix.size()));
    std::string one;
    while (std::getline(ss, one, ';')) {
      std::stringstream cs(one);
      std::string tok;
      std::vector<Rat> vals;
      while (std::getline(cs, tok, ',')) vals.push_back(eval_rat_expr(tok));
      if (vals.size() != 4) fail("inline rect needs lo_x,lo_y,hi_x,hi_y");
      rects.push_back(Rect(Point(vals[0], vals[1]), Point(vals[2], vals[3])));
    }
    return rect_union_normalize(rects);
  }
  std::ifstream in(arg);
  if (!in) fail("cannot open rect-union file: " + arg);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_rect_union_json(ss.str());
}

// ---------------------------------------------------------------------------
// Reports

json validation_to_json(const ValidationReport& r) {
  json j;
  j["valid"] = r.valid();
  j["violations"] = json::array();
  for (const Violation& v : r.violations)
    j["violations"].push_back({{"code", v.code}, {"detail", v.detail}});
  return j;
}

json links_to_json(const std::vector<VertexClassReport>& links) {
  json j = json::array();
  for (const VertexClassReport& c : links) {
    json jc;
    jc["corners"] = json::array();
    for (auto& [p, v] : c.corners) jc["corners"].push_back(json::array({p, v}));
    if (c.boundary)
      jc["cone_order"] = "boundary";
    else
      jc["cone_order"] = c.cone_order;
    j.push_back(std::move(jc));
  }
  return j;
}

json complex_to_json(const DevelopedComplex& d) {
  json j;
  j["kind"] = d.kind == ComplexKind::Developed ? "developed" : "planar";
  if (d.r2) j["r2"] = rat_json(*d.r2);
  j["cells"] = json::array();
  for (const DevCell& c : d.cells) {
    json jc;
    jc["id"] = c.id;
    jc["source"] = c.source;
    jc["placement"] = point_json_arr(c.placement);
    jc["vertices"] = json::array();
    for (const Point& v : c.poly) jc["vertices"].push_back(point_json_arr(v));
    j["cells"].push_back(std::move(jc));
  }
  j["adjacency"] = json::array();
  for (const DevAdjacency& a : d.adjacency)
    j["adjacency"].push_back({{"cell_a", a.cell_a},
                              {"edge_a", a.edge_a},
                              {"cell_b", a.cell_b},
                              {"edge_b", a.edge_b}});
  j["marks"] = json::array();
  for (const SingularMark& m : d.marks)
    j["marks"].push_back(
        {{"position", point_json_arr(m.position)}, {"dist2", rat_json(m.dist2)}});
  j["basepoint_cell"] = d.basepoint_cell;
  return j;
}

json immersion_to_json(const ImmersionMap& im) {
  json j;
  j["pieces"] = json::array();
  for (const ImmersionPiece& p : im.pieces) {
    json jp;
    jp["cell"] = p.cell;
    jp["target"] = p.target;
    jp["tau"] = point_json_arr(p.tau);
    jp["extent"] = json::array();
    for (const Point& v : p.extent) jp["extent"].push_back(point_json_arr(v));
    j["pieces"].push_back(std::move(jp));
  }
  return j;
}

json embeds_to_json(const EmbedsResult& r) {
  json j;
  if (auto* e = std::get_if<Embedded>(&r)) {
    j["verdict"] = "embedded";
    j["map"] = immersion_to_json(e->map);
  } else if (auto* o = std::get_if<Overlap>(&r)) {
    j["verdict"] = "overlap";
    j["x"] = point_json_arr(o->x);
    j["y"] = point_json_arr(o->y);
  } else {
    j["verdict"] = "no-immersion";
    j["witness"] = point_json_arr(std::get<NoImmersion>(r).witness);
  }
  return j;
}

json er_to_json(const EmbeddingRadius& er) {
  json j;
  if (er.er2.infinite) {
    j["er2"] = "infinite";
  } else {
    j["er2"] = rat_json(er.er2.value);
  }
  j["events"] = json::array();
  for (const BindingEvent& e : er.events)
    j["events"].push_back(
        {{"kind", e.kind == BindingEvent::Kind::Singularity ? "singularity"
                                                            : "self-overlap"},
         {"r2", rat_json(e.r2)},
         {"position", point_json_arr(e.position)}});
  return j;
}

json fiber_to_json(const BasepointFiber& f) {
  json j = json::array();
  for (const FiberPoint& p : f.points)
    j.push_back({{"cell", p.cell}, {"position", point_json_arr(p.position)}});
  return j;
}

json member_to_json(const MemberResult& r) {
  json j;
  j["member"] = r.value;
  if (!r.witness.fiber.empty()) {
    j["fiber"] = json::array();
    for (const FiberPoint& p : r.witness.fiber)
      j["fiber"].push_back({{"cell", p.cell}, {"position", point_json_arr(p.position)}});
  }
  if (r.witness.no_immersion)
    j["no_immersion_witness"] = point_json_arr(*r.witness.no_immersion);
  if (r.witness.image_pair) {
    j["image_pair"] = json::array({point_json_arr(r.witness.image_pair->first),
                                   point_json_arr(r.witness.image_pair->second)});
  }
  return j;
}

json iso_to_json(const IsoResult& r) {
  json j;
  j["isomorphic"] = r.value;
  j["matched"] = json::array();
  for (const Point& p : r.alignment.matched) j["matched"].push_back(point_json_arr(p));
  j["only_s"] = json::array();
  for (const Point& p : r.alignment.only_s) j["only_s"].push_back(point_json_arr(p));
  j["only_t"] = json::array();
  for (const Point& p : r.alignment.only_t) j["only_t"].push_back(point_json_arr(p));
  if (r.witness) j["witness"] = point_json_arr(*r.witness);
  return j;
}

json convergence_to_json(const ConvergenceReport& r) {
  json j;
  switch (r.verdict) {
    case ConvergenceReport::Verdict::CertifiedAtRadius:
      j["verdict"] = "certified";
      j["threshold_n"] = r.threshold_n;
      break;
    case ConvergenceReport::Verdict::RefutedAtRadius:
      j["verdict"] = "refuted";
      j["refuted_n"] = r.refuted_n;
      if (r.witness) j["witness"] = point_json_arr(*r.witness);
      break;
    case ConvergenceReport::Verdict::Inconclusive:
      j["verdict"] = "inconclusive";
      break;
  }
  j["r2"] = rat_json(r.r2);
  j["delta"] = rat_json(r.delta);
  j["per_n"] = json::array();
  for (const auto& p : r.per_n)
    j["per_n"].push_back({{"n", p.n}, {"ok", p.ok}, {"matched", p.matched}});
  return j;
}

json cluster_to_json(const ClusterReport& r) {
  json j;
  j["r2"] = rat_json(r.r2);
  j["clusters"] = r.clusters;
  j["representatives"] = r.representatives;
  return j;
}

json probe_to_json(const ProbeReport& r) {
  json j;
  j["clusters"] = cluster_to_json(r.clusters);
  j["precheck_failures"] = r.precheck_failures;
  j["largest_cluster"] = r.largest_cluster;
  j["largest_fraction"] = rat_json(r.largest_fraction);
  j["note"] = r.note;
  return j;
}

// ---------------------------------------------------------------------------
// Subbasis sets and certificates

namespace {

json region_to_json(const Region& r) {
  json j;
  j["openness"] = r.openness == Region::Openness::Open ? "open" : "closed";
  j["pieces"] = json::array();
  for (const auto& [cell, rect] : r.pieces)
    j["pieces"].push_back({{"cell", cell},
                           {"lo", point_json_arr(rect.lo)},
                           {"hi", point_json_arr(rect.hi)}});
  return j;
}

Region region_from_json(const json& j) {
  Region r;
  std::string o = j.at("openness").get<std::string>();
  if (o == "open")
    r.openness = Region::Openness::Open;
  else if (o == "closed")
    r.openness = Region::Openness::Closed;
  else
    fail("region openness must be open or closed");
  for (const json& jp : j.at("pieces"))
    r.pieces.push_back({jp.at("cell").get<int>(),
                        Rect(point_field(jp.at("lo"), "region.lo"),
                             point_field(jp.at("hi"), "region.hi"))});
  return r;
}

const char* tag_name(SubbasisSet::Tag t) {
  switch (t) {
    case SubbasisSet::Tag::Immerses: return "immerses";
    case SubbasisSet::Tag::NotImmerses: return "not-immerses";
    case SubbasisSet::Tag::Plus: return "plus";
    case SubbasisSet::Tag::Minus: return "minus";
    case SubbasisSet::Tag::EmbedsSet: return "embeds";
    case SubbasisSet::Tag::Disjoint: return "disjoint";
    case SubbasisSet::Tag::EPlus: return "eplus";
    case SubbasisSet::Tag::EMinus: return "eminus";
  }
  return "?";
}

}  // namespace

json subbasis_to_json(const SubbasisSet& s) {
  json j;
  j["tag"] = tag_name(s.tag);
  if (!s.disk.region)
    fail("only rect-union payload disks serialize to JSON");
  json rects = json::array();
  for (const Rect& r : s.disk.region->rects)
    rects.push_back({{"lo", point_json_arr(r.lo)}, {"hi", point_json_arr(r.hi)}});
  j["disk"] = {{"rects", std::move(rects)}};
  if (s.u) j["u"] = region_to_json(*s.u);
  if (s.k2) j["k2"] = region_to_json(*s.k2);
  return j;
}

SubbasisSet subbasis_from_json(const json& j) {
  SubbasisSet s;
  std::string tag = j.at("tag").get<std::string>();
  const std::pair<const char*, SubbasisSet::Tag> tags[] = {
      {"immerses", SubbasisSet::Tag::Immerses},
      {"not-immerses", SubbasisSet::Tag::NotImmerses},
      {"plus", SubbasisSet::Tag::Plus},
      {"minus", SubbasisSet::Tag::Minus},
      {"embeds", SubbasisSet::Tag::EmbedsSet},
      {"disjoint", SubbasisSet::Tag::Disjoint},
      {"eplus", SubbasisSet::Tag::EPlus},
      {"eminus", SubbasisSet::Tag::EMinus},
  };
  bool found = false;
  for (auto& [name, t] : tags) {
    if (tag == name) {
      s.tag = t;
      found = true;
    }
  }
  if (!found) fail("unknown subbasis tag: " + tag);
  std::vector<Rect> rects;
  for (const json& jr : j.at("disk").at("rects"))
    rects.push_back(Rect(point_field(jr.at("lo"), "disk.lo"),
                         point_field(jr.at("hi"), "disk.hi")));
  s.disk = rect_complex(rect_union_normalize(rects));
  if (j.contains("u")) s.u = region_from_json(j["u"]);
  if (j.contains("k2")) s.k2 = region_from_json(j["k2"]);
  return s;
}

json certificate_to_json(const Certificate& c) {
  json j;
  j["reason"] = c.reason == Certificate::Reason::PlusMinusPair
                    ? "plus-minus"
                    : "immerses-not-immerses";
  j["r2"] = rat_json(c.r2);
  j["set_for_s"] = subbasis_to_json(c.set_for_s);
  j["set_for_t"] = subbasis_to_json(c.set_for_t);
  return j;
}

json separation_to_json(const SeparationResult& r) {
  json j;
  if (auto* c = std::get_if<Certificate>(&r)) {
    j["separated"] = true;
    j["certificate"] = certificate_to_json(*c);
  } else {
    const auto& ns = std::get<NotSeparatedUpTo>(r);
    j["separated"] = false;
    j["r2_max"] = rat_json(ns.r2_max);
    j["radii_tried"] = json::array();
    for (const Rat& r2 : ns.radii_tried) j["radii_tried"].push_back(rat_json(r2));
  }
  return j;
}

}  // namespace flatland
