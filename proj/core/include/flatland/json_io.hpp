#pragma once

#include <string>

#include <json.hpp>

#include "flatland/converge.hpp"
#include "flatland/predicates.hpp"

namespace flatland {

// JSON with string rationals is the only persistent format; SVG output is
// write-only. Parsers throw std::invalid_argument with field context.

SurfacePresentation parse_surface_json(const std::string& text);
std::string serialize_surface(const SurfacePresentation& s);

/// "builtin:torus?v1=1,0&v2=0,1" style URIs. Parameters may use the variable
/// n (e.g. v2=0,1+1/n) when a substitution is supplied.
SurfacePresentation builtin_from_uri(const std::string& uri);
SurfacePresentation builtin_from_uri_n(const std::string& uri, int n);

/// A surface from a "builtin:" URI or a JSON file path.
SurfacePresentation load_surface(const std::string& arg);

/// A deterministic sequence from a "builtin:" URI containing the variable n.
SurfaceSequence sequence_from_uri(const std::string& uri);

/// Rect unions: {"rects":[{"lo":["p","q"],"hi":["p","q"]},...]} or the inline
/// form "rect:lo_x,lo_y,hi_x,hi_y[;lo_x,...]".
RectUnion parse_rect_union_json(const std::string& text);
std::string serialize_rect_union(const RectUnion& u);
RectUnion load_rect_union(const std::string& arg);

/// Sum-of-terms rational expressions "1+1/n", "-3/4", "n"; terms are p or p/q
/// with integer or `n` tokens. n < 0 means no substitution available.
Rat eval_rat_expr(const std::string& text, long long n = -1);

// Machine-readable reports ---------------------------------------------------

nlohmann::json json_point(const Point& p);
nlohmann::json validation_to_json(const ValidationReport& r);
nlohmann::json links_to_json(const std::vector<VertexClassReport>& links);
nlohmann::json complex_to_json(const DevelopedComplex& d);
nlohmann::json immersion_to_json(const ImmersionMap& im);
nlohmann::json embeds_to_json(const EmbedsResult& r);
nlohmann::json er_to_json(const EmbeddingRadius& er);
nlohmann::json fiber_to_json(const BasepointFiber& f);
nlohmann::json member_to_json(const MemberResult& r);
nlohmann::json iso_to_json(const IsoResult& r);
nlohmann::json convergence_to_json(const ConvergenceReport& r);
nlohmann::json cluster_to_json(const ClusterReport& r);
nlohmann::json probe_to_json(const ProbeReport& r);

nlohmann::json subbasis_to_json(const SubbasisSet& s);
SubbasisSet subbasis_from_json(const nlohmann::json& j);
nlohmann::json certificate_to_json(const Certificate& c);
nlohmann::json separation_to_json(const SeparationResult& r);

}  // namespace flatland
