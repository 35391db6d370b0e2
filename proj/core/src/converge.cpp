#include "flatland/converge.hpp"

#include <algorithm>

namespace flatland {

namespace {

// p lies within distance r - delta of the origin: sqrt(|p|^2) + delta <= r.
bool within_shrunk(const Point& p, const Rat& delta, const Rat& r2) {
  return sqrt_plus_leq_sqrt(norm2(p), delta, r2);
}

struct FiberPair {
  std::vector<Point> shrunk;  // positions within r - delta
  std::vector<Point> all;     // every lift in the closed r-disk
};

FiberPair filtered_fiber(const ImmersionMap& im, PolyId poly, const Point& pt,
                         const Rat& delta, const Rat& r2) {
  FiberPair out;
  for (const FiberPoint& f : point_fiber(im, poly, pt).points) {
    if (norm2(f.position) > r2) continue;  // placed cells poke past the disk
    out.all.push_back(f.position);
    if (within_shrunk(f.position, delta, r2)) out.shrunk.push_back(f.position);
  }
  return out;
}

// Maximum bipartite matching on |a_i - b_j|^2 <= delta^2, deterministic
// (inputs are lex-sorted). Returns the matched count; collects the unmatched
// left-side points.
size_t match_fibers(const std::vector<Point>& a, const std::vector<Point>& b,
                    const Rat& delta2, std::vector<Point>* unmatched) {
  std::vector<std::vector<int>> adj(a.size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      if (dist2(a[i], b[j]) <= delta2) adj[i].push_back(int(j));
  std::vector<int> match_b(b.size(), -1), match_a(a.size(), -1);
  std::function<bool(size_t, std::vector<bool>&)> aug =
      [&](size_t i, std::vector<bool>& used) {
        for (int j : adj[i]) {
          if (used[size_t(j)]) continue;
          used[size_t(j)] = true;
          if (match_b[size_t(j)] < 0 ||
              aug(size_t(match_b[size_t(j)]), used)) {
            match_b[size_t(j)] = int(i);
            match_a[i] = j;
            return true;
          }
        }
        return false;
      };
  size_t matched = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    std::vector<bool> used(b.size(), false);
    if (aug(i, used)) ++matched;
  }
  if (unmatched) {
    for (size_t i = 0; i < a.size(); ++i)
      if (match_a[i] < 0) unmatched->push_back(a[i]);
  }
  return matched;
}

// Conditions (1)/(2) at scale (r, delta): every fiber point within r - delta
// on either side matches injectively into the other side's full r-disk fiber.
size_t match_both_ways(const FiberPair& a, const FiberPair& b,
                       const Rat& delta2, std::vector<Point>* unmatched) {
  size_t m = match_fibers(a.shrunk, b.all, delta2, unmatched);
  match_fibers(b.shrunk, a.all, delta2, unmatched);
  return m;
}

std::optional<Point> pick_witness(const std::vector<Point>& pts) {
  std::optional<Point> w;
  for (const Point& p : pts) {
    if (!w || norm2(p) < norm2(*w) ||
        (norm2(p) == norm2(*w) && lex_less(*w, p)))
      w = p;
  }
  return w;
}

struct NTerm {
  bool ok = false;
  bool capped = false;
  size_t matched = 0;
  std::optional<Point> witness;
};

template <typename GetSurface, typename ExtraCheck>
ConvergenceReport run_certify(const SurfacePresentation& limit_surface,
                              const Rat& r2, const Rat& delta, int n0, int n1,
                              GetSurface get, ExtraCheck extra) {
  ConvergenceReport rep;
  rep.r2 = r2;
  rep.delta = delta;
  if (delta <= 0) throw std::invalid_argument("delta must be positive");
  if (n0 < 1 || n1 < n0) throw std::invalid_argument("bad n range");
  DevelopedComplex disk;
  ImmersionResult self;
  try {
    disk = develop_disk(limit_surface, r2);
    self = immerse(disk, limit_surface);
  } catch (const NonTermination&) {
    rep.verdict = ConvergenceReport::Verdict::Inconclusive;
    return rep;
  }
  FiberPair limit_fiber = filtered_fiber(
      std::get<ImmersionMap>(self), limit_surface.basepoint_polygon,
      limit_surface.basepoint, delta, r2);
  Rat delta2 = delta * delta;

  bool any_capped = false;
  int last_fail = 0, first_fail = 0;
  std::optional<Point> first_witness;
  for (int n = n0; n <= n1; ++n) {
    NTerm term;
    try {
      SurfacePresentation sn = get(n);
      ImmersionResult ir = immerse(disk, sn);
      if (auto* ni = std::get_if<NoImmersion>(&ir)) {
        term.witness = ni->witness;
      } else {
        const ImmersionMap& im = std::get<ImmersionMap>(ir);
        FiberPair fn = filtered_fiber(im, sn.basepoint_polygon, sn.basepoint,
                                      delta, r2);
        std::vector<Point> unmatched;
        term.matched = match_both_ways(limit_fiber, fn, delta2, &unmatched);
        term.ok = unmatched.empty() && extra(n, disk, im, delta2, &unmatched);
        if (!term.ok) term.witness = pick_witness(unmatched);
      }
    } catch (const NonTermination&) {
      term.capped = true;
      any_capped = true;
    }
    if (!term.ok) {
      last_fail = n;
      if (first_fail == 0) {
        first_fail = n;
        first_witness = term.witness;
      }
    }
    rep.per_n.push_back({n, term.ok, term.matched});
  }
  if (any_capped) {
    rep.verdict = ConvergenceReport::Verdict::Inconclusive;
  } else if (last_fail == 0) {
    rep.verdict = ConvergenceReport::Verdict::CertifiedAtRadius;
    rep.threshold_n = n0;
  } else if (last_fail < n1) {
    rep.verdict = ConvergenceReport::Verdict::CertifiedAtRadius;
    rep.threshold_n = last_fail + 1;
  } else {
    rep.verdict = ConvergenceReport::Verdict::RefutedAtRadius;
    rep.refuted_n = first_fail;
    rep.witness = first_witness;
  }
  return rep;
}

}  // namespace

ConvergenceReport certify_convergence(const SurfaceSequence& seq,
                                      const SurfacePresentation& limit,
                                      const Rat& r2, const Rat& delta, int n0,
                                      int n1) {
  return run_certify(
      limit, r2, delta, n0, n1, [&](int n) { return seq.generator(n); },
      [](int, const DevelopedComplex&, const ImmersionMap&, const Rat&,
         std::vector<Point>*) { return true; });
}

ConvergenceReport certify_convergence_marked(const MarkedSequence& seq,
                                             const MarkedSurface& limit,
                                             const Rat& r2, const Rat& delta,
                                             int n0, int n1) {
  // Mark lifts of the limit within the disk, via the tautological immersion.
  DevelopedComplex disk = develop_disk(limit.surface, r2);
  ImmersionResult self = immerse(disk, limit.surface);
  FiberPair limit_marks = filtered_fiber(
      std::get<ImmersionMap>(self), limit.mark_polygon, limit.mark, delta, r2);
  // Keep the marked surfaces of the range so the extra check can see them.
  std::map<int, MarkedSurface> terms;
  return run_certify(
      limit.surface, r2, delta, n0, n1,
      [&](int n) {
        terms.emplace(n, seq.generator(n));
        return terms.at(n).surface;
      },
      [&](int n, const DevelopedComplex&, const ImmersionMap& im,
          const Rat& delta2, std::vector<Point>* unmatched) {
        const MarkedSurface& mn = terms.at(n);
        FiberPair marks_n =
            filtered_fiber(im, mn.mark_polygon, mn.mark, delta, r2);
        size_t before = unmatched->size();
        match_both_ways(limit_marks, marks_n, delta2, unmatched);
        return unmatched->size() == before;
      });
}

ClusterReport cluster_at_radius(const std::vector<SurfacePresentation>& surfaces,
                                const Rat& r2) {
  ClusterReport rep;
  rep.r2 = r2;
  for (size_t i = 0; i < surfaces.size(); ++i) {
    bool placed = false;
    for (size_t c = 0; c < rep.representatives.size() && !placed; ++c) {
      int rep_i = rep.representatives[c];
      if (iso_at_radius(surfaces[i], surfaces[size_t(rep_i)], r2).value) {
        rep.clusters[c].push_back(int(i));
        placed = true;
      }
    }
    if (!placed) {
      rep.representatives.push_back(int(i));
      rep.clusters.push_back({int(i)});
    }
  }
  return rep;
}

ProbeReport compactness_probe(const SurfaceSequence& seq, const Rat& eps2,
                              const Rat& r2, int count) {
  if (count < 1) throw std::invalid_argument("count must be positive");
  ProbeReport rep;
  std::vector<SurfacePresentation> terms;
  for (int n = 1; n <= count; ++n) {
    SurfacePresentation s = seq.generator(n);
    EmbeddingRadius er =
        embedding_radius(s, s.basepoint_polygon, s.basepoint);
    if (!er.er2.infinite && er.er2.value <= eps2)
      rep.precheck_failures.push_back(n);
    terms.push_back(std::move(s));
  }
  rep.clusters = cluster_at_radius(terms, r2);
  size_t best = 0;
  for (size_t c = 1; c < rep.clusters.clusters.size(); ++c)
    if (rep.clusters.clusters[c].size() >
        rep.clusters.clusters[best].size())
      best = c;
  rep.largest_cluster = best;
  rep.largest_fraction =
      Rat(Int(rep.clusters.clusters.empty()
                  ? 0
                  : rep.clusters.clusters[best].size()),
          Int(count));
  rep.note =
      "heuristic evidence only: recurrence of r-isomorphism classes along a "
      "finite prefix, not a compactness proof";
  return rep;
}

}  // namespace flatland
