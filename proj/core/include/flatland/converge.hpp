#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "flatland/transform.hpp"

namespace flatland {

struct SurfaceSequence {
  std::function<SurfacePresentation(int)> generator;  // deterministic, n >= 1
  std::string description;
};

struct MarkedSequence {
  std::function<MarkedSurface(int)> generator;
  std::string description;
};

struct ConvergenceReport {
  enum class Verdict { CertifiedAtRadius, RefutedAtRadius, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  Rat r2;
  Rat delta;
  int threshold_n = 0;  // N: all checked n >= N pass (Certified)
  int refuted_n = 0;    // first failing n (Refuted)
  std::optional<Point> witness;  // unmatched fiber position (Refuted)
  struct PerN {
    int n = 0;
    bool ok = false;
    size_t matched = 0;
  };
  std::vector<PerN> per_n;
};

/// Certifies that S_n -> limit at scale (r, delta) over n in [n0, n1]: the
/// closed r-disk of the limit's universal cover immerses into each S_n and the
/// basepoint fibers within radius r - delta match bijectively within delta.
/// Certified when some tail of the range passes throughout; Refuted with the
/// first counterexample otherwise; Inconclusive when development hits caps.
ConvergenceReport certify_convergence(const SurfaceSequence& seq,
                                      const SurfacePresentation& limit,
                                      const Rat& r2, const Rat& delta, int n0,
                                      int n1);

/// Marked variant: additionally requires the mark fibers to match within
/// delta.
ConvergenceReport certify_convergence_marked(const MarkedSequence& seq,
                                             const MarkedSurface& limit,
                                             const Rat& r2, const Rat& delta,
                                             int n0, int n1);

struct ClusterReport {
  Rat r2;
  std::vector<std::vector<int>> clusters;  // index partition, each sorted
  std::vector<int> representatives;        // lowest index per cluster
};

/// Partition of the surfaces under iso_at_radius at r².
ClusterReport cluster_at_radius(const std::vector<SurfacePresentation>& surfaces,
                                const Rat& r2);

struct ProbeReport {
  ClusterReport clusters;
  std::vector<int> precheck_failures;  // n whose eps-ball fails to embed
  size_t largest_cluster = 0;          // index into clusters.clusters
  Rat largest_fraction;                // |largest| / count — heuristic evidence
  std::string note;                    // labels the heuristic nature
};

/// Desk-scale compactness evidence: checks the eps-ball embeds at each term's
/// basepoint, then clusters the first `count` terms at radius r.
ProbeReport compactness_probe(const SurfaceSequence& seq, const Rat& eps2,
                              const Rat& r2, int count);

}  // namespace flatland
