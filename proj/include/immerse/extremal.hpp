#pragma once

#include <optional>
#include <vector>

#include "immerse/graph.hpp"

namespace immerse {

/// A copy of K_{s,t}: every left vertex is adjacent to every right vertex.
struct KstWitness {
    std::vector<Vertex> left;
    std::vector<Vertex> right;
};

/// Exact K_{s,t} search over s-subsets (2 <= s <= t). The s-subsets are
/// extended along common neighbourhoods, so candidates beyond the first
/// vertex are drawn from the two-hop neighbourhood only.
std::optional<KstWitness> find_kst(const Graph& g, int s, int t);

struct Bipartition {
    std::vector<Vertex> left;
    std::vector<Vertex> right;
};

struct KstDensityReport {
    std::size_t edges = 0;
    double ratio = 0.0;                       // e(G) / n^{2-1/s}
    std::optional<double> bipartite_ratio;    // e(V1,V2) / (n1^{1-1/s} n2)
    bool finite = true;
};

/// Diagnostic ratios against the Kővári–Sós–Turán growth rates; the
/// implicit constants are never assumed.
KstDensityReport kst_density_report(const Graph& g, int s, int t,
                                    const std::optional<Bipartition>& parts = std::nullopt);

/// d(G − Z) exactly. Throws GraphError when Z covers V(G).
Rational density_after_deletion(const Graph& g, std::span<const Vertex> z);

}  // namespace immerse
