#include "immerse/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

namespace immerse {

namespace {

struct KstSearch {
    const Graph& g;
    int s;
    int t;
    std::vector<Vertex> chosen;
    std::optional<KstWitness> found;

    // `common` is the common neighbourhood of `chosen` (sorted).
    void extend(const std::vector<Vertex>& common) {
        if (static_cast<int>(chosen.size()) == s) {
            found = KstWitness{chosen, std::vector<Vertex>(common.begin(), common.begin() + t)};
            return;
        }
        std::vector<Vertex> candidates;
        if (chosen.empty()) {
            for (std::size_t v = 0; v < g.n(); ++v) candidates.push_back(static_cast<Vertex>(v));
        } else {
            // The next vertex must share the t common neighbours, so it is a
            // neighbour of some vertex of `common`.
            std::vector<char> mark(g.n(), 0);
            for (Vertex c : common)
                for (Vertex w : g.neighbors(c))
                    if (w > chosen.back() && !mark[w]) {
                        mark[w] = 1;
                        candidates.push_back(w);
                    }
            std::sort(candidates.begin(), candidates.end());
        }
        for (Vertex v : candidates) {
            if (static_cast<int>(g.degree(v)) < t) continue;
            std::vector<Vertex> next;
            if (chosen.empty()) {
                next.assign(g.neighbors(v).begin(), g.neighbors(v).end());
            } else {
                std::set_intersection(common.begin(), common.end(), g.neighbors(v).begin(),
                                      g.neighbors(v).end(), std::back_inserter(next));
            }
            if (static_cast<int>(next.size()) < t) continue;
            chosen.push_back(v);
            extend(next);
            chosen.pop_back();
            if (found) return;
        }
    }
};

}  // namespace

std::optional<KstWitness> find_kst(const Graph& g, int s, int t) {
    if (s < 2) throw std::invalid_argument("find_kst requires s >= 2");
    if (s > t) throw std::invalid_argument("find_kst requires s <= t (got s=" + std::to_string(s) +
                                           ", t=" + std::to_string(t) + ")");
    KstSearch search{g, s, t, {}, std::nullopt};
    search.extend({});
    return search.found;
}

KstDensityReport kst_density_report(const Graph& g, int s, int t,
                                    const std::optional<Bipartition>& parts) {
    if (s < 1 || t < s) throw std::invalid_argument("kst_density_report requires 1 <= s <= t");
    KstDensityReport r;
    r.edges = g.m();
    const double exponent = 2.0 - 1.0 / s;
    const double n = static_cast<double>(g.n());
    r.ratio = (g.n() == 0 || g.m() == 0) ? 0.0 : static_cast<double>(g.m()) / std::pow(n, exponent);
    if (parts) {
        check_vertices(g, parts->left);
        check_vertices(g, parts->right);
        std::vector<char> side(g.n(), 0);
        for (Vertex v : parts->left) side[v] = 1;
        for (Vertex v : parts->right) side[v] = 2;
        std::size_t cross = 0;
        for (const Edge& e : g.edges())
            if (side[e.u] && side[e.v] && side[e.u] != side[e.v]) ++cross;
        const double n1 = static_cast<double>(parts->left.size());
        const double n2 = static_cast<double>(parts->right.size());
        r.bipartite_ratio = cross == 0 ? 0.0 : static_cast<double>(cross) / (std::pow(n1, 1.0 - 1.0 / s) * n2);
    }
    r.finite = std::isfinite(r.ratio) && (!r.bipartite_ratio || std::isfinite(*r.bipartite_ratio));
    return r;
}

Rational density_after_deletion(const Graph& g, std::span<const Vertex> z) {
    check_vertices(g, z);
    const std::vector<Vertex> zs = normalized(std::vector<Vertex>(z.begin(), z.end()));
    if (zs.size() >= g.n()) throw GraphError("density_after_deletion: Z covers every vertex");
    std::vector<char> gone(g.n(), 0);
    for (Vertex v : zs) gone[v] = 1;
    std::int64_t kept = 0;
    for (const Edge& e : g.edges())
        if (!gone[e.u] && !gone[e.v]) ++kept;
    return Rational(2 * kept, static_cast<std::int64_t>(g.n() - zs.size()));
}

}  // namespace immerse
