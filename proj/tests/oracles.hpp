#pragma once

// Brute-force references used only by the tests. Deliberately naive.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "immerse/graph.hpp"

namespace oracle {

using immerse::Edge;
using immerse::Graph;
using immerse::Vertex;

inline std::vector<char> mask(std::size_t n, const std::vector<Vertex>& xs) {
    std::vector<char> m(n, 0);
    for (Vertex v : xs) m[v] = 1;
    return m;
}

/// Edges with exactly one endpoint in X.
inline std::vector<Edge> boundary_edges(const Graph& g, const std::vector<Vertex>& x) {
    auto in = mask(g.n(), x);
    std::vector<Edge> out;
    for (const Edge& e : g.edges())
        if (in[e.u] != in[e.v]) out.push_back(e);
    return out;
}

/// min |N_{G∖F}(X)| over every edge set F of the boundary with |F| <= budget.
/// Edges not on the boundary never change N(X).
inline std::size_t min_neighbourhood(const Graph& g, const std::vector<Vertex>& x, std::int64_t budget) {
    auto in = mask(g.n(), x);
    const auto bd = boundary_edges(g, x);
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::uint32_t sub = 0; sub < (1U << bd.size()); ++sub) {
        if (std::popcount(sub) > budget) continue;
        std::set<Vertex> nb;
        for (std::size_t k = 0; k < bd.size(); ++k) {
            if (sub & (1U << k)) continue;
            nb.insert(in[bd[k].u] ? bd[k].v : bd[k].u);
        }
        best = std::min(best, nb.size());
    }
    return best;
}

/// |N_{G∖F}(X)| for an explicit F.
inline std::size_t neighbourhood_without(const Graph& g, const std::vector<Vertex>& x,
                                         const std::vector<Edge>& f) {
    auto in = mask(g.n(), x);
    std::set<std::pair<Vertex, Vertex>> del;
    for (const Edge& e : f) del.insert({std::min(e.u, e.v), std::max(e.u, e.v)});
    std::set<Vertex> nb;
    for (const Edge& e : g.edges()) {
        if (in[e.u] == in[e.v] || del.count({e.u, e.v})) continue;
        nb.insert(in[e.u] ? e.v : e.u);
    }
    return nb.size();
}

/// Tries every s-subset and counts common neighbours.
inline bool has_kst(const Graph& g, int s, int t) {
    const int n = static_cast<int>(g.n());
    std::vector<int> pick(s);
    for (int i = 0; i < s; ++i) pick[i] = i;
    if (s > n) return false;
    while (true) {
        int common = 0;
        for (int w = 0; w < n; ++w) {
            bool all = true;
            for (int v : pick)
                if (v == w || !g.has_edge(v, w)) all = false;
            common += all;
        }
        if (common >= t) return true;
        int i = s - 1;
        while (i >= 0 && pick[i] == n - s + i) --i;
        if (i < 0) return false;
        ++pick[i];
        for (int j = i + 1; j < s; ++j) pick[j] = pick[j - 1] + 1;
    }
}

/// Length of a shortest walk-free path from X1 to X2 by exhaustive DFS over
/// simple paths, with the same avoidance rules as the library search:
/// blocked vertices and edges are unusable, paths start at X1 and stop at the
/// first X2 vertex, and no interior vertex lies in X1.
inline std::optional<int> shortest_avoiding(const Graph& g, const std::vector<Vertex>& x1,
                                            const std::vector<Vertex>& x2, const std::vector<char>& vblock,
                                            const std::set<std::pair<Vertex, Vertex>>& eblock, int max_len) {
    auto in1 = mask(g.n(), x1), in2 = mask(g.n(), x2);
    std::optional<int> best;
    std::vector<char> on(g.n(), 0);
    auto dfs = [&](auto&& self, Vertex v, int len) -> void {
        if (in2[v]) {
            if (!best || len < *best) best = len;
            return;
        }
        if (len >= max_len || (best && len + 1 >= *best)) return;
        for (Vertex u : g.neighbors(v)) {
            if (on[u] || vblock[u] || in1[u]) continue;
            if (eblock.count({std::min(u, v), std::max(u, v)})) continue;
            on[u] = 1;
            self(self, u, len + 1);
            on[u] = 0;
        }
    };
    for (Vertex s : x1) {
        if (vblock[s]) continue;
        on[s] = 1;
        dfs(dfs, s, 0);
        on[s] = 0;
    }
    return best;
}

/// Largest clique immersion by a second, independent search: each pair picks
/// a path from the full list of simple paths of its endpoints. n <= 6 only.
inline int immersion_order(const Graph& g) {
    const int n = static_cast<int>(g.n());
    if (n == 0) return 0;
    using P = std::vector<Vertex>;
    auto simple_paths = [&](Vertex a, Vertex b) {
        std::vector<P> out;
        P cur{a};
        std::vector<char> on(n, 0);
        on[a] = 1;
        auto rec = [&](auto&& self, Vertex v) -> void {
            if (v == b) {
                out.push_back(cur);
                return;
            }
            for (Vertex u : g.neighbors(v))
                if (!on[u]) {
                    on[u] = 1;
                    cur.push_back(u);
                    self(self, u);
                    cur.pop_back();
                    on[u] = 0;
                }
        };
        rec(rec, a);
        return out;
    };
    auto edge_index = [&](Vertex u, Vertex v) { return std::min(u, v) * n + std::max(u, v); };
    int best = 1;
    for (std::uint32_t sub = 1; sub < (1U << n); ++sub) {
        const int k = std::popcount(sub);
        if (k <= best) continue;
        std::vector<Vertex> br;
        for (int v = 0; v < n; ++v)
            if (sub & (1U << v)) br.push_back(v);
        std::vector<std::vector<P>> options;
        for (std::size_t i = 0; i < br.size(); ++i)
            for (std::size_t j = i + 1; j < br.size(); ++j) options.push_back(simple_paths(br[i], br[j]));
        std::vector<char> used(n * n, 0);
        auto place = [&](auto&& self, std::size_t idx) -> bool {
            if (idx == options.size()) return true;
            for (const P& p : options[idx]) {
                bool ok = true;
                for (std::size_t s = 0; s + 1 < p.size() && ok; ++s) ok = !used[edge_index(p[s], p[s + 1])];
                if (!ok) continue;
                for (std::size_t s = 0; s + 1 < p.size(); ++s) used[edge_index(p[s], p[s + 1])] = 1;
                if (self(self, idx + 1)) return true;
                for (std::size_t s = 0; s + 1 < p.size(); ++s) used[edge_index(p[s], p[s + 1])] = 0;
            }
            return false;
        };
        if (place(place, 0)) best = k;
    }
    return best;
}

/// ρ evaluated in long double from its closed form.
inline long double rho_ref(long double x, long double eps1, long double k) {
    if (x < k / 5) return 0;
    const long double l = std::log(15 * x / k);
    return eps1 / (l * l);
}

/// Brute-force clique number.
inline int clique_number(const Graph& g) {
    const int n = static_cast<int>(g.n());
    int best = n > 0 ? 1 : 0;
    for (std::uint32_t sub = 1; sub < (1U << n); ++sub) {
        const int k = std::popcount(sub);
        if (k <= best) continue;
        bool ok = true;
        for (int a = 0; a < n && ok; ++a)
            for (int b = a + 1; b < n && ok; ++b)
                if ((sub >> a & 1) && (sub >> b & 1) && !g.has_edge(a, b)) ok = false;
        if (ok) best = k;
    }
    return best;
}

inline Graph random_graph(std::mt19937_64& rng, int n, double p) {
    std::vector<Edge> es;
    std::bernoulli_distribution coin(p);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng)) es.push_back(Edge{u, v});
    return Graph(n, es);
}

}  // namespace oracle
