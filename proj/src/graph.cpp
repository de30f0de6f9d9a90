#include "immerse/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace immerse {

Edge::Edge(Vertex a, Vertex b) : u(std::min(a, b)), v(std::max(a, b)) {}

Graph::Graph(std::size_t n, std::span<const Edge> edges)
    : adjacency_(n), incident_(n) {
    std::vector<Edge> canon;
    canon.reserve(edges.size());
    for (const Edge& raw : edges) {
        const Edge e(raw.u, raw.v);
        if (e.u < 0 || static_cast<std::size_t>(e.v) >= n)
            throw GraphError("edge " + std::to_string(raw.u) + " " + std::to_string(raw.v) +
                             " out of range for n=" + std::to_string(n));
        if (e.u == e.v) throw GraphError("self-loop at vertex " + std::to_string(e.u));
        canon.push_back(e);
    }
    std::sort(canon.begin(), canon.end());
    if (auto dup = std::adjacent_find(canon.begin(), canon.end()); dup != canon.end())
        throw GraphError("duplicate edge " + std::to_string(dup->u) + " " + std::to_string(dup->v));
    edges_ = std::move(canon);

    for (EdgeId id = 0; id < static_cast<EdgeId>(edges_.size()); ++id) {
        adjacency_[edges_[id].u].push_back(edges_[id].v);
        adjacency_[edges_[id].v].push_back(edges_[id].u);
    }
    for (std::size_t v = 0; v < n; ++v) std::sort(adjacency_[v].begin(), adjacency_[v].end());
    for (std::size_t v = 0; v < n; ++v) {
        incident_[v].reserve(adjacency_[v].size());
        for (Vertex w : adjacency_[v]) {
            const Edge e(static_cast<Vertex>(v), w);
            auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
            incident_[v].push_back(static_cast<EdgeId>(it - edges_.begin()));
        }
    }
}

Graph::Graph(std::size_t n, std::initializer_list<std::pair<Vertex, Vertex>> edges) {
    std::vector<Edge> es;
    es.reserve(edges.size());
    for (auto [a, b] : edges) {
        Edge e;
        e.u = a;
        e.v = b;
        es.push_back(e);
    }
    *this = Graph(n, std::span<const Edge>(es));
}

std::size_t Graph::max_degree() const noexcept {
    std::size_t best = 0;
    for (const auto& a : adjacency_) best = std::max(best, a.size());
    return best;
}

std::size_t Graph::min_degree() const noexcept {
    if (adjacency_.empty()) return 0;
    std::size_t best = adjacency_.front().size();
    for (const auto& a : adjacency_) best = std::min(best, a.size());
    return best;
}

std::optional<EdgeId> Graph::edge_id(Vertex u, Vertex v) const {
    if (!contains(u) || !contains(v) || u == v) return std::nullopt;
    const auto& adj = adjacency_[u];
    auto it = std::lower_bound(adj.begin(), adj.end(), v);
    if (it == adj.end() || *it != v) return std::nullopt;
    return incident_[u][it - adj.begin()];
}

std::uint64_t Graph::fingerprint() const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t x) {
        for (int i = 0; i < 8; ++i) {
            h ^= (x >> (8 * i)) & 0xffU;
            h *= 1099511628211ULL;
        }
    };
    mix(n());
    mix(m());
    for (const Edge& e : edges_) {
        mix(static_cast<std::uint64_t>(e.u));
        mix(static_cast<std::uint64_t>(e.v));
    }
    return h;
}

AvoidSet::AvoidSet(const Graph& g)
    : vertices_(g.n(), 0), edges_(g.m(), 0), endpoints_(g.n(), 0) {}

bool AvoidSet::block_edge(const Graph& g, Vertex u, Vertex v) {
    if (auto id = g.edge_id(u, v)) {
        block_edge(*id);
        return true;
    }
    return false;
}

void AvoidSet::block_vertices(std::span<const Vertex> vs) {
    for (Vertex v : vs) block_vertex(v);
}

void AvoidSet::block_edges(std::span<const EdgeId> es) {
    for (EdgeId e : es) block_edge(e);
}

std::vector<Vertex> Ball::sorted() const {
    std::vector<Vertex> out = order;
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> Ball::profile(int radius) const {
    std::vector<std::size_t> counts(static_cast<std::size_t>(radius) + 1, 0);
    for (Vertex v : order)
        if (depth[v] <= radius) ++counts[depth[v]];
    for (std::size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
    return counts;
}

Path Ball::path_to(Vertex v) const {
    Path p;
    if (!contains(v)) return p;
    for (Vertex cur = v; cur != kNoVertex; cur = parent[cur]) p.push_back(cur);
    std::reverse(p.begin(), p.end());
    return p;
}

void check_vertices(const Graph& g, std::span<const Vertex> vs) {
    for (Vertex v : vs)
        if (!g.contains(v))
            throw GraphError("vertex " + std::to_string(v) + " out of range for n=" +
                             std::to_string(g.n()));
}

std::vector<Vertex> normalized(std::vector<Vertex> vs) {
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

Rational avg_degree(const Graph& g) {
    if (g.n() == 0) throw GraphError("average degree of the empty graph is undefined");
    return Rational(2 * static_cast<std::int64_t>(g.m()), static_cast<std::int64_t>(g.n()));
}

std::vector<Vertex> external_neighborhood(const Graph& g, std::span<const Vertex> x,
                                          const AvoidSet& avoid) {
    check_vertices(g, x);
    std::vector<char> in_x(g.n(), 0), seen(g.n(), 0);
    for (Vertex v : x) in_x[v] = 1;
    std::vector<Vertex> out;
    for (Vertex v : x) {
        auto nbrs = g.neighbors(v);
        auto ids = g.incident(v);
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            const Vertex u = nbrs[k];
            if (in_x[u] || seen[u] || avoid.vertex_blocked(u) || avoid.edge_blocked(ids[k])) continue;
            seen[u] = 1;
            out.push_back(u);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Vertex> external_neighborhood(const Graph& g, std::span<const Vertex> x) {
    return external_neighborhood(g, x, AvoidSet(g));
}

Ball ball(const Graph& g, std::span<const Vertex> x, int radius, const AvoidSet& avoid) {
    check_vertices(g, x);
    if (radius < 0) throw GraphError("negative radius");
    Ball b;
    b.depth.assign(g.n(), -1);
    b.parent.assign(g.n(), kNoVertex);
    b.parent_edge.assign(g.n(), -1);
    std::vector<Vertex> sources(x.begin(), x.end());
    std::sort(sources.begin(), sources.end());
    for (Vertex v : sources) {
        if (avoid.vertex_blocked(v))
            throw GraphError("ball source " + std::to_string(v) + " is a forbidden vertex");
        if (b.depth[v] == 0) continue;
        b.depth[v] = 0;
        b.order.push_back(v);
    }
    for (std::size_t head = 0; head < b.order.size(); ++head) {
        const Vertex v = b.order[head];
        if (b.depth[v] == radius) continue;
        auto nbrs = g.neighbors(v);
        auto ids = g.incident(v);
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            const Vertex u = nbrs[k];
            if (b.depth[u] >= 0 || avoid.vertex_blocked(u) || avoid.edge_blocked(ids[k])) continue;
            b.depth[u] = b.depth[v] + 1;
            b.parent[u] = v;
            b.parent_edge[u] = ids[k];
            b.order.push_back(u);
        }
    }
    return b;
}

Ball ball(const Graph& g, std::span<const Vertex> x, int radius) {
    return ball(g, x, radius, AvoidSet(g));
}

std::optional<int> set_distance(const Graph& g, std::span<const Vertex> a,
                                std::span<const Vertex> b) {
    if (a.empty() || b.empty()) throw GraphError("set_distance needs nonempty sets");
    check_vertices(g, b);
    std::vector<char> in_b(g.n(), 0);
    for (Vertex v : b) in_b[v] = 1;
    const Ball reach = ball(g, a, static_cast<int>(g.n()));
    std::optional<int> best;
    for (Vertex v : reach.order)
        if (in_b[v]) {
            best = reach.depth[v];
            break;
        }
    return best;
}

std::vector<Vertex> Restriction::lift(std::span<const Vertex> vs) const {
    std::vector<Vertex> out;
    out.reserve(vs.size());
    for (Vertex v : vs) out.push_back(to_parent.at(v));
    return out;
}

namespace {

Restriction build_restriction(const Graph& g, const std::vector<char>& keep,
                              const std::vector<char>& drop_edge) {
    Restriction r;
    r.from_parent.assign(g.n(), kNoVertex);
    for (std::size_t v = 0; v < g.n(); ++v)
        if (keep[v]) {
            r.from_parent[v] = static_cast<Vertex>(r.to_parent.size());
            r.to_parent.push_back(static_cast<Vertex>(v));
        }
    std::vector<Edge> es;
    for (EdgeId id = 0; id < static_cast<EdgeId>(g.m()); ++id) {
        const Edge& e = g.edge(id);
        if (!keep[e.u] || !keep[e.v] || drop_edge[id]) continue;
        Edge ne;
        ne.u = r.from_parent[e.u];
        ne.v = r.from_parent[e.v];
        es.push_back(ne);
    }
    r.graph = Graph(r.to_parent.size(), es);
    return r;
}

}  // namespace

Restriction restrict(const Graph& g, std::span<const Vertex> remove_vertices,
                     std::span<const Edge> remove_edges) {
    std::vector<char> keep(g.n(), 1), drop(g.m(), 0);
    for (Vertex v : remove_vertices)
        if (g.contains(v)) keep[v] = 0;
    for (const Edge& raw : remove_edges)
        if (auto id = g.edge_id(raw.u, raw.v)) drop[*id] = 1;
    return build_restriction(g, keep, drop);
}

Restriction induced(const Graph& g, std::span<const Vertex> vertices) {
    check_vertices(g, vertices);
    std::vector<char> keep(g.n(), 0), drop(g.m(), 0);
    for (Vertex v : vertices) keep[v] = 1;
    return build_restriction(g, keep, drop);
}

Graph read_edge_list(std::istream& in) {
    std::string line;
    auto next_line = [&](std::string& out) {
        while (std::getline(in, out)) {
            auto first = out.find_first_not_of(" \t\r");
            if (first == std::string::npos || out[first] == '#') continue;
            return true;
        }
        return false;
    };
    if (!next_line(line)) throw GraphError("edge list: missing 'n m' header");
    long long n = -1, m = -1;
    {
        std::istringstream hs(line);
        if (!(hs >> n >> m) || n < 0 || m < 0) throw GraphError("edge list: bad header '" + line + "'");
    }
    std::vector<Edge> es;
    es.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
        if (!next_line(line))
            throw GraphError("edge list: expected " + std::to_string(m) + " edges, got " +
                             std::to_string(i));
        std::istringstream ls(line);
        long long u, v;
        if (!(ls >> u >> v)) throw GraphError("edge list: bad edge line '" + line + "'");
        Edge e;
        e.u = static_cast<Vertex>(u);
        e.v = static_cast<Vertex>(v);
        es.push_back(e);
    }
    if (next_line(line)) throw GraphError("edge list: more than " + std::to_string(m) + " edges");
    return Graph(static_cast<std::size_t>(n), es);
}

Graph read_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open " + path);
    return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g, const std::string& header_comment) {
    if (!header_comment.empty()) {
        std::istringstream lines(header_comment);
        for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
    }
    out << g.n() << ' ' << g.m() << '\n';
    for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

}  // namespace immerse
