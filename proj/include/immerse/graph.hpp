#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace immerse {

using Vertex = std::int32_t;
using EdgeId = std::int32_t;
using Rational = boost::rational<std::int64_t>;
using Path = std::vector<Vertex>;

inline constexpr Vertex kNoVertex = -1;

class GraphError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Undirected edge in canonical form (u < v).
struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    Edge() = default;
    Edge(Vertex a, Vertex b);

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct EdgeHash {
    std::size_t operator()(const Edge& e) const noexcept {
        return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(e.u) << 32) |
                                          static_cast<std::uint32_t>(e.v));
    }
};

/// Immutable simple undirected graph on vertices 0..n-1. Adjacency lists are
/// sorted; every adjacency slot carries the id of its edge so that edge masks
/// can be plain vectors indexed by EdgeId.
class Graph {
public:
    Graph() = default;
    /// Throws GraphError on loops, duplicate edges or out-of-range ids.
    Graph(std::size_t n, std::span<const Edge> edges);
    Graph(std::size_t n, std::initializer_list<std::pair<Vertex, Vertex>> edges);

    std::size_t n() const noexcept { return adjacency_.size(); }
    std::size_t m() const noexcept { return edges_.size(); }

    std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }
    std::span<const EdgeId> incident(Vertex v) const { return incident_[v]; }
    std::size_t degree(Vertex v) const { return adjacency_[v].size(); }
    std::size_t max_degree() const noexcept;
    std::size_t min_degree() const noexcept;

    const Edge& edge(EdgeId e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::optional<EdgeId> edge_id(Vertex u, Vertex v) const;
    bool has_edge(Vertex u, Vertex v) const { return edge_id(u, v).has_value(); }
    bool contains(Vertex v) const noexcept { return v >= 0 && static_cast<std::size_t>(v) < n(); }

    /// FNV-1a over the canonical edge list; identifies the host of a certificate.
    std::uint64_t fingerprint() const noexcept;

private:
    std::vector<std::vector<Vertex>> adjacency_;
    std::vector<std::vector<EdgeId>> incident_;
    std::vector<Edge> edges_;
};

/// Forbidden vertices Y, forbidden edges F and forbidden path endpoints, as
/// masks sized to one host graph. Single-owner scratch state.
class AvoidSet {
public:
    AvoidSet() = default;
    explicit AvoidSet(const Graph& g);

    void block_vertex(Vertex v) { vertices_.at(v) = 1; }
    void block_edge(EdgeId e) { edges_.at(e) = 1; }
    void block_endpoint(Vertex v) { endpoints_.at(v) = 1; }
    void unblock_vertex(Vertex v) { vertices_.at(v) = 0; }
    /// Blocks edge uv if it exists; returns whether it did.
    bool block_edge(const Graph& g, Vertex u, Vertex v);
    void block_vertices(std::span<const Vertex> vs);
    void block_edges(std::span<const EdgeId> es);

    bool vertex_blocked(Vertex v) const { return vertices_[v] != 0; }
    bool edge_blocked(EdgeId e) const { return edges_[e] != 0; }
    bool endpoint_blocked(Vertex v) const { return endpoints_[v] != 0; }

    std::size_t vertex_capacity() const noexcept { return vertices_.size(); }
    std::size_t edge_capacity() const noexcept { return edges_.size(); }

private:
    std::vector<char> vertices_;
    std::vector<char> edges_;
    std::vector<char> endpoints_;
};

/// Result of a (multi-source) breadth-first search truncated at a radius.
struct Ball {
    std::vector<Vertex> order;      // BFS discovery order, sources first
    std::vector<int> depth;         // -1 when not reached
    std::vector<Vertex> parent;     // kNoVertex for sources / unreached
    std::vector<EdgeId> parent_edge;

    bool contains(Vertex v) const { return depth[v] >= 0; }
    std::size_t size() const noexcept { return order.size(); }
    /// Vertices sorted by id.
    std::vector<Vertex> sorted() const;
    /// Sizes of B^0, B^1, ..., B^radius.
    std::vector<std::size_t> profile(int radius) const;
    /// Tree path from a source to v (source first).
    Path path_to(Vertex v) const;
};

Rational avg_degree(const Graph& g);

/// N_{G∖F}(X) minus Y, sorted by id.
std::vector<Vertex> external_neighborhood(const Graph& g, std::span<const Vertex> x,
                                          const AvoidSet& avoid);
std::vector<Vertex> external_neighborhood(const Graph& g, std::span<const Vertex> x);

/// B^radius(X) in (G∖F)−Y. Neighbours are explored in ascending id.
/// Throws GraphError if X meets the forbidden vertices.
Ball ball(const Graph& g, std::span<const Vertex> x, int radius, const AvoidSet& avoid);
Ball ball(const Graph& g, std::span<const Vertex> x, int radius);

/// Length of a shortest (A,B)-path; 0 when A and B meet, nullopt when none.
std::optional<int> set_distance(const Graph& g, std::span<const Vertex> a,
                                std::span<const Vertex> b);

struct Restriction {
    Graph graph;
    std::vector<Vertex> to_parent;    // new id -> old id
    std::vector<Vertex> from_parent;  // old id -> new id or kNoVertex

    /// Maps a path/vertex list of the restricted graph back to parent ids.
    std::vector<Vertex> lift(std::span<const Vertex> vs) const;
};

/// G − removeV ∖ removeE. Unknown ids are ignored.
Restriction restrict(const Graph& g, std::span<const Vertex> remove_vertices,
                     std::span<const Edge> remove_edges = {});
/// Induced subgraph on the given vertex set (ids kept in ascending order).
Restriction induced(const Graph& g, std::span<const Vertex> keep);

/// "n m" header then m lines "u v"; '#' lines ignored.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g, const std::string& header_comment = {});

/// Sorted, de-duplicated copy.
std::vector<Vertex> normalized(std::vector<Vertex> vs);

/// Validates that every vertex is in range; throws GraphError otherwise.
void check_vertices(const Graph& g, std::span<const Vertex> vs);

}  // namespace immerse
