#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "immerse/expansion.hpp"
#include "immerse/graph.hpp"
#include "immerse/immersion.hpp"
#include "immerse/util.hpp"

namespace immerse {

struct SparseParams {
    double eps1 = 1.0 / 400;
    double eps2 = 0.01;
    Rational eta{1, 10};
    int s = 2, t = 2;
    int kappa = 1;
    int r = 1;
    int ball_exp = 1;              // kernel radius
    Rational z1_threshold{0};      // Z1 = {v : deg(v) >= threshold}
    int m = 1;                     // set-to-set path budget
    int path_budget = 1;           // whole branch-to-branch path budget
    int separation = 3;            // pairwise distance of bounded-route branches
    int target = 0;                // requested order
    int subexpander_count = 0;
    Rational subexpander_density{7, 10};  // d(F) >= fraction * d(G')
    double bounded_gate = 1.1;     // Δ(G') <= gate * d(G') selects the bounded route
    ExtractOptions extract;

    /// Formula values: κ = ⌈log n/(800 s log log n)⌉, r = ⌈(log log n)^5⌉,
    /// kernel radius log^4 d, Z1 threshold d m^3, budget 2 log^4 n.
    static SparseParams paper(const Graph& g, double eps1, double eps2, const Rational& eta, int s = 2, int t = 2);
    /// Small radii and budgets of order n.
    static SparseParams practical(const Graph& g, double eps1, double eps2, const Rational& eta, int s = 2,
                                  int t = 2);
};

/// Forbidden sets recorded when a path is committed.
struct LedgerSnapshot {
    std::vector<EdgeId> forbidden_edges;
    std::vector<Vertex> forbidden_vertices;
};

/// Committed pair paths with their edge and vertex usage.
class PathLedger {
public:
    PathLedger() = default;
    PathLedger(const Graph& g, std::vector<Vertex> branches);

    const std::vector<Vertex>& branches() const noexcept { return branches_; }
    int size() const noexcept { return static_cast<int>(branches_.size()); }
    bool connected(int i, int j) const;
    /// Path oriented from branch i to branch j.
    Path oriented(int i, int j) const;
    const std::vector<PairKey>& history() const noexcept { return history_; }
    const std::vector<PairKey>& paths_of(int i) const { return per_branch_.at(i); }
    const LedgerSnapshot& snapshot(int i, int j) const;

    bool edge_used(EdgeId e) const { return used_edges_[e] != 0; }
    const std::vector<char>& used_edges() const noexcept { return used_edges_; }
    const std::vector<char>& used_vertices() const noexcept { return used_vertices_; }
    /// Mask of the edges on paths with endpoint branch i.
    std::vector<char> edges_of_branch(int i) const;

    /// Throws std::logic_error if the path reuses an edge, is not a walk in
    /// the host, or has the wrong endpoints.
    void commit(int i, int j, Path path, LedgerSnapshot snap = {});

    /// Immersion on the given branch indices (all pairs must be connected).
    Immersion immersion(const std::vector<int>& subset) const;
    /// Largest pairwise-connected subset of branches.
    std::vector<int> best_subset() const;

private:
    const Graph* g_ = nullptr;
    std::vector<Vertex> branches_;
    std::map<PairKey, Path> paths_;
    std::map<PairKey, LedgerSnapshot> snapshots_;
    std::vector<PairKey> history_;
    std::vector<std::vector<PairKey>> per_branch_;
    std::vector<char> used_edges_;
    std::vector<char> used_vertices_;
};

/// Shortest path from `sources` to a target vertex inside G[zone] minus
/// `removed` edges. Zone, target and removed are masks over the host.
std::optional<Path> consecutive_extension(const Graph& g, std::span<const Vertex> sources,
                                          const std::vector<char>& zone, const std::vector<char>& removed,
                                          const std::vector<char>& target);

/// Next consecutive shortest path for branch `branch` inside the zone,
/// avoiding edges already charged to that branch. Nothing is committed.
std::optional<Path> extend_ledger_consecutive(const Graph& g, const PathLedger& ledger, int branch,
                                              std::span<const Vertex> zone, std::span<const Vertex> target);

/// Greedy maximal set from {v : deg(v) >= min_degree} in ascending id with
/// pairwise distance >= separation; at most `count` vertices.
std::vector<Vertex> select_far_apart_branch_vertices(const Graph& g, const Rational& min_degree, int separation,
                                                     int count);

struct AuditReport {
    bool edge_disjoint = true;
    bool consecutive = true;
    bool avoidance = true;
    bool separation = true;
    std::vector<std::string> failures;

    bool ok() const { return edge_disjoint && consecutive && avoidance && separation; }
};

struct RouteResult {
    std::string route;
    Immersion immersion;
    PathLedger ledger;
    int pairs_connected = 0;
    int pairs_failed = 0;
    int audit_rejections = 0;
    AuditReport audit;             // replay of the final ledger from scratch
};

/// Branches are the highest-degree vertices of Z1; pairs are joined by
/// direct edges or (N_i', N_j')-paths avoiding the other branches.
RouteResult embed_high_degree(const Graph& g, std::span<const Vertex> z1, const SparseParams& p,
                              RunLog* log = nullptr);

/// Far-apart branches, static inner balls B^r(v_p); each pair takes a
/// shortest path avoiding used edges and the other inner balls.
RouteResult embed_bounded_degree(const Graph& g, const SparseParams& p, RunLog* log = nullptr,
                                 std::optional<std::vector<Vertex>> branches = std::nullopt);

struct Subexpander {
    std::vector<Vertex> vertices;  // host ids, sorted
    Graph graph;
    std::vector<Vertex> to_host;
    ExpansionVerdict verdict;
};

struct SubexpanderFamily {
    std::vector<Subexpander> members;
    std::optional<std::string> deficit;
};

/// Robust expanders of G' with pairwise disjoint κ-balls, each extracted
/// from G' minus the 2κ-balls around the earlier ones.
SubexpanderFamily find_subexpanders(const Graph& gp, int count, const SparseParams& p, RunLog* log = nullptr);

struct Kernel {
    Vertex branch = kNoVertex;
    int host = -1;
    std::vector<Vertex> core;
    std::vector<Vertex> inner_ball;
    std::vector<Vertex> outer_ball;
    std::size_t core_target = 0;   // d^2

    bool meets_target() const { return core.size() >= core_target; }
};

/// Ball of the given radius around vi inside host[host_set] ∖ removed.
Kernel grow_kernel(const Graph& host, std::span<const Vertex> host_set, Vertex vi, std::span<const Edge> removed,
                   int radius, std::size_t core_target = 0);

/// Kernel-based assembly on G (Z1 avoided when growing balls).
RouteResult assemble_sparse(const Graph& g, std::span<const Vertex> z1, const std::vector<Subexpander>& family,
                            const SparseParams& p, RunLog* log = nullptr);

enum class SparseCase { HighDegree, BoundedDegree, Subexpander, None };
const char* to_string(SparseCase c);

struct SparseOutcome {
    Immersion immersion;
    SparseCase fired = SparseCase::None;
    SparseCase won = SparseCase::None;
    std::vector<Vertex> z1;
    Rational d_g{0};
    Rational d_prime{0};
    bool d_prime_ok = false;       // d(G') >= d(G) − η d(G)
    std::vector<RouteResult> routes;
    bool audits_ok = true;
};

SparseOutcome embed_sparse(const Graph& g, const SparseParams& p, RunLog* log = nullptr);

}  // namespace immerse
