#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "immerse/graph.hpp"

namespace immerse {

using PairKey = std::pair<int, int>;  // (i, j) with i < j

/// A K_t-immersion certificate: injective branch map plus one host path per
/// pair of branch indices. Paths are explicit vertex sequences.
struct Immersion {
    std::uint64_t host_id = 0;
    std::vector<Vertex> branch;
    std::map<PairKey, Path> paths;

    int order() const noexcept { return static_cast<int>(branch.size()); }
    /// Path oriented from branch[i] to branch[j], for any i != j.
    Path path_between(int i, int j) const;
    /// Relabels host vertices through `to_parent` and updates the host id.
    Immersion lifted(const std::vector<Vertex>& to_parent, std::uint64_t parent_host) const;
};

enum class ViolationKind { NonInjective, BadEndpoint, NonEdge, EdgeReuse, StrongViolation, Malformed };

struct Violation {
    ViolationKind kind;
    std::string locus;
};

struct VerifyReport {
    bool ok = true;
    std::vector<Violation> violations;
};

const char* to_string(ViolationKind k);

/// Checks injectivity, endpoints, adjacency of each step and global edge
/// disjointness. Strong mode also rejects path interiors meeting the branch
/// set. Never throws on malformed certificates.
VerifyReport verify_immersion(const Graph& g, const Immersion& imm, bool strong = false);

/// Greedy clique (highest-degree seeds, common-neighbour extension) as an
/// immersion with single-edge paths.
Immersion greedy_baseline(const Graph& g);

struct OracleResult {
    int max_order = 0;
    Immersion certificate;
    bool exact = true;          // false when the node budget ran out
    std::uint64_t nodes = 0;
};

/// Largest clique immersion by exhaustive backtracking: branch sets in
/// lexicographic order, pairs in lexicographic order, candidate paths by
/// increasing length. Exact while the node budget lasts.
OracleResult oracle_max_immersion(const Graph& g, int cap_order = -1,
                                  std::uint64_t node_budget = 50'000'000);

/// Exact clique number by branch and bound (test and benchmark helper).
std::vector<Vertex> max_clique(const Graph& g);

/// Certificate text: "order t", "branch i v", "path i j v0 ... vk", '#' comments.
void write_certificate(std::ostream& out, const Immersion& imm);
Immersion read_certificate(std::istream& in);

}  // namespace immerse
