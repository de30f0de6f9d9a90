#pragma once

#include <optional>
#include <string>
#include <vector>

#include "immerse/graph.hpp"
#include "immerse/immersion.hpp"
#include "immerse/util.hpp"

namespace immerse {

struct Star {
    Vertex center = kNoVertex;
    std::vector<Vertex> leaves;
};

struct Deficit {
    std::string kind;
    std::size_t found = 0;
    std::size_t wanted = 0;
};

/// An (h1,h2,h3)-unit: center, h1 stars of h2 leaves, and one branch from
/// the center to each star center.
struct Unit {
    Vertex center = kNoVertex;
    std::vector<Star> stars;
    std::vector<Path> branches;    // branches[k] runs center -> stars[k].center
    int h3 = 0;
    std::vector<int> used_pendants;
    std::vector<char> occupied;

    std::vector<Vertex> exterior() const;
    /// All branch and pendant edges, canonical.
    std::vector<Edge> edges() const;
};

/// Structural problems of a unit (empty when valid).
std::vector<std::string> validate_unit(const Graph& g, const Unit& u);

struct DenseParams {
    double eps1 = 1.0 / 400;
    double eps2 = 0.01;
    Rational eta{1, 10};
    Rational d{0};
    int ell = 0;                 // (1-5 eta) d
    int ell_prime = 0;           // (1-4 eta) d
    int ell_double_prime = 0;    // (1-4.5 eta) d
    int m = 0;                   // exterior-to-exterior path budget
    int h1 = 0, h2 = 0, h3 = 0;
    int hub_count = 0, hub_size = 0;
    int sat_count = 0, sat_size = 0;
    int unit_count = 0;          // units requested from find_units
    int subfamily = 0;           // units used in assembly
    int reach_target = 0;        // centres a hub should reach
    int overuse_threshold = 1;   // used pendants making a star over-used
    int discard_threshold = 1;   // over-used stars discarding a unit

    /// Formula values (sizes clamped to the graph).
    static DenseParams paper(const Graph& g, double eps1, double eps2, const Rational& eta);
    /// Sizes chosen so that a unit fits into the graph.
    static DenseParams practical(const Graph& g, double eps1, double eps2, const Rational& eta);
    /// Explicit unit shape; other fields follow the practical defaults.
    static DenseParams scaled(const Graph& g, double eps1, double eps2, const Rational& eta, int h1, int h2,
                              int h3, int units);
};

struct HarvestSpec {
    int count = 0;
    int size = 0;
};

struct HarvestResult {
    std::vector<Star> hubs;
    std::vector<Star> satellites;
    std::optional<Deficit> deficit;
};

/// Greedy vertex-disjoint stars in (G − Y) ∖ F, highest available degree
/// first, leaves in ascending id. Hubs are taken before satellites.
HarvestResult harvest_disjoint_stars(const Graph& g, HarvestSpec hubs, HarvestSpec satellites,
                                     const AvoidSet& exclude);

struct GrowResult {
    std::optional<Unit> unit;
    std::optional<Deficit> deficit;
    int reached = 0;             // centres reached by the chosen hub
    bool reach_target_met = false;
};

/// Routes hub leaves to satellite centres, keeps the hub reaching most
/// centres and builds a unit from its surviving satellite stars.
GrowResult grow_unit(const Graph& g, const std::vector<Star>& hubs, const std::vector<Star>& satellites,
                     const DenseParams& p, const AvoidSet& global_avoid, RunLog* log = nullptr);

/// Pairwise edge-disjoint units with distinct centres.
std::vector<Unit> find_units(const Graph& g, const DenseParams& p, RunLog* log = nullptr);

struct AssembleAccounting {
    std::size_t connection_edges = 0;
    std::size_t branch_edges = 0;
    std::int64_t connection_budget = 0;   // C(l'',2) * 6m
    std::int64_t branch_budget = 0;       // l'' * l' * 2m
    int pairs_connected = 0;
    int pairs_failed = 0;
    int discarded = 0;
};

struct AssembleResult {
    Immersion immersion;
    AssembleAccounting accounting;
};

/// Connects unit exteriors pairwise and extends through branches to
/// centre-to-centre paths; the order is the largest set of surviving units
/// that are pairwise connected.
AssembleResult assemble_from_units(const Graph& g, std::vector<Unit> units, const DenseParams& p,
                                   RunLog* log = nullptr);

struct DenseOutcome {
    Immersion immersion;
    std::vector<Unit> units;
    AssembleAccounting accounting;
};

DenseOutcome embed_dense(const Graph& g, const DenseParams& p, RunLog* log = nullptr);

}  // namespace immerse
