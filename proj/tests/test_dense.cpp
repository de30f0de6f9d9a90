#include <gtest/gtest.h>

#include <set>

#include "immerse/dense.hpp"
#include "immerse/generators.hpp"

using namespace immerse;

namespace {

const Rational kEta{1, 10};

DenseParams scaled(const Graph& g, int h1, int h2, int h3, int units) {
    return DenseParams::scaled(g, 1.0 / 400, 0.01, kEta, h1, h2, h3, units);
}

void expect_pairwise_disjoint(const std::vector<Unit>& units) {
    std::set<Edge> seen;
    std::set<Vertex> centres;
    for (const Unit& u : units) {
        EXPECT_TRUE(centres.insert(u.center).second);
        for (const Edge& e : u.edges()) EXPECT_TRUE(seen.insert(e).second) << e.u << "-" << e.v;
    }
}

}  // namespace

TEST(Harvest, WholeClique) {
    const Graph k9 = generate(GenSpec::complete(9));
    const HarvestResult r = harvest_disjoint_stars(k9, {1, 8}, {0, 0}, AvoidSet(k9));
    EXPECT_FALSE(r.deficit);
    ASSERT_EQ(r.hubs.size(), 1u);
    EXPECT_EQ(r.hubs[0].leaves.size(), 8u);

    const HarvestResult d = harvest_disjoint_stars(k9, {2, 8}, {0, 0}, AvoidSet(k9));
    ASSERT_TRUE(d.deficit);
    EXPECT_EQ(d.deficit->kind, "hubs");
    EXPECT_EQ(d.deficit->found, 1u);
}

TEST(Harvest, RegularGraphStarsDisjoint) {
    const Graph g = generate(GenSpec::random_regular(100, 3, 2));
    const HarvestResult r = harvest_disjoint_stars(g, {5, 3}, {10, 2}, AvoidSet(g));
    EXPECT_FALSE(r.deficit);
    std::set<Vertex> used;
    for (const auto* fam : {&r.hubs, &r.satellites})
        for (const Star& s : *fam) {
            EXPECT_TRUE(used.insert(s.center).second);
            for (Vertex l : s.leaves) {
                EXPECT_TRUE(g.has_edge(s.center, l));
                EXPECT_TRUE(used.insert(l).second);
            }
        }
    EXPECT_EQ(r.hubs.size(), 5u);
    EXPECT_EQ(r.satellites.size(), 10u);
}

TEST(GrowUnit, CliqueUnitValid) {
    const Graph k30 = generate(GenSpec::complete(30));
    const DenseParams p = scaled(k30, 3, 2, 2, 1);
    const auto units = find_units(k30, p);
    ASSERT_EQ(units.size(), 1u);
    EXPECT_TRUE(validate_unit(k30, units[0]).empty());
    EXPECT_EQ(units[0].stars.size(), 3u);
    for (const Path& b : units[0].branches) EXPECT_LE(static_cast<int>(b.size()) - 1, 2);
}

TEST(GrowUnit, Deficits) {
    const Graph k9 = generate(GenSpec::complete(9));
    const DenseParams p = scaled(k9, 2, 2, 2, 1);
    EXPECT_TRUE(grow_unit(k9, {}, {}, p, AvoidSet(k9)).deficit);

    // Three disjoint stars K_{1,3}.
    std::vector<Edge> es;
    for (int s = 0; s < 3; ++s)
        for (int l = 1; l <= 3; ++l) es.emplace_back(4 * s, 4 * s + l);
    const Graph stars(12, es);
    const DenseParams q = scaled(stars, 1, 2, 3, 1);
    const HarvestResult h = harvest_disjoint_stars(stars, {1, 3}, {2, 2}, AvoidSet(stars));
    ASSERT_EQ(h.hubs.size(), 1u);
    const GrowResult r = grow_unit(stars, h.hubs, h.satellites, q, AvoidSet(stars));
    ASSERT_TRUE(r.deficit);
    EXPECT_EQ(r.deficit->kind, "reachedCenters");
    EXPECT_EQ(r.deficit->found, 0u);
    EXPECT_EQ(r.reached, 0);
}

TEST(FindUnits, FourUnitsInK40) {
    const Graph k40 = generate(GenSpec::complete(40));
    const DenseParams p = scaled(k40, 3, 2, 3, 4);
    const auto units = find_units(k40, p);
    ASSERT_EQ(units.size(), 4u);
    for (const Unit& u : units) EXPECT_TRUE(validate_unit(k40, u).empty());
    expect_pairwise_disjoint(units);

    EXPECT_TRUE(find_units(Graph(10, std::span<const Edge>{}), p).empty());
    EXPECT_TRUE(find_units(k40, scaled(k40, 3, 2, 3, 0)).empty());
}

TEST(Assemble, K40Units) {
    const Graph k40 = generate(GenSpec::complete(40));
    const DenseParams p = scaled(k40, 3, 2, 3, 4);
    auto units = find_units(k40, p);
    RunLog log;
    const AssembleResult r = assemble_from_units(k40, units, p, &log);
    EXPECT_TRUE(verify_immersion(k40, r.immersion).ok);
    EXPECT_GE(r.immersion.order(), 2);
    EXPECT_LE(r.immersion.order(), static_cast<int>(units.size()));
    std::set<Vertex> centres;
    for (const Unit& u : units) centres.insert(u.center);
    for (Vertex b : r.immersion.branch) EXPECT_TRUE(centres.count(b));
}

TEST(Assemble, SingleUnit) {
    const Graph k30 = generate(GenSpec::complete(30));
    const DenseParams p = scaled(k30, 3, 2, 2, 1);
    const AssembleResult r = assemble_from_units(k30, find_units(k30, p), p);
    EXPECT_EQ(r.immersion.order(), 1);
    EXPECT_TRUE(verify_immersion(k30, r.immersion).ok);
}

TEST(Assemble, DisconnectedUnits) {
    // Two disjoint K12's: one unit in each, no exterior-to-exterior path.
    std::vector<Edge> es;
    for (int side = 0; side < 2; ++side)
        for (int u = 0; u < 12; ++u)
            for (int v = u + 1; v < 12; ++v) es.emplace_back(12 * side + u, 12 * side + v);
    const Graph g(24, es);
    const Graph k12 = generate(GenSpec::complete(12));
    DenseParams p = scaled(k12, 2, 2, 2, 1);
    auto a = find_units(k12, p);
    p.subfamily = 2;
    ASSERT_EQ(a.size(), 1u);
    Unit shifted = a[0];
    shifted.center += 12;
    for (Star& s : shifted.stars) {
        s.center += 12;
        for (Vertex& l : s.leaves) l += 12;
    }
    for (Path& b : shifted.branches)
        for (Vertex& v : b) v += 12;
    const AssembleResult r = assemble_from_units(g, {a[0], shifted}, p);
    EXPECT_EQ(r.immersion.order(), 1);
    EXPECT_EQ(r.accounting.pairs_failed, 1);
    EXPECT_TRUE(verify_immersion(g, r.immersion).ok);
}

TEST(EmbedDense, PracticalOnCliques) {
    for (int n : {10, 20, 30}) {
        const Graph g = generate(GenSpec::complete(n));
        RunLog log;
        const DenseOutcome out = embed_dense(g, DenseParams::practical(g, 1.0 / 400, 0.01, kEta), &log);
        EXPECT_TRUE(verify_immersion(g, out.immersion).ok) << n;
        for (const Unit& u : out.units) EXPECT_TRUE(validate_unit(g, u).empty());
        expect_pairwise_disjoint(out.units);
        EXPECT_LE(static_cast<std::int64_t>(out.accounting.connection_edges), out.accounting.connection_budget);
    }
}
