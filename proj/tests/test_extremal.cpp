#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "immerse/extremal.hpp"
#include "immerse/generators.hpp"
#include "oracles.hpp"

using namespace immerse;

namespace {

Graph petersen() {
    std::vector<Edge> es;
    for (int i = 0; i < 5; ++i) {
        es.emplace_back(i, (i + 1) % 5);
        es.emplace_back(5 + i, 5 + (i + 2) % 5);
        es.emplace_back(i, i + 5);
    }
    return Graph(10, es);
}

void expect_witness(const Graph& g, const KstWitness& w, std::size_t s, std::size_t t) {
    ASSERT_EQ(w.left.size(), s);
    ASSERT_EQ(w.right.size(), t);
    for (Vertex a : w.left)
        for (Vertex b : w.right) EXPECT_TRUE(g.has_edge(a, b)) << a << "-" << b;
}

}  // namespace

TEST(Kst, Examples) {
    const Graph c4(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    auto w = find_kst(c4, 2, 2);
    ASSERT_TRUE(w);
    expect_witness(c4, *w, 2, 2);

    EXPECT_FALSE(find_kst(petersen(), 2, 2));

    const Graph k23 = generate(GenSpec::complete_bipartite(2, 3));
    w = find_kst(k23, 2, 3);
    ASSERT_TRUE(w);
    expect_witness(k23, *w, 2, 3);

    EXPECT_THROW(find_kst(c4, 1, 2), std::invalid_argument);
    EXPECT_THROW(find_kst(c4, 3, 2), std::invalid_argument);
}

TEST(Kst, MatchesBruteForce) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 150; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 7);
        const Graph g = oracle::random_graph(rng, n, 0.2 + 0.5 * (rng() % 100) / 100.0);
        const int s = 2 + static_cast<int>(rng() % 2);
        const int t = s + static_cast<int>(rng() % 2);
        const auto w = find_kst(g, s, t);
        EXPECT_EQ(w.has_value(), oracle::has_kst(g, s, t)) << "trial " << trial;
        if (w) expect_witness(g, *w, s, t);
    }
}

TEST(Kst, DensityReport) {
    const Graph er = generate(GenSpec::polarity(7));
    const KstDensityReport r = kst_density_report(er, 2, 2);
    EXPECT_TRUE(r.finite);
    EXPECT_DOUBLE_EQ(r.ratio, er.m() / std::pow(57.0, 1.5));

    EXPECT_EQ(kst_density_report(Graph(), 2, 2).ratio, 0.0);

    const Graph star = generate(GenSpec::complete_bipartite(1, 5));
    EXPECT_DOUBLE_EQ(kst_density_report(star, 2, 2).ratio, 5.0 / std::pow(6.0, 1.5));

    const Bipartition parts{{0}, {1, 2, 3, 4, 5}};
    const auto rb = kst_density_report(star, 2, 2, parts);
    ASSERT_TRUE(rb.bipartite_ratio);
    EXPECT_DOUBLE_EQ(*rb.bipartite_ratio, 5.0 / (1.0 * 5.0));
}

TEST(Kst, DensityAfterDeletion) {
    const std::vector<Vertex> one{0};
    EXPECT_EQ(density_after_deletion(generate(GenSpec::complete(10)), one), Rational(8));
    EXPECT_EQ(density_after_deletion(generate(GenSpec::complete_bipartite(1, 9)), one), Rational(0));

    const Graph er = generate(GenSpec::polarity(11));
    const Rational d = avg_degree(er);
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Vertex> z;
        while (z.size() < 5) {
            const Vertex v = static_cast<Vertex>(rng() % er.n());
            if (std::find(z.begin(), z.end(), v) == z.end()) z.push_back(v);
        }
        const Rational dz = density_after_deletion(er, z);
        EXPECT_LE(dz, d);
        EXPECT_GE(dz, d - 2);
    }
    std::vector<Vertex> all(3);
    std::iota(all.begin(), all.end(), 0);
    EXPECT_THROW(density_after_deletion(generate(GenSpec::complete(3)), all), GraphError);
}
