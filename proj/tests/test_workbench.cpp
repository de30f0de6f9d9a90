#include <gtest/gtest.h>

#include <sstream>

#include "immerse/generators.hpp"
#include "immerse/workbench.hpp"

using namespace immerse;

namespace {

std::vector<std::vector<std::string>> parse_tsv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, '\t');) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

int column(const std::vector<std::string>& header, const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

}  // namespace

TEST(Config, PaperModeValidation) {
    EmbedConfig c;
    c.mode = Mode::Paper;
    EXPECT_NO_THROW(c.validate());
    c.eps1 = 0.01;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.eps1 = 1.0 / 400;
    c.eps2 = 0.5;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.eps2 = 0.01;
    c.eta = Rational(1, 100);
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.mode = Mode::Practical;
    EXPECT_NO_THROW(c.validate());

    const EmbedConfig e = EmbedConfig::from_epsilon(Rational(1, 2));
    EXPECT_EQ(e.eta, Rational(1, 20));
    EXPECT_NO_THROW(e.validate());
    EXPECT_LT(e.eps2, 0.5 / 50);
    EXPECT_THROW(parse_mode("fast"), std::invalid_argument);
}

TEST(Pipeline, Examples) {
    const EmbedConfig cfg;
    const Graph k30 = generate(GenSpec::complete(30));
    auto [a, ra] = embed_clique_immersion(k30, cfg);
    EXPECT_EQ(a.order(), 30);
    EXPECT_EQ(ra.achieved, 30);

    const Graph c5 = generate(GenSpec::cycle(5));
    auto [b, rb] = embed_clique_immersion(c5, cfg);
    EXPECT_EQ(b.order(), 3);
    EXPECT_TRUE(verify_immersion(c5, b).ok);

    const Graph er = generate(GenSpec::polarity(11));
    auto [c, rc] = embed_clique_immersion(er, cfg);
    EXPECT_GE(c.order(), greedy_baseline(er).order());
    EXPECT_TRUE(verify_immersion(er, c).ok);
    EXPECT_EQ(rc.achieved, c.order());

    auto [e, re] = embed_clique_immersion(Graph(), cfg);
    EXPECT_EQ(e.order(), 0);
    EXPECT_EQ(re.route, "baseline");
}

TEST(Pipeline, PaperModeRuns) {
    EmbedConfig cfg;
    cfg.mode = Mode::Paper;
    const Graph g = generate(GenSpec::gnp(40, 0.3, 1));
    auto [imm, rep] = embed_clique_immersion(g, cfg);
    EXPECT_TRUE(verify_immersion(g, imm).ok);
    EXPECT_GE(imm.order(), greedy_baseline(g).order());
    EXPECT_FALSE(rep.dense_gate);
}

TEST(Pipeline, Deterministic) {
    EmbedConfig cfg;
    cfg.seed = 4;
    const Graph g = generate(GenSpec::gnp(60, 0.05, 9));
    auto [a, ra] = embed_clique_immersion(g, cfg);
    auto [b, rb] = embed_clique_immersion(g, cfg);
    std::ostringstream sa, sb;
    write_certificate(sa, a);
    write_certificate(sb, b);
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_EQ(ra.log.lines(), rb.log.lines());
}

TEST(Bench, TinyWithinOracle) {
    const std::string table = run_benchmark("tiny", EmbedConfig{});
    const auto rows = parse_tsv(table);
    ASSERT_GT(rows.size(), 40u);
    const int order = column(rows[0], "order"), oracle = column(rows[0], "oracle");
    ASSERT_GE(order, 0);
    ASSERT_GE(oracle, 0);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        ASSERT_NE(rows[i][oracle], "-");
        EXPECT_LE(std::stoi(rows[i][order]), std::stoi(rows[i][oracle])) << rows[i][0];
    }
}

TEST(Bench, DenseCliqueRatio) {
    const auto rows = parse_tsv(run_benchmark("dense", EmbedConfig{}));
    const int ratio = column(rows[0], "order_over_d");
    int cliques = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i][0].rfind("Complete(", 0) != 0) continue;
        const int k = std::stoi(rows[i][0].substr(9));
        EXPECT_NEAR(std::stod(rows[i][ratio]), static_cast<double>(k) / (k - 1), 1e-4);
        ++cliques;
    }
    EXPECT_GE(cliques, 3);
}

TEST(Bench, ByteIdenticalAcrossWorkers) {
    const EmbedConfig cfg;
    BenchOptions one, four;
    four.workers = 4;
    const std::string a = run_benchmark("sparse", cfg, one);
    EXPECT_EQ(a, run_benchmark("sparse", cfg, one));
    EXPECT_EQ(a, run_benchmark("sparse", cfg, four));
}
