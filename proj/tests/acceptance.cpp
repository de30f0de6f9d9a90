// Acceptance checks: one PASS/FAIL line per criterion; nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "immerse/dense.hpp"
#include "immerse/expansion.hpp"
#include "immerse/extremal.hpp"
#include "immerse/generators.hpp"
#include "immerse/immersion.hpp"
#include "immerse/sparse.hpp"
#include "immerse/workbench.hpp"
#include "oracles.hpp"

using namespace immerse;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void run(int id, const char* title, double limit_secs, const std::function<Outcome()>& body) {
    const auto start = Clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (secs > limit_secs) {
        out.pass = false;
        out.detail += " (over time limit " + std::to_string(limit_secs) + "s)";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2fs", secs);
    std::printf("%s criterion %d: %s [%s] %s\n", out.pass ? "PASS" : "FAIL", id, title, buf, out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
}

std::string cert_text(const Immersion& imm) {
    std::ostringstream os;
    write_certificate(os, imm);
    return os.str();
}

Immersion roundtrip(const Immersion& imm) {
    std::istringstream is(cert_text(imm));
    return read_certificate(is);
}

bool only_kind(const VerifyReport& rep, ViolationKind k) {
    if (rep.ok || rep.violations.empty()) return false;
    return std::all_of(rep.violations.begin(), rep.violations.end(),
                       [k](const Violation& v) { return v.kind == k; });
}

std::vector<Immersion> all_route_certificates(const Graph& g) {
    std::vector<Immersion> out;
    out.push_back(greedy_baseline(g));
    out.push_back(oracle_max_immersion(g).certificate);
    EmbedConfig cfg;
    out.push_back(embed_clique_immersion(g, cfg).first);
    if (g.m() > 0) {
        auto sp = embed_sparse(g, cfg.sparse_params(g));
        for (const auto& r : sp.routes) out.push_back(r.immersion);
        out.push_back(sp.immersion);
        out.push_back(embed_dense(g, cfg.dense_params(g)).immersion);
    }
    return out;
}

Outcome criterion1() {
    std::vector<Graph> graphs;
    for (const auto& spec : corpus("tiny", 1)) {
        Graph g = generate(spec);
        if (g.n() <= 6) graphs.push_back(std::move(g));
    }
    const std::size_t from_corpus = graphs.size();
    if (from_corpus < 40) return {false, "tiny corpus has only " + std::to_string(from_corpus) + " graphs with n <= 6"};
    std::mt19937_64 rng(11);
    while (graphs.size() < 60) {
        const int n = 3 + static_cast<int>(rng() % 4);
        graphs.push_back(oracle::random_graph(rng, n, 0.3 + 0.1 * static_cast<double>(rng() % 5)));
    }

    std::size_t certs = 0;
    std::vector<std::pair<const Graph*, Immersion>> seeds;
    for (const auto& g : graphs) {
        for (auto& imm : all_route_certificates(g)) {
            ++certs;
            if (!verify_immersion(g, imm).ok) return {false, "route certificate rejected on n=" + std::to_string(g.n())};
            if (!verify_immersion(g, roundtrip(imm)).ok) return {false, "certificate text round trip rejected"};
            if (imm.order() >= 2) seeds.emplace_back(&g, std::move(imm));
        }
    }
    if (seeds.empty()) return {false, "no certificate of order >= 2"};

    int reuse = 0, swap = 0;
    for (int k = 0; k < 100; ++k) {
        auto [gp, base] = seeds[rng() % seeds.size()];
        const Graph& g = *gp;
        Immersion mut = base;
        ViolationKind want;
        if (k % 2 == 0) {
            want = ViolationKind::EdgeReuse;
            auto it = mut.paths.begin();
            std::advance(it, static_cast<long>(rng() % mut.paths.size()));
            Path& p = it->second;
            if (p.size() >= 2) {
                p.push_back(p[p.size() - 2]);
                p.push_back(p[p.size() - 2]);
            } else {
                continue;
            }
            ++reuse;
        } else {
            want = ViolationKind::BadEndpoint;
            const int t = mut.order();
            const int i = static_cast<int>(rng() % t);
            int j = static_cast<int>(rng() % (t - 1));
            if (j >= i) ++j;
            if (k % 4 == 1) {
                std::swap(mut.branch[i], mut.branch[j]);
            } else {
                auto& p = mut.paths.at({std::min(i, j), std::max(i, j)});
                std::reverse(p.begin(), p.end());
            }
            ++swap;
        }
        const auto rep = verify_immersion(g, roundtrip(mut));
        if (!only_kind(rep, want)) {
            std::string got = rep.ok ? "accepted" : to_string(rep.violations.front().kind);
            return {false, std::string("mutation expected ") + to_string(want) + ", got " + got};
        }
    }
    return {true, std::to_string(from_corpus) + " tiny + " + std::to_string(graphs.size() - from_corpus) +
                      " random graphs, " + std::to_string(certs) + " certificates, " +
                      std::to_string(reuse + swap) + " mutations rejected (" + std::to_string(reuse) +
                      " edge reuse, " + std::to_string(swap) + " endpoint)"};
}

Outcome criterion2() {
    EmbedConfig cfg;
    int checked = 0, exact_matches = 0;
    auto check = [&](const Graph& g, bool must_equal, const std::string& name) -> std::string {
        const auto orc = oracle_max_immersion(g);
        if (!orc.exact) return name + ": oracle not exact";
        if (g.n() <= 6 && orc.max_order != oracle::immersion_order(g)) return name + ": oracle disagrees with reference";
        const int got = embed_clique_immersion(g, cfg).first.order();
        ++checked;
        if (got > orc.max_order) return name + ": pipeline above oracle";
        if (must_equal) {
            if (got != orc.max_order) return name + ": pipeline " + std::to_string(got) + " vs oracle " +
                                             std::to_string(orc.max_order);
            ++exact_matches;
        }
        return {};
    };
    for (const auto& spec : corpus("tiny", 2)) {
        Graph g = generate(spec);
        if (g.n() > 7 || g.m() > 14) continue;
        const bool eq = spec.kind == GenKind::Complete || spec.kind == GenKind::Cycle;
        if (auto err = check(g, eq, spec.describe()); !err.empty()) return {false, err};
    }
    for (int n = 1; n <= 7; ++n) {
        if (auto err = check(generate(GenSpec::complete(n)), true, "K" + std::to_string(n)); !err.empty())
            return {false, err};
        if (n >= 3)
            if (auto err = check(generate(GenSpec::cycle(n)), true, "C" + std::to_string(n)); !err.empty())
                return {false, err};
    }
    const int c5 = embed_clique_immersion(generate(GenSpec::cycle(5)), cfg).first.order();
    if (c5 != 3) return {false, "C5 gave " + std::to_string(c5)};
    return {true, std::to_string(checked) + " graphs within oracle, " + std::to_string(exact_matches) +
                      " complete/cycle exact, C5=3"};
}

Outcome criterion3() {
    std::mt19937_64 rng(2024);
    int done = 0;
    while (done < 500) {
        const int n = 3 + static_cast<int>(rng() % 9);
        Graph g = oracle::random_graph(rng, n, 0.2 + 0.1 * static_cast<double>(rng() % 6));
        std::vector<Vertex> x;
        for (int v = 0; v < n; ++v)
            if (rng() % 2) x.push_back(v);
        if (x.empty()) x.push_back(0);
        const auto bd = oracle::boundary_edges(g, x);
        if (bd.size() > 14) continue;
        const std::int64_t budget = static_cast<std::int64_t>(rng() % (bd.size() + 2));
        const auto got = adversarial_neighborhood(g, x, budget);
        const auto want = oracle::min_neighbourhood(g, x, budget);
        if (got.min_size != want)
            return {false, "instance " + std::to_string(done) + ": " + std::to_string(got.min_size) + " vs " +
                               std::to_string(want)};
        if (static_cast<std::int64_t>(got.witness.size()) > budget ||
            oracle::neighbourhood_without(g, x, got.witness) != want)
            return {false, "instance " + std::to_string(done) + ": witness does not attain the minimum"};
        ++done;
    }
    return {true, "500 instances, 0 mismatches"};
}

Outcome criterion4() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        RhoParams p{1e-4 + u01(rng) * 0.5, 0.5 + u01(rng) * 1000.0};
        for (int i = 0; i < 200; ++i) {
            const double x = (p.k / 5) * i / 200.0;
            if (x < p.k / 5 && rho(x, p) != 0.0) return {false, "nonzero below k/5"};
        }
        const int steps = 10000;
        const double lo = std::log(p.k / 2), hi = std::log(p.k * 1e6);
        double prev = -1;
        for (int i = 0; i < steps; ++i) {
            const double x = std::exp(lo + (hi - lo) * i / (steps - 1));
            const double r = rho(x, p);
            const long double ref = oracle::rho_ref(x, p.eps1, p.k);
            if (std::fabs(static_cast<long double>(r) - ref) > 1e-12L * std::fabs(ref))
                return {false, "rho differs from its definition"};
            const double v = x * r;
            if (prev >= 0 && v < prev * (1 - 1e-12)) return {false, "x*rho(x) decreases"};
            prev = v;
        }
    }
    return {true, "20 parameter draws, 10^4-point grid"};
}

Graph bridged_k8() {
    std::vector<Edge> es;
    for (int a = 0; a < 8; ++a)
        for (int b = a + 1; b < 8; ++b) {
            es.emplace_back(a, b);
            es.emplace_back(a + 8, b + 8);
        }
    es.emplace_back(7, 8);
    return Graph(16, es);
}

Outcome criterion5() {
    const Graph g = bridged_k8();
    const double eps1 = 0.5, eps2 = 0.5;
    const auto v = certify_robust_expansion(g, eps1, eps2, CertifyMode::exhaustive());
    if (v.status != VerdictStatus::CertifiedNonExpander || !v.witness)
        return {false, std::string("bridged K8 pair: ") + to_string(v.status)};
    std::ostringstream os;
    write_witness(os, *v.witness);
    std::istringstream is(os.str());
    const auto w = read_witness(is);
    if (!witness_violates(g, eps1, eps2, w)) return {false, "replayed witness does not violate"};

    const double d = 2.0 * static_cast<double>(g.m()) / static_cast<double>(g.n());
    const double k = eps2 * d;
    const double sz = static_cast<double>(w.x.size());
    if (sz < k / 2 || sz > g.n() / 2.0) return {false, "witness set size outside the checked range"};
    const long double r = oracle::rho_ref(sz, eps1, k);
    const auto budget = static_cast<std::int64_t>(std::floor(static_cast<long double>(d) * r * sz));
    if (static_cast<std::int64_t>(w.f.size()) > budget) return {false, "witness exceeds the edge budget"};
    for (const Edge& e : w.f)
        if (!g.has_edge(e.u, e.v)) return {false, "witness deletes a non-edge"};
    if (!(static_cast<long double>(oracle::neighbourhood_without(g, w.x, w.f)) < r * sz))
        return {false, "independent replay finds no violation"};

    const auto k10 = certify_robust_expansion(generate(GenSpec::complete(10)), 1.0 / 400, 0.1,
                                              CertifyMode::exhaustive());
    if (k10.status != VerdictStatus::CertifiedExpander) return {false, std::string("K10: ") + to_string(k10.status)};
    return {true, "bridged K8 pair non-expander (eps1=eps2=1/2, |X|=" + std::to_string(w.x.size()) +
                      ", |F|=" + std::to_string(w.f.size()) + "), K10 expander (exhaustive)"};
}

std::string independent_ledger_check(const Graph& g, const RouteResult& r) {
    std::set<EdgeId> seen;
    for (const auto& key : r.ledger.history()) {
        const Path p = r.ledger.oriented(key.first, key.second);
        if (p.front() != r.ledger.branches()[key.first] || p.back() != r.ledger.branches()[key.second])
            return r.route + ": path endpoints";
        for (std::size_t s = 0; s + 1 < p.size(); ++s) {
            const auto id = g.edge_id(p[s], p[s + 1]);
            if (!id) return r.route + ": non-edge in ledger";
            if (!seen.insert(*id).second) return r.route + ": edge used twice in ledger";
        }
    }
    return {};
}

Outcome criterion6() {
    int runs = 0, routes = 0;
    EmbedConfig cfg;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        for (const char* profile : {"sparse", "dense"}) {
            const auto specs = corpus(profile, seed);
            const Graph g = generate(specs[seed % specs.size()]);
            auto sp = cfg.sparse_params(g);
            sp.extract.seed = seed;
            const int seps[] = {1, 2, 3 * sp.kappa + 1};
            sp.separation = seps[seed % 3];
            sp.r = static_cast<int>(seed / 3 % 3);
            const auto out = embed_sparse(g, sp);
            if (!out.audits_ok) return {false, std::string(profile) + " seed " + std::to_string(seed) + ": audit"};
            for (const auto& r : out.routes) {
                ++routes;
                if (!r.audit.ok())
                    return {false, r.route + " seed " + std::to_string(seed) + ": " +
                                       (r.audit.failures.empty() ? "audit" : r.audit.failures.front())};
                if (auto err = independent_ledger_check(g, r); !err.empty()) return {false, err};
                if (!verify_immersion(g, r.immersion).ok) return {false, r.route + ": certificate rejected"};
            }
            if (!verify_immersion(g, out.immersion).ok) return {false, "sparse certificate rejected"};

            if (std::string(profile) == "dense" || seed % 5 == 0) {
                const auto dn = embed_dense(g, cfg.dense_params(g));
                std::set<Edge> seen;
                for (const auto& u : dn.units) {
                    if (!validate_unit(g, u).empty()) return {false, "invalid dense unit"};
                    for (const Edge& e : u.edges())
                        if (!seen.insert(e).second) return {false, "dense units share an edge"};
                }
                if (!verify_immersion(g, dn.immersion).ok) return {false, "dense certificate rejected"};
            }
            ++runs;
        }
    }
    return {true, std::to_string(runs) + " runs, " + std::to_string(routes) + " audited routes"};
}

Outcome criterion8() {
    EmbedConfig cfg;
    int graphs = 0;
    for (const auto& profile : corpus_names()) {
        for (const auto& spec : corpus(profile, 0)) {
            const Graph g = generate(spec);
            const int base = greedy_baseline(g).order();
            const auto a = embed_clique_immersion(g, cfg).first;
            const auto b = embed_clique_immersion(g, cfg).first;
            if (a.order() < base) return {false, spec.describe() + ": below baseline"};
            if (cert_text(a) != cert_text(b)) return {false, spec.describe() + ": certificates differ"};
            ++graphs;
        }
        const auto t1 = run_benchmark(profile, cfg, {1, false, 7});
        const auto t2 = run_benchmark(profile, cfg, {1, false, 7});
        const auto t4 = run_benchmark(profile, cfg, {4, false, 7});
        if (t1 != t2 || t1 != t4) return {false, profile + ": benchmark tables differ"};
    }
    return {true, std::to_string(graphs) + " graphs at or above baseline, certificates and tables identical"};
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

Outcome criterion9() {
    const auto table = run_benchmark("kstfree", EmbedConfig{});
    std::vector<std::vector<std::string>> rows;
    for (const auto& line : split(table, '\n'))
        if (!line.empty() && line[0] != '#') rows.push_back(split(line, '\t'));
    if (rows.size() < 2) return {false, "empty table"};
    const auto& head = rows.front();
    auto col = [&](const std::string& name) {
        return static_cast<int>(std::find(head.begin(), head.end(), name) - head.begin());
    };
    const int ratio = col("order_over_d"), ok = col("dprime_ok"), name = col("name");
    if (ratio >= static_cast<int>(head.size()) || ok >= static_cast<int>(head.size()))
        return {false, "missing order_over_d or dprime_ok column"};
    if (rows.size() - 1 != corpus("kstfree", 0).size()) return {false, "row count"};
    std::string summary;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != head.size()) return {false, "ragged row"};
        std::size_t used = 0;
        const double v = std::stod(r[ratio], &used);
        if (used != r[ratio].size() || !std::isfinite(v) || v < 0) return {false, "bad ratio '" + r[ratio] + "'"};
        if (r[ok] != "true" && r[ok] != "false") return {false, "bad dprime_ok '" + r[ok] + "'"};
        if (!summary.empty()) summary += ", ";
        summary += r[name < static_cast<int>(r.size()) ? name : 0] + "=" + r[ratio] + "/" + r[ok];
    }
    return {true, summary};
}

Outcome criterion7() {
    std::string summary;
    for (int q : {3, 5, 7, 11}) {
        const Graph g = generate(GenSpec::polarity(q));
        const std::size_t n = static_cast<std::size_t>(q * q + q + 1);
        const std::size_t m = static_cast<std::size_t>(q * (q + 1) * (q + 1) / 2);
        if (g.n() != n || g.m() != m)
            return {false, "ER_" + std::to_string(q) + " has n=" + std::to_string(g.n()) + " m=" + std::to_string(g.m())};
        if (find_kst(g, 2, 2)) return {false, "ER_" + std::to_string(q) + " contains C4"};
        if (oracle::has_kst(g, 2, 2)) return {false, "reference finds C4 in ER_" + std::to_string(q)};
        if (!summary.empty()) summary += ", ";
        summary += "ER_" + std::to_string(q) + " n=" + std::to_string(n) + " m=" + std::to_string(m);
    }
    return {true, summary + ", no K_{2,2}"};
}

}  // namespace

int main() {
    run(1, "verifier accepts route certificates and rejects mutations", 10, criterion1);
    run(2, "pipeline within exact oracle on tiny graphs", 300, criterion2);
    run(3, "adversarial neighbourhood matches brute force", 60, criterion3);
    run(4, "rho vanishes below k/5 and x*rho(x) is non-decreasing", 60, criterion4);
    run(5, "expansion certification on bridged cliques and K10", 60, criterion5);
    run(6, "ledger audits hold under seeded runs", 600, criterion6);
    run(7, "polarity graphs are K_{2,2}-free with the expected counts", 60, criterion7);
    run(8, "order at least baseline and runs are deterministic", 600, criterion8);
    run(9, "kstfree benchmark reports order/d and the density check", 300, criterion9);
    return failures == 0 ? 0 : 1;
}
