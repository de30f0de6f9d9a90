#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "immerse/expansion.hpp"
#include "immerse/extremal.hpp"
#include "immerse/generators.hpp"
#include "immerse/graph.hpp"
#include "immerse/immersion.hpp"
#include "immerse/workbench.hpp"

using namespace immerse;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kInvalidInput = 2, kBudgetExceeded = 3 };

struct Common {
    std::string input, output;
    std::uint64_t seed = 0;
    std::string mode = "practical";
    std::string eps1 = "1/400", eps2 = "1/100", eta = "1/10";
    int s = 2, t = 2;
    double time_budget = 0;
    int workers = 1;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("-i,--input", c.input, "input edge-list file");
    app->add_option("-o,--output", c.output, "output file (stdout when omitted)");
    app->add_option("--seed", c.seed, "random seed");
    app->add_option("--mode", c.mode, "paper or practical")->check(CLI::IsMember({"paper", "practical"}));
    app->add_option("--eps1", c.eps1, "expansion constant (decimal or p/q)");
    app->add_option("--eps2", c.eps2, "expander scale constant (decimal or p/q)");
    app->add_option("--eta", c.eta, "slack (decimal or p/q)");
    app->add_option("--s", c.s, "K_{s,t} parameter s");
    app->add_option("--t", c.t, "K_{s,t} parameter t");
    app->add_option("--time-budget-secs", c.time_budget, "0 means unlimited");
    app->add_option("--workers", c.workers, "benchmark worker threads");
}

EmbedConfig make_config(const Common& c) {
    EmbedConfig cfg;
    cfg.mode = parse_mode(c.mode);
    cfg.eps1 = to_double(parse_rational(c.eps1));
    cfg.eps2 = to_double(parse_rational(c.eps2));
    cfg.eta = parse_rational(c.eta);
    cfg.s = c.s;
    cfg.t = c.t;
    cfg.seed = c.seed;
    cfg.time_budget_secs = c.time_budget;
    return cfg;
}

Graph load(const Common& c) {
    if (c.input.empty() || c.input == "-") return read_edge_list(std::cin);
    return read_edge_list_file(c.input);
}

template <typename F>
void emit(const std::string& path, F&& body) {
    if (path.empty() || path == "-") {
        body(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw GraphError("cannot write " + path);
    body(out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clique immersions via robust sublinear expanders"};
    app.require_subcommand(1);
    Common c;

    auto* gen = app.add_subcommand("gen", "generate a graph as an edge list");
    std::string spec;
    gen->add_option("spec", spec, "e.g. gnp:50:0.1, polarity:7, dumbbell:15:4")->required();
    add_common(gen, c);

    auto* embed = app.add_subcommand("embed", "find a clique immersion and write its certificate");
    std::string report_path;
    Overrides ov;
    std::string z1_text;
    add_common(embed, c);
    embed->add_option("--report", report_path, "write the report and diagnostics here");
    embed->add_option("--m", ov.m, "path budget override");
    embed->add_option("--kappa", ov.kappa, "kappa override");
    embed->add_option("--r", ov.r, "inner radius override");
    embed->add_option("--ball-exp", ov.ball_exp, "kernel radius override");
    embed->add_option("--path-budget", ov.path_budget, "branch-to-branch budget override");
    embed->add_option("--separation", ov.separation, "branch separation override");
    embed->add_option("--z1-threshold", z1_text, "high-degree threshold override");
    bool gated_only = false;
    embed->add_flag("--gated-only", gated_only, "run only the route selected by the density gate");
    embed->add_option("--dense-gate", ov.dense_gate, "average degree at which the dense route is used");

    auto* verify = app.add_subcommand("verify", "check a certificate against a graph");
    std::string cert_path;
    bool strong = false;
    add_common(verify, c);
    verify->add_option("-c,--certificate", cert_path, "certificate file")->required();
    verify->add_flag("--strong", strong, "also require interiors to avoid branch vertices");

    auto* oracle = app.add_subcommand("oracle", "exact maximum clique immersion by backtracking");
    int cap = -1;
    std::uint64_t nodes = 50'000'000;
    add_common(oracle, c);
    oracle->add_option("--cap", cap, "largest order to try");
    oracle->add_option("--node-budget", nodes, "search node budget");

    auto* kst = app.add_subcommand("kst-check", "search for K_{s,t}");
    add_common(kst, c);

    auto* extract = app.add_subcommand("expander-extract", "extract a robust expander subgraph");
    add_common(extract, c);

    auto* certify = app.add_subcommand("expander-certify", "certify robust expansion");
    std::string replay_path, witness_out;
    std::size_t trials = 0;
    add_common(certify, c);
    certify->add_option("--replay", replay_path, "check that a witness file violates expansion");
    certify->add_option("--witness-out", witness_out, "write the violating witness here");
    certify->add_option("--trials", trials, "sampled certification with this many trials");

    auto* bench = app.add_subcommand("bench", "benchmark a named corpus");
    std::string profile = "tiny";
    bool timing = false;
    add_common(bench, c);
    bench->add_option("--profile", profile, "tiny, kstfree, dense or sparse");
    bench->add_flag("--timing", timing, "append a runtime column");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalidInput;
    }

    try {
        if (gen->parsed()) {
            const GenSpec gs = parse_gen_spec(spec, c.seed);
            const Graph g = generate(gs);
            emit(c.output, [&](std::ostream& out) { write_edge_list(out, g, gs.describe()); });
            return kOk;
        }
        if (embed->parsed()) {
            EmbedConfig cfg = make_config(c);
            cfg.overrides = ov;
            cfg.gated_only = gated_only;
            if (!z1_text.empty()) cfg.overrides.z1_threshold = parse_rational(z1_text);
            const Graph g = load(c);
            auto [imm, rep] = embed_clique_immersion(g, cfg);
            rep.certificate_path = c.output.empty() ? "-" : c.output;
            const VerifyReport v = verify_immersion(g, imm);
            emit(c.output, [&](std::ostream& out) { write_certificate(out, imm); });
            if (!report_path.empty())
                emit(report_path, [&](std::ostream& out) {
                    for (const auto& line : rep.header(cfg)) out << line << '\n';
                    rep.log.write(out);
                });
            std::cerr << "order " << rep.achieved << " route " << rep.route << " case " << rep.paper_case
                      << " target " << rep.target << '\n';
            if (!v.ok) {
                std::cerr << "verification failed: " << v.violations.front().locus << '\n';
                return kVerifyFailed;
            }
            return rep.budget_exceeded ? kBudgetExceeded : kOk;
        }
        if (verify->parsed()) {
            const Graph g = load(c);
            std::ifstream in(cert_path);
            if (!in) throw GraphError("cannot open " + cert_path);
            const Immersion imm = read_certificate(in);
            if (imm.host_id != 0 && imm.host_id != g.fingerprint()) {
                std::cout << "FAIL host fingerprint mismatch\n";
                return kVerifyFailed;
            }
            const VerifyReport v = verify_immersion(g, imm, strong);
            if (v.ok) {
                std::cout << "OK order " << imm.order() << '\n';
                return kOk;
            }
            std::cout << "FAIL " << to_string(v.violations.front().kind) << ": " << v.violations.front().locus
                      << '\n';
            return kVerifyFailed;
        }
        if (oracle->parsed()) {
            const Graph g = load(c);
            const OracleResult r = oracle_max_immersion(g, cap, nodes);
            if (!c.output.empty()) emit(c.output, [&](std::ostream& out) { write_certificate(out, r.certificate); });
            std::cout << "order " << r.max_order << (r.exact ? " exact" : " lower-bound") << " nodes " << r.nodes
                      << '\n';
            return r.exact ? kOk : kBudgetExceeded;
        }
        if (kst->parsed()) {
            const Graph g = load(c);
            const auto w = find_kst(g, c.s, c.t);
            emit(c.output, [&](std::ostream& out) {
                if (!w) {
                    out << "KST-FREE " << c.s << ' ' << c.t << '\n';
                    return;
                }
                out << "K " << c.s << ' ' << c.t << " left";
                for (Vertex v : w->left) out << ' ' << v;
                out << " right";
                for (Vertex v : w->right) out << ' ' << v;
                out << '\n';
            });
            return kOk;
        }
        if (extract->parsed()) {
            const EmbedConfig cfg = make_config(c);
            const Graph g = load(c);
            ExtractOptions opts;
            opts.seed = cfg.seed;
            const ExtractResult ex = extract_robust_expander(g, cfg.eps1, cfg.eps2, opts);
            std::ostringstream map;
            map << "expander of " << g.n() << " vertices, status " << to_string(ex.status) << ", verdict "
                << to_string(ex.verdict.status) << "\n# map";
            for (Vertex v : ex.to_parent) map << ' ' << v;
            emit(c.output, [&](std::ostream& out) { write_edge_list(out, ex.graph, map.str()); });
            std::cerr << "n " << ex.graph.n() << " m " << ex.graph.m() << " status " << to_string(ex.status) << '\n';
            return kOk;
        }
        if (certify->parsed()) {
            const EmbedConfig cfg = make_config(c);
            const Graph g = load(c);
            if (!replay_path.empty()) {
                std::ifstream in(replay_path);
                if (!in) throw GraphError("cannot open " + replay_path);
                const ExpansionWitness w = read_witness(in);
                const bool bad = witness_violates(g, cfg.eps1, cfg.eps2, w);
                std::cout << (bad ? "witness violates expansion" : "witness does not violate expansion") << '\n';
                return bad ? kOk : kVerifyFailed;
            }
            const CertifyMode mode =
                trials > 0 ? CertifyMode::sampled(cfg.seed, trials) : CertifyMode::exhaustive();
            const ExpansionVerdict v = certify_robust_expansion(g, cfg.eps1, cfg.eps2, mode);
            std::cout << to_string(v.status) << '\n';
            if (v.witness) {
                if (!witness_out.empty()) emit(witness_out, [&](std::ostream& out) { write_witness(out, *v.witness); });
                else write_witness(std::cout, *v.witness);
            }
            return kOk;
        }
        if (bench->parsed()) {
            const EmbedConfig cfg = make_config(c);
            BenchOptions opts;
            opts.workers = c.workers;
            opts.timing = timing;
            const std::string table = run_benchmark(profile, cfg, opts);
            emit(c.output, [&](std::ostream& out) { out << table; });
            return kOk;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidInput;
    }
    return kInvalidInput;
}
