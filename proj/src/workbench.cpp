#include "immerse/workbench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "immerse/extremal.hpp"
#include "immerse/generators.hpp"

namespace immerse {

namespace {

using Clock = std::chrono::steady_clock;

std::string fixed4(double x) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << x;
    return os.str();
}

}  // namespace

const char* to_string(Mode m) { return m == Mode::Paper ? "paper" : "practical"; }

Mode parse_mode(const std::string& text) {
    if (text == "paper") return Mode::Paper;
    if (text == "practical") return Mode::Practical;
    throw std::invalid_argument("unknown mode '" + text + "' (expected paper or practical)");
}

void EmbedConfig::validate() const {
    if (!(eps1 > 0) || !(eps2 > 0)) throw std::invalid_argument("eps1 and eps2 must be positive");
    if (eta <= 0 || eta >= Rational(1, 9)) throw std::invalid_argument("eta must lie in (0, 1/9)");
    if (s < 1 || t < s) throw std::invalid_argument("need 1 <= s <= t");
    if (mode != Mode::Paper) return;
    if (eps1 > 1.0 / 400) throw std::invalid_argument("paper mode requires eps1 <= 1/400");
    if (eps2 >= 0.5) throw std::invalid_argument("paper mode requires eps2 < 1/2");
    const double lower = std::max(40 * eps1 / std::log(3.0), 5 * eps2);
    if (to_double(eta) < lower * (1 - 1e-12))
        throw std::invalid_argument("paper mode requires eta >= max(40 eps1/ln 3, 5 eps2) = " + kv(lower));
}

EmbedConfig EmbedConfig::from_epsilon(const Rational& eps) {
    if (eps <= 0 || eps >= 1) throw std::invalid_argument("epsilon must lie in (0, 1)");
    EmbedConfig c;
    c.mode = Mode::Paper;
    c.eta = eps / 10;
    c.eps1 = to_double(eps) * std::log(3.0) / 500;
    c.eps2 = to_double(eps) / 60;
    return c;
}

SparseParams EmbedConfig::sparse_params(const Graph& g) const {
    SparseParams p = mode == Mode::Paper ? SparseParams::paper(g, eps1, eps2, eta, s, t)
                                         : SparseParams::practical(g, eps1, eps2, eta, s, t);
    p.extract.seed = seed;
    const Overrides& o = overrides;
    if (o.m) p.m = *o.m;
    if (o.kappa) p.kappa = *o.kappa;
    if (o.r) p.r = *o.r;
    if (o.ball_exp) p.ball_exp = *o.ball_exp;
    if (o.path_budget) p.path_budget = *o.path_budget;
    if (o.z1_threshold) p.z1_threshold = *o.z1_threshold;
    p.separation = o.separation ? *o.separation : 3 * p.kappa + 1;
    return p;
}

DenseParams EmbedConfig::dense_params(const Graph& g) const {
    DenseParams p = mode == Mode::Paper ? DenseParams::paper(g, eps1, eps2, eta)
                                        : DenseParams::practical(g, eps1, eps2, eta);
    if (overrides.m) p.m = *overrides.m;
    return p;
}

std::vector<std::string> EmbedReport::header(const EmbedConfig& cfg) const {
    std::vector<std::string> h;
    auto add = [&](const std::string& k, const std::string& v) { h.push_back("# " + k + "=" + v); };
    add("mode", to_string(cfg.mode));
    add("eps1", kv(cfg.eps1));
    add("eps2", kv(cfg.eps2));
    add("eta", kv(cfg.eta));
    add("s", kv(cfg.s));
    add("t", kv(cfg.t));
    add("seed", kv(cfg.seed));
    add("route", route);
    add("case", paper_case);
    add("achieved", kv(achieved));
    add("baseline", kv(baseline_order));
    add("d", kv(d));
    add("target", kv(target));
    add("expander", kv(expander_n) + "v/" + kv(expander_m) + "e " + extract_status + " " + expander_verdict);
    add("gate", kv(gate_value) + (dense_gate ? ">=" : "<") + kv(gate_threshold));
    add("z1", kv(z1_size));
    add("d_prime", kv(d_prime));
    add("d_prime_ok", kv(d_prime_ok));
    add("audits_ok", kv(audits_ok));
    for (const auto& [name, order] : candidates) add("candidate." + name, kv(order));
    return h;
}

std::pair<Immersion, EmbedReport> embed_clique_immersion(const Graph& g, const EmbedConfig& cfg) {
    cfg.validate();
    const auto start = Clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };
    auto over_budget = [&] { return cfg.time_budget_secs > 0 && elapsed() > cfg.time_budget_secs; };

    EmbedReport rep;
    Immersion best = greedy_baseline(g);
    rep.baseline_order = best.order();
    rep.candidates.emplace_back("baseline", best.order());
    if (g.n() > 0) {
        rep.d = avg_degree(g);
        rep.target = to_double((1 - 9 * cfg.eta) * rep.d);
    }

    auto consider = [&](const std::string& name, const Immersion& imm) {
        const VerifyReport v = verify_immersion(g, imm);
        if (!v.ok) {
            rep.log.record("candidate_rejected", {{"route", name}, {"violation", v.violations.front().locus}});
            return;
        }
        rep.candidates.emplace_back(name, imm.order());
        if (imm.order() > best.order()) {
            best = imm;
            rep.route = name;
        }
    };

    if (g.m() > 0 && !over_budget()) {
        ExtractOptions opts;
        opts.seed = cfg.seed;
        const ExtractResult ex = extract_robust_expander(g, cfg.eps1, cfg.eps2, opts);
        const Graph& h = ex.graph;
        rep.expander_n = h.n();
        rep.expander_m = h.m();
        rep.extract_status = to_string(ex.status);
        rep.expander_verdict = to_string(ex.verdict.status);
        rep.log.record("extract", {{"n", kv(h.n())}, {"m", kv(h.m())}, {"status", rep.extract_status},
                                   {"verdict", rep.expander_verdict}, {"rounds", kv(ex.rounds)}});
        if (h.m() > 0) {
            const Rational dh = avg_degree(h);
            const double n = static_cast<double>(h.n());
            if (cfg.mode == Mode::Practical) {
                rep.gate_value = to_double(dh);
                rep.gate_threshold = std::sqrt(n);
            } else {
                // d >= log^{200 s} n, compared in log space
                rep.gate_value = std::log(to_double(dh));
                rep.gate_threshold = 200.0 * cfg.s * std::log(std::max(1.0, std::log(n)));
            }
            if (cfg.overrides.dense_gate) {
                rep.gate_value = to_double(dh);
                rep.gate_threshold = *cfg.overrides.dense_gate;
            }
            rep.dense_gate = rep.gate_value >= rep.gate_threshold;

            const SparseParams sp = cfg.sparse_params(h);
            std::vector<Vertex> z1;
            for (std::size_t v = 0; v < h.n(); ++v)
                if (Rational(static_cast<std::int64_t>(h.degree(static_cast<Vertex>(v)))) >= sp.z1_threshold)
                    z1.push_back(static_cast<Vertex>(v));
            rep.z1_size = z1.size();
            if (z1.size() < h.n()) {
                rep.d_prime = density_after_deletion(h, z1);
                rep.d_prime_ok = rep.d_prime >= dh - cfg.eta * dh;
            }

            auto run_dense = [&] {
                RunLog dlog;
                const DenseOutcome out = embed_dense(h, cfg.dense_params(h), &dlog);
                rep.log.append(dlog, "dense.");
                consider("dense", out.immersion.lifted(ex.to_parent, g.fingerprint()));
            };
            auto run_sparse = [&] {
                RunLog slog;
                const SparseOutcome out = embed_sparse(h, sp, &slog);
                if (!rep.dense_gate) rep.paper_case = std::string("sparse/") + to_string(out.fired);
                rep.audits_ok = rep.audits_ok && out.audits_ok;
                consider(std::string("sparse/") + to_string(out.won), out.immersion.lifted(ex.to_parent, g.fingerprint()));
                if (cfg.mode == Mode::Practical && !cfg.overrides.separation) {
                    // Smaller branch separations for the bounded route.
                    const Restriction gp = restrict(h, out.z1);
                    for (int sep : {2 * sp.r + 1, 1}) {
                        if (sep >= sp.separation || gp.graph.m() == 0 || over_budget()) continue;
                        SparseParams q = sp;
                        q.separation = sep;
                        RouteResult r = embed_bounded_degree(gp.graph, q, &slog);
                        rep.audits_ok = rep.audits_ok && r.audit.ok();
                        std::vector<Vertex> up;
                        for (Vertex v : gp.to_parent) up.push_back(ex.to_parent[v]);
                        consider("sparse/bounded-degree/sep" + kv(sep), r.immersion.lifted(up, g.fingerprint()));
                    }
                }
                rep.log.append(slog, "sparse.");
            };
            if (rep.dense_gate) rep.paper_case = "dense";
            if (over_budget()) {
                rep.budget_exceeded = true;
            } else {
                rep.dense_gate ? run_dense() : run_sparse();
                // The other route also runs as a candidate unless gated-only.
                if (!cfg.gated_only && !over_budget()) {
                    rep.log.record("second_route", {{"route", rep.dense_gate ? "sparse" : "dense"}});
                    rep.dense_gate ? run_sparse() : run_dense();
                }
            }
            if (over_budget()) rep.budget_exceeded = true;
        }
    }
    rep.achieved = best.order();
    rep.wall_seconds = elapsed();
    return {best, rep};
}

std::string run_benchmark(const std::string& profile, const EmbedConfig& cfg, const BenchOptions& opts) {
    const std::vector<GenSpec> specs = corpus(profile, cfg.seed);
    std::vector<std::string> rows(specs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < specs.size(); i = next++) {
            const auto start = Clock::now();
            const Graph g = generate(specs[i]);
            auto [imm, rep] = embed_clique_immersion(g, cfg);
            const double d = g.n() ? to_double(avg_degree(g)) : 0.0;
            std::string kst = "NA";
            if (cfg.s >= 2 && cfg.s <= cfg.t) kst = find_kst(g, cfg.s, cfg.t) ? "false" : "true";
            std::string oracle = "-";
            if (static_cast<int>(g.n()) <= opts.oracle_max_n) {
                const OracleResult o = oracle_max_immersion(g);
                oracle = std::to_string(o.max_order) + (o.exact ? "" : "+");
            }
            std::ostringstream row;
            row << specs[i].describe() << '\t' << g.n() << '\t' << g.m() << '\t' << fixed4(d) << '\t' << kst << '\t'
                << rep.z1_size << '\t' << rep.route << '\t' << rep.achieved << '\t'
                << (d > 0 ? fixed4(rep.achieved / d) : std::string("NA")) << '\t' << fixed4(rep.target) << '\t'
                << oracle << '\t' << fixed4(to_double(rep.d_prime)) << '\t' << kv(rep.d_prime_ok);
            if (opts.timing)
                row << '\t' << fixed4(std::chrono::duration<double>(Clock::now() - start).count());
            rows[i] = row.str();
        }
    };
    const int workers = std::max(1, opts.workers);
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    std::ostringstream out;
    out << "name\tn\tm\td\tkst_free\tz1\troute\torder\torder_over_d\ttarget\toracle\tdprime\tdprime_ok";
    if (opts.timing) out << "\tseconds";
    out << '\n';
    for (const std::string& r : rows) out << r << '\n';
    return out.str();
}

}  // namespace immerse
