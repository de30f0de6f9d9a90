#include "immerse/expansion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace immerse {

double rho(double x, const RhoParams& p) {
    if (p.k <= 0.0) return 0.0;
    if (x < p.k / 5.0) return 0.0;
    const double l = std::log(15.0 * x / p.k);
    return p.eps1 / (l * l);
}

AdversaryResult adversarial_neighborhood(const Graph& g, std::span<const Vertex> x,
                                         std::int64_t budget) {
    if (x.empty()) throw GraphError("adversarial_neighborhood needs a nonempty set");
    check_vertices(g, x);
    std::vector<char> in_x(g.n(), 0);
    for (Vertex v : x) in_x[v] = 1;

    // (cost, vertex) for every boundary vertex; cost = e(u, X).
    std::vector<std::int64_t> cost(g.n(), 0);
    std::vector<Vertex> boundary;
    for (std::size_t v = 0; v < g.n(); ++v) {
        if (!in_x[v]) continue;
        for (Vertex u : g.neighbors(static_cast<Vertex>(v))) {
            if (in_x[u]) continue;
            if (cost[u]++ == 0) boundary.push_back(u);
        }
    }
    std::sort(boundary.begin(), boundary.end(), [&](Vertex a, Vertex b) {
        return cost[a] != cost[b] ? cost[a] < cost[b] : a < b;
    });

    AdversaryResult res;
    std::int64_t spent = 0;
    std::size_t removed = 0;
    for (Vertex u : boundary) {
        if (spent + cost[u] > budget) break;
        spent += cost[u];
        ++removed;
        for (Vertex w : g.neighbors(u))
            if (in_x[w]) res.witness.emplace_back(u, w);
    }
    std::sort(res.witness.begin(), res.witness.end());
    res.min_size = boundary.size() - removed;
    return res;
}

std::int64_t adversary_budget(const Graph& g, std::size_t set_size, const RhoParams& p) {
    const double d = boost::rational_cast<double>(avg_degree(g));
    const double s = static_cast<double>(set_size);
    return static_cast<std::int64_t>(std::floor(d * rho(s, p) * s));
}

namespace {

struct SizeWindow {
    std::size_t lo = 1;
    std::size_t hi = 0;
    bool contains(std::size_t s) const { return s >= lo && s <= hi; }
};

SizeWindow qualifying_sizes(const Graph& g, double k) {
    SizeWindow w;
    w.lo = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(k / 2.0 - 1e-12)));
    w.hi = g.n() / 2;
    return w;
}

// Tests one set; fills the witness on violation.
bool violates(const Graph& g, std::span<const Vertex> x, const RhoParams& p,
              ExpansionWitness* witness) {
    const std::int64_t budget = adversary_budget(g, x.size(), p);
    AdversaryResult adv = adversarial_neighborhood(g, x, budget);
    const double need = rho(static_cast<double>(x.size()), p) * static_cast<double>(x.size());
    if (static_cast<double>(adv.min_size) >= need) return false;
    if (witness) {
        witness->x.assign(x.begin(), x.end());
        std::sort(witness->x.begin(), witness->x.end());
        witness->f = std::move(adv.witness);
    }
    return true;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

ExpansionVerdict certify_exhaustive(const Graph& g, const RhoParams& p, SizeWindow window) {
    ExpansionVerdict verdict;
    verdict.status = VerdictStatus::CertifiedExpander;
    const std::size_t n = g.n();
    std::vector<Vertex> x;
    for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
        const auto size = static_cast<std::size_t>(std::popcount(mask));
        if (!window.contains(size)) continue;
        x.clear();
        for (std::size_t v = 0; v < n; ++v)
            if (mask & (1U << v)) x.push_back(static_cast<Vertex>(v));
        ++verdict.samples_tried;
        ExpansionWitness w;
        if (violates(g, x, p, &w)) {
            verdict.status = VerdictStatus::CertifiedNonExpander;
            verdict.witness = std::move(w);
            return verdict;
        }
    }
    return verdict;
}

ExpansionVerdict certify_sampled(const Graph& g, const RhoParams& p, SizeWindow window,
                                 std::uint64_t seed, std::size_t trials) {
    ExpansionVerdict verdict;
    verdict.status = VerdictStatus::SampledPass;
    if (trials == 0 || window.lo > window.hi) return verdict;

    auto test = [&](std::span<const Vertex> x) {
        ++verdict.samples_tried;
        ExpansionWitness w;
        if (!violates(g, x, p, &w)) return false;
        verdict.status = VerdictStatus::CertifiedNonExpander;
        verdict.witness = std::move(w);
        return true;
    };

    // Balls around every vertex, at every radius inside the size window.
    for (std::size_t v = 0; v < g.n(); ++v) {
        const Vertex src[] = {static_cast<Vertex>(v)};
        const Ball b = ball(g, src, static_cast<int>(g.n()));
        std::size_t prev = 0;
        int max_depth = b.order.empty() ? 0 : b.depth[b.order.back()];
        for (int r = 0; r <= max_depth; ++r) {
            std::size_t size = 0;
            while (size < b.order.size() && b.depth[b.order[size]] <= r) ++size;
            if (size == prev) continue;
            prev = size;
            if (size > window.hi) break;
            if (size < window.lo) continue;
            if (test(std::span<const Vertex>(b.order.data(), size))) return verdict;
        }
    }

    // Random connected sets grown from a random frontier.
    std::vector<char> in_set(g.n(), 0);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(trial)));
        std::uniform_int_distribution<std::size_t> pick_size(window.lo, window.hi);
        std::uniform_int_distribution<std::size_t> pick_vertex(0, g.n() - 1);
        const std::size_t target = pick_size(rng);
        std::vector<Vertex> set{static_cast<Vertex>(pick_vertex(rng))};
        std::fill(in_set.begin(), in_set.end(), 0);
        in_set[set[0]] = 1;
        std::vector<Vertex> frontier;
        auto push_frontier = [&](Vertex v) {
            for (Vertex u : g.neighbors(v))
                if (!in_set[u]) frontier.push_back(u);
        };
        push_frontier(set[0]);
        while (set.size() < target && !frontier.empty()) {
            std::uniform_int_distribution<std::size_t> pick(0, frontier.size() - 1);
            const std::size_t idx = pick(rng);
            const Vertex u = frontier[idx];
            frontier[idx] = frontier.back();
            frontier.pop_back();
            if (in_set[u]) continue;
            in_set[u] = 1;
            set.push_back(u);
            push_frontier(u);
        }
        if (!window.contains(set.size())) continue;
        if (test(set)) return verdict;
    }
    return verdict;
}

}  // namespace

ExpansionVerdict certify_robust_expansion(const Graph& g, double eps1, double eps2,
                                          const CertifyMode& mode) {
    if (mode.kind == CertifyMode::Kind::Exhaustive && g.n() > kExhaustiveLimit)
        throw std::invalid_argument("exhaustive certification needs n <= 20, got n=" +
                                    std::to_string(g.n()));
    if (g.n() == 0) {
        ExpansionVerdict v;
        v.status = mode.kind == CertifyMode::Kind::Exhaustive ? VerdictStatus::CertifiedExpander
                                                              : VerdictStatus::SampledPass;
        return v;
    }
    const double d = boost::rational_cast<double>(avg_degree(g));
    const RhoParams p{eps1, eps2 * d};
    const SizeWindow window = qualifying_sizes(g, p.k);
    if (mode.kind == CertifyMode::Kind::Exhaustive) return certify_exhaustive(g, p, window);
    return certify_sampled(g, p, window, mode.seed, mode.trials);
}

bool witness_violates(const Graph& g, double eps1, double eps2, const ExpansionWitness& w) {
    if (w.x.empty() || g.n() == 0) return false;
    for (Vertex v : w.x)
        if (!g.contains(v)) return false;
    const std::vector<Vertex> x = normalized(w.x);
    const double d = boost::rational_cast<double>(avg_degree(g));
    const RhoParams p{eps1, eps2 * d};
    if (!qualifying_sizes(g, p.k).contains(x.size())) return false;
    const std::int64_t budget = adversary_budget(g, x.size(), p);
    if (static_cast<std::int64_t>(w.f.size()) > budget) return false;
    AvoidSet avoid(g);
    for (const Edge& e : w.f)
        if (!avoid.block_edge(g, e.u, e.v)) return false;
    const auto nbhd = external_neighborhood(g, x, avoid);
    return static_cast<double>(nbhd.size()) <
           rho(static_cast<double>(x.size()), p) * static_cast<double>(x.size());
}

double eta_from_eps1(double eps1, double c) { return c * eps1 / std::log(3.0); }

namespace {

// Composes a restriction of a restriction into a map onto the original ids.
std::vector<Vertex> compose(const std::vector<Vertex>& outer, const std::vector<Vertex>& inner) {
    std::vector<Vertex> out;
    out.reserve(inner.size());
    for (Vertex v : inner) out.push_back(outer[v]);
    return out;
}

// Deletes vertices with degree below d/2 until none remain.
Restriction peel_low_degree(const Graph& g) {
    Restriction cur = induced(g, [&] {
        std::vector<Vertex> all(g.n());
        for (std::size_t v = 0; v < g.n(); ++v) all[v] = static_cast<Vertex>(v);
        return all;
    }());
    for (;;) {
        const Graph& h = cur.graph;
        if (h.n() == 0) return cur;
        std::vector<Vertex> drop;
        // deg(v) < d/2 = m/n  <=>  deg(v) * n < m
        for (std::size_t v = 0; v < h.n(); ++v)
            if (h.degree(static_cast<Vertex>(v)) * h.n() < h.m()) drop.push_back(static_cast<Vertex>(v));
        if (drop.empty()) return cur;
        Restriction next = restrict(h, drop);
        next.to_parent = compose(cur.to_parent, next.to_parent);
        cur = std::move(next);
    }
}

}  // namespace

ExtractResult extract_robust_expander(const Graph& g, double eps1, double eps2, int max_rounds) {
    ExtractOptions opts;
    opts.max_rounds = max_rounds;
    return extract_robust_expander(g, eps1, eps2, opts);
}

ExtractResult extract_robust_expander(const Graph& g, double eps1, double eps2,
                                      const ExtractOptions& options) {
    if (g.n() == 0) throw GraphError("cannot extract an expander from the empty graph");
    std::vector<Vertex> all(g.n());
    for (std::size_t v = 0; v < g.n(); ++v) all[v] = static_cast<Vertex>(v);
    Restriction cur = induced(g, all);

    auto degenerate = [&](const Restriction& from, int rounds) {
        ExtractResult res;
        const Vertex keep[] = {0};
        Restriction single = induced(from.graph, keep);
        res.graph = std::move(single.graph);
        res.to_parent = {from.to_parent.at(0)};
        res.verdict = certify_robust_expansion(res.graph, eps1, eps2, CertifyMode::exhaustive());
        res.status = ExtractStatus::Degenerate;
        res.rounds = rounds;
        return res;
    };

    ExpansionVerdict last;
    for (int round = 0; round < options.max_rounds; ++round) {
        if (cur.graph.m() == 0) return degenerate(cur, round);
        Restriction peeled = peel_low_degree(cur.graph);
        peeled.to_parent = compose(cur.to_parent, peeled.to_parent);
        cur = std::move(peeled);

        const Graph& h = cur.graph;
        const CertifyMode mode = h.n() <= kExhaustiveLimit
                                     ? CertifyMode::exhaustive()
                                     : CertifyMode::sampled(options.seed + static_cast<std::uint64_t>(round),
                                                            options.trials);
        last = certify_robust_expansion(h, eps1, eps2, mode);
        if (last.status != VerdictStatus::CertifiedNonExpander) {
            ExtractResult res;
            res.graph = h;
            res.to_parent = cur.to_parent;
            res.verdict = std::move(last);
            res.status = ExtractStatus::Complete;
            res.rounds = round + 1;
            return res;
        }

        const ExpansionWitness& w = *last.witness;
        AvoidSet cut(h);
        for (const Edge& e : w.f) cut.block_edge(h, e.u, e.v);
        std::vector<Vertex> side = w.x;
        for (Vertex u : external_neighborhood(h, w.x, cut)) side.push_back(u);
        side = normalized(std::move(side));
        std::vector<char> in_side(h.n(), 0);
        for (Vertex v : side) in_side[v] = 1;
        if (side.size() == h.n()) {
            side = w.x;
            std::fill(in_side.begin(), in_side.end(), 0);
            for (Vertex v : side) in_side[v] = 1;
        }
        std::vector<Vertex> rest;
        for (std::size_t v = 0; v < h.n(); ++v)
            if (!in_side[v]) rest.push_back(static_cast<Vertex>(v));

        Restriction a = induced(h, side);
        Restriction b = induced(h, rest);
        const bool take_b = b.graph.n() > 0 && avg_degree(b.graph) > avg_degree(a.graph);
        Restriction& chosen = take_b ? b : a;
        chosen.to_parent = compose(cur.to_parent, chosen.to_parent);
        cur = std::move(chosen);
    }

    ExtractResult res;
    res.graph = cur.graph;
    res.to_parent = cur.to_parent;
    res.verdict = std::move(last);
    res.status = ExtractStatus::Incomplete;
    res.rounds = options.max_rounds;
    return res;
}

std::optional<PathResult> find_avoiding_path(const Graph& g, std::span<const Vertex> x1,
                                             std::span<const Vertex> x2, const AvoidSet& avoid,
                                             int max_len) {
    if (x1.empty() || x2.empty()) throw GraphError("find_avoiding_path needs nonempty sets");
    if (max_len < 0) throw GraphError("find_avoiding_path: negative length bound");
    check_vertices(g, x1);
    check_vertices(g, x2);
    std::vector<char> in1(g.n(), 0), in2(g.n(), 0);
    for (Vertex v : x1) {
        if (avoid.vertex_blocked(v)) throw GraphError("X1 meets the forbidden vertices");
        in1[v] = 1;
    }
    for (Vertex v : x2) {
        if (avoid.vertex_blocked(v)) throw GraphError("X2 meets the forbidden vertices");
        in2[v] = 1;
    }

    std::vector<Vertex> sources;
    for (std::size_t v = 0; v < g.n(); ++v)
        if (in1[v] && !avoid.endpoint_blocked(static_cast<Vertex>(v))) sources.push_back(static_cast<Vertex>(v));
    for (Vertex v : sources)
        if (in2[v]) return PathResult{{v}, 0};

    std::vector<int> depth(g.n(), -1);
    std::vector<Vertex> parent(g.n(), kNoVertex);
    std::vector<Vertex> queue = sources;
    for (Vertex v : sources) depth[v] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Vertex v = queue[head];
        if (depth[v] >= max_len) continue;
        auto nbrs = g.neighbors(v);
        auto ids = g.incident(v);
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            const Vertex u = nbrs[k];
            if (depth[u] >= 0 || in1[u] || avoid.vertex_blocked(u) || avoid.edge_blocked(ids[k])) continue;
            if (in2[u]) {
                if (avoid.endpoint_blocked(u)) continue;
                PathResult res;
                res.path.push_back(u);
                for (Vertex cur = v; cur != kNoVertex; cur = parent[cur]) res.path.push_back(cur);
                std::reverse(res.path.begin(), res.path.end());
                res.length = static_cast<int>(res.path.size()) - 1;
                return res;
            }
            depth[u] = depth[v] + 1;
            parent[u] = v;
            queue.push_back(u);
        }
    }
    return std::nullopt;
}

int default_path_budget(std::size_t n, double d, double eps1, double eps2) {
    if (d <= 0.0 || eps1 <= 0.0 || eps2 <= 0.0) return static_cast<int>(n);
    const double arg = 15.0 * static_cast<double>(n) / (eps2 * d);
    if (arg <= 1.0) return 1;
    const double l = std::log(arg);
    const double m = std::ceil(2.0 / eps1 * l * l * l);
    return m > 1e9 ? 1'000'000'000 : std::max(1, static_cast<int>(m));
}

std::vector<std::size_t> measure_ball_growth(const Graph& g, std::span<const Vertex> x,
                                             std::span<const Vertex> y, int max_radius) {
    if (x.empty()) throw GraphError("measure_ball_growth needs a nonempty set");
    check_vertices(g, y);
    AvoidSet avoid(g);
    avoid.block_vertices(y);
    return ball(g, x, max_radius, avoid).profile(max_radius);
}

const char* to_string(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::CertifiedExpander: return "CertifiedExpander";
        case VerdictStatus::CertifiedNonExpander: return "CertifiedNonExpander";
        case VerdictStatus::SampledPass: return "SampledPass";
    }
    return "?";
}

const char* to_string(ExtractStatus s) {
    switch (s) {
        case ExtractStatus::Complete: return "Complete";
        case ExtractStatus::Incomplete: return "Incomplete";
        case ExtractStatus::Degenerate: return "Degenerate";
    }
    return "?";
}

void write_witness(std::ostream& out, const ExpansionWitness& w) {
    out << "X:";
    for (Vertex v : w.x) out << ' ' << v;
    out << "\nF:";
    for (const Edge& e : w.f) out << ' ' << e.u << '-' << e.v;
    out << '\n';
}

ExpansionWitness read_witness(std::istream& in) {
    ExpansionWitness w;
    bool have_x = false, have_f = false;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "X:") {
            have_x = true;
            long long v;
            while (ls >> v) w.x.push_back(static_cast<Vertex>(v));
            if (!ls.eof()) throw GraphError("witness: bad X line");
        } else if (tag == "F:") {
            have_f = true;
            std::string tok;
            while (ls >> tok) {
                const auto dash = tok.find('-');
                if (dash == std::string::npos) throw GraphError("witness: bad edge token '" + tok + "'");
                w.f.emplace_back(static_cast<Vertex>(std::stol(tok.substr(0, dash))),
                                 static_cast<Vertex>(std::stol(tok.substr(dash + 1))));
            }
        } else {
            throw GraphError("witness: unexpected line '" + line + "'");
        }
    }
    if (!have_x || !have_f) throw GraphError("witness: needs both X: and F: lines");
    return w;
}

}  // namespace immerse
