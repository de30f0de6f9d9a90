#include "immerse/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace immerse {

namespace {

std::vector<char> mask_of(std::size_t size, std::span<const Vertex> vs) {
    std::vector<char> m(size, 0);
    for (Vertex v : vs) m[v] = 1;
    return m;
}

std::vector<Vertex> members(const std::vector<char>& mask) {
    std::vector<Vertex> out;
    for (std::size_t v = 0; v < mask.size(); ++v)
        if (mask[v]) out.push_back(static_cast<Vertex>(v));
    return out;
}

std::vector<EdgeId> path_edges(const Graph& g, const Path& p) {
    std::vector<EdgeId> out;
    for (std::size_t s = 0; s + 1 < p.size(); ++s) {
        auto id = g.edge_id(p[s], p[s + 1]);
        if (!id) throw std::logic_error("path step " + std::to_string(p[s]) + "-" + std::to_string(p[s + 1]) +
                                        " is not an edge");
        out.push_back(*id);
    }
    return out;
}

// Edge ids of G[mask].
std::vector<EdgeId> induced_edges(const Graph& g, const std::vector<char>& mask) {
    std::vector<EdgeId> out;
    for (std::size_t e = 0; e < g.m(); ++e)
        if (mask[g.edge(static_cast<EdgeId>(e)).u] && mask[g.edge(static_cast<EdgeId>(e)).v])
            out.push_back(static_cast<EdgeId>(e));
    return out;
}

// BFS distance from sources to target inside G[zone] minus removed edges.
std::optional<int> zone_distance(const Graph& g, std::span<const Vertex> sources, const std::vector<char>& zone,
                                 const std::vector<char>& removed, Vertex target) {
    std::vector<char> tmask(g.n(), 0);
    tmask[target] = 1;
    auto p = consecutive_extension(g, sources, zone, removed, tmask);
    if (!p) return std::nullopt;
    return static_cast<int>(p->size()) - 1;
}

// Checks that the maximal prefix of `path` (from path[start]) inside the zone
// is a shortest path from `sources` there. Returns the prefix end index.
std::optional<std::string> check_prefix(const Graph& g, const Path& path, std::size_t start,
                                        std::span<const Vertex> sources, const std::vector<char>& zone,
                                        const std::vector<char>& removed, std::size_t* end_out,
                                        const std::string& tag) {
    if (!zone[path[start]]) return tag + ": path leaves the zone at its first vertex";
    std::size_t k = start;
    while (k + 1 < path.size() && zone[path[k + 1]]) ++k;
    if (end_out) *end_out = k;
    auto dist = zone_distance(g, sources, zone, removed, path[k]);
    const int seg = static_cast<int>(k - start);
    if (!dist || *dist != seg)
        return tag + ": zone prefix of length " + std::to_string(seg) + " but residual distance " +
               (dist ? std::to_string(*dist) : std::string("inf"));
    return std::nullopt;
}

Path reversed(Path p) {
    std::reverse(p.begin(), p.end());
    return p;
}

int ceil_pos(double x, int cap) {
    if (!(x > 1)) return 1;
    if (x >= cap) return cap;
    return static_cast<int>(std::ceil(x));
}

// Fresh-ledger replay: every commit is re-checked against the state before it.
template <typename Checker>
AuditReport replay(const Graph& g, const PathLedger& ledger, const Checker& check) {
    AuditReport rep;
    PathLedger fresh(g, ledger.branches());
    for (const auto& [i, j] : ledger.history()) {
        const Path p = ledger.oriented(i, j);
        std::vector<EdgeId> ids;
        try {
            ids = path_edges(g, p);
        } catch (const std::logic_error& e) {
            rep.edge_disjoint = false;
            rep.failures.push_back(e.what());
            continue;
        }
        std::vector<EdgeId> sorted = ids;
        std::sort(sorted.begin(), sorted.end());
        bool reuse = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
        for (EdgeId e : ids) reuse = reuse || fresh.edge_used(e);
        if (reuse) {
            rep.edge_disjoint = false;
            rep.failures.push_back("pair {" + std::to_string(i) + "," + std::to_string(j) + "} reuses an edge");
            continue;
        }
        for (const auto& [kind, msg] : check(fresh, i, j, p)) {
            (kind == 'c' ? rep.consecutive : rep.avoidance) = false;
            rep.failures.push_back(msg);
        }
        for (EdgeId e : ledger.snapshot(i, j).forbidden_edges)
            if (std::find(ids.begin(), ids.end(), e) != ids.end()) {
                rep.avoidance = false;
                rep.failures.push_back("pair path uses a snapshotted inner-ball edge");
            }
        auto fv = ledger.snapshot(i, j).forbidden_vertices;
        for (Vertex v : p)
            if (std::binary_search(fv.begin(), fv.end(), v)) {
                rep.avoidance = false;
                rep.failures.push_back("pair path meets a snapshotted inner-ball vertex " + std::to_string(v));
            }
        fresh.commit(i, j, p, ledger.snapshot(i, j));
    }
    return rep;
}

using Findings = std::vector<std::pair<char, std::string>>;  // 'c' consecutive, 'a' avoidance

}  // namespace

// ---------------------------------------------------------------- params

SparseParams SparseParams::paper(const Graph& g, double eps1, double eps2, const Rational& eta, int s, int t) {
    SparseParams p;
    p.eps1 = eps1;
    p.eps2 = eps2;
    p.eta = eta;
    p.s = s;
    p.t = t;
    const int n = static_cast<int>(g.n());
    const double ln_n = std::log(std::max(3, n));
    const double lnln_n = std::max(1.0, std::log(ln_n));
    const Rational d = g.n() == 0 ? Rational(0) : avg_degree(g);
    const double dd = to_double(d);
    const int cap = std::max(1, n);
    p.kappa = ceil_pos(ln_n / (800.0 * s * lnln_n), cap);
    p.r = ceil_pos(std::pow(lnln_n, 5), cap);
    p.ball_exp = ceil_pos(std::pow(std::log(std::max(dd, 1.0)), 4), cap);
    p.m = std::min(cap, default_path_budget(g.n(), dd, eps1, eps2));
    const double z1 = dd * std::pow(static_cast<double>(p.m), 3);
    p.z1_threshold = z1 > n ? Rational(n + 1) : d * Rational(p.m) * Rational(p.m) * Rational(p.m);
    p.path_budget = ceil_pos(2 * std::pow(ln_n, 4), cap);
    p.separation = 3 * p.kappa + 1;
    p.target = static_cast<int>(std::max<std::int64_t>(1, floor_r((1 - 4 * eta) * d)));
    p.subexpander_count = p.target;
    p.subexpander_density = 1 - 3 * eta;
    return p;
}

SparseParams SparseParams::practical(const Graph& g, double eps1, double eps2, const Rational& eta, int s,
                                     int t) {
    SparseParams p;
    p.eps1 = eps1;
    p.eps2 = eps2;
    p.eta = eta;
    p.s = s;
    p.t = t;
    const int n = static_cast<int>(g.n());
    const Rational d = g.n() == 0 ? Rational(0) : avg_degree(g);
    p.kappa = std::max(1, static_cast<int>(std::ceil(std::log(std::max(2, n)))) / 3);
    p.r = 1;
    p.ball_exp = 1;
    p.z1_threshold = 4 * d;
    p.m = std::max(1, n);
    p.path_budget = std::max(1, n);
    p.separation = 3 * p.kappa + 1;
    p.target = static_cast<int>(floor_r(d)) + 1;
    p.subexpander_count = p.target;
    p.subexpander_density = 1 - 3 * eta;
    return p;
}

// ---------------------------------------------------------------- ledger

PathLedger::PathLedger(const Graph& g, std::vector<Vertex> branches)
    : g_(&g), branches_(std::move(branches)), per_branch_(branches_.size()), used_edges_(g.m(), 0),
      used_vertices_(g.n(), 0) {
    check_vertices(g, branches_);
}

bool PathLedger::connected(int i, int j) const {
    return paths_.contains({std::min(i, j), std::max(i, j)});
}

Path PathLedger::oriented(int i, int j) const {
    if (i < j) return paths_.at({i, j});
    return reversed(paths_.at({j, i}));
}

const LedgerSnapshot& PathLedger::snapshot(int i, int j) const {
    return snapshots_.at({std::min(i, j), std::max(i, j)});
}

std::vector<char> PathLedger::edges_of_branch(int i) const {
    std::vector<char> mask(g_->m(), 0);
    for (const PairKey& key : per_branch_.at(i))
        for (EdgeId e : path_edges(*g_, paths_.at(key))) mask[e] = 1;
    return mask;
}

void PathLedger::commit(int i, int j, Path path, LedgerSnapshot snap) {
    if (i == j || i < 0 || j < 0 || i >= size() || j >= size()) throw std::logic_error("commit: bad pair");
    if (i > j) {
        std::swap(i, j);
        std::reverse(path.begin(), path.end());
    }
    if (connected(i, j)) throw std::logic_error("commit: pair already connected");
    if (path.empty() || path.front() != branches_[i] || path.back() != branches_[j])
        throw std::logic_error("commit: wrong endpoints");
    auto ids = path_edges(*g_, path);
    std::vector<EdgeId> sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::logic_error("commit: path repeats an edge");
    for (EdgeId e : ids)
        if (used_edges_[e]) throw std::logic_error("commit: edge already used");
    for (EdgeId e : ids) used_edges_[e] = 1;
    for (Vertex v : path) used_vertices_[v] = 1;
    std::sort(snap.forbidden_edges.begin(), snap.forbidden_edges.end());
    std::sort(snap.forbidden_vertices.begin(), snap.forbidden_vertices.end());
    paths_[{i, j}] = std::move(path);
    snapshots_[{i, j}] = std::move(snap);
    history_.emplace_back(i, j);
    per_branch_[i].emplace_back(i, j);
    per_branch_[j].emplace_back(i, j);
}

Immersion PathLedger::immersion(const std::vector<int>& subset) const {
    Immersion imm;
    imm.host_id = g_->fingerprint();
    for (int b : subset) imm.branch.push_back(branches_.at(b));
    for (std::size_t a = 0; a < subset.size(); ++a)
        for (std::size_t b = a + 1; b < subset.size(); ++b)
            imm.paths[{static_cast<int>(a), static_cast<int>(b)}] = oriented(subset[a], subset[b]);
    return imm;
}

std::vector<int> PathLedger::best_subset() const {
    if (branches_.empty()) return {};
    std::vector<Edge> link;
    for (const auto& [key, p] : paths_) link.emplace_back(key.first, key.second);
    const Graph pair_graph(branches_.size(), link);
    auto clique = max_clique(pair_graph);
    return std::vector<int>(clique.begin(), clique.end());
}

// ---------------------------------------------------------------- primitives

std::optional<Path> consecutive_extension(const Graph& g, std::span<const Vertex> sources,
                                          const std::vector<char>& zone, const std::vector<char>& removed,
                                          const std::vector<char>& target) {
    std::vector<Vertex> parent(g.n(), kNoVertex);
    std::vector<char> seen(g.n(), 0);
    std::vector<Vertex> queue;
    for (Vertex s : normalized(std::vector<Vertex>(sources.begin(), sources.end()))) {
        if (!zone[s]) continue;
        if (target[s]) return Path{s};
        seen[s] = 1;
        queue.push_back(s);
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Vertex v = queue[head];
        auto nbrs = g.neighbors(v);
        auto ids = g.incident(v);
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            const Vertex u = nbrs[k];
            if (seen[u] || !zone[u] || removed[ids[k]]) continue;
            seen[u] = 1;
            parent[u] = v;
            if (target[u]) {
                Path p{u};
                for (Vertex c = v; c != kNoVertex; c = parent[c]) p.push_back(c);
                std::reverse(p.begin(), p.end());
                return p;
            }
            queue.push_back(u);
        }
    }
    return std::nullopt;
}

std::optional<Path> extend_ledger_consecutive(const Graph& g, const PathLedger& ledger, int branch,
                                              std::span<const Vertex> zone, std::span<const Vertex> target) {
    check_vertices(g, zone);
    check_vertices(g, target);
    const Vertex v = ledger.branches().at(branch);
    const auto zmask = mask_of(g.n(), zone);
    if (!zmask[v]) throw GraphError("extend_ledger_consecutive: branch vertex outside the zone");
    return consecutive_extension(g, std::span<const Vertex>(&v, 1), zmask, ledger.edges_of_branch(branch),
                                 mask_of(g.n(), target));
}

std::vector<Vertex> select_far_apart_branch_vertices(const Graph& g, const Rational& min_degree, int separation,
                                                     int count) {
    if (separation < 0) throw GraphError("separation must be non-negative");
    std::vector<Vertex> chosen;
    if (count <= 0) return chosen;
    std::vector<char> near(g.n(), 0);
    for (std::size_t v = 0; v < g.n() && static_cast<int>(chosen.size()) < count; ++v) {
        const Vertex x = static_cast<Vertex>(v);
        if (near[x] || Rational(static_cast<std::int64_t>(g.degree(x))) < min_degree) continue;
        chosen.push_back(x);
        if (separation >= 1) {
            const Ball b = ball(g, std::span<const Vertex>(&x, 1), separation - 1);
            for (Vertex u : b.order) near[u] = 1;
        }
    }
    return chosen;
}

// ---------------------------------------------------------------- high degree

RouteResult embed_high_degree(const Graph& g, std::span<const Vertex> z1, const SparseParams& p, RunLog* log) {
    RouteResult res;
    res.route = "high-degree";
    check_vertices(g, z1);
    std::vector<Vertex> cand = normalized(std::vector<Vertex>(z1.begin(), z1.end()));
    std::stable_sort(cand.begin(), cand.end(), [&](Vertex a, Vertex b) { return g.degree(a) > g.degree(b); });
    const std::size_t count = p.target > 0 ? std::min<std::size_t>(cand.size(), p.target) : cand.size();
    cand.resize(count);
    res.ledger = PathLedger(g, cand);
    PathLedger& ledger = res.ledger;
    const int t = ledger.size();
    const auto is_branch = mask_of(g.n(), cand);

    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j)
            if (g.has_edge(cand[i], cand[j])) ledger.commit(i, j, {cand[i], cand[j]});

    auto try_pair = [&](int i, int j) -> bool {
        auto free_nbrs = [&](int b) {
            std::vector<Vertex> out;
            auto nbrs = g.neighbors(cand[b]);
            auto ids = g.incident(cand[b]);
            for (std::size_t k = 0; k < nbrs.size(); ++k)
                if (!is_branch[nbrs[k]] && !ledger.edge_used(ids[k])) out.push_back(nbrs[k]);
            return out;
        };
        auto ni = free_nbrs(i), nj = free_nbrs(j);
        if (ni.empty() || nj.empty()) return false;
        AvoidSet avoid(g);
        avoid.block_vertices(cand);
        for (std::size_t e = 0; e < g.m(); ++e)
            if (ledger.edge_used(static_cast<EdgeId>(e))) avoid.block_edge(static_cast<EdgeId>(e));
        auto q = find_avoiding_path(g, ni, nj, avoid, p.m);
        if (!q) return false;
        Path full{cand[i]};
        full.insert(full.end(), q->path.begin(), q->path.end());
        full.push_back(cand[j]);
        ledger.commit(i, j, std::move(full));
        if (log) log->record("hd_pair", {{"i", kv(i)}, {"j", kv(j)}, {"length", kv(q->length + 2)}});
        return true;
    };
    std::vector<PairKey> failed;
    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j)
            if (!ledger.connected(i, j) && !try_pair(i, j)) failed.emplace_back(i, j);
    for (auto [i, j] : failed)
        if (!try_pair(i, j)) {
            ++res.pairs_failed;
            if (log) log->record("hd_pair_failed", {{"i", kv(i)}, {"j", kv(j)}});
        }
    res.pairs_connected = static_cast<int>(ledger.history().size());
    res.immersion = ledger.immersion(ledger.best_subset());
    res.audit = replay(g, ledger, [](const PathLedger&, int, int, const Path&) { return Findings{}; });
    return res;
}

// ---------------------------------------------------------------- bounded degree

RouteResult embed_bounded_degree(const Graph& g, const SparseParams& p, RunLog* log,
                                 std::optional<std::vector<Vertex>> chosen) {
    RouteResult res;
    res.route = "bounded-degree";
    res.immersion.host_id = g.fingerprint();
    if (g.n() == 0) return res;
    const Rational d = avg_degree(g);
    std::vector<Vertex> branches =
        chosen ? *chosen : select_far_apart_branch_vertices(g, d - 2 * p.eta * d, p.separation, p.target);
    check_vertices(g, branches);
    res.ledger = PathLedger(g, branches);
    PathLedger& ledger = res.ledger;
    const int t = ledger.size();
    if (log)
        log->record("bd_branches", {{"count", kv(t)}, {"target", kv(p.target)}, {"separation", kv(p.separation)}});

    std::vector<std::vector<char>> inner(t);
    std::vector<std::vector<EdgeId>> inner_edges(t);
    std::vector<std::vector<int>> owners(g.m());
    for (int i = 0; i < t; ++i) {
        const Ball b = ball(g, std::span<const Vertex>(&branches[i], 1), p.r);
        inner[i] = mask_of(g.n(), b.order);
        inner_edges[i] = induced_edges(g, inner[i]);
        for (EdgeId e : inner_edges[i]) owners[e].push_back(i);
    }
    auto foreign = [&](EdgeId e, int i, int j) {
        for (int o : owners[e])
            if (o != i && o != j) return true;
        return false;
    };

    auto check = [&](const PathLedger& led, int i, int j, const Path& path) {
        Findings out;
        const std::string tag = "pair {" + std::to_string(i) + "," + std::to_string(j) + "}";
        if (static_cast<int>(path.size()) - 1 > p.path_budget) out.emplace_back('a', tag + ": over length budget");
        for (EdgeId e : path_edges(g, path))
            if (foreign(e, i, j)) out.emplace_back('a', tag + ": uses an edge of another inner ball");
        for (auto [b, pth] : {std::pair{i, path}, std::pair{j, reversed(path)}}) {
            const Vertex src = led.branches()[b];
            if (auto f = check_prefix(g, pth, 0, std::span<const Vertex>(&src, 1), inner[b], led.edges_of_branch(b),
                                      nullptr, tag + " at branch " + std::to_string(b)))
                out.emplace_back('c', *f);
        }
        return out;
    };

    auto try_pair = [&](int i, int j) -> bool {
        AvoidSet avoid(g);
        for (std::size_t e = 0; e < g.m(); ++e)
            if (ledger.edge_used(static_cast<EdgeId>(e)) || foreign(static_cast<EdgeId>(e), i, j))
                avoid.block_edge(static_cast<EdgeId>(e));
        const Vertex vi = branches[i], vj = branches[j];
        auto found = find_avoiding_path(g, std::span<const Vertex>(&vi, 1), std::span<const Vertex>(&vj, 1), avoid,
                                        p.path_budget);
        if (log) {
            AvoidSet w(g);
            for (std::size_t e = 0; e < g.m(); ++e)
                if (ledger.edge_used(static_cast<EdgeId>(e))) w.block_edge(static_cast<EdgeId>(e));
            const Ball oi = ball(g, std::span<const Vertex>(&vi, 1), p.kappa + p.r, w);
            const Ball oj = ball(g, std::span<const Vertex>(&vj, 1), p.kappa + p.r, w);
            const Ball ii = ball(g, std::span<const Vertex>(&vi, 1), p.r, w);
            auto q = find_avoiding_path(g, oi.order, oj.order, avoid, p.m);
            log->record("bd_attempt", {{"i", kv(i)}, {"j", kv(j)}, {"inner_i", kv(ii.size())},
                                       {"outer_i", kv(oi.size())}, {"outer_j", kv(oj.size())},
                                       {"outer_route", q ? kv(q->length) : std::string("none")},
                                       {"length", found ? kv(found->length) : std::string("none")}});
        }
        if (!found) return false;
        auto findings = check(ledger, i, j, found->path);
        if (!findings.empty()) {
            ++res.audit_rejections;
            if (log) log->record("bd_audit_reject", {{"i", kv(i)}, {"j", kv(j)}, {"reason", findings.front().second}});
            return false;
        }
        LedgerSnapshot snap;
        for (int q = 0; q < t; ++q)
            if (q != i && q != j) snap.forbidden_edges.insert(snap.forbidden_edges.end(), inner_edges[q].begin(),
                                                              inner_edges[q].end());
        ledger.commit(i, j, found->path, std::move(snap));
        return true;
    };

    std::vector<PairKey> failed;
    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j)
            if (!try_pair(i, j)) failed.emplace_back(i, j);
    for (auto [i, j] : failed)
        if (!try_pair(i, j)) ++res.pairs_failed;
    res.pairs_connected = static_cast<int>(ledger.history().size());
    res.immersion = ledger.immersion(ledger.best_subset());
    res.audit = replay(g, ledger, check);
    return res;
}

// ---------------------------------------------------------------- subexpanders

SubexpanderFamily find_subexpanders(const Graph& gp, int count, const SparseParams& p, RunLog* log) {
    SubexpanderFamily fam;
    if (count <= 0) return fam;
    if (gp.n() == 0 || gp.m() == 0) {
        fam.deficit = "graph has no edges";
        return fam;
    }
    const Rational dgp = avg_degree(gp);
    std::vector<Vertex> found_vertices;
    while (static_cast<int>(fam.members.size()) < count) {
        std::vector<Vertex> removed;
        if (!found_vertices.empty()) removed = ball(gp, found_vertices, 2 * p.kappa).sorted();
        const Restriction rest = restrict(gp, removed);
        if (rest.graph.m() == 0) {
            fam.deficit = "no edges outside the 2κ-balls";
            break;
        }
        ExtractResult ex = extract_robust_expander(rest.graph, p.eps1, p.eps2, p.extract);
        if (ex.status == ExtractStatus::Degenerate || ex.graph.m() == 0) {
            fam.deficit = "extraction degenerated";
            break;
        }
        const Rational df = avg_degree(ex.graph);
        if (df < p.subexpander_density * dgp) {
            fam.deficit = "subexpander density " + to_string(df) + " below " + to_string(p.subexpander_density * dgp);
            break;
        }
        Subexpander s;
        for (Vertex v : ex.to_parent) s.to_host.push_back(rest.to_parent[v]);
        s.vertices = normalized(s.to_host);
        s.graph = std::move(ex.graph);
        s.verdict = ex.verdict;
        if (log)
            log->record("subexpander", {{"index", kv(fam.members.size())}, {"n", kv(s.graph.n())},
                                        {"d", kv(df)}, {"verdict", to_string(s.verdict.status)},
                                        {"status", to_string(ex.status)}});
        found_vertices.insert(found_vertices.end(), s.vertices.begin(), s.vertices.end());
        fam.members.push_back(std::move(s));
    }
    if (fam.deficit && log)
        log->record("subexpander_deficit", {{"found", kv(fam.members.size())}, {"wanted", kv(count)},
                                            {"reason", *fam.deficit}});
    return fam;
}

Kernel grow_kernel(const Graph& host, std::span<const Vertex> host_set, Vertex vi, std::span<const Edge> removed,
                   int radius, std::size_t core_target) {
    check_vertices(host, host_set);
    const auto inside = mask_of(host.n(), host_set);
    if (!host.contains(vi) || !inside[vi]) throw GraphError("grow_kernel: branch vertex not in the subexpander");
    AvoidSet avoid(host);
    for (std::size_t v = 0; v < host.n(); ++v)
        if (!inside[v]) avoid.block_vertex(static_cast<Vertex>(v));
    for (const Edge& e : removed) avoid.block_edge(host, e.u, e.v);
    Kernel k;
    k.branch = vi;
    k.core = ball(host, std::span<const Vertex>(&vi, 1), radius, avoid).sorted();
    k.core_target = core_target;
    return k;
}

// ---------------------------------------------------------------- assembly

RouteResult assemble_sparse(const Graph& g, std::span<const Vertex> z1, const std::vector<Subexpander>& family,
                            const SparseParams& p, RunLog* log) {
    RouteResult res;
    res.route = "subexpander";
    res.immersion.host_id = g.fingerprint();
    const int t = static_cast<int>(
        p.target > 0 ? std::min<std::size_t>(family.size(), static_cast<std::size_t>(p.target)) : family.size());
    const auto z1mask = mask_of(g.n(), z1);
    const double d = g.n() == 0 ? 0.0 : to_double(avg_degree(g));
    const std::size_t d2 = static_cast<std::size_t>(std::ceil(d * d));

    std::vector<Vertex> branches;
    std::vector<std::vector<char>> fmask(t), kmask(t), inner(t);
    std::vector<Kernel> kernels(t);
    for (int i = 0; i < t; ++i) {
        const Subexpander& f = family[i];
        check_vertices(g, f.vertices);
        fmask[i] = mask_of(g.n(), f.vertices);
        Vertex best = kNoVertex;
        for (std::size_t lv = 0; lv < f.graph.n(); ++lv) {
            const Vertex hv = f.to_host[lv];
            if (best == kNoVertex) best = static_cast<Vertex>(lv);
            else if (f.graph.degree(static_cast<Vertex>(lv)) > f.graph.degree(best) ||
                     (f.graph.degree(static_cast<Vertex>(lv)) == f.graph.degree(best) && hv < f.to_host[best]))
                best = static_cast<Vertex>(lv);
        }
        const Vertex vi = f.to_host[best];
        branches.push_back(vi);
        kernels[i] = grow_kernel(g, f.vertices, vi, {}, p.ball_exp, d2);
        kernels[i].host = i;
        kmask[i] = mask_of(g.n(), kernels[i].core);
        AvoidSet noz(g);
        for (Vertex z : z1) noz.block_vertex(z);
        kernels[i].inner_ball = ball(g, kernels[i].core, p.r, noz).sorted();
        inner[i] = mask_of(g.n(), kernels[i].inner_ball);
        if (log)
            log->record("kernel", {{"index", kv(i)}, {"branch", kv(vi)}, {"core", kv(kernels[i].core.size())},
                                   {"core_target", kv(d2)}, {"inner", kv(kernels[i].inner_ball.size())}});
    }
    res.ledger = PathLedger(g, branches);
    PathLedger& ledger = res.ledger;

    // K_i' = B^s_{F_i ∖ W}(v_i) for the ledger's current W.
    auto current_kernel = [&](const PathLedger& led, int i) {
        AvoidSet avoid(g);
        for (std::size_t v = 0; v < g.n(); ++v)
            if (!fmask[i][v]) avoid.block_vertex(static_cast<Vertex>(v));
        for (std::size_t e = 0; e < g.m(); ++e)
            if (led.edge_used(static_cast<EdgeId>(e))) avoid.block_edge(static_cast<EdgeId>(e));
        return ball(g, std::span<const Vertex>(&branches[i], 1), p.ball_exp, avoid).sorted();
    };
    const int budget = p.m + 2 * p.kappa + 2 * p.r + 2 * p.ball_exp;

    auto check = [&](const PathLedger& led, int i, int j, const Path& path) {
        Findings out;
        const std::string tag = "pair {" + std::to_string(i) + "," + std::to_string(j) + "}";
        if (static_cast<int>(path.size()) - 1 > budget) out.emplace_back('a', tag + ": over length budget");
        for (int q = 0; q < t; ++q) {
            if (q == i || q == j) continue;
            for (Vertex v : path)
                if (inner[q][v]) {
                    out.emplace_back('a', tag + ": meets the inner ball of branch " + std::to_string(q));
                    break;
                }
        }
        for (auto [b, pth] : {std::pair{i, path}, std::pair{j, reversed(path)}}) {
            const std::string btag = tag + " at branch " + std::to_string(b);
            const Vertex src = branches[b];
            const auto removed = led.edges_of_branch(b);
            std::size_t k = 0;
            if (auto f = check_prefix(g, pth, 0, std::span<const Vertex>(&src, 1), kmask[b], removed, &k,
                                      btag + " kernel"))
                out.emplace_back('c', *f);
            const auto kprime = current_kernel(led, b);
            const auto kpmask = mask_of(g.n(), kprime);
            if (!kpmask[pth[k]]) {
                out.emplace_back('c', btag + ": leaves the kernel outside K'");
                continue;
            }
            std::vector<char> zone = inner[b];
            for (std::size_t v = 0; v < g.n(); ++v)
                if (kmask[b][v] && !kpmask[v]) zone[v] = 0;
            if (auto f = check_prefix(g, pth, k, kprime, zone, removed, nullptr, btag + " inner ball"))
                out.emplace_back('c', *f);
        }
        return out;
    };

    auto try_pair = [&](int i, int j) -> bool {
        const auto ki = current_kernel(ledger, i), kj = current_kernel(ledger, j);
        std::vector<char> y(g.n(), 0);
        for (int q = 0; q < t; ++q)
            if (q != i && q != j)
                for (Vertex v : kernels[q].inner_ball) y[v] = 1;
        const std::vector<char> ustar = y;
        const auto kim = mask_of(g.n(), ki), kjm = mask_of(g.n(), kj);
        for (Vertex v : kernels[i].core)
            if (!kim[v]) y[v] = 1;
        for (Vertex v : kernels[j].core)
            if (!kjm[v]) y[v] = 1;
        std::vector<Vertex> x1, x2;
        for (Vertex v : ki)
            if (!y[v]) x1.push_back(v);
        for (Vertex v : kj)
            if (!y[v]) x2.push_back(v);
        if (log) {
            AvoidSet grow(g);
            for (std::size_t e = 0; e < g.m(); ++e)
                if (ledger.edge_used(static_cast<EdgeId>(e))) grow.block_edge(static_cast<EdgeId>(e));
            for (Vertex z : z1) grow.block_vertex(z);
            const Ball in_i = ball(g, ki, p.r, grow);
            const auto& used_v = ledger.used_vertices();
            for (std::size_t v = 0; v < g.n(); ++v)
                if (used_v[v] && !kim[v]) grow.block_vertex(static_cast<Vertex>(v));
            const Ball out_i = ball(g, ki, p.kappa + p.r, grow);
            log->record("as_balls", {{"i", kv(i)}, {"j", kv(j)}, {"kernel", kv(ki.size())}, {"kernel_target", kv(d2)},
                                     {"inner", kv(in_i.size())}, {"outer", kv(out_i.size())}});
        }
        if (x1.empty() || x2.empty()) return false;
        AvoidSet avoid(g);
        for (std::size_t v = 0; v < g.n(); ++v)
            if (y[v]) avoid.block_vertex(static_cast<Vertex>(v));
        std::vector<char> used_mask(g.m(), 0);
        for (std::size_t e = 0; e < g.m(); ++e)
            if (ledger.edge_used(static_cast<EdgeId>(e))) {
                avoid.block_edge(static_cast<EdgeId>(e));
                used_mask[e] = 1;
            }
        auto q = find_avoiding_path(g, x1, x2, avoid, p.m + 2 * p.kappa + 2 * p.r);
        if (!q) return false;
        std::vector<char> ti(g.n(), 0), tj(g.n(), 0);
        ti[q->path.front()] = 1;
        tj[q->path.back()] = 1;
        auto seg_i = consecutive_extension(g, std::span<const Vertex>(&branches[i], 1), kmask[i], used_mask, ti);
        auto seg_j = consecutive_extension(g, std::span<const Vertex>(&branches[j], 1), kmask[j], used_mask, tj);
        if (!seg_i || !seg_j) return false;
        Path full = *seg_i;
        full.insert(full.end(), q->path.begin() + 1, q->path.end());
        full.insert(full.end(), seg_j->rbegin() + 1, seg_j->rend());
        std::vector<EdgeId> ids;
        try {
            ids = path_edges(g, full);
        } catch (const std::logic_error&) {
            return false;
        }
        std::vector<EdgeId> sorted = ids;
        std::sort(sorted.begin(), sorted.end());
        bool clash = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
        for (EdgeId e : ids) clash = clash || ledger.edge_used(e);
        auto findings = clash ? Findings{{'a', "edge clash"}} : check(ledger, i, j, full);
        if (!findings.empty()) {
            ++res.audit_rejections;
            if (log) log->record("as_audit_reject", {{"i", kv(i)}, {"j", kv(j)}, {"reason", findings.front().second}});
            return false;
        }
        if (log)
            log->record("as_pair", {{"i", kv(i)}, {"j", kv(j)}, {"length", kv(ids.size())},
                                    {"connector", kv(q->length)}});
        ledger.commit(i, j, std::move(full), LedgerSnapshot{{}, members(ustar)});
        return true;
    };

    std::vector<PairKey> failed;
    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j)
            if (!try_pair(i, j)) failed.emplace_back(i, j);
    for (auto [i, j] : failed)
        if (!try_pair(i, j)) {
            ++res.pairs_failed;
            if (log) log->record("as_pair_failed", {{"i", kv(i)}, {"j", kv(j)}});
        }
    res.pairs_connected = static_cast<int>(ledger.history().size());
    res.immersion = ledger.immersion(ledger.best_subset());
    res.audit = replay(g, ledger, check);

    // Host sets must be more than 2κ apart in G − Z1.
    AvoidSet noz(g);
    for (Vertex z : z1) noz.block_vertex(z);
    for (int i = 0; i < t; ++i) {
        const Ball b = ball(g, family[i].vertices, 2 * p.kappa, noz);
        for (int j = 0; j < t; ++j)
            if (j != i)
                for (Vertex v : family[j].vertices)
                    if (b.contains(v)) {
                        res.audit.separation = false;
                        res.audit.failures.push_back("subexpanders " + std::to_string(i) + " and " +
                                                     std::to_string(j) + " are within distance 2κ");
                        goto next_host;
                    }
    next_host:;
    }
    return res;
}

// ---------------------------------------------------------------- dispatch

const char* to_string(SparseCase c) {
    switch (c) {
        case SparseCase::HighDegree: return "high-degree";
        case SparseCase::BoundedDegree: return "bounded-degree";
        case SparseCase::Subexpander: return "subexpander";
        case SparseCase::None: return "none";
    }
    return "?";
}

SparseOutcome embed_sparse(const Graph& g, const SparseParams& p, RunLog* log) {
    SparseOutcome out;
    out.immersion.host_id = g.fingerprint();
    if (g.n() == 0) return out;
    out.d_g = avg_degree(g);
    for (std::size_t v = 0; v < g.n(); ++v)
        if (Rational(static_cast<std::int64_t>(g.degree(static_cast<Vertex>(v)))) >= p.z1_threshold)
            out.z1.push_back(static_cast<Vertex>(v));
    const Restriction gp = restrict(g, out.z1);
    out.d_prime = gp.graph.n() == 0 ? Rational(0) : avg_degree(gp.graph);
    out.d_prime_ok = gp.graph.n() > 0 && out.d_prime >= out.d_g - p.eta * out.d_g;
    const bool bounded = gp.graph.n() > 0 && gp.graph.m() > 0 &&
                         static_cast<double>(gp.graph.max_degree()) <= p.bounded_gate * to_double(out.d_prime);
    if (static_cast<int>(out.z1.size()) >= std::max(1, p.target)) out.fired = SparseCase::HighDegree;
    else if (bounded) out.fired = SparseCase::BoundedDegree;
    else out.fired = SparseCase::Subexpander;
    if (log)
        log->record("sparse_dispatch", {{"z1", kv(out.z1.size())}, {"d", kv(out.d_g)}, {"d_prime", kv(out.d_prime)},
                                        {"d_prime_ok", kv(out.d_prime_ok)}, {"delta_prime", kv(gp.graph.max_degree())},
                                        {"fired", to_string(out.fired)}});

    std::vector<std::pair<SparseCase, Immersion>> candidates;
    if (out.z1.size() >= 2) {
        RouteResult r = embed_high_degree(g, out.z1, p, log);
        candidates.emplace_back(SparseCase::HighDegree, r.immersion);
        out.routes.push_back(std::move(r));
    }
    if (gp.graph.m() > 0) {
        RouteResult r = embed_bounded_degree(gp.graph, p, log);
        candidates.emplace_back(SparseCase::BoundedDegree, r.immersion.lifted(gp.to_parent, g.fingerprint()));
        out.routes.push_back(std::move(r));

        SubexpanderFamily fam = find_subexpanders(gp.graph, p.subexpander_count, p, log);
        std::vector<Subexpander> lifted;
        for (Subexpander& s : fam.members) {
            for (Vertex& v : s.to_host) v = gp.to_parent[v];
            s.vertices = normalized(s.to_host);
            lifted.push_back(std::move(s));
        }
        if (!lifted.empty()) {
            RouteResult a = assemble_sparse(g, out.z1, lifted, p, log);
            candidates.emplace_back(SparseCase::Subexpander, a.immersion);
            out.routes.push_back(std::move(a));
        }
    }
    for (const RouteResult& r : out.routes) out.audits_ok = out.audits_ok && r.audit.ok();

    out.immersion.branch = {0};
    for (auto& [route, imm] : candidates)
        if (imm.order() > out.immersion.order() || (out.won == SparseCase::None && imm.order() > 0 &&
                                                     imm.order() >= out.immersion.order())) {
            out.immersion = imm;
            out.won = route;
        }
    if (log) log->record("sparse_result", {{"won", to_string(out.won)}, {"order", kv(out.immersion.order())}});
    return out;
}

}  // namespace immerse
