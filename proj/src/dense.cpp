#include "immerse/dense.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "immerse/expansion.hpp"

namespace immerse {

std::vector<Vertex> Unit::exterior() const {
    std::vector<Vertex> out;
    for (const Star& s : stars) out.insert(out.end(), s.leaves.begin(), s.leaves.end());
    return normalized(std::move(out));
}

std::vector<Edge> Unit::edges() const {
    std::vector<Edge> out;
    for (const Path& b : branches)
        for (std::size_t i = 0; i + 1 < b.size(); ++i) out.emplace_back(b[i], b[i + 1]);
    for (const Star& s : stars)
        for (Vertex l : s.leaves) out.emplace_back(s.center, l);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> validate_unit(const Graph& g, const Unit& u) {
    std::vector<std::string> problems;
    auto fail = [&](std::string s) { problems.push_back(std::move(s)); };
    if (!g.contains(u.center)) {
        fail("centre out of range");
        return problems;
    }
    if (u.branches.size() != u.stars.size()) fail("branch count differs from star count");
    std::set<Vertex> star_vertices;
    std::set<Vertex> leaves;
    for (std::size_t k = 0; k < u.stars.size(); ++k) {
        const Star& s = u.stars[k];
        if (!g.contains(s.center)) {
            fail("star " + std::to_string(k) + " centre out of range");
            continue;
        }
        if (!star_vertices.insert(s.center).second) fail("star " + std::to_string(k) + " centre reused");
        for (Vertex l : s.leaves) {
            if (l == s.center) fail("star " + std::to_string(k) + " centre is its own leaf");
            if (!g.contains(l) || !g.has_edge(s.center, l))
                fail("star " + std::to_string(k) + " leaf " + std::to_string(l) + " not adjacent");
            if (!star_vertices.insert(l).second) fail("stars share vertex " + std::to_string(l));
            leaves.insert(l);
        }
    }
    if (star_vertices.contains(u.center)) fail("centre lies in a star");
    std::set<Edge> branch_edges;
    for (std::size_t k = 0; k < u.branches.size() && k < u.stars.size(); ++k) {
        const Path& b = u.branches[k];
        const std::string tag = "branch " + std::to_string(k);
        if (b.size() < 2 || b.front() != u.center || b.back() != u.stars[k].center) {
            fail(tag + " has wrong endpoints");
            continue;
        }
        if (static_cast<int>(b.size()) - 1 > u.h3) fail(tag + " longer than h3");
        for (std::size_t i = 0; i + 1 < b.size(); ++i) {
            if (!g.contains(b[i]) || !g.contains(b[i + 1]) || !g.has_edge(b[i], b[i + 1])) {
                fail(tag + " step " + std::to_string(i) + " is not an edge");
                continue;
            }
            if (!branch_edges.emplace(b[i], b[i + 1]).second) fail(tag + " reuses a branch edge");
        }
        for (std::size_t i = 1; i + 1 < b.size(); ++i)
            if (leaves.contains(b[i])) fail(tag + " interior meets leaf " + std::to_string(b[i]));
    }
    for (const Star& s : u.stars)
        for (Vertex l : s.leaves)
            if (g.contains(l) && g.contains(s.center) && branch_edges.contains(Edge(s.center, l)))
                fail("pendant edge " + std::to_string(s.center) + "-" + std::to_string(l) + " lies on a branch");
    return problems;
}

namespace {

int clamp_int(double x, int lo, int hi) {
    if (!(x >= lo)) return lo;
    if (x >= hi) return hi;
    return static_cast<int>(x);
}

void fill_levels(DenseParams& p, const Graph& g) {
    p.d = g.n() == 0 ? Rational(0) : avg_degree(g);
    p.ell = static_cast<int>(std::max<std::int64_t>(0, floor_r((1 - 5 * p.eta) * p.d)));
    p.ell_prime = static_cast<int>(std::max<std::int64_t>(0, floor_r((1 - 4 * p.eta) * p.d)));
    p.ell_double_prime =
        static_cast<int>(std::max<std::int64_t>(0, floor_r((1 - Rational(9, 2) * p.eta) * p.d)));
    p.discard_threshold = static_cast<int>(std::max<std::int64_t>(1, ceil_r(p.eta * p.d / 4)));
}

// Vertices touched by one unit whose hub serves `sats` satellites of size `size`.
int footprint(int sats, int size) { return 1 + sats + sats * (1 + size); }

int satellites_for(int h1) { return h1 + 1; }

}  // namespace

DenseParams DenseParams::paper(const Graph& g, double eps1, double eps2, const Rational& eta) {
    DenseParams p;
    p.eps1 = eps1;
    p.eps2 = eps2;
    p.eta = eta;
    fill_levels(p, g);
    const int n = static_cast<int>(g.n());
    const double d = to_double(p.d);
    const double m = default_path_budget(g.n(), d, eps1, eps2);
    p.m = clamp_int(m, 1, std::max(1, n));
    p.h1 = p.ell_prime;
    p.h2 = clamp_int(std::pow(m, 5), 1, n);
    p.h3 = clamp_int(2 * m, 1, std::max(1, n));
    p.hub_count = clamp_int(std::pow(m, 10), 1, n);
    p.hub_size = static_cast<int>(std::max<std::int64_t>(1, ceil_r((1 - 3 * eta) * p.d)));
    p.sat_count = clamp_int(d * std::pow(m, 15), 1, n);
    p.sat_size = clamp_int(std::pow(m, 10), 1, n);
    p.unit_count = p.ell_prime;
    p.subfamily = p.ell_double_prime;
    p.reach_target = p.ell_prime + static_cast<int>(ceil_r(eta * p.d / 2));
    p.overuse_threshold = std::max(1, (p.h2 + 1) / 2);
    return p;
}

DenseParams DenseParams::scaled(const Graph& g, double eps1, double eps2, const Rational& eta, int h1, int h2,
                                int h3, int units) {
    DenseParams p;
    p.eps1 = eps1;
    p.eps2 = eps2;
    p.eta = eta;
    fill_levels(p, g);
    p.m = std::max<int>(1, static_cast<int>(g.n()));
    p.h1 = h1;
    p.h2 = h2;
    p.h3 = h3;
    p.hub_count = 1;
    p.sat_count = satellites_for(h1);
    p.hub_size = p.sat_count;
    p.sat_size = h2;
    p.unit_count = units;
    p.subfamily = units;
    p.reach_target = p.sat_count;
    p.overuse_threshold = std::max(1, (h2 + 1) / 2);
    p.discard_threshold = std::max(p.discard_threshold, h1);
    return p;
}

DenseParams DenseParams::practical(const Graph& g, double eps1, double eps2, const Rational& eta) {
    // Three leaves per star keep "occupied" and "over-used" distinct; a few
    // spare stars per unit absorb over-use.
    constexpr int kLeaves = 3;
    const int n = static_cast<int>(g.n());
    const int max_deg = static_cast<int>(g.max_degree());
    auto spare_for = [](int L) { return std::max(2, (L - 1 + 3) / 4); };
    int units = 1;
    for (int L = 2; L <= n; ++L) {
        const int sats = satellites_for(L - 1 + spare_for(L));
        if (footprint(sats, kLeaves) > n - (L - 1) || sats > max_deg) break;
        units = L;
    }
    const int spare = spare_for(units);
    DenseParams p = scaled(g, eps1, eps2, eta, units - 1 + spare, kLeaves, std::max(2, n), units);
    p.discard_threshold = static_cast<int>(std::max<std::int64_t>({1, ceil_r(eta * p.d / 4), spare}));
    return p;
}

HarvestResult harvest_disjoint_stars(const Graph& g, HarvestSpec hubs, HarvestSpec satellites,
                                     const AvoidSet& exclude) {
    HarvestResult res;
    std::vector<char> taken(g.n(), 0);
    auto free_vertex = [&](Vertex v) { return !taken[v] && !exclude.vertex_blocked(v); };
    std::vector<std::size_t> avail(g.n(), 0);
    for (std::size_t v = 0; v < g.n(); ++v) {
        if (exclude.vertex_blocked(static_cast<Vertex>(v))) continue;
        auto nbrs = g.neighbors(static_cast<Vertex>(v));
        auto ids = g.incident(static_cast<Vertex>(v));
        for (std::size_t k = 0; k < nbrs.size(); ++k)
            if (!exclude.vertex_blocked(nbrs[k]) && !exclude.edge_blocked(ids[k])) ++avail[v];
    }
    std::vector<Vertex> order(g.n());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return avail[a] > avail[b]; });

    auto take_stars = [&](HarvestSpec spec, std::vector<Star>& out) {
        if (spec.count <= 0) return;
        for (Vertex v : order) {
            if (static_cast<int>(out.size()) >= spec.count) break;
            if (!free_vertex(v)) continue;
            Star s{v, {}};
            auto nbrs = g.neighbors(v);
            auto ids = g.incident(v);
            for (std::size_t k = 0; k < nbrs.size() && static_cast<int>(s.leaves.size()) < spec.size; ++k)
                if (free_vertex(nbrs[k]) && !exclude.edge_blocked(ids[k])) s.leaves.push_back(nbrs[k]);
            if (static_cast<int>(s.leaves.size()) < spec.size) continue;
            taken[v] = 1;
            for (Vertex l : s.leaves) taken[l] = 1;
            out.push_back(std::move(s));
        }
    };
    take_stars(hubs, res.hubs);
    take_stars(satellites, res.satellites);
    if (static_cast<int>(res.hubs.size()) < hubs.count)
        res.deficit = Deficit{"hubs", res.hubs.size(), static_cast<std::size_t>(hubs.count)};
    else if (static_cast<int>(res.satellites.size()) < satellites.count)
        res.deficit = Deficit{"satellites", res.satellites.size(), static_cast<std::size_t>(satellites.count)};
    return res;
}

GrowResult grow_unit(const Graph& g, const std::vector<Star>& hubs, const std::vector<Star>& satellites,
                     const DenseParams& p, const AvoidSet& global_avoid, RunLog* log) {
    GrowResult res;
    if (hubs.empty()) {
        res.deficit = Deficit{"reachedCenters", 0, static_cast<std::size_t>(p.h1)};
        return res;
    }
    if (p.h1 <= 0) {
        Unit u;
        u.center = hubs.front().center;
        u.h3 = p.h3;
        res.unit = std::move(u);
        res.reach_target_met = true;
        return res;
    }

    AvoidSet avoid = global_avoid;
    for (const auto* family : {&hubs, &satellites})
        for (const Star& s : *family)
            for (Vertex l : s.leaves) avoid.block_edge(g, s.center, l);
    for (const Star& h : hubs) avoid.block_vertex(h.center);

    // paths[i][j]: branch from hub i to satellite j, when connected.
    std::vector<std::vector<std::optional<Path>>> paths(hubs.size(),
                                                        std::vector<std::optional<Path>>(satellites.size()));
    for (std::size_t i = 0; i < hubs.size(); ++i) {
        std::vector<char> occupied(hubs[i].leaves.size(), 0);
        for (std::size_t j = 0; j < satellites.size(); ++j) {
            std::vector<Vertex> free_leaves;
            for (std::size_t k = 0; k < occupied.size(); ++k)
                if (!occupied[k]) free_leaves.push_back(hubs[i].leaves[k]);
            if (free_leaves.empty()) break;
            const Vertex target = satellites[j].center;
            if (avoid.vertex_blocked(target)) continue;
            auto found = find_avoiding_path(g, free_leaves, std::span<const Vertex>(&target, 1), avoid,
                                            std::max(0, p.h3 - 1));
            if (!found) continue;
            const Vertex leaf = found->path.front();
            occupied[std::find(hubs[i].leaves.begin(), hubs[i].leaves.end(), leaf) - hubs[i].leaves.begin()] = 1;
            for (std::size_t s = 0; s + 1 < found->path.size(); ++s) avoid.block_edge(g, found->path[s], found->path[s + 1]);
            Path branch{hubs[i].center};
            branch.insert(branch.end(), found->path.begin(), found->path.end());
            paths[i][j] = std::move(branch);
        }
    }

    std::size_t best = 0;
    int best_count = -1;
    for (std::size_t i = 0; i < hubs.size(); ++i) {
        const int c = static_cast<int>(std::count_if(paths[i].begin(), paths[i].end(),
                                                     [](const auto& q) { return q.has_value(); }));
        if (c > best_count) {
            best = i;
            best_count = c;
        }
    }
    res.reached = best_count;
    res.reach_target_met = best_count >= p.reach_target;
    if (log && !res.reach_target_met)
        log->record("reach_shortfall", {{"hub", kv(hubs[best].center)}, {"reached", kv(best_count)},
                                        {"target", kv(p.reach_target)}});

    std::vector<char> interior(g.n(), 0);
    for (const auto& q : paths[best])
        if (q)
            for (std::size_t s = 1; s + 1 < q->size(); ++s) interior[(*q)[s]] = 1;

    Unit u;
    u.center = hubs[best].center;
    u.h3 = p.h3;
    for (std::size_t j = 0; j < satellites.size() && static_cast<int>(u.stars.size()) < p.h1; ++j) {
        if (!paths[best][j]) continue;
        const Star& sat = satellites[j];
        std::vector<Vertex> clean;
        for (Vertex l : sat.leaves)
            if (!interior[l]) clean.push_back(l);
        const std::size_t used = sat.leaves.size() - clean.size();
        if (2 * used >= sat.leaves.size() && used > 0) {
            if (log) log->record("satellite_discarded", {{"center", kv(sat.center)}, {"used_leaves", kv(used)}});
            continue;
        }
        if (static_cast<int>(clean.size()) < p.h2) continue;
        clean.resize(p.h2);
        u.stars.push_back(Star{sat.center, std::move(clean)});
        u.branches.push_back(*paths[best][j]);
    }
    if (static_cast<int>(u.stars.size()) < p.h1) {
        res.deficit = Deficit{"reachedCenters", u.stars.size(), static_cast<std::size_t>(p.h1)};
        return res;
    }
    u.used_pendants.assign(u.stars.size(), 0);
    u.occupied.assign(u.stars.size(), 0);
    res.unit = std::move(u);
    return res;
}

std::vector<Unit> find_units(const Graph& g, const DenseParams& p, RunLog* log) {
    std::vector<Unit> units;
    if (p.unit_count <= 0 || g.n() == 0) return units;
    AvoidSet avoid(g);
    while (static_cast<int>(units.size()) < p.unit_count) {
        auto harvest = harvest_disjoint_stars(g, {p.hub_count, p.hub_size}, {p.sat_count, p.sat_size}, avoid);
        if (harvest.deficit && log)
            log->record("harvest_deficit", {{"round", kv(units.size())}, {"kind", harvest.deficit->kind},
                                            {"found", kv(harvest.deficit->found)},
                                            {"wanted", kv(harvest.deficit->wanted)}});
        if (harvest.hubs.empty() || static_cast<int>(harvest.satellites.size()) < p.h1) break;
        auto grown = grow_unit(g, harvest.hubs, harvest.satellites, p, avoid, log);
        if (!grown.unit) {
            if (log)
                log->record("unit_deficit", {{"round", kv(units.size())}, {"kind", grown.deficit->kind},
                                             {"found", kv(grown.deficit->found)},
                                             {"wanted", kv(grown.deficit->wanted)}});
            break;
        }
        avoid.block_vertex(grown.unit->center);
        for (const Edge& e : grown.unit->edges()) avoid.block_edge(g, e.u, e.v);
        if (log)
            log->record("unit", {{"index", kv(units.size())}, {"center", kv(grown.unit->center)},
                                 {"stars", kv(grown.unit->stars.size())}, {"reached", kv(grown.reached)}});
        units.push_back(std::move(*grown.unit));
    }
    return units;
}

AssembleResult assemble_from_units(const Graph& g, std::vector<Unit> units, const DenseParams& p, RunLog* log) {
    AssembleResult res;
    res.immersion.host_id = g.fingerprint();
    const std::size_t fam = std::min<std::size_t>(units.size(), static_cast<std::size_t>(std::max(p.subfamily, 0)));
    units.resize(fam);
    const std::int64_t l2 = p.subfamily;
    res.accounting.connection_budget = l2 * (l2 - 1) / 2 * 6 * p.m;
    res.accounting.branch_budget = l2 * p.ell_prime * 2 * p.m;
    if (fam == 0) return res;
    for (Unit& u : units) {
        u.used_pendants.assign(u.stars.size(), 0);
        u.occupied.assign(u.stars.size(), 0);
        for (const Path& b : u.branches) res.accounting.branch_edges += b.size() - 1;
    }
    if (fam == 1) {
        res.immersion.branch = {units[0].center};
        return res;
    }

    std::vector<char> used(g.m(), 0);
    std::vector<char> branch_edge(g.m(), 0);
    std::vector<char> is_center(g.n(), 0);
    // Pendant edge id -> (unit, star).
    std::map<EdgeId, std::pair<int, int>> pendant_of;
    for (std::size_t i = 0; i < fam; ++i) {
        is_center[units[i].center] = 1;
        for (const Path& b : units[i].branches)
            for (std::size_t s = 0; s + 1 < b.size(); ++s) branch_edge[*g.edge_id(b[s], b[s + 1])] = 1;
        for (std::size_t k = 0; k < units[i].stars.size(); ++k)
            for (Vertex l : units[i].stars[k].leaves)
                pendant_of[*g.edge_id(units[i].stars[k].center, l)] = {static_cast<int>(i), static_cast<int>(k)};
    }
    std::vector<int> overused(fam, 0);
    std::vector<char> discarded(fam, 0);
    std::map<PairKey, Path> connected;

    // (leaf, star) endpoints still usable in unit i.
    auto eligible = [&](std::size_t i) {
        std::vector<std::pair<Vertex, int>> out;
        for (std::size_t k = 0; k < units[i].stars.size(); ++k) {
            if (units[i].occupied[k]) continue;
            for (Vertex l : units[i].stars[k].leaves)
                if (!is_center[l] && !used[*g.edge_id(units[i].stars[k].center, l)])
                    out.emplace_back(l, static_cast<int>(k));
        }
        return out;
    };
    auto star_for = [](const std::vector<std::pair<Vertex, int>>& elig, Vertex v) {
        for (const auto& [l, k] : elig)
            if (l == v) return k;
        return -1;
    };
    auto charge_pendant = [&](EdgeId e) {
        auto it = pendant_of.find(e);
        if (it == pendant_of.end()) return;
        auto [ui, k] = it->second;
        Unit& u = units[ui];
        if (++u.used_pendants[k] == p.overuse_threshold) {
            ++overused[ui];
            if (!discarded[ui] && overused[ui] >= p.discard_threshold) {
                discarded[ui] = 1;
                ++res.accounting.discarded;
                if (log) log->record("unit_discarded", {{"unit", kv(ui)}, {"overused", kv(overused[ui])}});
            }
        }
    };

    auto try_pair = [&](std::size_t i, std::size_t j) -> bool {
        auto ei = eligible(i), ej = eligible(j);
        if (ei.empty() || ej.empty()) return false;
        AvoidSet avoid(g);
        for (std::size_t c = 0; c < fam; ++c) avoid.block_vertex(units[c].center);
        for (std::size_t e = 0; e < g.m(); ++e)
            if (used[e] || branch_edge[e]) avoid.block_edge(static_cast<EdgeId>(e));
        for (std::size_t side : {i, j})
            for (const Star& s : units[side].stars)
                for (Vertex l : s.leaves) avoid.block_edge(g, s.center, l);
        std::vector<Vertex> x1, x2;
        for (auto& [l, k] : ei) x1.push_back(l);
        for (auto& [l, k] : ej) x2.push_back(l);
        auto found = find_avoiding_path(g, x1, x2, avoid, p.m);
        if (!found) return false;
        const int ka = star_for(ei, found->path.front());
        const int kb = star_for(ej, found->path.back());
        Path full = units[i].branches[ka];
        full.insert(full.end(), found->path.begin(), found->path.end());
        const Path& bj = units[j].branches[kb];
        full.insert(full.end(), bj.rbegin(), bj.rend());
        std::vector<EdgeId> ids;
        for (std::size_t s = 0; s + 1 < full.size(); ++s) {
            auto id = g.edge_id(full[s], full[s + 1]);
            if (!id || used[*id] || std::find(ids.begin(), ids.end(), *id) != ids.end()) return false;
            ids.push_back(*id);
        }
        for (EdgeId e : ids) {
            used[e] = 1;
            charge_pendant(e);
        }
        units[i].occupied[ka] = 1;
        units[j].occupied[kb] = 1;
        res.accounting.connection_edges += ids.size();
        if (log)
            log->record("pair", {{"i", kv(i)}, {"j", kv(j)}, {"length", kv(ids.size())},
                                 {"exterior_length", kv(found->length)}});
        connected[{static_cast<int>(i), static_cast<int>(j)}] = std::move(full);
        return true;
    };

    std::vector<PairKey> failed;
    for (std::size_t i = 0; i < fam; ++i)
        for (std::size_t j = i + 1; j < fam; ++j) {
            if (discarded[i] || discarded[j]) continue;
            if (!try_pair(i, j)) failed.emplace_back(i, j);
        }
    for (auto [i, j] : failed) {
        if (discarded[i] || discarded[j]) continue;
        if (!try_pair(i, j)) {
            ++res.accounting.pairs_failed;
            if (log) log->record("pair_failed", {{"i", kv(i)}, {"j", kv(j)}});
        }
    }
    res.accounting.pairs_connected = static_cast<int>(connected.size());

    // A discarded unit takes no new connections; paths it already has stay valid.
    std::vector<Edge> link;
    for (const auto& [key, path] : connected) link.emplace_back(key.first, key.second);
    const Graph pair_graph(fam, link);
    std::vector<Vertex> chosen = max_clique(pair_graph);
    if (chosen.empty()) chosen = {0};
    for (Vertex c : chosen) res.immersion.branch.push_back(units[c].center);
    for (std::size_t a = 0; a < chosen.size(); ++a)
        for (std::size_t b = a + 1; b < chosen.size(); ++b)
            res.immersion.paths[{static_cast<int>(a), static_cast<int>(b)}] = connected.at({chosen[a], chosen[b]});
    return res;
}

DenseOutcome embed_dense(const Graph& g, const DenseParams& p, RunLog* log) {
    DenseOutcome out;
    out.units = find_units(g, p, log);
    for (const Unit& u : out.units)
        if (auto problems = validate_unit(g, u); !problems.empty())
            throw std::logic_error("unit validation failed: " + problems.front());
    auto assembled = assemble_from_units(g, out.units, p, log);
    out.immersion = std::move(assembled.immersion);
    out.accounting = assembled.accounting;
    return out;
}

}  // namespace immerse
