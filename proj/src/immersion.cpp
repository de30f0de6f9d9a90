#include "immerse/immersion.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace immerse {

Path Immersion::path_between(int i, int j) const {
    if (i < j) return paths.at({i, j});
    Path p = paths.at({j, i});
    std::reverse(p.begin(), p.end());
    return p;
}

Immersion Immersion::lifted(const std::vector<Vertex>& to_parent, std::uint64_t parent_host) const {
    Immersion out;
    out.host_id = parent_host;
    for (Vertex v : branch) out.branch.push_back(to_parent.at(v));
    for (const auto& [key, p] : paths) {
        Path q;
        q.reserve(p.size());
        for (Vertex v : p) q.push_back(to_parent.at(v));
        out.paths.emplace(key, std::move(q));
    }
    return out;
}

const char* to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::NonInjective: return "NonInjective";
        case ViolationKind::BadEndpoint: return "BadEndpoint";
        case ViolationKind::NonEdge: return "NonEdge";
        case ViolationKind::EdgeReuse: return "EdgeReuse";
        case ViolationKind::StrongViolation: return "StrongViolation";
        case ViolationKind::Malformed: return "Malformed";
    }
    return "?";
}

namespace {

std::string pair_locus(const PairKey& key) {
    return "pair {" + std::to_string(key.first) + "," + std::to_string(key.second) + "}";
}

}  // namespace

VerifyReport verify_immersion(const Graph& g, const Immersion& imm, bool strong) {
    VerifyReport rep;
    auto fail = [&rep](ViolationKind k, std::string locus) {
        rep.violations.push_back({k, std::move(locus)});
    };
    const int t = imm.order();

    std::vector<char> is_branch(g.n(), 0);
    std::unordered_map<Vertex, int> first_index;
    for (int i = 0; i < t; ++i) {
        const Vertex v = imm.branch[i];
        if (!g.contains(v)) {
            fail(ViolationKind::Malformed, "branch " + std::to_string(i) + " vertex " + std::to_string(v) + " out of range");
            continue;
        }
        is_branch[v] = 1;
        auto [it, fresh] = first_index.emplace(v, i);
        if (!fresh)
            fail(ViolationKind::NonInjective, "branch " + std::to_string(it->second) + " and " +
                                                  std::to_string(i) + " both map to " + std::to_string(v));
    }

    for (const auto& [key, p] : imm.paths) {
        if (key.first < 0 || key.second >= t || key.first >= key.second)
            fail(ViolationKind::Malformed, pair_locus(key) + " is not a pair of distinct branch indices");
    }
    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j)
            if (!imm.paths.contains({i, j})) fail(ViolationKind::Malformed, pair_locus({i, j}) + " has no path");

    std::vector<int> used_by(g.m(), -1);
    std::vector<PairKey> owners;
    for (const auto& [key, p] : imm.paths) {
        if (key.first < 0 || key.second >= t || key.first >= key.second) continue;
        const std::string locus = pair_locus(key);
        if (p.empty()) {
            fail(ViolationKind::Malformed, locus + " has an empty path");
            continue;
        }
        bool in_range = true;
        for (Vertex v : p)
            if (!g.contains(v)) in_range = false;
        if (!in_range) {
            fail(ViolationKind::Malformed, locus + " visits an out-of-range vertex");
            continue;
        }
        if (p.front() != imm.branch[key.first] || p.back() != imm.branch[key.second])
            fail(ViolationKind::BadEndpoint, locus + " runs " + std::to_string(p.front()) + ".." +
                                                 std::to_string(p.back()) + ", expected " +
                                                 std::to_string(imm.branch[key.first]) + ".." +
                                                 std::to_string(imm.branch[key.second]));
        const int owner = static_cast<int>(owners.size());
        owners.push_back(key);
        for (std::size_t s = 0; s + 1 < p.size(); ++s) {
            const auto id = g.edge_id(p[s], p[s + 1]);
            const std::string step = locus + " step " + std::to_string(s) + " (" + std::to_string(p[s]) +
                                     "-" + std::to_string(p[s + 1]) + ")";
            if (!id) {
                fail(ViolationKind::NonEdge, step);
                continue;
            }
            if (used_by[*id] >= 0) {
                const PairKey& prev = owners[used_by[*id]];
                fail(ViolationKind::EdgeReuse, step + " reuses an edge of " + pair_locus(prev));
            } else {
                used_by[*id] = owner;
            }
        }
        if (strong)
            for (std::size_t s = 1; s + 1 < p.size(); ++s)
                if (is_branch[p[s]])
                    fail(ViolationKind::StrongViolation,
                         locus + " passes branch vertex " + std::to_string(p[s]) + " at step " + std::to_string(s));
    }
    rep.ok = rep.violations.empty();
    return rep;
}

Immersion greedy_baseline(const Graph& g) {
    Immersion best;
    best.host_id = g.fingerprint();
    if (g.n() == 0) return best;

    std::vector<Vertex> seeds(g.n());
    std::iota(seeds.begin(), seeds.end(), 0);
    std::stable_sort(seeds.begin(), seeds.end(),
                     [&](Vertex a, Vertex b) { return g.degree(a) > g.degree(b); });
    constexpr std::size_t kMaxSeeds = 32;
    if (seeds.size() > kMaxSeeds) seeds.resize(kMaxSeeds);

    std::vector<Vertex> best_clique;
    for (Vertex seed : seeds) {
        if (g.degree(seed) + 1 <= best_clique.size()) continue;
        std::vector<Vertex> clique{seed};
        std::vector<Vertex> cand(g.neighbors(seed).begin(), g.neighbors(seed).end());
        while (!cand.empty()) {
            Vertex pick = cand.front();
            std::size_t pick_score = 0;
            bool first = true;
            for (Vertex c : cand) {
                std::vector<Vertex> common;
                std::set_intersection(cand.begin(), cand.end(), g.neighbors(c).begin(), g.neighbors(c).end(),
                                      std::back_inserter(common));
                if (first || common.size() > pick_score) {
                    pick = c;
                    pick_score = common.size();
                    first = false;
                }
            }
            clique.push_back(pick);
            std::vector<Vertex> next;
            std::set_intersection(cand.begin(), cand.end(), g.neighbors(pick).begin(), g.neighbors(pick).end(),
                                  std::back_inserter(next));
            cand = std::move(next);
        }
        if (clique.size() > best_clique.size()) best_clique = clique;
    }
    std::sort(best_clique.begin(), best_clique.end());
    best.branch = best_clique;
    for (int i = 0; i < best.order(); ++i)
        for (int j = i + 1; j < best.order(); ++j) best.paths[{i, j}] = {best.branch[i], best.branch[j]};
    return best;
}

namespace {

class OracleSearch {
public:
    OracleSearch(const Graph& g, std::uint64_t budget)
        : g_(g), budget_(budget), used_(g.m(), 0), free_incident_(g.n(), 0) {}

    std::uint64_t nodes() const { return nodes_; }
    bool exhausted() const { return exhausted_; }

    // Finds a K_t immersion, trying branch sets in lexicographic order.
    std::optional<Immersion> find(int t) {
        candidates_.clear();
        for (std::size_t v = 0; v < g_.n(); ++v)
            if (static_cast<int>(g_.degree(static_cast<Vertex>(v))) >= t - 1) candidates_.push_back(static_cast<Vertex>(v));
        if (static_cast<int>(candidates_.size()) < t) return std::nullopt;
        if (static_cast<std::size_t>(t) * (t - 1) / 2 > g_.m()) return std::nullopt;
        branch_.clear();
        return choose_branch(t, 0);
    }

private:
    std::optional<Immersion> choose_branch(int t, std::size_t from) {
        if (static_cast<int>(branch_.size()) == t) return route_all();
        const std::size_t need = t - branch_.size();
        for (std::size_t idx = from; idx + need <= candidates_.size(); ++idx) {
            if (!tick()) return std::nullopt;
            branch_.push_back(candidates_[idx]);
            if (auto found = choose_branch(t, idx + 1)) return found;
            branch_.pop_back();
            if (exhausted_) return std::nullopt;
        }
        return std::nullopt;
    }

    std::optional<Immersion> route_all() {
        const int t = static_cast<int>(branch_.size());
        pairs_.clear();
        for (int i = 0; i < t; ++i)
            for (int j = i + 1; j < t; ++j) pairs_.emplace_back(i, j);
        std::fill(used_.begin(), used_.end(), 0);
        for (std::size_t v = 0; v < g_.n(); ++v) free_incident_[v] = static_cast<int>(g_.degree(static_cast<Vertex>(v)));
        free_edges_ = g_.m();
        pending_.assign(t, t - 1);
        chosen_paths_.assign(pairs_.size(), {});
        stack_.assign(pairs_.size(), {});
        on_path_.assign(pairs_.size(), std::vector<char>(g_.n(), 0));
        if (!route(0)) return std::nullopt;
        Immersion imm;
        imm.host_id = g_.fingerprint();
        imm.branch = branch_;
        for (std::size_t k = 0; k < pairs_.size(); ++k) imm.paths[pairs_[k]] = chosen_paths_[k];
        return imm;
    }

    bool feasible(std::size_t next_pair) const {
        if (pairs_.size() - next_pair > free_edges_) return false;
        for (std::size_t i = 0; i < branch_.size(); ++i)
            if (pending_[i] > free_incident_[branch_[i]]) return false;
        return true;
    }

    bool route(std::size_t k) {
        if (k == pairs_.size()) return true;
        if (!feasible(k)) return false;
        const auto [i, j] = pairs_[k];
        const Vertex a = branch_[i], b = branch_[j];
        for (std::size_t len = 1; len <= g_.n() - 1 && len <= free_edges_; ++len) {
            stack_[k].assign(1, a);
            on_path_[k][a] = 1;
            const bool ok = extend(k, b, len);
            on_path_[k][a] = 0;
            if (ok) return true;
            if (exhausted_) return false;
        }
        return false;
    }

    // Depth-first enumeration of simple a-b paths with exactly `len` edges.
    bool extend(std::size_t k, Vertex target, std::size_t len) {
        if (!tick()) return false;
        const Vertex v = stack_[k].back();
        const std::size_t depth = stack_[k].size() - 1;
        auto nbrs = g_.neighbors(v);
        auto ids = g_.incident(v);
        for (std::size_t s = 0; s < nbrs.size(); ++s) {
            const Vertex u = nbrs[s];
            const EdgeId e = ids[s];
            if (used_[e] || on_path_[k][u]) continue;
            if (depth + 1 == len) {
                if (u != target) continue;
            } else if (u == target) {
                continue;
            }
            take(k, e, u);
            bool done = false;
            if (depth + 1 == len) {
                chosen_paths_[k] = stack_[k];
                const auto [i, j] = pairs_[k];
                --pending_[i];
                --pending_[j];
                done = route(k + 1);
                ++pending_[i];
                ++pending_[j];
            } else {
                done = extend(k, target, len);
            }
            release(k, e, u);
            if (done) return true;
            if (exhausted_) return false;
        }
        return false;
    }

    void take(std::size_t k, EdgeId e, Vertex u) {
        used_[e] = 1;
        --free_edges_;
        --free_incident_[g_.edge(e).u];
        --free_incident_[g_.edge(e).v];
        on_path_[k][u] = 1;
        stack_[k].push_back(u);
    }

    void release(std::size_t k, EdgeId e, Vertex u) {
        used_[e] = 0;
        ++free_edges_;
        ++free_incident_[g_.edge(e).u];
        ++free_incident_[g_.edge(e).v];
        on_path_[k][u] = 0;
        stack_[k].pop_back();
    }

    bool tick() {
        if (exhausted_) return false;
        if (++nodes_ > budget_) {
            exhausted_ = true;
            return false;
        }
        return true;
    }

    const Graph& g_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    bool exhausted_ = false;
    std::vector<Vertex> candidates_;
    std::vector<Vertex> branch_;
    std::vector<PairKey> pairs_;
    std::vector<char> used_;
    std::vector<std::vector<char>> on_path_;
    std::vector<int> free_incident_;
    std::vector<int> pending_;
    std::size_t free_edges_ = 0;
    std::vector<Path> stack_;  // path under construction per pair
    std::vector<Path> chosen_paths_;
};

}  // namespace

OracleResult oracle_max_immersion(const Graph& g, int cap_order, std::uint64_t node_budget) {
    OracleResult res;
    res.certificate.host_id = g.fingerprint();
    if (g.n() == 0) return res;
    const int cap = cap_order < 0 ? static_cast<int>(g.n()) : std::min<int>(cap_order, static_cast<int>(g.n()));
    if (cap < 1) return res;
    res.max_order = 1;
    res.certificate.branch = {0};

    // Immersion of K_t contains one of K_{t-1}, so the first failing order
    // bounds the answer.
    OracleSearch search(g, node_budget);
    for (int t = 2; t <= cap; ++t) {
        auto found = search.find(t);
        if (!found) {
            res.exact = !search.exhausted();
            break;
        }
        res.max_order = t;
        res.certificate = std::move(*found);
    }
    res.nodes = search.nodes();
    return res;
}

std::vector<Vertex> max_clique(const Graph& g) {
    std::vector<Vertex> best, current;
    std::function<void(std::vector<Vertex>, std::vector<Vertex>)> expand =
        [&](std::vector<Vertex> cand, std::vector<Vertex> excluded) {
            if (cand.empty()) {
                if (current.size() > best.size()) best = current;
                return;
            }
            if (current.size() + cand.size() <= best.size()) return;
            // Pivot with most neighbours in cand.
            Vertex pivot = cand.front();
            std::size_t pivot_score = 0;
            for (const auto* pool : {&cand, &excluded})
                for (Vertex u : *pool) {
                    std::vector<Vertex> common;
                    std::set_intersection(cand.begin(), cand.end(), g.neighbors(u).begin(), g.neighbors(u).end(),
                                          std::back_inserter(common));
                    if (common.size() > pivot_score || (pivot_score == 0 && u == cand.front())) {
                        pivot = u;
                        pivot_score = common.size();
                    }
                }
            std::vector<Vertex> branches;
            std::set_difference(cand.begin(), cand.end(), g.neighbors(pivot).begin(), g.neighbors(pivot).end(),
                                std::back_inserter(branches));
            for (Vertex v : branches) {
                std::vector<Vertex> nc, nx;
                std::set_intersection(cand.begin(), cand.end(), g.neighbors(v).begin(), g.neighbors(v).end(),
                                      std::back_inserter(nc));
                std::set_intersection(excluded.begin(), excluded.end(), g.neighbors(v).begin(),
                                      g.neighbors(v).end(), std::back_inserter(nx));
                current.push_back(v);
                expand(std::move(nc), std::move(nx));
                current.pop_back();
                cand.erase(std::find(cand.begin(), cand.end(), v));
                excluded.insert(std::lower_bound(excluded.begin(), excluded.end(), v), v);
            }
        };
    std::vector<Vertex> all(g.n());
    std::iota(all.begin(), all.end(), 0);
    expand(all, {});
    std::sort(best.begin(), best.end());
    return best;
}

void write_certificate(std::ostream& out, const Immersion& imm) {
    std::ostringstream host;
    host << std::hex << std::setw(16) << std::setfill('0') << imm.host_id;
    out << "# host " << host.str() << '\n';
    out << "order " << imm.order() << '\n';
    for (int i = 0; i < imm.order(); ++i) out << "branch " << i << ' ' << imm.branch[i] << '\n';
    for (const auto& [key, p] : imm.paths) {
        out << "path " << key.first << ' ' << key.second;
        for (Vertex v : p) out << ' ' << v;
        out << '\n';
    }
}

Immersion read_certificate(std::istream& in) {
    Immersion imm;
    std::string line;
    int order = -1;
    std::vector<char> seen_branch;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            std::istringstream cs(line.substr(first + 1));
            std::string tag, hex;
            if (cs >> tag >> hex && tag == "host") imm.host_id = std::stoull(hex, nullptr, 16);
            continue;
        }
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "order") {
            if (order >= 0 || !(ls >> order) || order < 0) throw GraphError("certificate: bad order line");
            imm.branch.assign(order, kNoVertex);
            seen_branch.assign(order, 0);
        } else if (tag == "branch") {
            long long i, v;
            if (order < 0 || !(ls >> i >> v) || i < 0 || i >= order)
                throw GraphError("certificate: bad branch line '" + line + "'");
            if (seen_branch[i]) throw GraphError("certificate: branch " + std::to_string(i) + " given twice");
            seen_branch[i] = 1;
            imm.branch[i] = static_cast<Vertex>(v);
        } else if (tag == "path") {
            long long i, j, v;
            if (order < 0 || !(ls >> i >> j)) throw GraphError("certificate: bad path line '" + line + "'");
            if (i == j) throw GraphError("certificate: path with identical endpoints " + std::to_string(i));
            Path p;
            while (ls >> v) p.push_back(static_cast<Vertex>(v));
            if (!ls.eof()) throw GraphError("certificate: bad vertex in '" + line + "'");
            PairKey key{static_cast<int>(std::min(i, j)), static_cast<int>(std::max(i, j))};
            if (i > j) std::reverse(p.begin(), p.end());
            if (!imm.paths.emplace(key, std::move(p)).second)
                throw GraphError("certificate: duplicate path for pair " + std::to_string(key.first) + " " +
                                 std::to_string(key.second));
        } else {
            throw GraphError("certificate: unknown line '" + line + "'");
        }
    }
    if (order < 0) throw GraphError("certificate: missing order line");
    for (int i = 0; i < order; ++i)
        if (!seen_branch[i]) throw GraphError("certificate: branch " + std::to_string(i) + " missing");
    return imm;
}

}  // namespace immerse
