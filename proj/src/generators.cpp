#include "immerse/generators.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <set>
#include <sstream>

namespace immerse {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

bool is_prime(int q) {
    if (q < 2) return false;
    for (int f = 2; f * f <= q; ++f)
        if (q % f == 0) return false;
    return true;
}

namespace {

const char* kind_name(GenKind k) {
    switch (k) {
        case GenKind::Complete: return "Complete";
        case GenKind::Cycle: return "Cycle";
        case GenKind::Path: return "Path";
        case GenKind::Gnp: return "Gnp";
        case GenKind::RandomRegular: return "RandomRegular";
        case GenKind::CompleteBipartite: return "CompleteBipartite";
        case GenKind::Dumbbell: return "Dumbbell";
        case GenKind::PolarityER: return "PolarityER";
    }
    return "?";
}

// Uniform double in [0,1) from the top 53 bits; independent of the
// standard library's distribution implementations.
double unit_real(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do x = rng();
    while (x >= limit);
    return x % bound;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw GraphError(what);
}

Graph complete_graph(int n) {
    std::vector<Edge> es;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) es.emplace_back(u, v);
    return Graph(n, es);
}

Graph random_regular(int n, int d, std::uint64_t seed) {
    require(d >= 0 && d < n, "RandomRegular needs 0 <= d < n");
    require((static_cast<long long>(n) * d) % 2 == 0, "RandomRegular needs n*d even");
    std::mt19937_64 rng(seed);
    std::vector<Vertex> points;
    for (int v = 0; v < n; ++v)
        for (int j = 0; j < d; ++j) points.push_back(v);
    constexpr int kMaxAttempts = 10'000;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        for (std::size_t i = points.size(); i > 1; --i) std::swap(points[i - 1], points[below(rng, i)]);
        std::set<Edge> seen;
        bool simple = true;
        for (std::size_t i = 0; i + 1 < points.size() && simple; i += 2) {
            if (points[i] == points[i + 1]) simple = false;
            else simple = seen.emplace(points[i], points[i + 1]).second;
        }
        if (simple) {
            std::vector<Edge> es(seen.begin(), seen.end());
            return Graph(n, es);
        }
    }
    throw GraphError("RandomRegular: no simple pairing after " + std::to_string(kMaxAttempts) + " attempts");
}

Graph polarity_graph(int q) {
    require(is_prime(q), "PolarityER needs a prime q (got " + std::to_string(q) + ")");
    std::vector<std::array<int, 3>> pts;
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b) pts.push_back({1, a, b});
    for (int b = 0; b < q; ++b) pts.push_back({0, 1, b});
    pts.push_back({0, 0, 1});
    std::vector<Edge> es;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const long long dot = 1LL * pts[i][0] * pts[j][0] + 1LL * pts[i][1] * pts[j][1] +
                                  1LL * pts[i][2] * pts[j][2];
            if (dot % q == 0) es.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
        }
    return Graph(pts.size(), es);
}

}  // namespace

std::string GenSpec::describe() const {
    std::ostringstream out;
    out << kind_name(kind) << '(';
    switch (kind) {
        case GenKind::Gnp: out << n << ',' << p << ",seed=" << seed; break;
        case GenKind::RandomRegular: out << n << ',' << b << ",seed=" << seed; break;
        case GenKind::CompleteBipartite:
        case GenKind::Dumbbell: out << n << ',' << b; break;
        default: out << n; break;
    }
    out << ')';
    return out.str();
}

GenSpec parse_gen_spec(const std::string& text, std::uint64_t seed) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string piece; std::getline(ss, piece, ':');) parts.push_back(piece);
    auto bad = [&text]() { return GraphError("bad generator spec '" + text + "'"); };
    if (parts.empty()) throw bad();
    auto int_at = [&](std::size_t i) {
        if (i >= parts.size()) throw bad();
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(parts[i], &used);
        } catch (const std::exception&) {
            throw bad();
        }
        if (used != parts[i].size()) throw bad();
        return v;
    };
    auto real_at = [&](std::size_t i) {
        if (i >= parts.size()) throw bad();
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(parts[i], &used);
        } catch (const std::exception&) {
            throw bad();
        }
        if (used != parts[i].size()) throw bad();
        return v;
    };
    const std::string& k = parts[0];
    GenSpec spec;
    std::size_t arity = 2;
    if (k == "complete") spec = GenSpec::complete(int_at(1));
    else if (k == "cycle") spec = GenSpec::cycle(int_at(1));
    else if (k == "path") spec = GenSpec::path(int_at(1));
    else if (k == "polarity") spec = GenSpec::polarity(int_at(1));
    else {
        arity = 3;
        if (k == "gnp") spec = GenSpec::gnp(int_at(1), real_at(2), seed);
        else if (k == "regular") spec = GenSpec::random_regular(int_at(1), int_at(2), seed);
        else if (k == "bipartite") spec = GenSpec::complete_bipartite(int_at(1), int_at(2));
        else if (k == "dumbbell") spec = GenSpec::dumbbell(int_at(1), int_at(2));
        else throw bad();
    }
    if (parts.size() != arity) throw bad();
    return spec;
}

Graph generate(const GenSpec& spec) {
    const int n = spec.n;
    require(n >= 0, "generator size must be non-negative");
    switch (spec.kind) {
        case GenKind::Complete: return complete_graph(n);
        case GenKind::Cycle: {
            require(n >= 3, "Cycle needs n >= 3");
            std::vector<Edge> es;
            for (int v = 0; v < n; ++v) es.emplace_back(v, (v + 1) % n);
            return Graph(n, es);
        }
        case GenKind::Path: {
            std::vector<Edge> es;
            for (int v = 0; v + 1 < n; ++v) es.emplace_back(v, v + 1);
            return Graph(n, es);
        }
        case GenKind::Gnp: {
            require(spec.p >= 0.0 && spec.p <= 1.0, "Gnp needs p in [0,1]");
            std::mt19937_64 rng(spec.seed);
            std::vector<Edge> es;
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v)
                    if (unit_real(rng) < spec.p) es.emplace_back(u, v);
            return Graph(n, es);
        }
        case GenKind::RandomRegular: return random_regular(n, spec.b, spec.seed);
        case GenKind::CompleteBipartite: {
            require(spec.b >= 0, "CompleteBipartite needs non-negative sides");
            std::vector<Edge> es;
            for (int u = 0; u < n; ++u)
                for (int v = 0; v < spec.b; ++v) es.emplace_back(u, n + v);
            return Graph(n + spec.b, es);
        }
        case GenKind::Dumbbell: {
            require(n >= 1 && spec.b >= 1, "Dumbbell needs clique size >= 1 and bridge length >= 1");
            std::vector<Edge> es;
            for (int side = 0; side < 2; ++side)
                for (int u = 0; u < n; ++u)
                    for (int v = u + 1; v < n; ++v) es.emplace_back(side * n + u, side * n + v);
            // Bridge n-1 -> (interior 2n .. 2n+b-2) -> n.
            Vertex prev = n - 1;
            for (int i = 0; i + 1 < spec.b; ++i) {
                es.emplace_back(prev, 2 * n + i);
                prev = 2 * n + i;
            }
            es.emplace_back(prev, n);
            return Graph(2 * n + spec.b - 1, es);
        }
        case GenKind::PolarityER: return polarity_graph(n);
    }
    throw GraphError("unknown generator kind");
}

std::vector<std::string> corpus_names() { return {"tiny", "kstfree", "dense", "sparse"}; }

std::vector<GenSpec> corpus(const std::string& profile, std::uint64_t seed) {
    std::vector<GenSpec> out;
    auto next_seed = [&]() { return mix_seed(seed, out.size()); };
    if (profile == "tiny") {
        for (int n = 1; n <= 7; ++n) out.push_back(GenSpec::complete(n));
        for (int n = 3; n <= 7; ++n) out.push_back(GenSpec::cycle(n));
        for (int n = 1; n <= 7; ++n) out.push_back(GenSpec::path(n));
        for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {1, 4}, {1, 5}, {2, 4}, {3, 3}, {3, 4}})
            out.push_back(GenSpec::complete_bipartite(a, b));
        for (int n = 4; n <= 7; ++n)
            for (double p : {0.3, 0.5, 0.7})
                for (int rep = 0; rep < 2; ++rep) out.push_back(GenSpec::gnp(n, p, next_seed()));
        out.push_back(GenSpec::gnp(5, 0.0, next_seed()));
    } else if (profile == "kstfree") {
        for (int q : {3, 5, 7, 11}) out.push_back(GenSpec::polarity(q));
        out.push_back(GenSpec::gnp(60, 0.05, next_seed()));
        out.push_back(GenSpec::gnp(100, 0.03, next_seed()));
    } else if (profile == "dense") {
        for (int n : {10, 20, 30}) out.push_back(GenSpec::complete(n));
        out.push_back(GenSpec::gnp(40, 0.5, next_seed()));
        out.push_back(GenSpec::gnp(60, 0.7, next_seed()));
    } else if (profile == "sparse") {
        out.push_back(GenSpec::random_regular(100, 3, next_seed()));
        out.push_back(GenSpec::random_regular(200, 3, next_seed()));
        out.push_back(GenSpec::random_regular(60, 4, next_seed()));
        out.push_back(GenSpec::dumbbell(15, 4));
        out.push_back(GenSpec::dumbbell(10, 2));
    } else {
        throw GraphError("unknown corpus profile '" + profile + "'");
    }
    return out;
}

}  // namespace immerse
