#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "immerse/graph.hpp"

namespace immerse {

enum class GenKind { Complete, Cycle, Path, Gnp, RandomRegular, CompleteBipartite, Dumbbell, PolarityER };

/// Generator request. `n` and `b` are the kind's integer parameters
/// (Dumbbell: clique size n, bridge length b; CompleteBipartite: sides n, b;
/// RandomRegular: n vertices of degree b; PolarityER: prime q in n).
struct GenSpec {
    GenKind kind = GenKind::Complete;
    int n = 0;
    int b = 0;
    double p = 0.0;
    std::uint64_t seed = 0;

    static GenSpec complete(int n) { return {GenKind::Complete, n, 0, 0.0, 0}; }
    static GenSpec cycle(int n) { return {GenKind::Cycle, n, 0, 0.0, 0}; }
    static GenSpec path(int n) { return {GenKind::Path, n, 0, 0.0, 0}; }
    static GenSpec gnp(int n, double p, std::uint64_t seed) { return {GenKind::Gnp, n, 0, p, seed}; }
    static GenSpec random_regular(int n, int d, std::uint64_t seed) {
        return {GenKind::RandomRegular, n, d, 0.0, seed};
    }
    static GenSpec complete_bipartite(int a, int b) { return {GenKind::CompleteBipartite, a, b, 0.0, 0}; }
    static GenSpec dumbbell(int clique, int bridge) { return {GenKind::Dumbbell, clique, bridge, 0.0, 0}; }
    static GenSpec polarity(int q) { return {GenKind::PolarityER, q, 0, 0.0, 0}; }

    /// Human-readable form, e.g. "Complete(5)" or "Gnp(40,0.5,seed=3)".
    std::string describe() const;
};

/// Parses "complete:5", "cycle:5", "path:6", "gnp:50:0.1", "regular:100:3",
/// "bipartite:2:3", "dumbbell:15:4", "polarity:7". The seed is supplied
/// separately.
GenSpec parse_gen_spec(const std::string& text, std::uint64_t seed = 0);

/// Deterministic for a fixed spec. Throws GraphError on invalid parameters.
Graph generate(const GenSpec& spec);

/// Named corpora: "tiny", "kstfree", "dense", "sparse".
std::vector<GenSpec> corpus(const std::string& profile, std::uint64_t seed);
std::vector<std::string> corpus_names();

bool is_prime(int q);
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace immerse
