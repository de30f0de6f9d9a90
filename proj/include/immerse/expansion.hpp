#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "immerse/graph.hpp"

namespace immerse {

/// Parameters of the sublinear expansion function; k is eps2 * d.
struct RhoParams {
    double eps1 = 0.0;
    double k = 0.0;
};

/// rho(x) = 0 for x < k/5 and eps1 / ln^2(15x/k) otherwise.
double rho(double x, const RhoParams& p);

struct AdversaryResult {
    std::size_t min_size = 0;        // min |N_{G∖F}(X)| over |F| <= budget
    std::vector<Edge> witness;       // an optimal F
};

/// Exact minimum of |N_{G∖F}(X)| over edge sets F with |F| <= budget.
/// Removing u from N(X) costs e(u, X) edges, so deleting the cheapest
/// boundary vertices first is optimal.
AdversaryResult adversarial_neighborhood(const Graph& g, std::span<const Vertex> x,
                                         std::int64_t budget);

/// Edge budget floor(d(G) * rho(|X|) * |X|) granted to the adversary.
std::int64_t adversary_budget(const Graph& g, std::size_t set_size, const RhoParams& p);

enum class VerdictStatus { CertifiedExpander, CertifiedNonExpander, SampledPass };

struct ExpansionWitness {
    std::vector<Vertex> x;
    std::vector<Edge> f;
};

struct ExpansionVerdict {
    VerdictStatus status = VerdictStatus::SampledPass;
    std::optional<ExpansionWitness> witness;
    std::size_t samples_tried = 0;
};

struct CertifyMode {
    enum class Kind { Exhaustive, Sampled } kind = Kind::Exhaustive;
    std::uint64_t seed = 0;
    std::size_t trials = 0;

    static CertifyMode exhaustive() { return {}; }
    static CertifyMode sampled(std::uint64_t seed, std::size_t trials) {
        return {Kind::Sampled, seed, trials};
    }
};

inline constexpr std::size_t kExhaustiveLimit = 20;

/// Checks |N_{G∖F}(X)| >= rho(|X|)|X| for k/2 <= |X| <= n/2 (k = eps2 * d(G)).
/// Exhaustive mode enumerates every qualifying X (n <= 20); sampled mode
/// tries random connected sets plus every vertex-centred ball.
ExpansionVerdict certify_robust_expansion(const Graph& g, double eps1, double eps2,
                                          const CertifyMode& mode);

/// True iff the witness violates the expansion inequality on g.
bool witness_violates(const Graph& g, double eps1, double eps2, const ExpansionWitness& w);

enum class ExtractStatus { Complete, Incomplete, Degenerate };

struct ExtractOptions {
    int max_rounds = 64;
    std::uint64_t seed = 0;
    std::size_t trials = 200;
};

struct ExtractResult {
    Graph graph;
    std::vector<Vertex> to_parent;  // local id -> input id
    ExpansionVerdict verdict;
    ExtractStatus status = ExtractStatus::Complete;
    int rounds = 0;
};

double eta_from_eps1(double eps1, double c = 40.0);

/// Peel-and-split search for a robust expander subgraph: repeatedly drop
/// vertices of degree below half the current average degree, then split
/// along any violating witness and keep the denser side.
ExtractResult extract_robust_expander(const Graph& g, double eps1, double eps2, int max_rounds);
ExtractResult extract_robust_expander(const Graph& g, double eps1, double eps2,
                                      const ExtractOptions& options);

struct PathResult {
    Path path;
    int length = 0;
};

/// Shortest (X1,X2)-path in (G∖F)−Y: endpoints not forbidden, interior
/// outside X1 ∪ X2, at most max_len edges. nullopt when none exists.
std::optional<PathResult> find_avoiding_path(const Graph& g, std::span<const Vertex> x1,
                                             std::span<const Vertex> x2, const AvoidSet& avoid,
                                             int max_len);

/// (2/eps1) ln^3(15n/(eps2 d)), rounded up.
int default_path_budget(std::size_t n, double d, double eps1, double eps2);

/// |B^i_{G−Y}(X)| for i = 0..max_radius.
std::vector<std::size_t> measure_ball_growth(const Graph& g, std::span<const Vertex> x,
                                             std::span<const Vertex> y, int max_radius);

const char* to_string(VerdictStatus s);
const char* to_string(ExtractStatus s);

/// "X: v1 v2 ..." / "F: u1-w1 u2-w2 ..." text form.
void write_witness(std::ostream& out, const ExpansionWitness& w);
ExpansionWitness read_witness(std::istream& in);

}  // namespace immerse
