#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "immerse/dense.hpp"
#include "immerse/expansion.hpp"
#include "immerse/immersion.hpp"
#include "immerse/sparse.hpp"
#include "immerse/util.hpp"

namespace immerse {

enum class Mode { Paper, Practical };

const char* to_string(Mode m);
Mode parse_mode(const std::string& text);

struct Overrides {
    std::optional<int> m, kappa, r, ball_exp, path_budget, separation;
    std::optional<Rational> z1_threshold;
    std::optional<double> dense_gate;  // density threshold replacing the mode's gate
};

struct EmbedConfig {
    double eps1 = 1.0 / 400;
    double eps2 = 0.01;
    Rational eta{1, 10};
    int s = 2, t = 2;
    Mode mode = Mode::Practical;
    Overrides overrides;
    std::uint64_t seed = 0;
    double time_budget_secs = 0;  // 0: unlimited
    bool gated_only = false;      // skip the route the density gate did not select

    /// Paper mode requires eps1 <= 1/400, eps2 < 1/2, eta >= max(40 eps1/ln 3, 5 eps2).
    /// Throws std::invalid_argument when violated.
    void validate() const;
    /// eta = eps/10, eps1 = eps ln3/500, eps2 = eps/60.
    static EmbedConfig from_epsilon(const Rational& eps);

    SparseParams sparse_params(const Graph& g) const;
    DenseParams dense_params(const Graph& g) const;
};

struct EmbedReport {
    std::string route = "baseline";   // candidate that won
    std::string paper_case;            // "dense" or "sparse/<case>"
    int achieved = 0;
    int baseline_order = 0;
    Rational d{0};
    double target = 0;                 // (1 - 9 eta) d
    std::size_t expander_n = 0, expander_m = 0;
    std::string extract_status;
    std::string expander_verdict;
    double gate_value = 0, gate_threshold = 0;
    bool dense_gate = false;
    std::size_t z1_size = 0;
    Rational d_prime{0};
    bool d_prime_ok = false;
    bool audits_ok = true;
    bool budget_exceeded = false;
    double wall_seconds = 0;
    std::string certificate_path;
    std::vector<std::pair<std::string, int>> candidates;  // verified orders
    RunLog log;

    /// "# key=value" lines describing parameters and outcome.
    std::vector<std::string> header(const EmbedConfig& cfg) const;
};

/// Baseline, expander extraction, density-gated dense or sparse route; the
/// largest verified immersion wins.
std::pair<Immersion, EmbedReport> embed_clique_immersion(const Graph& g, const EmbedConfig& cfg);

struct BenchOptions {
    int workers = 1;
    bool timing = false;
    int oracle_max_n = 7;
};

/// Tab-separated table, one row per corpus graph in corpus order.
std::string run_benchmark(const std::string& profile, const EmbedConfig& cfg, const BenchOptions& opts = {});

}  // namespace immerse
