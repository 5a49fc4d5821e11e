// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "bottom_up.hpp"
#include "creator.hpp"
#include "distance.hpp"

namespace divgp {

struct BenchConfig {
    std::size_t n { 1000 };
    std::size_t length { 50 }; // maximum tree length
    std::size_t depth { 12 };
    std::size_t variables { 10 };
    HashMode mode { HashMode::Hybrid };
    std::uint64_t seed { 1 };
    std::size_t warmup_trees { 100 };
    // Pair budgets for the two slow procedures; 0 measures every pair. Capped
    // runs are extrapolated linearly to the full pair count.
    std::size_t baseline_pairs { 0 };
    std::size_t single_pairs { 0 };
    bool run_baseline { true };
};

struct BenchPhase {
    std::string name;
    double ms { 0.0 };
};

struct BenchTiming {
    std::size_t pairs_measured { 0 };
    double measured_ms { 0.0 };
    double estimated_ms { 0.0 }; // extrapolated to all pairs
};

struct BenchReport {
    BenchConfig config;
    std::size_t pairs { 0 };
    double mean_length { 0.0 };
    std::optional<BenchTiming> bottom_up;
    BenchTiming single;
    BenchTiming batch;
    std::vector<BenchPhase> phases;
    double max_baseline_deviation { 0.0 }; // |bottom-up - batch| over measured pairs
    bool single_matches_batch { true };
};

inline auto bench_trees(BenchConfig const& cfg) -> std::vector<Tree>
{
    Random rng(random::mix_seed(cfg.seed));
    TreeLimits const limits { cfg.length, cfg.depth };
    PrimitiveSet ps;
    ps.variables = cfg.variables;
    std::vector<Tree> trees;
    trees.reserve(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        trees.push_back(create_tree_ptc2(rng, limits, ps));
    }
    return trees;
}

namespace detail {
    // Visits the first `budget` pairs (i > j) in row order; 0 = all.
    template <typename F>
    auto for_pairs(std::size_t n, std::size_t budget, F&& f) -> std::size_t
    {
        std::size_t done = 0;
        for (std::size_t i = 1; i < n; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if (budget != 0 && done == budget) {
                    return done;
                }
                f(i, j);
                ++done;
            }
        }
        return done;
    }

    inline auto timing(std::size_t measured, std::size_t total, double ms) -> BenchTiming
    {
        auto const scale = measured == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(measured);
        return { measured, ms, ms * scale };
    }
} // namespace detail

// Times bottom-up, single-mode and batch-mode distance computation over all
// pairs of cfg.n random trees, plus a phase breakdown of batch mode.
inline auto bench_distance(BenchConfig const& cfg) -> BenchReport
{
    using Clock = std::chrono::steady_clock;
    auto ms_since = [](Clock::time_point t) { return std::chrono::duration<double, std::milli>(Clock::now() - t).count(); };
    if (cfg.n < 2) {
        throw std::invalid_argument("bench_distance: at least two trees required");
    }

    BenchReport report;
    report.config = cfg;
    auto const trees = bench_trees(cfg);
    auto const n = trees.size();
    report.pairs = n * (n - 1) / 2;
    for (auto const& t : trees) {
        report.mean_length += static_cast<double>(t.length());
    }
    report.mean_length /= static_cast<double>(n);

    { // warm-up
        auto const m = std::min(cfg.warmup_trees, n);
        std::span<Tree const> head(trees.data(), std::max<std::size_t>(m, 1));
        auto dm = distance_matrix(head, cfg.mode);
        volatile double sink = dm.size() > 1 ? dm(1, 0) : 0.0;
        (void)sink;
    }

    // batch mode, one phase at a time
    std::vector<HashSequence> hashes(n);
    TreeHasher hasher(cfg.mode);
    hasher.set_sort_children(false);
    auto t = Clock::now();
    for (std::size_t i = 0; i < n; ++i) {
        hasher.hash(trees[i], hashes[i].values);
    }
    auto const hash_unsorted_ms = ms_since(t);

    hasher.set_sort_children(true);
    t = Clock::now();
    for (std::size_t i = 0; i < n; ++i) {
        hasher.hash(trees[i], hashes[i].values);
    }
    auto const hash_ms = ms_since(t);

    t = Clock::now();
    for (auto& h : hashes) {
        std::sort(h.values.begin(), h.values.end());
        h.sorted = true;
    }
    auto const sort_ms = ms_since(t);

    t = Clock::now();
    auto const batch = distance_matrix(hashes);
    auto const merge_ms = ms_since(t);

    report.phases = {
        { "compute hash value sequences", hash_unsorted_ms },
        { "sort child nodes", std::max(0.0, hash_ms - hash_unsorted_ms) },
        { "sort hash value sequences", sort_ms },
        { "compute distance (merge count)", merge_ms },
    };
    auto const batch_ms = hash_ms + sort_ms + merge_ms;
    report.batch = { report.pairs, batch_ms, batch_ms };

    // single mode: both trees re-hashed for every pair
    t = Clock::now();
    std::vector<double> single;
    single.reserve(cfg.single_pairs == 0 ? report.pairs : std::min(cfg.single_pairs, report.pairs));
    auto measured = detail::for_pairs(n, cfg.single_pairs, [&](std::size_t i, std::size_t j) {
        single.push_back(tree_distance(trees[i], trees[j], cfg.mode));
    });
    report.single = detail::timing(measured, report.pairs, ms_since(t));
    std::size_t k = 0;
    detail::for_pairs(n, cfg.single_pairs, [&](std::size_t i, std::size_t j) {
        report.single_matches_batch = report.single_matches_batch && single[k++] == batch(i, j);
    });

    if (cfg.run_baseline) {
        std::vector<double> baseline;
        baseline.reserve(cfg.baseline_pairs == 0 ? report.pairs : std::min(cfg.baseline_pairs, report.pairs));
        BottomUpDistance bottom_up(cfg.mode);
        t = Clock::now();
        measured = detail::for_pairs(n, cfg.baseline_pairs, [&](std::size_t i, std::size_t j) {
            baseline.push_back(bottom_up(trees[i], trees[j]));
        });
        report.bottom_up = detail::timing(measured, report.pairs, ms_since(t));
        k = 0;
        detail::for_pairs(n, cfg.baseline_pairs, [&](std::size_t i, std::size_t j) {
            report.max_baseline_deviation = std::max(report.max_baseline_deviation, std::abs(baseline[k++] - batch(i, j)));
        });
    }
    return report;
}

} // namespace divgp
