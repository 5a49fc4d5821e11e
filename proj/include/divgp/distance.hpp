// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "format.hpp"
#include "hash.hpp"

namespace divgp {

struct MergeCount {
    std::size_t count { 0 };      // size of the multiset intersection
    std::size_t iterations { 0 }; // loop iterations performed
};

// Two-pointer merge over sorted hash arrays. The loop stops as soon as either
// array is exhausted.
inline auto merge_count(std::span<Hash const> lhs, std::span<Hash const> rhs) noexcept -> MergeCount
{
    std::size_t i = 0;
    std::size_t j = 0;
    MergeCount mc;
    // branch-free step: equal values advance both pointers
    while (i < lhs.size() && j < rhs.size()) {
        auto const a = lhs[i];
        auto const b = rhs[j];
        ++mc.iterations;
        mc.count += static_cast<std::size_t>(a == b);
        i += static_cast<std::size_t>(a <= b);
        j += static_cast<std::size_t>(b <= a);
    }
    return mc;
}

// Tree distance 1 - 2|M| / (|H1| + |H2|) over two sorted hash arrays.
inline auto merge_count_distance(std::span<Hash const> lhs, std::span<Hash const> rhs) -> double
{
    if (lhs.empty() || rhs.empty()) {
        throw std::invalid_argument("merge_count_distance: hash sequences must be non-empty");
    }
    auto const count = merge_count(lhs, rhs).count;
    return 1.0 - 2.0 * static_cast<double>(count) / static_cast<double>(lhs.size() + rhs.size());
}

inline auto merge_count_distance(HashSequence const& lhs, HashSequence const& rhs) -> double
{
    if (!lhs.sorted || !rhs.sorted) {
        throw std::invalid_argument("merge_count_distance: hash sequences must be sorted");
    }
    return merge_count_distance(lhs.span(), rhs.span());
}

// Single-mode distance: both trees are hashed anew.
inline auto tree_distance(Tree const& lhs, Tree const& rhs, HashMode mode) -> double
{
    return merge_count_distance(sorted_hash_sequence(lhs, mode), sorted_hash_sequence(rhs, mode));
}

// Symmetric matrix with zero diagonal; only the strict lower triangle is stored.
class DistanceMatrix {
public:
    DistanceMatrix() = default;

    explicit DistanceMatrix(std::size_t n)
        : n_(n)
        , values_(n * (n - (n > 0 ? 1 : 0)) / 2, 0.0)
    {
    }

    [[nodiscard]] auto size() const noexcept -> std::size_t { return n_; }
    [[nodiscard]] auto packed() const noexcept -> std::span<double const> { return values_; }

    [[nodiscard]] auto operator()(std::size_t i, std::size_t j) const -> double
    {
        if (i == j) {
            return 0.0;
        }
        return values_[index(i, j)];
    }

    void set(std::size_t i, std::size_t j, double d)
    {
        if (i == j) {
            throw std::invalid_argument("DistanceMatrix: diagonal is fixed at zero");
        }
        values_[index(i, j)] = d;
    }

    friend auto operator==(DistanceMatrix const&, DistanceMatrix const&) -> bool = default;

private:
    static constexpr auto index(std::size_t i, std::size_t j) noexcept -> std::size_t
    {
        if (i < j) {
            std::swap(i, j);
        }
        return i * (i - 1) / 2 + j;
    }

    std::size_t n_ { 0 };
    std::vector<double> values_;
};

// Fills the matrix from pre-sorted hash sequences. Rows are distributed over
// `threads` workers; each entry is computed independently, so the result does
// not depend on the thread count.
inline auto distance_matrix(std::span<HashSequence const> hashes, std::size_t threads = 1) -> DistanceMatrix
{
    auto const n = hashes.size();
    DistanceMatrix dm(n);
    for (auto const& h : hashes) {
        if (!h.sorted || h.values.empty()) {
            throw std::invalid_argument("distance_matrix: hash sequences must be sorted and non-empty");
        }
    }
    auto fill_rows = [&](std::size_t first, std::size_t stride) {
        for (auto i = first; i < n; i += stride) {
            for (std::size_t j = 0; j < i; ++j) {
                dm.set(i, j, merge_count_distance(hashes[i].span(), hashes[j].span()));
            }
        }
    };
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
    if (threads == 1) {
        fill_rows(0, 1);
    } else {
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            workers.emplace_back(fill_rows, t, threads);
        }
    }
    return dm;
}

// Batch mode: every tree is hashed and sorted exactly once.
inline auto distance_matrix(std::span<Tree const> population, HashMode mode, std::size_t threads = 1) -> DistanceMatrix
{
    if (population.empty()) {
        throw std::invalid_argument("distance_matrix: population must not be empty");
    }
    std::vector<HashSequence> hashes;
    hashes.reserve(population.size());
    TreeHasher hasher(mode);
    for (auto const& tree : population) {
        auto& seq = hashes.emplace_back();
        hasher.hash(tree, seq.values);
        std::sort(seq.values.begin(), seq.values.end());
        seq.sorted = true;
    }
    return distance_matrix(hashes, threads);
}

// Average distance of each individual to the rest of the population (0 for n = 1).
inline auto average_distances(DistanceMatrix const& dm) -> std::vector<double>
{
    auto const n = dm.size();
    std::vector<double> sum(n, 0.0);
    if (n < 2) {
        return sum;
    }
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            auto const d = dm(i, j);
            sum[i] += d;
            sum[j] += d;
        }
    }
    for (auto& s : sum) {
        s /= static_cast<double>(n - 1);
    }
    return sum;
}

// Mean pairwise similarity (1 - d) over all unordered pairs.
inline auto average_population_similarity(DistanceMatrix const& dm) -> double
{
    if (dm.size() < 2) {
        throw std::invalid_argument("average_population_similarity: at least two individuals required");
    }
    auto const v = dm.packed();
    auto const total = std::accumulate(v.begin(), v.end(), 0.0);
    return 1.0 - total / static_cast<double>(v.size());
}

// CSV export: a line with n, then n rows of n values. `order`, when given,
// permutes rows and columns (row k shows individual order[k]).
inline void write_csv(std::ostream& out, DistanceMatrix const& dm, std::span<std::size_t const> order = {})
{
    auto const n = dm.size();
    if (!order.empty() && order.size() != n) {
        throw std::invalid_argument("write_csv: order must be a permutation of the matrix indices");
    }
    auto at = [&](std::size_t k) { return order.empty() ? k : order[k]; };
    out << n << '\n';
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (c > 0) {
                out << ',';
            }
            out << format_double(dm(at(r), at(c)));
        }
        out << '\n';
    }
}

} // namespace divgp
