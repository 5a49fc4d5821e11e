// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "objectives.hpp"

namespace divgp {

// a dominates b: no worse in every objective and strictly better in one.
inline auto dominates(std::span<double const> a, std::span<double const> b, std::span<Direction const> directions) -> bool
{
    bool better = false;
    for (std::size_t k = 0; k < directions.size(); ++k) {
        auto const x = directions[k] == Direction::Maximize ? -a[k] : a[k];
        auto const y = directions[k] == Direction::Maximize ? -b[k] : b[k];
        if (x > y) {
            return false;
        }
        better = better || x < y;
    }
    return better;
}

struct NondominatedFronts {
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<std::size_t> rank;
};

// Fast nondominated sorting (domination counts and dominated sets).
inline auto fast_nondominated_sort(std::vector<std::vector<double>> const& points, std::span<Direction const> directions)
    -> NondominatedFronts
{
    auto const n = points.size();
    for (auto const& p : points) {
        if (p.size() != directions.size()) {
            throw std::invalid_argument("fast_nondominated_sort: objective vectors must match the direction count");
        }
    }
    NondominatedFronts result;
    result.rank.assign(n, 0);
    if (n == 0) {
        return result;
    }
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::size_t> count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(points[i], points[j], directions)) {
                dominated[i].push_back(j);
                ++count[j];
            } else if (dominates(points[j], points[i], directions)) {
                dominated[j].push_back(i);
                ++count[i];
            }
        }
    }
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i) {
        if (count[i] == 0) {
            current.push_back(i);
        }
    }
    std::size_t r = 0;
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (auto i : current) {
            result.rank[i] = r;
            for (auto j : dominated[i]) {
                if (--count[j] == 0) {
                    next.push_back(j);
                }
            }
        }
        std::sort(next.begin(), next.end());
        result.fronts.push_back(std::move(current));
        current = std::move(next);
        ++r;
    }
    return result;
}

// Crowding distance of each member of one front. Boundary members of every
// objective with a non-zero range get +infinity; fronts of one or two members
// are all boundary.
inline auto crowding_distance(std::vector<std::vector<double>> const& front) -> std::vector<double>
{
    constexpr auto inf = std::numeric_limits<double>::infinity();
    auto const n = front.size();
    if (n <= 2) {
        return std::vector<double>(n, inf);
    }
    auto const m = front.front().size();
    std::vector<double> distance(n, 0.0);
    std::vector<std::size_t> idx(n);
    for (std::size_t k = 0; k < m; ++k) {
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return front[a][k] < front[b][k]; });
        auto const lo = front[idx.front()][k];
        auto const hi = front[idx.back()][k];
        auto const range = hi - lo;
        if (!(range > 0.0)) {
            continue;
        }
        distance[idx.front()] = inf;
        distance[idx.back()] = inf;
        for (std::size_t p = 1; p + 1 < n; ++p) {
            distance[idx[p]] += (front[idx[p + 1]][k] - front[idx[p - 1]][k]) / range;
        }
    }
    return distance;
}

} // namespace divgp
