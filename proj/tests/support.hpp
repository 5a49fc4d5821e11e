// SPDX-License-Identifier: MIT
// Helpers shared by the unit tests and the acceptance suite.

#pragma once

#include <algorithm>
#include <vector>

#include <divgp/divgp.hpp>

namespace divgp::fixtures {

inline auto random_trees(std::size_t n, std::uint64_t seed, TreeLimits limits = {}, std::size_t variables = 10) -> std::vector<Tree>
{
    Random rng(seed);
    PrimitiveSet ps;
    ps.variables = variables;
    std::vector<Tree> trees;
    trees.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        trees.push_back(create_tree_ptc2(rng, limits, ps));
    }
    return trees;
}

// Children of node i, first child first, found by walking the array directly.
inline auto children_of(Tree const& t, std::size_t i) -> std::vector<std::size_t>
{
    std::vector<std::size_t> out;
    auto j = i - 1;
    for (std::size_t k = 0; k < t[i].arity(); ++k) {
        out.push_back(j);
        j -= t[j].size;
    }
    return out;
}

// Rebuilds the tree with the children of every commutative node shuffled.
// Postorder emission writes the last child first so the first child ends at i - 1.
inline auto permute_commutative(Tree const& t, Random& rng) -> Tree
{
    std::vector<Node> out;
    auto rec = [&](auto&& self, std::size_t i) -> void {
        auto ch = children_of(t, i);
        if (t[i].is_commutative()) {
            std::shuffle(ch.begin(), ch.end(), rng);
        }
        for (auto k = ch.size(); k-- > 0;) {
            self(self, ch[k]);
        }
        out.push_back(Node { .type = t[i].type, .variable = t[i].variable, .value = t[i].value });
    };
    rec(rec, t.length() - 1);
    return Tree(std::move(out));
}

// Size and depth recomputed by plain recursion.
struct Shape {
    std::size_t size;
    std::size_t depth;
};

inline auto recursive_shape(Tree const& t, std::size_t i) -> Shape
{
    Shape s { 1, 1 };
    for (auto c : children_of(t, i)) {
        auto const cs = recursive_shape(t, c);
        s.size += cs.size;
        s.depth = std::max(s.depth, cs.depth + 1);
    }
    return s;
}

inline auto shape_consistent(Tree const& t) -> bool
{
    for (std::size_t i = 0; i < t.length(); ++i) {
        auto const s = recursive_shape(t, i);
        if (s.size != t[i].size || s.depth != t[i].depth) {
            return false;
        }
    }
    return recursive_shape(t, t.length() - 1).size == t.length();
}

// O(n^2 m) ranking: peel off the nondominated set repeatedly.
inline auto brute_force_ranks(std::vector<std::vector<double>> const& pts, std::vector<Direction> const& dirs) -> std::vector<std::size_t>
{
    auto better = [&](std::vector<double> const& a, std::vector<double> const& b) {
        bool strict = false;
        for (std::size_t k = 0; k < dirs.size(); ++k) {
            double const x = dirs[k] == Direction::Maximize ? a[k] : -a[k];
            double const y = dirs[k] == Direction::Maximize ? b[k] : -b[k];
            if (x < y) {
                return false;
            }
            if (x > y) {
                strict = true;
            }
        }
        return strict;
    };
    std::vector<std::size_t> rank(pts.size(), 0);
    std::vector<bool> assigned(pts.size(), false);
    std::size_t left = pts.size();
    for (std::size_t r = 0; left > 0; ++r) {
        std::vector<std::size_t> layer;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (assigned[i]) {
                continue;
            }
            bool dominated = false;
            for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
                dominated = !assigned[j] && j != i && better(pts[j], pts[i]);
            }
            if (!dominated) {
                layer.push_back(i);
            }
        }
        for (auto i : layer) {
            rank[i] = r;
            assigned[i] = true;
        }
        left -= layer.size();
    }
    return rank;
}

} // namespace divgp::fixtures
