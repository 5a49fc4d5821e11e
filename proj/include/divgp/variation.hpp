// SPDX-License-Identifier: MIT

#pragma once

#include <cmath>
#include <vector>

#include "creator.hpp"
#include "random.hpp"
#include "tree.hpp"

namespace divgp {

// Child = parent1 with the subtree at `cut` replaced by the subtree of parent2 at `graft`.
inline auto crossover_at(Tree const& parent1, std::size_t cut, Tree const& parent2, std::size_t graft) -> Tree
{
    return replace_subtree(parent1, cut, parent2.subtree(graft));
}

// Subtree crossover. The (cut, graft) pair is drawn uniformly from all
// combinations whose child stays within `limits`; parent1 is returned unchanged
// when no such combination exists.
inline auto subtree_crossover(Random& rng, Tree const& parent1, Tree const& parent2, TreeLimits const& limits) -> Tree
{
    auto const level = parent1.levels();
    auto const n1 = parent1.length();
    auto const n2 = parent2.length();

    auto legal = [&](std::size_t i, std::size_t j) {
        auto const len = n1 - parent1[i].size + parent2[j].size;
        auto const depth = level[i] - 1 + parent2[j].depth;
        // the rest of parent1 keeps its depth, which is already within limits
        return len <= limits.max_length && depth <= limits.max_depth;
    };

    std::size_t count = 0;
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            count += legal(i, j) ? 1 : 0;
        }
    }
    if (count == 0) {
        return parent1;
    }
    auto pick = random::index(rng, count);
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            if (legal(i, j) && pick-- == 0) {
                return crossover_at(parent1, i, parent2, j);
            }
        }
    }
    return parent1; // unreachable
}

enum class MutationKind {
    ChangeSymbol,
    SinglePoint,
    RemoveBranch,
    ReplaceBranch
};

namespace mutation {
    // Swaps the symbol of one node for another of equal arity. Leaves are
    // redrawn as fresh leaves (constant or variable).
    inline auto change_symbol(Random& rng, Tree const& tree, PrimitiveSet const& ps) -> Tree
    {
        auto nodes = std::vector<Node>(tree.nodes().begin(), tree.nodes().end());
        auto const i = random::index(rng, nodes.size());
        if (nodes[i].is_leaf()) {
            nodes[i] = random_leaf(rng, ps);
        } else {
            auto candidates = ps.functions_with_arity(nodes[i].arity(), nodes[i].type);
            if (!candidates.empty()) {
                nodes[i].type = candidates[random::index(rng, candidates.size())];
            }
        }
        return Tree(std::move(nodes));
    }

    // Perturbs one leaf coefficient by N(0, 1) * (|value| + 1).
    inline auto single_point(Random& rng, Tree const& tree) -> Tree
    {
        auto nodes = std::vector<Node>(tree.nodes().begin(), tree.nodes().end());
        std::vector<std::size_t> leaves;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].is_leaf()) {
                leaves.push_back(i);
            }
        }
        auto& leaf = nodes[leaves[random::index(rng, leaves.size())]];
        leaf.value += random::normal(rng, 0.0, 1.0) * (std::abs(leaf.value) + 1.0);
        return Tree(std::move(nodes));
    }

    inline auto remove_branch(Random& rng, Tree const& tree, PrimitiveSet const& ps) -> Tree
    {
        auto const i = random::index(rng, tree.length());
        auto const leaf = random_leaf(rng, ps);
        return replace_subtree(tree, i, std::span<Node const>(&leaf, 1));
    }

    inline auto replace_branch(Random& rng, Tree const& tree, TreeLimits const& limits, PrimitiveSet const& ps) -> Tree
    {
        auto const i = random::index(rng, tree.length());
        auto const level = tree.levels()[i];
        TreeLimits sub {
            .max_length = limits.max_length - (tree.length() - tree[i].size),
            .max_depth = limits.max_depth - (level - 1),
        };
        auto const branch = create_tree_ptc2(rng, sub, ps);
        return replace_subtree(tree, i, branch.nodes());
    }
} // namespace mutation

inline auto mutate(Random& rng, Tree const& tree, MutationKind kind, TreeLimits const& limits, PrimitiveSet const& ps) -> Tree
{
    switch (kind) {
    case MutationKind::ChangeSymbol:
        return mutation::change_symbol(rng, tree, ps);
    case MutationKind::SinglePoint:
        return mutation::single_point(rng, tree);
    case MutationKind::RemoveBranch:
        return mutation::remove_branch(rng, tree, ps);
    case MutationKind::ReplaceBranch:
        return mutation::replace_branch(rng, tree, limits, ps);
    }
    return tree;
}

// Applies one of the four mutation operators, chosen uniformly.
inline auto mutate(Random& rng, Tree const& tree, TreeLimits const& limits, PrimitiveSet const& ps) -> Tree
{
    auto const kind = static_cast<MutationKind>(random::index(rng, 4));
    return mutate(rng, tree, kind, limits, ps);
}

} // namespace divgp
