// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "node.hpp"

namespace divgp {

struct TreeLimits {
    std::size_t max_length { 50 };
    std::size_t max_depth { 12 };

    void validate() const
    {
        if (max_length < 1 || max_depth < 1) {
            throw std::invalid_argument("tree limits: max length and max depth must be at least 1");
        }
    }
};

// Expression tree stored as a postorder array. The root is the last element.
// For an internal node at index i its first child is at i - 1, the next one at
// (i - 1) - size(first child), and so on.
class Tree {
public:
    Tree() = default;

    explicit Tree(std::vector<Node> nodes)
        : nodes_(std::move(nodes))
    {
        update(nodes_);
    }

    [[nodiscard]] auto nodes() const noexcept -> std::span<Node const> { return nodes_; }
    [[nodiscard]] auto length() const noexcept -> std::size_t { return nodes_.size(); }
    [[nodiscard]] auto empty() const noexcept -> bool { return nodes_.empty(); }
    [[nodiscard]] auto depth() const noexcept -> std::size_t { return nodes_.empty() ? 0 : nodes_.back().depth; }
    [[nodiscard]] auto root() const -> Node const& { return nodes_.back(); }
    [[nodiscard]] auto operator[](std::size_t i) const -> Node const& { return nodes_[i]; }

    [[nodiscard]] auto within(TreeLimits const& limits) const noexcept -> bool
    {
        return length() <= limits.max_length && depth() <= limits.max_depth;
    }

    // Calls f(child_index) for each child of node i, first child first.
    template <typename F>
    void for_each_child(std::size_t i, F&& f) const
    {
        for_each_child(std::span<Node const>(nodes_), i, std::forward<F>(f));
    }

    template <typename F>
    static void for_each_child(std::span<Node const> nodes, std::size_t i, F&& f)
    {
        auto const n = nodes[i].arity();
        auto j = i - 1;
        for (std::size_t k = 0; k < n; ++k) {
            f(j);
            j -= nodes[j].size;
        }
    }

    // First index of the subtree rooted at i.
    [[nodiscard]] auto subtree_begin(std::size_t i) const -> std::size_t { return i + 1 - nodes_[i].size; }

    [[nodiscard]] auto subtree(std::size_t i) const -> std::span<Node const>
    {
        return std::span<Node const>(nodes_).subspan(subtree_begin(i), nodes_[i].size);
    }

    // Level of every node, root at level 1.
    [[nodiscard]] auto levels() const -> std::vector<std::size_t>
    {
        std::vector<std::size_t> level(nodes_.size(), 1);
        for (auto i = nodes_.size(); i-- > 0;) {
            for_each_child(i, [&](std::size_t c) { level[c] = level[i] + 1; });
        }
        return level;
    }

    // Recomputes size and depth of every node with a single forward pass.
    // Throws if the array does not describe exactly one well-formed tree.
    static void update(std::span<Node> nodes)
    {
        std::size_t open = 0; // number of complete subtrees not yet consumed by a parent
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            auto& node = nodes[i];
            auto const n = node.arity();
            if (n > open) {
                throw std::invalid_argument("malformed postorder array: missing operands");
            }
            node.size = 1;
            node.depth = 1;
            auto j = i - 1;
            for (std::size_t k = 0; k < n; ++k) {
                node.size += nodes[j].size;
                node.depth = std::max(node.depth, nodes[j].depth + 1);
                j -= nodes[j].size;
            }
            open = open - n + 1;
        }
        if (!nodes.empty() && open != 1) {
            throw std::invalid_argument("malformed postorder array: more than one root");
        }
    }

    friend auto operator==(Tree const&, Tree const&) -> bool = default;

private:
    std::vector<Node> nodes_;
};

// Returns `tree` with the subtree rooted at `index` replaced by `replacement`.
inline auto replace_subtree(Tree const& tree, std::size_t index, std::span<Node const> replacement) -> Tree
{
    auto const nodes = tree.nodes();
    auto const begin = tree.subtree_begin(index);
    std::vector<Node> result;
    result.reserve(nodes.size() - nodes[index].size + replacement.size());
    result.insert(result.end(), nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(begin));
    result.insert(result.end(), replacement.begin(), replacement.end());
    result.insert(result.end(), nodes.begin() + static_cast<std::ptrdiff_t>(index) + 1, nodes.end());
    return Tree(std::move(result));
}

} // namespace divgp
