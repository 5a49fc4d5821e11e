// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "random.hpp"
#include "tree.hpp"

namespace divgp {

// Distributions used when a fresh leaf is drawn.
struct LeafInitializer {
    double constant_min { -20.0 };
    double constant_max { 20.0 };
    double weight_mean { 1.0 };
    double weight_stddev { 1.0 };
    double variable_probability { 0.5 };
};

struct PrimitiveSet {
    std::vector<NodeType> functions { all_functions.begin(), all_functions.end() };
    std::size_t variables { 1 };
    LeafInitializer leaves {};

    void validate() const
    {
        if (variables == 0 && leaves.variable_probability > 0.0) {
            throw std::invalid_argument("primitive set: variables requested but dataset has no input columns");
        }
        for (auto f : functions) {
            if (is_leaf(f)) {
                throw std::invalid_argument("primitive set: functions must not contain leaf types");
            }
        }
    }

    // Functions of the given arity, excluding `except`.
    [[nodiscard]] auto functions_with_arity(std::size_t n, NodeType except) const -> std::vector<NodeType>
    {
        std::vector<NodeType> out;
        for (auto f : functions) {
            if (arity(f) == n && f != except) {
                out.push_back(f);
            }
        }
        return out;
    }
};

inline auto random_leaf(Random& rng, PrimitiveSet const& ps) -> Node
{
    auto const& li = ps.leaves;
    if (ps.variables > 0 && random::bernoulli(rng, li.variable_probability)) {
        auto idx = static_cast<std::uint32_t>(random::index(rng, ps.variables));
        return Node::var(idx, random::normal(rng, li.weight_mean, li.weight_stddev));
    }
    return Node::constant(random::uniform(rng, li.constant_min, li.constant_max));
}

// Probabilistic tree creator (PTC2). The target length is drawn uniformly from
// [1, max_length]; open argument slots are expanded in random order with
// functions until the target is reached, then closed with leaves. A function is
// only placed when its arity still fits into max_length and its children do not
// exceed max_depth, so the result always respects both limits.
inline auto create_tree_ptc2(Random& rng, TreeLimits const& limits, PrimitiveSet const& ps) -> Tree
{
    limits.validate();

    auto const target = 1 + random::index(rng, limits.max_length);

    struct Proto {
        Node node;
        std::vector<std::size_t> children;
    };
    struct Slot {
        std::size_t parent;
        std::size_t depth;
    };
    std::vector<Proto> proto;
    std::vector<Slot> open;

    auto pick_function = [&](std::size_t budget) -> std::optional<NodeType> {
        // budget: how many more argument slots the tree can still accommodate
        std::vector<NodeType> candidates;
        for (auto f : ps.functions) {
            if (arity(f) <= budget) {
                candidates.push_back(f);
            }
        }
        if (candidates.empty()) {
            return std::nullopt;
        }
        return candidates[random::index(rng, candidates.size())];
    };

    auto place = [&](Node node, std::size_t depth, std::optional<std::size_t> parent) {
        auto const id = proto.size();
        proto.push_back({ node, {} });
        if (parent) {
            proto[*parent].children.push_back(id);
        }
        for (std::size_t k = 0; k < node.arity(); ++k) {
            open.push_back({ id, depth + 1 });
        }
    };

    std::optional<NodeType> root_fn;
    if (target > 1 && limits.max_depth > 1) {
        root_fn = pick_function(limits.max_length - 1);
    }
    if (!root_fn) {
        return Tree({ random_leaf(rng, ps) });
    }
    place(Node::function(*root_fn), 1, std::nullopt);

    while (!open.empty() && proto.size() + open.size() < target) {
        auto const k = random::index(rng, open.size());
        auto const slot = open[k];
        open[k] = open.back();
        open.pop_back();

        std::optional<NodeType> fn;
        if (slot.depth < limits.max_depth) {
            // after placing this node: proto.size() + 1 placed, open.size() + arity pending
            auto const used = proto.size() + 1 + open.size();
            fn = pick_function(limits.max_length - used);
        }
        place(fn ? Node::function(*fn) : random_leaf(rng, ps), slot.depth, slot.parent);
    }
    while (!open.empty()) {
        auto const slot = open.back();
        open.pop_back();
        place(random_leaf(rng, ps), slot.depth, slot.parent);
    }

    // emit postorder with the first child adjacent to its parent
    std::vector<Node> nodes;
    nodes.reserve(proto.size());
    auto emit = [&](auto&& self, std::size_t id) -> void {
        auto const& ch = proto[id].children;
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) {
            self(self, *it);
        }
        nodes.push_back(proto[id].node);
    };
    emit(emit, 0);
    return Tree(std::move(nodes));
}

} // namespace divgp
