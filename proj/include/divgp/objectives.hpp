// SPDX-License-Identifier: MIT

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hash_mode.hpp"
#include "tree.hpp"

namespace divgp {

enum class Direction : std::uint8_t { Minimize, Maximize };

enum class ObjectiveKind : std::uint8_t {
    HybridDistance,
    StructuralDistance,
    RecursiveComplexity,
    TreeLength,
    NestedTreeLength,
    VariableCount
};

struct ObjectiveSpec {
    ObjectiveKind kind;

    [[nodiscard]] constexpr auto direction() const noexcept -> Direction
    {
        return is_distance() ? Direction::Maximize : Direction::Minimize;
    }

    [[nodiscard]] constexpr auto is_distance() const noexcept -> bool
    {
        return kind == ObjectiveKind::HybridDistance || kind == ObjectiveKind::StructuralDistance;
    }

    [[nodiscard]] constexpr auto hash_mode() const noexcept -> HashMode
    {
        return kind == ObjectiveKind::StructuralDistance ? HashMode::Structural : HashMode::Hybrid;
    }

    friend constexpr auto operator==(ObjectiveSpec, ObjectiveSpec) -> bool = default;
};

constexpr auto to_string(ObjectiveKind kind) noexcept -> std::string_view
{
    switch (kind) {
    case ObjectiveKind::HybridDistance: return "hybrid_distance";
    case ObjectiveKind::StructuralDistance: return "structural_distance";
    case ObjectiveKind::RecursiveComplexity: return "recursive_complexity";
    case ObjectiveKind::TreeLength: return "tree_length";
    case ObjectiveKind::NestedTreeLength: return "nested_tree_length";
    case ObjectiveKind::VariableCount: return "variable_count";
    }
    return "unknown";
}

inline auto parse_objective_kind(std::string_view s) -> ObjectiveKind
{
    for (auto k : { ObjectiveKind::HybridDistance, ObjectiveKind::StructuralDistance, ObjectiveKind::RecursiveComplexity,
             ObjectiveKind::TreeLength, ObjectiveKind::NestedTreeLength, ObjectiveKind::VariableCount }) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw std::invalid_argument("unknown objective '" + std::string(s) + "'");
}

inline auto tree_length(Tree const& tree) noexcept -> std::size_t { return tree.length(); }

// Visitation length: sum of all subtree sizes.
inline auto nested_tree_length(Tree const& tree) noexcept -> std::size_t
{
    std::size_t total = 0;
    for (auto const& n : tree.nodes()) {
        total += n.size;
    }
    return total;
}

inline auto variable_count(Tree const& tree) noexcept -> std::size_t
{
    std::size_t count = 0;
    for (auto const& n : tree.nodes()) {
        count += n.is_variable() ? 1 : 0;
    }
    return count;
}

inline constexpr double max_complexity = 1e30;

// Constant 1, variable 2; +,- sum and *,/ multiply child complexities;
// sin, cos, exp, log raise 2 to the child complexity. Saturates at max_complexity.
inline auto recursive_complexity(Tree const& tree) -> double
{
    std::vector<double> c(tree.length());
    for (std::size_t i = 0; i < tree.length(); ++i) {
        auto const& node = tree[i];
        double v = 0.0;
        switch (node.type) {
        case NodeType::Constant: v = 1.0; break;
        case NodeType::Variable: v = 2.0; break;
        case NodeType::Add:
        case NodeType::Sub:
            v = 0.0;
            tree.for_each_child(i, [&](std::size_t k) { v += c[k]; });
            break;
        case NodeType::Mul:
        case NodeType::Div:
            v = 1.0;
            tree.for_each_child(i, [&](std::size_t k) { v *= c[k]; });
            break;
        case NodeType::Sin:
        case NodeType::Cos:
        case NodeType::Exp:
        case NodeType::Log:
            v = std::exp2(c[i - 1]);
            break;
        }
        c[i] = std::isfinite(v) ? std::min(v, max_complexity) : max_complexity;
    }
    return c.empty() ? 0.0 : c.back();
}

// f' = f - s, with s the average similarity to the rest of the population.
constexpr auto penalized_fitness(double fitness, double similarity) noexcept -> double
{
    return fitness - similarity;
}

// Objective value of a tree for the non-distance kinds. Distance objectives
// depend on the population and are computed by the algorithms.
inline auto structural_objective(ObjectiveKind kind, Tree const& tree) -> double
{
    switch (kind) {
    case ObjectiveKind::RecursiveComplexity: return recursive_complexity(tree);
    case ObjectiveKind::TreeLength: return static_cast<double>(tree_length(tree));
    case ObjectiveKind::NestedTreeLength: return static_cast<double>(nested_tree_length(tree));
    case ObjectiveKind::VariableCount: return static_cast<double>(variable_count(tree));
    default:
        throw std::invalid_argument("structural_objective: distance objectives need a population");
    }
}

} // namespace divgp
