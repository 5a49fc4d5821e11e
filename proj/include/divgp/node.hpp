// SPDX-License-Identifier: MIT

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace divgp {

enum class NodeType : std::uint8_t {
    Add,
    Sub,
    Mul,
    Div,
    Sin,
    Cos,
    Exp,
    Log,
    Constant,
    Variable
};

inline constexpr std::size_t node_type_count = 10;
inline constexpr std::size_t max_arity = 2;

inline constexpr std::array<NodeType, 8> all_functions {
    NodeType::Add, NodeType::Sub, NodeType::Mul, NodeType::Div,
    NodeType::Sin, NodeType::Cos, NodeType::Exp, NodeType::Log
};

constexpr auto arity(NodeType type) noexcept -> std::size_t
{
    switch (type) {
    case NodeType::Add:
    case NodeType::Sub:
    case NodeType::Mul:
    case NodeType::Div:
        return 2;
    case NodeType::Sin:
    case NodeType::Cos:
    case NodeType::Exp:
    case NodeType::Log:
        return 1;
    default:
        return 0;
    }
}

constexpr auto is_commutative(NodeType type) noexcept -> bool
{
    return type == NodeType::Add || type == NodeType::Mul;
}

constexpr auto is_leaf(NodeType type) noexcept -> bool { return arity(type) == 0; }

constexpr auto symbol(NodeType type) noexcept -> std::string_view
{
    constexpr std::array<std::string_view, node_type_count> names {
        "+", "-", "*", "/", "sin", "cos", "exp", "log", "constant", "variable"
    };
    return names[static_cast<std::size_t>(type)];
}

// A single postorder array entry. `value` holds the constant value for
// Constant nodes and the weight for Variable nodes; it is unused otherwise.
struct Node {
    NodeType type { NodeType::Constant };
    std::uint32_t size { 1 };
    std::uint32_t depth { 1 };
    std::uint32_t variable { 0 };
    double value { 0.0 };

    static constexpr auto constant(double v) noexcept -> Node
    {
        return Node { .type = NodeType::Constant, .value = v };
    }

    static constexpr auto var(std::uint32_t index, double weight = 1.0) noexcept -> Node
    {
        return Node { .type = NodeType::Variable, .variable = index, .value = weight };
    }

    static constexpr auto function(NodeType type) noexcept -> Node
    {
        return Node { .type = type };
    }

    [[nodiscard]] constexpr auto arity() const noexcept -> std::size_t { return divgp::arity(type); }
    [[nodiscard]] constexpr auto is_leaf() const noexcept -> bool { return divgp::is_leaf(type); }
    [[nodiscard]] constexpr auto is_commutative() const noexcept -> bool { return divgp::is_commutative(type); }
    [[nodiscard]] constexpr auto is_constant() const noexcept -> bool { return type == NodeType::Constant; }
    [[nodiscard]] constexpr auto is_variable() const noexcept -> bool { return type == NodeType::Variable; }

    friend constexpr auto operator==(Node const&, Node const&) -> bool = default;
};

} // namespace divgp
