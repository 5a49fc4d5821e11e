// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "dataset.hpp"
#include "tree.hpp"

namespace divgp {

// Evaluates `tree` on the given rows with one postorder pass over an operand
// stack. Rows are processed in blocks so that each stack slot is a short
// vector. Division and log are unprotected: non-finite values propagate.
inline auto evaluate(Tree const& tree, Dataset const& ds, Range rows) -> std::vector<double>
{
    constexpr std::size_t block = 64;
    using Slot = std::array<double, block>;

    std::vector<double> result(rows.size());
    if (tree.empty() || rows.size() == 0) {
        return result;
    }
    auto const nodes = tree.nodes();
    std::vector<Slot> stack(nodes.size());

    for (auto row = rows.start; row < rows.end; row += block) {
        auto const len = std::min(block, rows.end - row);
        std::size_t top = 0; // number of occupied slots
        for (auto const& node : nodes) {
            switch (node.type) {
            case NodeType::Constant: {
                std::fill_n(stack[top].begin(), len, node.value);
                ++top;
                break;
            }
            case NodeType::Variable: {
                auto col = ds.column(node.variable).subspan(row, len);
                auto& s = stack[top];
                for (std::size_t k = 0; k < len; ++k) {
                    s[k] = node.value * col[k];
                }
                ++top;
                break;
            }
            case NodeType::Add:
            case NodeType::Sub:
            case NodeType::Mul:
            case NodeType::Div: {
                // first child is the most recently pushed operand
                auto& a = stack[top - 1];
                auto& b = stack[top - 2];
                for (std::size_t k = 0; k < len; ++k) {
                    switch (node.type) {
                    case NodeType::Add: b[k] = a[k] + b[k]; break;
                    case NodeType::Sub: b[k] = a[k] - b[k]; break;
                    case NodeType::Mul: b[k] = a[k] * b[k]; break;
                    default: b[k] = a[k] / b[k]; break;
                    }
                }
                --top;
                break;
            }
            case NodeType::Sin:
            case NodeType::Cos:
            case NodeType::Exp:
            case NodeType::Log: {
                auto& a = stack[top - 1];
                for (std::size_t k = 0; k < len; ++k) {
                    switch (node.type) {
                    case NodeType::Sin: a[k] = std::sin(a[k]); break;
                    case NodeType::Cos: a[k] = std::cos(a[k]); break;
                    case NodeType::Exp: a[k] = std::exp(a[k]); break;
                    default: a[k] = std::log(a[k]); break;
                    }
                }
                break;
            }
            }
        }
        std::copy_n(stack[0].begin(), len, result.begin() + static_cast<std::ptrdiff_t>(row - rows.start));
    }
    return result;
}

} // namespace divgp
