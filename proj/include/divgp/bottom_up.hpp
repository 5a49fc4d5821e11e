// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "hash_mode.hpp"
#include "tree.hpp"

namespace divgp {

// Bottom-up tree distance. Every subtree of both trees is assigned an
// equivalence class: two subtrees share a class iff they have the same label
// and the same sequence of child classes (sorted for commutative nodes). The
// number of common nodes is the multiset intersection of the class ids, and the
// distance is 1 - 2|M| / (|T1| + |T2|). Works entirely on dictionaries of
// explicit keys; no hashing is involved, which makes it a reference for the
// hash-based distance.
class BottomUpDistance {
public:
    explicit BottomUpDistance(HashMode mode)
        : mode_(mode)
    {
    }

    auto operator()(Tree const& lhs, Tree const& rhs) -> double
    {
        classes_.clear();
        auto const a = classify(lhs);
        auto const b = classify(rhs);

        std::map<std::size_t, std::size_t> count_a;
        std::map<std::size_t, std::size_t> count_b;
        for (auto c : a) {
            ++count_a[c];
        }
        for (auto c : b) {
            ++count_b[c];
        }
        std::size_t common = 0;
        for (auto const& [cls, ca] : count_a) {
            if (auto it = count_b.find(cls); it != count_b.end()) {
                common += std::min(ca, it->second);
            }
        }
        return 1.0 - 2.0 * static_cast<double>(common) / static_cast<double>(lhs.length() + rhs.length());
    }

private:
    // (type, variable column, coefficient bits, child classes)
    using Key = std::tuple<NodeType, std::uint32_t, std::uint64_t, std::vector<std::size_t>>;

    auto classify(Tree const& tree) -> std::vector<std::size_t>
    {
        std::vector<std::size_t> cls(tree.length());
        for (std::size_t i = 0; i < tree.length(); ++i) {
            auto const& node = tree[i];
            std::vector<std::size_t> children;
            tree.for_each_child(i, [&](std::size_t c) { children.push_back(cls[c]); });
            if (node.is_commutative()) {
                std::sort(children.begin(), children.end());
            }
            std::uint64_t coefficient = 0;
            if (mode_ == HashMode::Hybrid && node.is_leaf()) {
                coefficient = std::bit_cast<std::uint64_t>(node.value);
            }
            std::uint32_t column = node.is_variable() ? node.variable : 0;
            Key key { node.type, column, coefficient, std::move(children) };
            auto [it, inserted] = classes_.try_emplace(std::move(key), classes_.size());
            cls[i] = it->second;
        }
        return cls;
    }

    HashMode mode_;
    std::map<Key, std::size_t> classes_;
};

inline auto bottom_up_distance(Tree const& lhs, Tree const& rhs, HashMode mode) -> double
{
    return BottomUpDistance(mode)(lhs, rhs);
}

} // namespace divgp
