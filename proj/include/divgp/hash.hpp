// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "hash_mode.hpp"
#include "tree.hpp"

namespace divgp {

using Hash = std::uint64_t;

inline constexpr Hash djb_seed = 5381;

// DJB: hash <- hash * 33 + b for every byte, wrapping at 64 bits.
constexpr auto djb_update(Hash h, std::uint8_t b) noexcept -> Hash
{
    return (h << 5U) + h + b;
}

// Feeds the 8 little-endian bytes of `word`.
constexpr auto djb_update_word(Hash h, std::uint64_t word) noexcept -> Hash
{
    for (unsigned k = 0; k < 8; ++k) {
        h = djb_update(h, static_cast<std::uint8_t>(word >> (8U * k)));
    }
    return h;
}

constexpr auto djb_hash(std::span<std::uint8_t const> bytes) noexcept -> Hash
{
    Hash h = djb_seed;
    for (auto b : bytes) {
        h = djb_update(h, b);
    }
    return h;
}

// Label bytes of a node: one tag byte for the type, then the little-endian
// column index for variables, then (hybrid mode only) the little-endian bit
// pattern of the leaf coefficient.
inline auto node_label_bytes(Node const& node, HashMode mode) -> std::vector<std::uint8_t>
{
    std::vector<std::uint8_t> bytes;
    bytes.push_back(static_cast<std::uint8_t>(node.type));
    if (node.is_variable()) {
        for (unsigned k = 0; k < 4; ++k) {
            bytes.push_back(static_cast<std::uint8_t>(node.variable >> (8U * k)));
        }
    }
    if (mode == HashMode::Hybrid && node.is_leaf()) {
        auto const bits = std::bit_cast<std::uint64_t>(node.value);
        for (unsigned k = 0; k < 8; ++k) {
            bytes.push_back(static_cast<std::uint8_t>(bits >> (8U * k)));
        }
    }
    return bytes;
}

// Same value as djb_hash(node_label_bytes(node, mode)) without the allocation.
constexpr auto node_initial_hash(Node const& node, HashMode mode) noexcept -> Hash
{
    Hash h = djb_update(djb_seed, static_cast<std::uint8_t>(node.type));
    if (node.is_variable()) {
        for (unsigned k = 0; k < 4; ++k) {
            h = djb_update(h, static_cast<std::uint8_t>(node.variable >> (8U * k)));
        }
    }
    if (mode == HashMode::Hybrid && node.is_leaf()) {
        h = djb_update_word(h, std::bit_cast<std::uint64_t>(node.value));
    }
    return h;
}

struct HashSequence {
    std::vector<Hash> values;
    bool sorted { false };

    [[nodiscard]] auto size() const noexcept -> std::size_t { return values.size(); }
    [[nodiscard]] auto span() const noexcept -> std::span<Hash const> { return values; }
    friend auto operator==(HashSequence const&, HashSequence const&) -> bool = default;
};

// Reusable hashing state: a working array mirroring the postorder layout and a
// single auxiliary buffer of tree size for reordering child subarrays.
class TreeHasher {
public:
    explicit TreeHasher(HashMode mode = HashMode::Hybrid)
        : mode_(mode)
    {
    }

    [[nodiscard]] auto mode() const noexcept -> HashMode { return mode_; }

    // Benchmarking only: with sorting off, commutative children keep their
    // order and the hashes are no longer order-invariant.
    void set_sort_children(bool enabled) noexcept { sort_ = enabled; }

    // Writes one hash per node into `out` (resized to the tree length), aligned
    // with the postorder array after commutative children have been reordered.
    void hash(Tree const& tree, std::vector<Hash>& out)
    {
        auto const nodes = tree.nodes();
        auto const n = nodes.size();
        work_.resize(n);
        aux_.resize(n);

        for (std::size_t i = 0; i < n; ++i) {
            auto const& node = nodes[i];
            auto const initial = node_initial_hash(node, mode_);
            work_[i] = { initial, node.size, node.type };
            if (node.is_leaf()) {
                continue;
            }
            auto const arity = node.arity();
            std::array<std::size_t, max_arity> child {};
            for (std::size_t k = 0, j = i - 1; k < arity; j -= work_[j].size, ++k) {
                child[k] = j;
            }
            if (sort_ && node.is_commutative() && arity > 1) {
                sort_children(i, std::span(child.data(), arity));
            }
            Hash h = djb_seed;
            for (std::size_t k = 0; k < arity; ++k) {
                h = djb_update_word(h, work_[child[k]].hash);
            }
            work_[i].hash = djb_update_word(h, initial);
        }

        out.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = work_[i].hash;
        }
    }

private:
    struct Slot {
        Hash hash;
        std::uint32_t size;
        NodeType type;
    };

    // internal nodes first, then constants, then variables; ties by hash
    static constexpr auto precedes(Slot const& a, Slot const& b) noexcept -> bool
    {
        auto rank = [](Slot const& s) {
            return !is_leaf(s.type) ? 0 : (s.type == NodeType::Constant ? 1 : 2);
        };
        auto const ra = rank(a);
        auto const rb = rank(b);
        return ra != rb ? ra < rb : a.hash < b.hash;
    }

    // Reorders the child subarrays of node i. `child` holds the root index of
    // each child, first child first; on return it reflects the new layout.
    void sort_children(std::size_t i, std::span<std::size_t> child)
    {
        auto const begin = i + 1 - work_[i].size;
        bool const all_leaves = std::all_of(child.begin(), child.end(), [&](auto c) { return work_[c].size == 1; });

        if (all_leaves) {
            // first child sits at i - 1, so the subarray is sorted in reverse
            std::stable_sort(work_.begin() + static_cast<std::ptrdiff_t>(begin), work_.begin() + static_cast<std::ptrdiff_t>(i),
                [](Slot const& a, Slot const& b) { return precedes(b, a); });
            for (std::size_t k = 0; k < child.size(); ++k) {
                child[k] = i - 1 - k;
            }
            return;
        }

        std::stable_sort(child.begin(), child.end(), [&](auto a, auto b) { return precedes(work_[a], work_[b]); });
        // copy blocks into the auxiliary buffer: last child leftmost
        auto pos = begin;
        for (auto k = child.size(); k-- > 0;) {
            auto const c = child[k];
            auto const sz = work_[c].size;
            std::copy_n(work_.begin() + static_cast<std::ptrdiff_t>(c + 1 - sz), sz, aux_.begin() + static_cast<std::ptrdiff_t>(pos));
            pos += sz;
            child[k] = pos - 1;
        }
        std::copy(aux_.begin() + static_cast<std::ptrdiff_t>(begin), aux_.begin() + static_cast<std::ptrdiff_t>(i), work_.begin() + static_cast<std::ptrdiff_t>(begin));
    }

    HashMode mode_;
    bool sort_ { true };
    std::vector<Slot> work_;
    std::vector<Slot> aux_;
};

// Postorder-aligned node hashes (unsorted).
inline auto hash_tree(Tree const& tree, HashMode mode) -> HashSequence
{
    HashSequence seq;
    TreeHasher(mode).hash(tree, seq.values);
    return seq;
}

inline auto sorted_hash_sequence(Tree const& tree, HashMode mode) -> HashSequence
{
    auto seq = hash_tree(tree, mode);
    std::sort(seq.values.begin(), seq.values.end());
    seq.sorted = true;
    return seq;
}

} // namespace divgp
