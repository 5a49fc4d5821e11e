// SPDX-License-Identifier: MIT

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace divgp {

enum class HashMode : std::uint8_t {
    Structural, // node labels only
    Hybrid      // node labels and leaf coefficients
};

constexpr auto to_string(HashMode mode) noexcept -> std::string_view
{
    return mode == HashMode::Structural ? "structural" : "hybrid";
}

inline auto parse_hash_mode(std::string_view s) -> HashMode
{
    if (s == "structural") {
        return HashMode::Structural;
    }
    if (s == "hybrid") {
        return HashMode::Hybrid;
    }
    throw std::invalid_argument("unknown hash mode '" + std::string(s) + "'");
}

} // namespace divgp
