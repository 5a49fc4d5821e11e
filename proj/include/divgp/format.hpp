// SPDX-License-Identifier: MIT

#pragma once

#include <array>
#include <charconv>
#include <optional>
#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "tree.hpp"

namespace divgp {

// Shortest decimal representation that parses back to the same double.
inline auto format_double(double value) -> std::string
{
    std::array<char, 32> buf {};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc {}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return { buf.data(), ptr };
}

inline auto parse_double(std::string_view s) -> double
{
    double value {};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc {} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("cannot parse number '" + std::string(s) + "'");
    }
    return value;
}

// Prefix (s-expression) notation with full-precision coefficients, e.g.
//   (+ (* 2.5 x0) (sin 0.75*x1))
// Variables are written as `x<column>` (weight 1) or `<weight>*x<column>`.
inline auto to_prefix(Tree const& tree) -> std::string
{
    if (tree.empty()) {
        return {};
    }
    std::string out;
    auto rec = [&](auto&& self, std::size_t i) -> void {
        auto const& node = tree[i];
        if (node.is_constant()) {
            out += format_double(node.value);
            return;
        }
        if (node.is_variable()) {
            if (node.value != 1.0) {
                out += format_double(node.value);
                out += '*';
            }
            out += 'x';
            out += std::to_string(node.variable);
            return;
        }
        out += '(';
        out += symbol(node.type);
        tree.for_each_child(i, [&](std::size_t c) {
            out += ' ';
            self(self, c);
        });
        out += ')';
    };
    rec(rec, tree.length() - 1);
    return out;
}

namespace detail {
    class PrefixParser {
    public:
        explicit PrefixParser(std::string_view text)
            : text_(text)
        {
        }

        auto parse() -> Tree
        {
            std::vector<Node> nodes;
            expression(nodes);
            skip_space();
            if (pos_ != text_.size()) {
                fail("trailing input");
            }
            return Tree(std::move(nodes));
        }

    private:
        std::string_view text_;
        std::size_t pos_ { 0 };

        [[noreturn]] void fail(std::string const& what) const
        {
            throw std::invalid_argument("prefix parse error at offset " + std::to_string(pos_) + ": " + what);
        }

        void skip_space()
        {
            while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
                ++pos_;
            }
        }

        auto token() -> std::string_view
        {
            skip_space();
            auto const start = pos_;
            while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')'
                && std::isspace(static_cast<unsigned char>(text_[pos_])) == 0) {
                ++pos_;
            }
            if (start == pos_) {
                fail("expected a token");
            }
            return text_.substr(start, pos_ - start);
        }

        static auto function_type(std::string_view s) -> std::optional<NodeType>
        {
            for (auto type : all_functions) {
                if (symbol(type) == s) {
                    return type;
                }
            }
            return std::nullopt;
        }

        static auto leaf(std::string_view tok) -> Node
        {
            auto parse_var = [](std::string_view s) -> std::uint32_t {
                std::uint32_t idx {};
                auto [ptr, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), idx);
                if (s.size() < 2 || ec != std::errc {} || ptr != s.data() + s.size()) {
                    throw std::invalid_argument("bad variable token '" + std::string(s) + "'");
                }
                return idx;
            };
            if (tok.front() == 'x') {
                return Node::var(parse_var(tok));
            }
            if (auto star = tok.find("*x"); star != std::string_view::npos) {
                return Node::var(parse_var(tok.substr(star + 1)), parse_double(tok.substr(0, star)));
            }
            return Node::constant(parse_double(tok));
        }

        void expression(std::vector<Node>& out)
        {
            skip_space();
            if (pos_ >= text_.size()) {
                fail("unexpected end of input");
            }
            if (text_[pos_] == ')') {
                fail("unexpected ')'");
            }
            if (text_[pos_] != '(') {
                out.push_back(leaf(token()));
                return;
            }
            ++pos_;
            auto const head = token();
            auto type = function_type(head);
            if (!type) {
                fail("unknown function '" + std::string(head) + "'");
            }
            // children are stored last-to-first so that the first child ends up at i - 1
            std::vector<std::vector<Node>> children;
            for (skip_space(); pos_ < text_.size() && text_[pos_] != ')'; skip_space()) {
                children.emplace_back();
                expression(children.back());
            }
            if (pos_ >= text_.size()) {
                fail("missing ')'");
            }
            ++pos_;
            if (children.size() != arity(*type)) {
                fail("wrong number of arguments for '" + std::string(head) + "'");
            }
            for (auto it = children.rbegin(); it != children.rend(); ++it) {
                out.insert(out.end(), it->begin(), it->end());
            }
            out.push_back(Node::function(*type));
        }
    };
} // namespace detail

inline auto from_prefix(std::string_view text) -> Tree
{
    return detail::PrefixParser(text).parse();
}

} // namespace divgp
