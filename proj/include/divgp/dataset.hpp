// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "format.hpp"

namespace divgp {

struct Range {
    std::size_t start { 0 };
    std::size_t end { 0 };

    [[nodiscard]] constexpr auto size() const noexcept -> std::size_t { return end - start; }
    friend constexpr auto operator==(Range, Range) -> bool = default;
};

// Column-major table of input variables plus one target column. Rows
// [training.start, training.end) and [test.start, test.end) form the two splits.
class Dataset {
public:
    Dataset() = default;

    Dataset(std::vector<std::string> names, std::vector<std::vector<double>> columns, std::vector<double> target)
        : names_(std::move(names))
        , columns_(std::move(columns))
        , target_(std::move(target))
        , training_ { 0, target_.size() }
    {
        if (names_.size() != columns_.size()) {
            throw std::invalid_argument("dataset: one name per input column required");
        }
        for (auto const& c : columns_) {
            if (c.size() != target_.size()) {
                throw std::invalid_argument("dataset: ragged columns");
            }
        }
    }

    [[nodiscard]] auto rows() const noexcept -> std::size_t { return target_.size(); }
    [[nodiscard]] auto variables() const noexcept -> std::size_t { return columns_.size(); }
    [[nodiscard]] auto names() const noexcept -> std::vector<std::string> const& { return names_; }
    [[nodiscard]] auto column(std::size_t i) const -> std::span<double const> { return columns_.at(i); }
    [[nodiscard]] auto target() const noexcept -> std::span<double const> { return target_; }
    [[nodiscard]] auto target(Range r) const -> std::span<double const> { return target().subspan(r.start, r.size()); }

    [[nodiscard]] auto training() const noexcept -> Range { return training_; }
    [[nodiscard]] auto test() const noexcept -> Range { return test_; }

    void set_partitions(Range training, Range test)
    {
        if (training.end > rows() || test.end > rows() || training.start > training.end || test.start > test.end) {
            throw std::invalid_argument("dataset: partition out of range");
        }
        if (training.start < test.end && test.start < training.end) {
            throw std::invalid_argument("dataset: training and test partitions overlap");
        }
        training_ = training;
        test_ = test;
    }

    friend auto operator==(Dataset const&, Dataset const&) -> bool = default;

private:
    std::vector<std::string> names_;
    std::vector<std::vector<double>> columns_;
    std::vector<double> target_;
    Range training_;
    Range test_;
};

namespace detail {
    inline auto split_csv_line(std::string const& line) -> std::vector<std::string>
    {
        std::vector<std::string> fields;
        std::string field;
        std::istringstream in(line);
        while (std::getline(in, field, ',')) {
            auto b = field.find_first_not_of(" \t\r");
            auto e = field.find_last_not_of(" \t\r");
            fields.push_back(b == std::string::npos ? std::string {} : field.substr(b, e - b + 1));
        }
        if (!line.empty() && line.back() == ',') {
            fields.emplace_back();
        }
        return fields;
    }
} // namespace detail

// Header row with variable names and `target`, one row per sample.
inline void write_csv(std::ostream& out, Dataset const& ds, std::string const& target_name = "target")
{
    for (auto const& n : ds.names()) {
        out << n << ',';
    }
    out << target_name << '\n';
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        for (std::size_t c = 0; c < ds.variables(); ++c) {
            out << format_double(ds.column(c)[r]) << ',';
        }
        out << format_double(ds.target()[r]) << '\n';
    }
}

// Reads a CSV file with a header row. `target_name` selects the target column,
// every other column becomes an input variable. Partitions are left unset.
inline auto read_csv(std::istream& in, std::string const& target_name = "target") -> Dataset
{
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("csv: missing header");
    }
    auto header = detail::split_csv_line(line);
    auto it = std::find(header.begin(), header.end(), target_name);
    if (it == header.end()) {
        throw std::runtime_error("csv: target column '" + target_name + "' not found");
    }
    auto const target_col = static_cast<std::size_t>(it - header.begin());

    std::vector<std::string> names;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i != target_col) {
            names.push_back(header[i]);
        }
    }
    std::vector<std::vector<double>> columns(names.size());
    std::vector<double> target;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        auto fields = detail::split_csv_line(line);
        if (fields.size() != header.size()) {
            throw std::runtime_error("csv: line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) + " fields, expected " + std::to_string(header.size()));
        }
        std::size_t c = 0;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            auto v = parse_double(fields[i]);
            if (i == target_col) {
                target.push_back(v);
            } else {
                columns[c++].push_back(v);
            }
        }
    }
    return { std::move(names), std::move(columns), std::move(target) };
}

inline auto read_csv(std::filesystem::path const& path, std::string const& target_name = "target") -> Dataset
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return read_csv(in, target_name);
}

} // namespace divgp
