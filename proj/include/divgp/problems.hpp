// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dataset.hpp"
#include "random.hpp"

namespace divgp {

// How one input variable is sampled for one split.
struct Sampling {
    enum class Kind : std::uint8_t { Uniform, Grid, Choice };
    Kind kind { Kind::Uniform };
    double lo { 0.0 };
    double hi { 1.0 };
    double step { 0.0 };         // Grid
    std::vector<double> choices; // Choice

    static auto uniform(double lo, double hi) -> Sampling { return { Kind::Uniform, lo, hi, 0.0, {} }; }
    static auto grid(double lo, double hi, double step) -> Sampling { return { Kind::Grid, lo, hi, step, {} }; }
    static auto choice(std::vector<double> values) -> Sampling { return { Kind::Choice, 0.0, 0.0, 0.0, std::move(values) }; }

    [[nodiscard]] auto grid_points() const -> std::vector<double>
    {
        auto const count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
        std::vector<double> pts(count);
        for (std::size_t k = 0; k < count; ++k) {
            pts[k] = lo + static_cast<double>(k) * step;
        }
        return pts;
    }
};

// Per-split sampling plan. A plan whose variables are all grids is the full
// cartesian product of the grids and has a fixed row count.
struct SplitPlan {
    std::vector<Sampling> variables;
    std::size_t rows { 0 }; // random plans only

    [[nodiscard]] auto is_grid() const -> bool
    {
        return std::all_of(variables.begin(), variables.end(), [](auto const& s) { return s.kind == Sampling::Kind::Grid; });
    }

    [[nodiscard]] auto default_rows() const -> std::size_t
    {
        if (!is_grid()) {
            return rows;
        }
        std::size_t n = 1;
        for (auto const& s : variables) {
            n *= s.grid_points().size();
        }
        return n;
    }
};

struct Problem {
    std::string name;
    std::size_t inputs { 0 };
    SplitPlan training;
    SplitPlan test;
    std::function<double(std::span<double const>)> function;
    std::string origin; // where the formula and sampling come from

    [[nodiscard]] auto default_training_rows() const -> std::size_t { return training.default_rows(); }
    [[nodiscard]] auto default_test_rows() const -> std::size_t { return test.default_rows(); }
};

namespace detail {
    inline auto same(std::size_t n, Sampling const& s) -> std::vector<Sampling> { return std::vector<Sampling>(n, s); }

    inline auto make_registry() -> std::vector<Problem>
    {
        using S = Sampling;
        std::vector<Problem> p;

        p.push_back({ "Poly-10", 10, { same(10, S::uniform(-1, 1)), 250 }, { same(10, S::uniform(-1, 1)), 250 },
            [](auto x) { return x[0] * x[1] + x[2] * x[3] + x[4] * x[5] + x[0] * x[6] * x[8] + x[2] * x[5] * x[9]; },
            "Poli (1999), parallel distributed GP" });

        p.push_back({ "Pagie-1", 2, { same(2, S::grid(-5, 5, 0.4)), 0 }, { same(2, S::uniform(-5, 5)), 1000 },
            [](auto x) { return 1.0 / (1.0 + std::pow(x[0], -4.0)) + 1.0 / (1.0 + std::pow(x[1], -4.0)); },
            "Pagie & Hogeweg (1997)" });

        p.push_back({ "Vladislavleva-1", 2, { same(2, S::uniform(0.3, 4)), 100 }, { same(2, S::grid(-0.2, 4.2, 0.1)), 0 },
            [](auto x) { return std::exp(-(x[0] - 1) * (x[0] - 1)) / (1.2 + (x[1] - 2.5) * (x[1] - 2.5)); },
            "Vladislavleva et al. (2009), F1 (Kotanchek)" });

        p.push_back({ "Vladislavleva-2", 1, { { S::grid(0.05, 10, 0.1) }, 0 }, { { S::grid(-0.5, 10.5, 0.05) }, 0 },
            [](auto x) {
                auto const v = x[0];
                return std::exp(-v) * v * v * v * std::cos(v) * std::sin(v) * (std::cos(v) * std::sin(v) * std::sin(v) - 1);
            },
            "Vladislavleva et al. (2009), F2 (Salustowicz 1d)" });

        p.push_back({ "Vladislavleva-3", 2, { { S::grid(0.05, 10, 0.1), S::grid(0.05, 10.05, 2) }, 0 },
            { { S::grid(-0.5, 10.5, 0.05), S::grid(-0.5, 10.5, 0.5) }, 0 },
            [](auto x) {
                auto const v = x[0];
                return std::exp(-v) * v * v * v * std::cos(v) * std::sin(v) * (std::cos(v) * std::sin(v) * std::sin(v) - 1) * (x[1] - 5);
            },
            "Vladislavleva et al. (2009), F3 (Salustowicz 2d)" });

        p.push_back({ "Vladislavleva-4", 5, { same(5, S::uniform(0.05, 6.05)), 1024 }, { same(5, S::uniform(-0.25, 6.35)), 5000 },
            [](auto x) {
                double s = 0.0;
                for (std::size_t i = 0; i < 5; ++i) {
                    s += (x[i] - 3) * (x[i] - 3);
                }
                return 10.0 / (5.0 + s);
            },
            "Vladislavleva et al. (2009), F4 (unwrapped ball)" });

        p.push_back({ "Vladislavleva-5", 3, { { S::uniform(0.05, 2), S::uniform(1, 2), S::uniform(0.05, 2) }, 300 },
            { { S::grid(-0.05, 2.1, 0.15), S::grid(0.95, 2.05, 0.1), S::grid(-0.05, 2.1, 0.15) }, 0 },
            [](auto x) { return 30.0 * (x[0] - 1) * (x[2] - 1) / (x[1] * x[1] * (x[0] - 10)); },
            "Vladislavleva et al. (2009), F5 (rational polynomial in 3d)" });

        p.push_back({ "Vladislavleva-6", 2, { same(2, S::uniform(0.1, 5.9)), 30 }, { same(2, S::grid(-0.05, 6.05, 0.02)), 0 },
            [](auto x) { return 6.0 * std::sin(x[0]) * std::cos(x[1]); },
            "Vladislavleva et al. (2009), F6 (sine cosine)" });

        p.push_back({ "Vladislavleva-7", 2, { same(2, S::uniform(0.05, 6.05)), 300 }, { same(2, S::uniform(-0.25, 6.35)), 1000 },
            [](auto x) { return (x[0] - 3) * (x[1] - 3) + 2.0 * std::sin((x[0] - 4) * (x[1] - 4)); },
            "Vladislavleva et al. (2009), F7 (ripple)" });

        p.push_back({ "Vladislavleva-8", 2, { same(2, S::uniform(0.05, 6.05)), 50 }, { same(2, S::grid(-0.25, 6.35, 0.2)), 0 },
            [](auto x) {
                auto const a = x[0] - 3;
                auto const b = x[1] - 3;
                auto const c = x[1] - 2;
                return (a * a * a * a + b * b * b - b) / (c * c * c * c + 10.0);
            },
            "Vladislavleva et al. (2009), F8 (rational polynomial in 2d)" });

        {
            std::vector<Sampling> vars { S::choice({ -1, 1 }) };
            for (int i = 1; i < 10; ++i) {
                vars.push_back(S::choice({ -1, 0, 1 }));
            }
            p.push_back({ "Breiman-1", 10, { vars, 5000 }, { vars, 5000 },
                [](auto x) {
                    return x[0] > 0 ? 3.0 + 3.0 * x[1] + 2.0 * x[2] + x[3] : -3.0 + 3.0 * x[4] + 2.0 * x[5] + x[6];
                },
                "Breiman et al. (1984), without the noise term" });
        }

        p.push_back({ "Friedman-1", 10, { same(10, S::uniform(0, 1)), 500 }, { same(10, S::uniform(0, 1)), 500 },
            [](auto x) {
                return 0.1 * std::exp(4.0 * x[0]) + 4.0 / (1.0 + std::exp(-20.0 * (x[1] - 0.5))) + 3.0 * x[2] + 2.0 * x[3] + x[4];
            },
            "Friedman (1991), noise-free; x6..x10 are irrelevant" });

        p.push_back({ "Friedman-2", 10, { same(10, S::uniform(0, 1)), 500 }, { same(10, S::uniform(0, 1)), 500 },
            [](auto x) {
                return 10.0 * std::sin(std::numbers::pi * x[0] * x[1]) + 20.0 * (x[2] - 0.5) * (x[2] - 0.5) + 10.0 * x[3] + 5.0 * x[4];
            },
            "Friedman (1991), noise-free; x6..x10 are irrelevant" });
        return p;
    }

    inline auto lower(std::string_view s) -> std::string
    {
        std::string out(s);
        std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return out;
    }

    // Rows of one split, appended to `columns`. Grid plans ignore `rows` when it
    // matches their size; any other count samples uniformly within the grid ranges.
    inline void sample_split(Random& rng, SplitPlan const& plan, std::size_t rows, std::vector<std::vector<double>>& columns)
    {
        auto const d = plan.variables.size();
        if (plan.is_grid() && rows == plan.default_rows()) {
            std::vector<std::vector<double>> axes;
            for (auto const& s : plan.variables) {
                axes.push_back(s.grid_points());
            }
            std::vector<std::size_t> at(d, 0);
            for (std::size_t r = 0; r < rows; ++r) {
                for (std::size_t v = 0; v < d; ++v) {
                    columns[v].push_back(axes[v][at[v]]);
                }
                for (std::size_t v = d; v-- > 0;) { // last variable varies fastest
                    if (++at[v] < axes[v].size()) {
                        break;
                    }
                    at[v] = 0;
                }
            }
            return;
        }
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t v = 0; v < d; ++v) {
                auto const& s = plan.variables[v];
                double value = 0.0;
                switch (s.kind) {
                case Sampling::Kind::Uniform:
                case Sampling::Kind::Grid: value = random::uniform(rng, s.lo, s.hi); break;
                case Sampling::Kind::Choice: value = s.choices[random::index(rng, s.choices.size())]; break;
                }
                columns[v].push_back(value);
            }
        }
    }
} // namespace detail

// Registered problems in a stable order.
inline auto list_problems() -> std::vector<Problem> const&
{
    static auto const registry = detail::make_registry();
    return registry;
}

// Case-insensitive lookup.
inline auto find_problem(std::string_view name) -> Problem const&
{
    for (auto const& p : list_problems()) {
        if (detail::lower(p.name) == detail::lower(name)) {
            return p;
        }
    }
    throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

// Training rows first, then test rows. Zero row counts select the problem's
// defaults. Deterministic in (problem, seed, row counts).
inline auto generate(Problem const& problem, std::uint64_t seed, std::size_t training_rows = 0, std::size_t test_rows = 0) -> Dataset
{
    auto const n_train = training_rows == 0 ? problem.default_training_rows() : training_rows;
    auto const n_test = test_rows == 0 ? problem.default_test_rows() : test_rows;
    Random rng(random::mix_seed(seed));
    std::vector<std::vector<double>> columns(problem.inputs);
    detail::sample_split(rng, problem.training, n_train, columns);
    detail::sample_split(rng, problem.test, n_test, columns);

    std::vector<double> target(n_train + n_test);
    std::vector<double> row(problem.inputs);
    for (std::size_t r = 0; r < target.size(); ++r) {
        for (std::size_t v = 0; v < problem.inputs; ++v) {
            row[v] = columns[v][r];
        }
        target[r] = problem.function(row);
        if (!std::isfinite(target[r])) {
            throw std::runtime_error(problem.name + ": non-finite target at row " + std::to_string(r));
        }
    }
    std::vector<std::string> names;
    for (std::size_t v = 0; v < problem.inputs; ++v) {
        names.push_back("x" + std::to_string(v + 1));
    }
    Dataset ds(std::move(names), std::move(columns), std::move(target));
    ds.set_partitions({ 0, n_train }, { n_train, n_train + n_test });
    return ds;
}

inline auto generate(std::string_view name, std::uint64_t seed, std::size_t training_rows = 0, std::size_t test_rows = 0) -> Dataset
{
    return generate(find_problem(name), seed, training_rows, test_rows);
}

// Same as generate(), backed by a CSV cache in `dir` keyed by (name, seed,
// sizes). New files are written to a temporary name and renamed into place.
inline auto generate_cached(std::string_view name, std::uint64_t seed, std::size_t training_rows, std::size_t test_rows,
    std::filesystem::path const& dir) -> Dataset
{
    auto const& problem = find_problem(name);
    auto const n_train = training_rows == 0 ? problem.default_training_rows() : training_rows;
    auto const n_test = test_rows == 0 ? problem.default_test_rows() : test_rows;
    auto const file = dir / (problem.name + "_s" + std::to_string(seed) + "_" + std::to_string(n_train) + "_" + std::to_string(n_test) + ".csv");
    if (std::filesystem::exists(file)) {
        auto ds = read_csv(file);
        if (ds.rows() == n_train + n_test && ds.variables() == problem.inputs) {
            ds.set_partitions({ 0, n_train }, { n_train, n_train + n_test });
            return ds;
        }
    }
    auto ds = generate(problem, seed, n_train, n_test);
    std::filesystem::create_directories(dir);
    auto tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        write_csv(out, ds);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, file);
    return ds;
}

// External CSV with a named target column; the first `training_rows` rows
// train, the rest test. Zero picks the first 50%.
inline auto load_csv_dataset(std::filesystem::path const& path, std::string const& target, std::size_t training_rows = 0) -> Dataset
{
    auto ds = read_csv(path, target);
    if (ds.rows() < 2) {
        throw std::runtime_error(path.string() + ": at least two rows required");
    }
    auto const n_train = training_rows == 0 ? ds.rows() / 2 : training_rows;
    if (n_train > ds.rows()) {
        throw std::invalid_argument(path.string() + ": training rows exceed the dataset size");
    }
    ds.set_partitions({ 0, n_train }, { n_train, ds.rows() });
    return ds;
}

} // namespace divgp
