// SPDX-License-Identifier: MIT

#include <gtest/gtest.h>

#include <regex>

#include "support.hpp"

using namespace divgp;

namespace {

constexpr char const* poly10 = "(+ (+ (+ (+ (* x0 x1) (* x2 x3)) (* x4 x5)) (* (* x0 x6) x8)) (* (* x2 x5) x9))";

auto count_matches(std::string const& s, std::string const& pattern) -> std::size_t
{
    std::regex const re(pattern);
    return static_cast<std::size_t>(std::distance(std::sregex_iterator(s.begin(), s.end(), re), std::sregex_iterator()));
}

} // namespace

TEST(RSquared, PerfectAndAffine)
{
    std::vector<double> const y { 1, 3, 2, 5, 4 };
    EXPECT_NEAR(r_squared(y, y), 1.0, 1e-15);
    std::vector<double> p;
    std::vector<double> q;
    for (auto v : y) {
        p.push_back(2 * v + 5);
        q.push_back(-3 * v + 1);
    }
    EXPECT_NEAR(r_squared(p, y), 1.0, 1e-15);
    EXPECT_NEAR(r_squared(q, y), 1.0, 1e-15);
}

TEST(RSquared, DegenerateScoresZero)
{
    std::vector<double> const y { 1, 2, 3 };
    EXPECT_EQ(r_squared(std::vector<double> { 4, 4, 4 }, y), 0.0);
    EXPECT_EQ(r_squared(std::vector<double> { 1, NAN, 3 }, y), 0.0);
    EXPECT_EQ(r_squared(std::vector<double> { 1, INFINITY, 3 }, y), 0.0);
}

TEST(RSquared, KnownValue)
{
    // x = 1..4, y = 1,3,2,4: r = 0.8
    std::vector<double> const x { 1, 2, 3, 4 };
    std::vector<double> const y { 1, 3, 2, 4 };
    EXPECT_NEAR(r_squared(x, y), 0.64, 1e-12);
}

TEST(RSquared, LengthMismatchThrows)
{
    EXPECT_THROW((void)r_squared(std::vector<double> { 1, 2 }, std::vector<double> { 1, 2, 3 }), std::invalid_argument);
}

TEST(Nmse, Examples)
{
    std::vector<double> const y { 1, 3, 2, 5, 4 };
    EXPECT_EQ(nmse(y, y), 0.0);
    std::vector<double> const m(y.size(), 3.0);
    EXPECT_NEAR(nmse(m, y), 1.0, 1e-15);
    EXPECT_EQ(nmse(std::vector<double> { 0, 0 }, std::vector<double> { 0, 2 }), 2.0);
}

TEST(Nmse, ConstantTargetThrowsAndNonFiniteIsInfinite)
{
    EXPECT_THROW((void)nmse(std::vector<double> { 1, 2 }, std::vector<double> { 3, 3 }), std::invalid_argument);
    EXPECT_TRUE(std::isinf(nmse(std::vector<double> { NAN, 0 }, std::vector<double> { 0, 2 })));
}

TEST(LinearScaling, RecoversAffineMap)
{
    std::vector<double> const x { 1, 2, 3, 4, 5 };
    std::vector<double> y;
    for (auto v : x) {
        y.push_back(3.0 - 2.0 * v);
    }
    auto const s = fit_linear_scaling(x, y);
    EXPECT_NEAR(s.slope, -2.0, 1e-12);
    EXPECT_NEAR(s.intercept, 3.0, 1e-12);
    EXPECT_NEAR(nmse(s.apply(x), y), 0.0, 1e-20);
    auto const flat = fit_linear_scaling(std::vector<double>(5, 1.0), y);
    EXPECT_EQ(flat.slope, 0.0);
}

TEST(Quantile, Type7)
{
    std::vector<double> const v { 1, 2, 3, 4 };
    EXPECT_EQ(median(v), 2.5);
    EXPECT_EQ(quantile(v, 0.25), 1.75);
    EXPECT_EQ(quantile(v, 0.75), 3.25);
    EXPECT_EQ(interquartile_range(v), 1.5);
    EXPECT_EQ(median({ 7 }), 7.0);
}

TEST(Lengths, Examples)
{
    EXPECT_EQ(tree_length(from_prefix("x0")), 1u);
    EXPECT_EQ(tree_length(from_prefix("(+ x0 x1)")), 3u);
    EXPECT_EQ(nested_tree_length(from_prefix("x0")), 1u);
    EXPECT_EQ(nested_tree_length(from_prefix("(sin x0)")), 3u);
    EXPECT_EQ(nested_tree_length(from_prefix("(+ x0 x1)")), 5u);
}

TEST(Lengths, UnaryChain)
{
    std::string s = "x0";
    for (std::size_t k = 2; k <= 10; ++k) {
        s = "(sin " + s + ")";
        EXPECT_EQ(nested_tree_length(from_prefix(s)), k * (k + 1) / 2);
    }
}

TEST(Lengths, NestedAtLeastLength)
{
    for (auto const& t : fixtures::random_trees(200, 41)) {
        auto const n = nested_tree_length(t);
        EXPECT_GE(n, t.length());
        EXPECT_EQ(n == t.length(), t.length() == 1);
    }
}

TEST(Lengths, PolyTenTarget)
{
    std::string const s = poly10;
    auto const t = from_prefix(s);
    // independent counts from the text: every token is a node
    auto const leaves = count_matches(s, R"(x\d+)");
    auto const ops = count_matches(s, R"(\([+*])");
    EXPECT_EQ(tree_length(t), leaves + ops);
    EXPECT_EQ(tree_length(t), 23u);
    EXPECT_EQ(variable_count(t), leaves);
    EXPECT_EQ(variable_count(t), 12u);
}

TEST(VariableCount, Occurrences)
{
    EXPECT_EQ(variable_count(from_prefix("(+ 1 2)")), 0u);
    EXPECT_EQ(variable_count(from_prefix("(+ x0 x0)")), 2u);
}

TEST(Complexity, Rules)
{
    EXPECT_EQ(recursive_complexity(from_prefix("3")), 1.0);
    EXPECT_EQ(recursive_complexity(from_prefix("x0")), 2.0);
    EXPECT_EQ(recursive_complexity(from_prefix("(sin x0)")), 4.0);
    EXPECT_EQ(recursive_complexity(from_prefix("(+ x0 3)")), 3.0);
    EXPECT_EQ(recursive_complexity(from_prefix("(* x0 x1)")), 4.0);
    EXPECT_EQ(recursive_complexity(from_prefix("(/ (sin x0) 3)")), 4.0);
}

TEST(Complexity, Saturates)
{
    std::string s = "x0";
    for (int k = 0; k < 12; ++k) {
        s = "(exp " + s + ")";
    }
    EXPECT_EQ(recursive_complexity(from_prefix(s)), max_complexity);
}

TEST(Penalty, Formula)
{
    EXPECT_DOUBLE_EQ(penalized_fitness(0.8, 0.3), 0.5);
    EXPECT_EQ(penalized_fitness(0.7, 0.0), 0.7);
    EXPECT_EQ(penalized_fitness(0.0, 1.0), -1.0);
}

TEST(ObjectiveSpec, Directions)
{
    EXPECT_EQ(ObjectiveSpec { ObjectiveKind::HybridDistance }.direction(), Direction::Maximize);
    EXPECT_EQ(ObjectiveSpec { ObjectiveKind::StructuralDistance }.direction(), Direction::Maximize);
    for (auto k : { ObjectiveKind::RecursiveComplexity, ObjectiveKind::TreeLength, ObjectiveKind::NestedTreeLength, ObjectiveKind::VariableCount }) {
        EXPECT_EQ(ObjectiveSpec { k }.direction(), Direction::Minimize);
        EXPECT_EQ(parse_objective_kind(to_string(k)), k);
    }
    EXPECT_THROW((void)parse_objective_kind("nope"), std::invalid_argument);
}
