// SPDX-License-Identifier: MIT

#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace divgp;

namespace {

auto seq(std::vector<Hash> v) -> HashSequence { return { std::move(v), true }; }

auto matrix3() -> DistanceMatrix
{
    DistanceMatrix dm(3);
    dm.set(0, 1, 0.2);
    dm.set(0, 2, 0.6);
    dm.set(1, 2, 1.0);
    return dm;
}

constexpr std::array modes { HashMode::Structural, HashMode::Hybrid };

} // namespace

TEST(MergeCount, Examples)
{
    EXPECT_EQ(merge_count_distance(seq({ 1, 2, 3 }), seq({ 1, 2, 3 })), 0.0);
    EXPECT_EQ(merge_count_distance(seq({ 1, 2 }), seq({ 3, 4 })), 1.0);
    EXPECT_NEAR(merge_count_distance(seq({ 1, 2, 3, 5 }), seq({ 2, 3, 4 })), 3.0 / 7.0, 1e-15);
}

TEST(MergeCount, MultisetIntersection)
{
    std::vector<Hash> a { 1, 1, 1, 2 };
    std::vector<Hash> b { 1, 1, 2, 2 };
    EXPECT_EQ(merge_count(a, b).count, 3u);
}

TEST(MergeCount, EmptyOrUnsortedInputIsRejected)
{
    EXPECT_THROW((void)merge_count_distance(seq({}), seq({ 1 })), std::invalid_argument);
    HashSequence unsorted { { 2, 1 }, false };
    EXPECT_THROW((void)merge_count_distance(unsorted, seq({ 1 })), std::invalid_argument);
}

TEST(MergeCount, IterationBound)
{
    auto trees = fixtures::random_trees(200, 31);
    for (std::size_t i = 1; i < trees.size(); ++i) {
        auto const a = sorted_hash_sequence(trees[i], HashMode::Hybrid);
        auto const b = sorted_hash_sequence(trees[i - 1], HashMode::Hybrid);
        EXPECT_LE(merge_count(a.span(), b.span()).iterations, a.size() + b.size());
    }
}

TEST(Matrix, IdenticalPopulationIsZero)
{
    std::vector<Tree> pop(5, from_prefix("(+ x0 (* 2 x1))"));
    auto dm = distance_matrix(pop, HashMode::Hybrid);
    for (auto v : dm.packed()) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(Matrix, SingleTree)
{
    std::vector<Tree> pop { from_prefix("x0") };
    auto dm = distance_matrix(pop, HashMode::Hybrid);
    EXPECT_EQ(dm.size(), 1u);
    EXPECT_TRUE(dm.packed().empty());
    EXPECT_EQ(average_distances(dm), std::vector<double> { 0.0 });
    EXPECT_THROW((void)average_population_similarity(dm), std::invalid_argument);
}

TEST(Matrix, EmptyPopulationIsRejected)
{
    std::vector<Tree> pop;
    EXPECT_THROW((void)distance_matrix(pop, HashMode::Hybrid), std::invalid_argument);
}

TEST(Matrix, MatchesPairwiseCalls)
{
    auto trees = fixtures::random_trees(3, 32);
    for (auto m : modes) {
        auto dm = distance_matrix(trees, m);
        for (std::size_t i = 0; i < 3; ++i) {
            EXPECT_EQ(dm(i, i), 0.0);
            for (std::size_t j = 0; j < 3; ++j) {
                if (i != j) {
                    EXPECT_EQ(dm(i, j), tree_distance(trees[i], trees[j], m));
                }
            }
        }
    }
}

TEST(Matrix, ThreadCountDoesNotChangeResult)
{
    auto trees = fixtures::random_trees(120, 33);
    auto const ref = distance_matrix(trees, HashMode::Hybrid, 1);
    for (std::size_t t : { 2, 3, 7 }) {
        EXPECT_EQ(distance_matrix(trees, HashMode::Hybrid, t), ref);
    }
}

TEST(Matrix, AverageDistances)
{
    DistanceMatrix zero(4);
    EXPECT_EQ(average_distances(zero), std::vector<double>(4, 0.0));

    DistanceMatrix two(2);
    two.set(0, 1, 0.4);
    EXPECT_EQ(average_distances(two), (std::vector<double> { 0.4, 0.4 }));

    auto const avg = average_distances(matrix3());
    EXPECT_NEAR(avg[0], 0.4, 1e-15);
    EXPECT_NEAR(avg[1], 0.6, 1e-15);
    EXPECT_NEAR(avg[2], 0.8, 1e-15);
}

TEST(Matrix, AverageSimilarity)
{
    EXPECT_NEAR(average_population_similarity(matrix3()), 0.4, 1e-15);
    DistanceMatrix same(3);
    EXPECT_EQ(average_population_similarity(same), 1.0);
    DistanceMatrix disjoint(3);
    for (std::size_t i = 1; i < 3; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            disjoint.set(i, j, 1.0);
        }
    }
    EXPECT_EQ(average_population_similarity(disjoint), 0.0);
}

TEST(Matrix, CsvExport)
{
    std::ostringstream out;
    std::vector<std::size_t> order { 2, 0, 1 };
    write_csv(out, matrix3(), order);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "3");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            row.push_back(std::stod(cell));
        }
        rows.push_back(row);
    }
    ASSERT_EQ(rows.size(), 3u);
    auto const dm = matrix3();
    for (std::size_t i = 0; i < 3; ++i) {
        ASSERT_EQ(rows[i].size(), 3u);
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_EQ(rows[i][j], dm(order[i], order[j]));
        }
    }
}

TEST(BottomUp, Examples)
{
    auto const t = from_prefix("(+ (sin x0) (* 2 x1))");
    for (auto m : modes) {
        EXPECT_EQ(bottom_up_distance(t, t, m), 0.0);
        EXPECT_EQ(bottom_up_distance(from_prefix("(sin x0)"), from_prefix("(cos 3)"), m), 1.0);
    }
    // one common class: x0
    EXPECT_NEAR(bottom_up_distance(from_prefix("(sin x0)"), from_prefix("(- x0 x1)"), HashMode::Hybrid), 1.0 - 2.0 / 5.0, 1e-15);
}

TEST(BottomUp, CommutativeChildrenAreCanonical)
{
    for (auto m : modes) {
        EXPECT_EQ(bottom_up_distance(from_prefix("(+ x0 (sin x1))"), from_prefix("(+ (sin x1) x0)"), m), 0.0);
        EXPECT_GT(bottom_up_distance(from_prefix("(- x0 (sin x1))"), from_prefix("(- (sin x1) x0)"), m), 0.0);
    }
}

TEST(BottomUp, AgreesWithMergeCount)
{
    auto trees = fixtures::random_trees(400, 34);
    Random rng(35);
    for (int k = 0; k < 1000; ++k) {
        auto const& a = trees[random::index(rng, trees.size())];
        auto const& b = trees[random::index(rng, trees.size())];
        for (auto m : modes) {
            EXPECT_NEAR(bottom_up_distance(a, b, m), tree_distance(a, b, m), 1e-12);
        }
    }
}

TEST(Distance, StructuralNeverExceedsHybrid)
{
    auto trees = fixtures::random_trees(150, 36);
    auto const s = distance_matrix(trees, HashMode::Structural);
    auto const h = distance_matrix(trees, HashMode::Hybrid);
    for (std::size_t i = 0; i < s.packed().size(); ++i) {
        EXPECT_LE(s.packed()[i], h.packed()[i]);
        EXPECT_GE(s.packed()[i], 0.0);
        EXPECT_LE(h.packed()[i], 1.0);
    }
}
