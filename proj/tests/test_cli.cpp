// SPDX-License-Identifier: MIT

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace divgp;

namespace {

auto slurp(std::filesystem::path const& p) -> std::string
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

auto base_config(std::string const& name) -> ExperimentConfig
{
    auto j = nlohmann::ordered_json::parse(R"({
        "algorithm": "ga", "population_size": 10, "generations": 2,
        "problem": "Poly-10", "repetitions": 1, "seed": 42
    })");
    auto cfg = experiment_config_from_json(j);
    cfg.output = std::filesystem::temp_directory_path() / ("divgp_cli_" + name);
    std::filesystem::remove_all(cfg.output);
    return cfg;
}

auto parse_csv(std::string const& text) -> std::vector<std::vector<std::string>>
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            row.push_back(cell);
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace

TEST(Experiment, Smoke)
{
    auto const cfg = base_config("smoke");
    auto const res = run_experiment(cfg);
    EXPECT_TRUE(res.all_completed());
    auto const s = nlohmann::json::parse(slurp(cfg.output / "summary.json"));
    EXPECT_TRUE(s["all_completed"].get<bool>());
    EXPECT_TRUE(std::isfinite(s["train_nmse"]["median"].get<double>()));
    EXPECT_TRUE(std::isfinite(s["test_nmse"]["median"].get<double>()));
    EXPECT_FALSE(s["runs"][0]["best_model"].get<std::string>().empty());
    auto const stats = parse_csv(slurp(cfg.output / "stats_0.csv"));
    ASSERT_EQ(stats.size(), 3u);
    EXPECT_EQ(stats[0].size(), 7u);
    EXPECT_EQ(stats[0][0], "generation");
}

TEST(Experiment, BestModelReproducesReportedNmse)
{
    auto const cfg = base_config("model");
    auto const res = run_experiment(cfg);
    auto const s = nlohmann::json::parse(slurp(cfg.output / "summary.json"));
    auto const run = s["runs"][0];
    auto const tree = from_prefix(run["best_model"].get<std::string>());
    auto const ds = generate(cfg.problem, cfg.algorithm.seed);
    auto const pred = evaluate(tree, ds, ds.training());
    LinearScaling const sc { run["scaling"]["intercept"].get<double>(), run["scaling"]["slope"].get<double>() };
    EXPECT_EQ(nmse(sc.apply(pred), ds.target(ds.training())), run["train_nmse"].get<double>());
    EXPECT_EQ(r_squared(pred, ds.target(ds.training())), run["best_r2"].get<double>());
}

TEST(Experiment, Reproducible)
{
    auto a = base_config("rep_a");
    a.repetitions = 3;
    auto b = base_config("rep_b");
    b.repetitions = 3;
    run_experiment(a);
    run_experiment(b);
    for (std::string f : { "stats_0.csv", "stats_1.csv", "stats_2.csv", "repetitions.csv", "population_2.json" }) {
        EXPECT_EQ(slurp(a.output / f), slurp(b.output / f)) << f;
    }
    // summaries differ only in the echoed output directory
    auto sa = nlohmann::json::parse(slurp(a.output / "summary.json"));
    auto sb = nlohmann::json::parse(slurp(b.output / "summary.json"));
    sa["config"].erase("output");
    sb["config"].erase("output");
    EXPECT_EQ(sa, sb);
    EXPECT_NE(sa["runs"][0]["seed"], sa["runs"][1]["seed"]);
}

TEST(Experiment, SummaryRecomputableFromRepetitionsCsv)
{
    auto cfg = base_config("recompute");
    cfg.repetitions = 4;
    run_experiment(cfg);
    auto const rows = parse_csv(slurp(cfg.output / "repetitions.csv"));
    ASSERT_EQ(rows.size(), 5u);
    std::vector<double> train;
    std::vector<double> test;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        train.push_back(parse_double(rows[r][4]));
        test.push_back(parse_double(rows[r][5]));
    }
    auto const s = nlohmann::json::parse(slurp(cfg.output / "summary.json"));
    EXPECT_NEAR(s["train_nmse"]["median"].get<double>(), median(train), 1e-12);
    EXPECT_NEAR(s["train_nmse"]["iqr"].get<double>(), interquartile_range(train), 1e-12);
    EXPECT_NEAR(s["test_nmse"]["median"].get<double>(), median(test), 1e-12);
    EXPECT_NEAR(s["test_nmse"]["iqr"].get<double>(), interquartile_range(test), 1e-12);
}

TEST(Experiment, Heatmap)
{
    auto cfg = base_config("heatmap");
    cfg.algorithm.population_size = 50;
    cfg.algorithm.penalty = true;
    cfg.telemetry.heatmap = true;
    run_experiment(cfg);
    auto const rows = parse_csv(slurp(cfg.output / "heatmap.csv"));
    ASSERT_EQ(rows.size(), 51u);
    EXPECT_EQ(rows[0][0], "50");
    std::vector<std::vector<double>> m;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        ASSERT_EQ(rows[r].size(), 50u);
        std::vector<double> row;
        for (auto const& c : rows[r]) {
            row.push_back(parse_double(c));
        }
        m.push_back(row);
    }
    for (std::size_t i = 0; i < 50; ++i) {
        EXPECT_EQ(m[i][i], 0.0);
        for (std::size_t j = 0; j < 50; ++j) {
            EXPECT_EQ(m[i][j], m[j][i]);
        }
    }
    // rows follow increasing fitness of the serialized population
    auto const pop = nlohmann::json::parse(slurp(cfg.output / "population_0.json"))["population"];
    std::vector<std::pair<double, std::size_t>> order;
    std::vector<HashSequence> hashes;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        order.emplace_back(pop[i]["fitness"].get<double>(), i);
        hashes.push_back(sorted_hash_sequence(from_prefix(pop[i]["model"].get<std::string>()), HashMode::Hybrid));
    }
    std::stable_sort(order.begin(), order.end(), [](auto a, auto b) { return a.first < b.first; });
    for (std::size_t i = 0; i < 50; ++i) {
        for (std::size_t j = 0; j < 50; j += 7) {
            EXPECT_EQ(m[i][j], i == j ? 0.0 : merge_count_distance(hashes[order[i].second], hashes[order[j].second]));
        }
    }
}

TEST(Experiment, FailedRepetitionIsFlagged)
{
    auto cfg = base_config("fail");
    cfg.training_rows = 1; // too few rows for R^2
    auto const res = run_experiment(cfg);
    EXPECT_FALSE(res.all_completed());
    auto const s = nlohmann::json::parse(slurp(cfg.output / "summary.json"));
    EXPECT_FALSE(s["all_completed"].get<bool>());
    EXPECT_FALSE(s["runs"][0]["completed"].get<bool>());
}

TEST(Config, ParsesAndRejects)
{
    auto j = nlohmann::ordered_json::parse(R"({
        "algorithm": "nsga2", "secondary": "tree_length", "functions": ["+", "*", "sin"],
        "max_length": 30, "hash_mode": "structural", "telemetry": {"heatmap": true}
    })");
    auto const cfg = experiment_config_from_json(j);
    EXPECT_EQ(cfg.algorithm.algorithm, AlgorithmKind::NSGA2);
    EXPECT_EQ(cfg.algorithm.secondary->kind, ObjectiveKind::TreeLength);
    EXPECT_EQ(cfg.algorithm.functions.size(), 3u);
    EXPECT_EQ(cfg.algorithm.limits.max_length, 30u);
    EXPECT_EQ(cfg.algorithm.hash_mode, HashMode::Structural);
    EXPECT_TRUE(cfg.telemetry.heatmap);
    // the echoed config parses back to the same values
    auto const again = experiment_config_from_json(to_json(cfg));
    EXPECT_EQ(to_json(again), to_json(cfg));

    EXPECT_THROW((void)experiment_config_from_json(nlohmann::ordered_json::parse(R"({"populaton_size": 3})")), std::invalid_argument);
    EXPECT_THROW((void)experiment_config_from_json(nlohmann::ordered_json::parse(R"({"secondary": "nope"})")), std::invalid_argument);
    EXPECT_THROW((void)experiment_config_from_json(nlohmann::ordered_json::parse(R"({"functions": ["tan"]})")), std::invalid_argument);
    auto bad = cfg;
    bad.repetitions = 0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Profile, OverheadWithAndWithoutSteering)
{
    auto cfg = base_config("profile");
    cfg.algorithm.population_size = 50;
    cfg.algorithm.generations = 5;
    auto const plain = profile_run(cfg);
    EXPECT_EQ(plain.distance_ms, 0.0);
    EXPECT_EQ(plain.overhead(), 0.0);
    cfg.algorithm.penalty = true;
    auto const steered = profile_run(cfg);
    EXPECT_GT(steered.distance_ms, 0.0);
    EXPECT_LT(steered.distance_ms, steered.total_ms);
    EXPECT_EQ(steered.generations, 5u);
}

TEST(Bench, SmallRun)
{
    BenchConfig bc;
    bc.n = 100;
    bc.length = 50;
    auto const r = bench_distance(bc);
    EXPECT_EQ(r.pairs, 4950u);
    EXPECT_TRUE(r.single_matches_batch);
    ASSERT_TRUE(r.bottom_up.has_value());
    EXPECT_LE(r.max_baseline_deviation, 1e-12);
    EXPECT_LT(r.batch.estimated_ms, r.single.estimated_ms);
    ASSERT_EQ(r.phases.size(), 4u);
}
