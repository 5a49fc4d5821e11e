// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "evolution.hpp"
#include "format.hpp"
#include "problems.hpp"

namespace divgp {

struct TelemetryToggles {
    bool stats { true };
    bool heatmap { false };
    bool profile { false }; // records wall-clock timings; outputs are then no longer reproducible
};

struct ExperimentConfig {
    AlgorithmConfig algorithm;
    std::string problem { "Poly-10" };
    std::string dataset;           // external CSV; overrides `problem` when set
    std::string target { "target" }; // target column of the external CSV
    std::size_t training_rows { 0 }; // 0 = problem default
    std::size_t test_rows { 0 };
    std::size_t repetitions { 1 };
    std::filesystem::path output { "results" };
    std::string cache_dir; // dataset cache, disabled when empty
    TelemetryToggles telemetry;

    void validate() const
    {
        if (repetitions < 1) {
            throw std::invalid_argument("experiment config: repetitions must be at least 1");
        }
        if (dataset.empty()) {
            (void)find_problem(problem);
        }
        algorithm.validate();
    }

    // Seed of repetition `rep`, derived from the master seed.
    [[nodiscard]] auto repetition_seed(std::size_t rep) const -> std::uint64_t
    {
        return random::mix_seed(algorithm.seed ^ random::mix_seed(rep + 1));
    }
};

namespace detail {
    using Json = nlohmann::ordered_json;

    inline auto parse_function(std::string const& s) -> NodeType
    {
        for (auto f : all_functions) {
            if (symbol(f) == s) {
                return f;
            }
        }
        throw std::invalid_argument("unknown function symbol '" + s + "'");
    }

    template <typename T>
    void read_field(Json const& j, char const* key, T& out)
    {
        if (auto it = j.find(key); it != j.end() && !it->is_null()) {
            out = it->template get<T>();
        }
    }

    inline auto finite_or_null(double v) -> Json { return std::isfinite(v) ? Json(v) : Json(nullptr); }

    inline void write_text(std::filesystem::path const& path, std::string const& text)
    {
        std::ofstream out(path, std::ios::binary);
        out << text;
        if (!out) {
            throw std::runtime_error("cannot write " + path.string());
        }
    }
} // namespace detail

// Unknown keys are rejected so that typos do not silently fall back to defaults.
inline auto experiment_config_from_json(nlohmann::ordered_json const& j) -> ExperimentConfig
{
    static constexpr std::array known {
        "algorithm", "population_size", "generations", "tournament_size", "crossover_probability", "mutation_probability",
        "max_length", "max_depth", "functions", "leaves", "hash_mode", "penalty", "secondary", "threads", "seed", "problem",
        "dataset", "target", "training_rows", "test_rows", "repetitions", "output", "cache_dir", "telemetry"
    };
    if (!j.is_object()) {
        throw std::invalid_argument("config: top level must be an object");
    }
    for (auto const& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }

    ExperimentConfig cfg;
    auto& a = cfg.algorithm;
    std::string s;
    if (j.contains("algorithm")) {
        a.algorithm = parse_algorithm_kind(j.at("algorithm").get<std::string>());
    }
    detail::read_field(j, "population_size", a.population_size);
    detail::read_field(j, "generations", a.generations);
    detail::read_field(j, "tournament_size", a.tournament_size);
    detail::read_field(j, "crossover_probability", a.crossover_probability);
    detail::read_field(j, "mutation_probability", a.mutation_probability);
    detail::read_field(j, "max_length", a.limits.max_length);
    detail::read_field(j, "max_depth", a.limits.max_depth);
    if (j.contains("functions")) {
        a.functions.clear();
        for (auto const& f : j.at("functions")) {
            a.functions.push_back(detail::parse_function(f.get<std::string>()));
        }
    }
    if (j.contains("leaves")) {
        auto const& l = j.at("leaves");
        detail::read_field(l, "constant_min", a.leaves.constant_min);
        detail::read_field(l, "constant_max", a.leaves.constant_max);
        detail::read_field(l, "weight_mean", a.leaves.weight_mean);
        detail::read_field(l, "weight_stddev", a.leaves.weight_stddev);
        detail::read_field(l, "variable_probability", a.leaves.variable_probability);
    }
    if (j.contains("hash_mode")) {
        a.hash_mode = parse_hash_mode(j.at("hash_mode").get<std::string>());
    }
    detail::read_field(j, "penalty", a.penalty);
    if (auto it = j.find("secondary"); it != j.end() && !it->is_null()) {
        a.secondary = ObjectiveSpec { parse_objective_kind(it->get<std::string>()) };
    }
    detail::read_field(j, "threads", a.threads);
    detail::read_field(j, "seed", a.seed);

    detail::read_field(j, "problem", cfg.problem);
    detail::read_field(j, "dataset", cfg.dataset);
    detail::read_field(j, "target", cfg.target);
    detail::read_field(j, "training_rows", cfg.training_rows);
    detail::read_field(j, "test_rows", cfg.test_rows);
    detail::read_field(j, "repetitions", cfg.repetitions);
    if (j.contains("output")) {
        cfg.output = j.at("output").get<std::string>();
    }
    detail::read_field(j, "cache_dir", cfg.cache_dir);
    if (j.contains("telemetry")) {
        auto const& t = j.at("telemetry");
        detail::read_field(t, "stats", cfg.telemetry.stats);
        detail::read_field(t, "heatmap", cfg.telemetry.heatmap);
        detail::read_field(t, "profile", cfg.telemetry.profile);
    }
    cfg.algorithm.record_timing = cfg.telemetry.profile;
    return cfg;
}

inline auto to_json(ExperimentConfig const& cfg) -> nlohmann::ordered_json
{
    auto const& a = cfg.algorithm;
    nlohmann::ordered_json j;
    j["algorithm"] = to_string(a.algorithm);
    j["population_size"] = a.population_size;
    j["generations"] = a.generations;
    j["tournament_size"] = a.tournament_size;
    j["crossover_probability"] = a.crossover_probability;
    j["mutation_probability"] = a.mutation_probability;
    j["max_length"] = a.limits.max_length;
    j["max_depth"] = a.limits.max_depth;
    auto& fs = j["functions"] = nlohmann::ordered_json::array();
    for (auto f : a.functions) {
        fs.push_back(std::string(symbol(f)));
    }
    j["leaves"] = { { "constant_min", a.leaves.constant_min }, { "constant_max", a.leaves.constant_max },
        { "weight_mean", a.leaves.weight_mean }, { "weight_stddev", a.leaves.weight_stddev },
        { "variable_probability", a.leaves.variable_probability } };
    j["hash_mode"] = to_string(a.hash_mode);
    j["penalty"] = a.penalty;
    j["secondary"] = a.secondary ? nlohmann::ordered_json(to_string(a.secondary->kind)) : nlohmann::ordered_json(nullptr);
    j["threads"] = a.threads;
    j["seed"] = a.seed;
    j["problem"] = cfg.problem;
    j["dataset"] = cfg.dataset;
    j["target"] = cfg.target;
    j["training_rows"] = cfg.training_rows;
    j["test_rows"] = cfg.test_rows;
    j["repetitions"] = cfg.repetitions;
    j["output"] = cfg.output.generic_string();
    j["cache_dir"] = cfg.cache_dir;
    j["telemetry"] = { { "stats", cfg.telemetry.stats }, { "heatmap", cfg.telemetry.heatmap }, { "profile", cfg.telemetry.profile } };
    return j;
}

inline auto load_experiment_config(std::filesystem::path const& path) -> ExperimentConfig
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config " + path.string());
    }
    nlohmann::ordered_json j;
    try {
        in >> j;
    } catch (nlohmann::json::parse_error const& e) {
        throw std::invalid_argument("config " + path.string() + ": " + e.what());
    }
    return experiment_config_from_json(j);
}

inline auto load_dataset(ExperimentConfig const& cfg) -> Dataset
{
    if (!cfg.dataset.empty()) {
        return load_csv_dataset(cfg.dataset, cfg.target, cfg.training_rows);
    }
    if (!cfg.cache_dir.empty()) {
        return generate_cached(cfg.problem, cfg.algorithm.seed, cfg.training_rows, cfg.test_rows, cfg.cache_dir);
    }
    return generate(cfg.problem, cfg.algorithm.seed, cfg.training_rows, cfg.test_rows);
}

struct RepetitionResult {
    std::size_t index { 0 };
    std::uint64_t seed { 0 };
    bool completed { false };
    std::string error;
    RunResult run;
    std::string best_model;
    LinearScaling scaling;
    double train_nmse { 0.0 };
    double test_nmse { 0.0 };
    double wall_ms { 0.0 };
};

// Training NMSE after least-squares scaling fitted on the training rows; the
// same scaling is applied to the test rows. Test NMSE is NaN without a test split.
inline void score_best(Individual const& best, Dataset const& ds, RepetitionResult& out)
{
    auto const train = ds.training();
    auto const pred = evaluate(best.tree, ds, train);
    out.scaling = fit_linear_scaling(pred, ds.target(train));
    out.train_nmse = nmse(out.scaling.apply(pred), ds.target(train));
    out.test_nmse = std::numeric_limits<double>::quiet_NaN();
    if (ds.test().size() >= 2) {
        auto const test_pred = evaluate(best.tree, ds, ds.test());
        out.test_nmse = nmse(out.scaling.apply(test_pred), ds.target(ds.test()));
    }
}

inline auto run_repetition(ExperimentConfig const& cfg, Dataset const& ds, std::size_t rep) -> RepetitionResult
{
    RepetitionResult r;
    r.index = rep;
    r.seed = cfg.repetition_seed(rep);
    auto const start = std::chrono::steady_clock::now();
    try {
        auto acfg = cfg.algorithm;
        acfg.seed = r.seed;
        Random rng(r.seed);
        r.run = run(acfg, ds, rng);
        r.best_model = to_prefix(r.run.best.tree);
        score_best(r.run.best, ds, r);
        r.completed = true;
    } catch (std::exception const& e) {
        r.error = e.what();
    }
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

inline auto stats_csv(std::vector<GenerationStats> const& stats) -> std::string
{
    std::ostringstream out;
    out << "generation,best_r2,median_r2,avg_structural_similarity,avg_hybrid_similarity,avg_tree_length,distance_time_ms\n";
    for (auto const& s : stats) {
        out << s.generation << ',' << format_double(s.best_fitness) << ',' << format_double(s.median_fitness) << ','
            << format_double(s.avg_structural_similarity) << ',' << format_double(s.avg_hybrid_similarity) << ','
            << format_double(s.avg_tree_length) << ',' << format_double(s.distance_time_ms) << '\n';
    }
    return out.str();
}

inline auto individual_json(Individual const& ind) -> nlohmann::ordered_json
{
    nlohmann::ordered_json j;
    j["model"] = to_prefix(ind.tree);
    j["length"] = ind.tree.length();
    j["fitness"] = detail::finite_or_null(ind.fitness);
    auto& obj = j["objectives"] = nlohmann::ordered_json::array();
    for (auto v : ind.objectives) {
        obj.push_back(detail::finite_or_null(v));
    }
    j["avg_distance"] = ind.avg_distance;
    j["rank"] = ind.rank;
    j["crowding"] = detail::finite_or_null(ind.crowding); // boundary members serialize as null
    return j;
}

// Fitness-sorted (ascending, stable) distance matrix of a final population.
inline auto heatmap_csv(std::vector<Individual> const& pop, HashMode mode) -> std::string
{
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return pop[a].fitness < pop[b].fitness; });
    std::ostringstream out;
    write_csv(out, detail::population_distances(pop, mode, 1), order);
    return out.str();
}

struct ExperimentResult {
    std::vector<RepetitionResult> repetitions;
    nlohmann::ordered_json summary;

    [[nodiscard]] auto all_completed() const -> bool
    {
        return std::all_of(repetitions.begin(), repetitions.end(), [](auto const& r) { return r.completed; });
    }
};

namespace detail {
    inline auto median_iqr(std::vector<double> const& values) -> Json
    {
        if (values.empty()) {
            return { { "median", nullptr }, { "iqr", nullptr } };
        }
        return { { "median", finite_or_null(median(values)) }, { "iqr", finite_or_null(interquartile_range(values)) } };
    }
} // namespace detail

inline auto summarize(ExperimentConfig const& cfg, std::vector<RepetitionResult> const& reps) -> nlohmann::ordered_json
{
    using Json = nlohmann::ordered_json;
    std::vector<double> train;
    std::vector<double> test;
    std::vector<double> structural;
    std::vector<double> hybrid;
    std::vector<double> r2;
    Json runs = Json::array();
    for (auto const& r : reps) {
        Json e;
        e["repetition"] = r.index;
        e["seed"] = r.seed;
        e["completed"] = r.completed;
        if (!r.completed) {
            e["error"] = r.error;
            runs.push_back(std::move(e));
            continue;
        }
        train.push_back(r.train_nmse);
        if (!std::isnan(r.test_nmse)) {
            test.push_back(r.test_nmse);
        }
        auto const& last = r.run.stats.back();
        structural.push_back(last.avg_structural_similarity);
        hybrid.push_back(last.avg_hybrid_similarity);
        r2.push_back(r.run.best.fitness);
        e["best_model"] = r.best_model;
        e["best_r2"] = r.run.best.fitness;
        e["scaling"] = { { "intercept", detail::finite_or_null(r.scaling.intercept) }, { "slope", detail::finite_or_null(r.scaling.slope) } };
        e["train_nmse"] = detail::finite_or_null(r.train_nmse);
        e["test_nmse"] = detail::finite_or_null(r.test_nmse);
        e["final_structural_similarity"] = last.avg_structural_similarity;
        e["final_hybrid_similarity"] = last.avg_hybrid_similarity;
        if (cfg.telemetry.profile) {
            e["wall_ms"] = r.wall_ms;
            e["distance_ms"] = r.run.distance_time_ms;
        }
        runs.push_back(std::move(e));
    }
    auto const completed = static_cast<std::size_t>(std::count_if(reps.begin(), reps.end(), [](auto const& r) { return r.completed; }));

    Json s;
    s["problem"] = cfg.dataset.empty() ? cfg.problem : cfg.dataset;
    s["algorithm"] = to_string(cfg.algorithm.algorithm);
    s["repetitions"] = reps.size();
    s["completed"] = completed;
    s["all_completed"] = completed == reps.size();
    s["train_nmse"] = detail::median_iqr(train);
    s["test_nmse"] = detail::median_iqr(test);
    s["best_r2"] = detail::median_iqr(r2);
    s["final_structural_similarity"] = detail::median_iqr(structural);
    s["final_hybrid_similarity"] = detail::median_iqr(hybrid);
    s["runs"] = std::move(runs);
    s["config"] = to_json(cfg);
    return s;
}

// Runs every repetition and writes the outputs into cfg.output:
// stats_<rep>.csv, population_<rep>.json, repetitions.csv, summary.json and,
// with the heatmap toggle, heatmap_<rep>.csv plus heatmap.csv (first completed
// repetition).
inline auto run_experiment(ExperimentConfig const& cfg) -> ExperimentResult
{
    cfg.validate();
    auto const ds = load_dataset(cfg);
    std::filesystem::create_directories(cfg.output);
    auto const heat_mode = cfg.algorithm.steering_mode().value_or(HashMode::Hybrid);

    ExperimentResult result;
    bool heatmap_written = false;
    std::ostringstream reps_csv;
    reps_csv << "repetition,seed,completed,best_r2,train_nmse,test_nmse,final_structural_similarity,final_hybrid_similarity,best_model\n";
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
        auto r = run_repetition(cfg, ds, rep);
        auto const tag = std::to_string(rep);
        if (r.completed) {
            if (cfg.telemetry.stats) {
                detail::write_text(cfg.output / ("stats_" + tag + ".csv"), stats_csv(r.run.stats));
            }
            nlohmann::ordered_json pop;
            pop["repetition"] = rep;
            pop["best"] = individual_json(r.run.best);
            auto& members = pop["population"] = nlohmann::ordered_json::array();
            for (auto const& ind : r.run.population) {
                members.push_back(individual_json(ind));
            }
            auto& front = pop["front"] = nlohmann::ordered_json::array();
            for (auto const& ind : r.run.front) {
                front.push_back(individual_json(ind));
            }
            detail::write_text(cfg.output / ("population_" + tag + ".json"), pop.dump(1) + "\n");
            if (cfg.telemetry.heatmap) {
                auto const csv = heatmap_csv(r.run.population, heat_mode);
                detail::write_text(cfg.output / ("heatmap_" + tag + ".csv"), csv);
                if (!heatmap_written) {
                    detail::write_text(cfg.output / "heatmap.csv", csv);
                    heatmap_written = true;
                }
            }
            auto const& last = r.run.stats.back();
            reps_csv << rep << ',' << r.seed << ",1," << format_double(r.run.best.fitness) << ',' << format_double(r.train_nmse) << ','
                     << format_double(r.test_nmse) << ',' << format_double(last.avg_structural_similarity) << ','
                     << format_double(last.avg_hybrid_similarity) << ",\"" << r.best_model << "\"\n";
        } else {
            reps_csv << rep << ',' << r.seed << ",0,,,,,,\n";
        }
        result.repetitions.push_back(std::move(r));
    }
    detail::write_text(cfg.output / "repetitions.csv", reps_csv.str());
    result.summary = summarize(cfg, result.repetitions);
    detail::write_text(cfg.output / "summary.json", result.summary.dump(2) + "\n");
    return result;
}

struct ProfileReport {
    std::size_t generations { 0 };
    double total_ms { 0.0 };       // algorithm wall time, telemetry excluded
    double distance_ms { 0.0 };    // steering distance matrices
    double telemetry_ms { 0.0 };   // similarity telemetry, reported separately
    double max_generation_distance_ms { 0.0 };
    double mean_generation_distance_ms { 0.0 };

    [[nodiscard]] auto overhead() const -> double { return total_ms > 0.0 ? distance_ms / total_ms : 0.0; }
};

// One timed run of the first repetition.
inline auto profile_run(ExperimentConfig cfg) -> ProfileReport
{
    cfg.telemetry.profile = true;
    cfg.algorithm.record_timing = true;
    cfg.validate();
    auto const ds = load_dataset(cfg);
    auto acfg = cfg.algorithm;
    acfg.seed = cfg.repetition_seed(0);
    Random rng(acfg.seed);
    auto const start = std::chrono::steady_clock::now();
    auto const res = run(acfg, ds, rng);
    auto const wall = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    ProfileReport p;
    p.generations = res.stats.size();
    p.telemetry_ms = res.telemetry_time_ms;
    p.total_ms = std::max(0.0, wall - res.telemetry_time_ms);
    p.distance_ms = res.distance_time_ms;
    for (auto const& s : res.stats) {
        p.max_generation_distance_ms = std::max(p.max_generation_distance_ms, s.distance_time_ms);
    }
    p.mean_generation_distance_ms = p.generations > 0 ? p.distance_ms / static_cast<double>(p.generations) : 0.0;
    return p;
}

} // namespace divgp
