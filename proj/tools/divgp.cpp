// SPDX-License-Identifier: MIT
// Command-line front end: run, profile, bench-distance, list-problems.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include <divgp/divgp.hpp>

namespace {

using Json = nlohmann::ordered_json;

// Flags that override fields of the config file.
struct Overrides {
    std::optional<std::string> output;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> repetitions;
    std::optional<std::size_t> population;
    std::optional<std::size_t> generations;
    std::optional<std::string> problem;
    std::optional<std::size_t> threads;
    bool heatmap { false };
    bool profile { false };

    void add_to(CLI::App* cmd)
    {
        cmd->add_option("-o,--output", output, "Output directory");
        cmd->add_option("--seed", seed, "Master seed");
        cmd->add_option("--repetitions", repetitions, "Number of repetitions");
        cmd->add_option("--population", population, "Population size");
        cmd->add_option("--generations", generations, "Number of generations");
        cmd->add_option("--problem", problem, "Benchmark problem name");
        cmd->add_option("--threads", threads, "Threads for distance matrices");
        cmd->add_flag("--heatmap", heatmap, "Write the final-generation similarity matrix");
        cmd->add_flag("--profile", profile, "Record wall-clock timings (outputs are no longer reproducible)");
    }

    void apply(divgp::ExperimentConfig& cfg) const
    {
        if (output) cfg.output = *output;
        if (seed) cfg.algorithm.seed = *seed;
        if (repetitions) cfg.repetitions = *repetitions;
        if (population) cfg.algorithm.population_size = *population;
        if (generations) cfg.algorithm.generations = *generations;
        if (problem) {
            cfg.problem = *problem;
            cfg.dataset.clear();
        }
        if (threads) cfg.algorithm.threads = *threads;
        if (heatmap) cfg.telemetry.heatmap = true;
        if (profile) {
            cfg.telemetry.profile = true;
            cfg.algorithm.record_timing = true;
        }
    }
};

auto bench_json(divgp::BenchReport const& r) -> Json
{
    auto timing = [](divgp::BenchTiming const& t) {
        return Json { { "pairs_measured", t.pairs_measured }, { "measured_ms", t.measured_ms }, { "estimated_ms", t.estimated_ms } };
    };
    Json j;
    j["n"] = r.config.n;
    j["max_length"] = r.config.length;
    j["mean_length"] = r.mean_length;
    j["mode"] = divgp::to_string(r.config.mode);
    j["seed"] = r.config.seed;
    j["pairs"] = r.pairs;
    if (r.bottom_up) {
        j["bottom_up"] = timing(*r.bottom_up);
    }
    j["single"] = timing(r.single);
    j["batch"] = timing(r.batch);
    Json speedup;
    if (r.bottom_up) {
        speedup["single_vs_bottom_up"] = r.bottom_up->estimated_ms / r.single.estimated_ms;
        speedup["batch_vs_bottom_up"] = r.bottom_up->estimated_ms / r.batch.estimated_ms;
    }
    speedup["batch_vs_single"] = r.single.estimated_ms / r.batch.estimated_ms;
    j["speedup"] = speedup;
    auto& phases = j["phases"] = Json::array();
    for (auto const& p : r.phases) {
        phases.push_back({ { "procedure", p.name }, { "ms", p.ms } });
    }
    j["single_matches_batch"] = r.single_matches_batch;
    j["max_bottom_up_deviation"] = r.max_baseline_deviation;
    return j;
}

void print_bench(divgp::BenchReport const& r, std::ostream& os)
{
    os << "trees " << r.config.n << ", mean length " << r.mean_length << ", " << r.pairs << " pairs, mode "
       << divgp::to_string(r.config.mode) << "\n";
    auto line = [&](char const* name, divgp::BenchTiming const& t) {
        os << "  " << name << ": " << t.estimated_ms << " ms";
        if (t.pairs_measured != r.pairs) {
            os << " (extrapolated from " << t.pairs_measured << " pairs)";
        }
        os << "\n";
    };
    if (r.bottom_up) {
        line("bottom-up  ", *r.bottom_up);
    }
    line("hash single", r.single);
    line("hash batch ", r.batch);
    os << "  batch speedup over single: " << r.single.estimated_ms / r.batch.estimated_ms << "x\n";
    if (r.bottom_up) {
        os << "  batch speedup over bottom-up: " << r.bottom_up->estimated_ms / r.batch.estimated_ms << "x\n";
    }
    os << "  batch phases:\n";
    for (auto const& p : r.phases) {
        os << "    " << p.name << ": " << p.ms << " ms\n";
    }
}

auto load_config(std::string const& path, Overrides const& ov) -> divgp::ExperimentConfig
{
    auto cfg = divgp::load_experiment_config(path);
    ov.apply(cfg);
    cfg.validate();
    return cfg;
}

} // namespace

auto main(int argc, char** argv) -> int
{
    CLI::App app { "Symbolic regression GP with hash-based population diversity control" };
    app.require_subcommand(1);

    std::string config_path;
    Overrides run_ov;
    auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
    run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    run_ov.add_to(run);

    Overrides prof_ov;
    auto* profile = app.add_subcommand("profile", "Report total runtime and distance-matrix overhead of one run");
    profile->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    prof_ov.add_to(profile);

    divgp::BenchConfig bc;
    std::string mode = "hybrid";
    std::string bench_out = "bench.json";
    bool no_baseline = false;
    auto* bench = app.add_subcommand("bench-distance", "Time bottom-up, single-mode and batch-mode distance computation");
    bench->add_option("--n", bc.n, "Number of trees")->check(CLI::Range(2, 1 << 20));
    bench->add_option("--len", bc.length, "Maximum tree length")->check(CLI::PositiveNumber);
    bench->add_option("--mode", mode, "Hash mode")->check(CLI::IsMember({ "structural", "hybrid" }));
    bench->add_option("--seed", bc.seed, "Tree generation seed");
    bench->add_option("--baseline-pairs", bc.baseline_pairs, "Pairs timed for the bottom-up baseline (0 = all)");
    bench->add_option("--single-pairs", bc.single_pairs, "Pairs timed in single mode (0 = all)");
    bench->add_flag("--no-baseline", no_baseline, "Skip the bottom-up baseline");
    bench->add_option("-o,--output", bench_out, "Report file");

    auto* list = app.add_subcommand("list-problems", "List the registered benchmark problems");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            auto const cfg = load_config(config_path, run_ov);
            auto const res = divgp::run_experiment(cfg);
            for (auto const& r : res.repetitions) {
                if (r.completed) {
                    std::cout << "rep " << r.index << ": train nmse " << r.train_nmse << ", test nmse " << r.test_nmse << ", best "
                              << r.best_model << "\n";
                } else {
                    std::cerr << "rep " << r.index << " failed: " << r.error << "\n";
                }
            }
            std::cout << "results in " << cfg.output.string() << "\n";
            return res.all_completed() ? EXIT_SUCCESS : EXIT_FAILURE;
        }
        if (*profile) {
            auto const cfg = load_config(config_path, prof_ov);
            auto const p = divgp::profile_run(cfg);
            Json j;
            j["generations"] = p.generations;
            j["population_size"] = cfg.algorithm.population_size;
            j["total_ms"] = p.total_ms;
            j["distance_ms"] = p.distance_ms;
            j["overhead"] = p.overhead();
            j["max_generation_distance_ms"] = p.max_generation_distance_ms;
            j["mean_generation_distance_ms"] = p.mean_generation_distance_ms;
            j["telemetry_ms"] = p.telemetry_ms;
            std::filesystem::create_directories(cfg.output);
            std::ofstream(cfg.output / "profile.json") << j.dump(2) << "\n";
            std::cout << "runtime " << p.total_ms << " ms, distance matrices " << p.distance_ms << " ms, overhead "
                      << 100.0 * p.overhead() << "%\n"
                      << "per generation: mean " << p.mean_generation_distance_ms << " ms, max " << p.max_generation_distance_ms << " ms\n";
            return EXIT_SUCCESS;
        }
        if (*bench) {
            bc.mode = divgp::parse_hash_mode(mode);
            bc.run_baseline = !no_baseline;
            auto const report = divgp::bench_distance(bc);
            print_bench(report, std::cout);
            std::ofstream out(bench_out);
            out << bench_json(report).dump(2) << "\n";
            if (!out) {
                throw std::runtime_error("cannot write " + bench_out);
            }
            return EXIT_SUCCESS;
        }
        if (*list) {
            for (auto const& p : divgp::list_problems()) {
                std::cout << p.name << "  inputs=" << p.inputs << "  train=" << p.default_training_rows()
                          << "  test=" << p.default_test_rows() << "  (" << p.origin << ")\n";
            }
            return EXIT_SUCCESS;
        }
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_FAILURE;
    }
    return EXIT_SUCCESS;
}
