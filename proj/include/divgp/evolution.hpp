// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "creator.hpp"
#include "dataset.hpp"
#include "distance.hpp"
#include "interpreter.hpp"
#include "metrics.hpp"
#include "objectives.hpp"
#include "pareto.hpp"
#include "random.hpp"
#include "variation.hpp"

namespace divgp {

enum class AlgorithmKind : std::uint8_t { GA, NSGA2 };

constexpr auto to_string(AlgorithmKind kind) noexcept -> std::string_view
{
    return kind == AlgorithmKind::GA ? "ga" : "nsga2";
}

inline auto parse_algorithm_kind(std::string_view s) -> AlgorithmKind
{
    if (s == "ga") {
        return AlgorithmKind::GA;
    }
    if (s == "nsga2") {
        return AlgorithmKind::NSGA2;
    }
    throw std::invalid_argument("unknown algorithm '" + std::string(s) + "'");
}

struct AlgorithmConfig {
    AlgorithmKind algorithm { AlgorithmKind::GA };
    std::size_t population_size { 1000 };
    std::size_t generations { 500 };
    std::size_t tournament_size { 5 };
    double crossover_probability { 1.0 };
    double mutation_probability { 0.25 };
    TreeLimits limits {};
    std::vector<NodeType> functions { all_functions.begin(), all_functions.end() };
    LeafInitializer leaves {};
    HashMode hash_mode { HashMode::Hybrid }; // GA penalty mode
    bool penalty { false };                  // GA only
    std::optional<ObjectiveSpec> secondary;  // NSGA-II only
    bool record_timing { false };
    std::size_t threads { 1 };
    std::uint64_t seed { 0 };

    void validate() const
    {
        auto fail = [](std::string const& msg) { throw std::invalid_argument("algorithm config: " + msg); };
        if (population_size < 2) {
            fail("population size must be at least 2");
        }
        if (generations < 1) {
            fail("generations must be at least 1");
        }
        if (tournament_size < 1) {
            fail("tournament size must be at least 1");
        }
        auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
        if (!prob(crossover_probability) || !prob(mutation_probability)) {
            fail("probabilities must lie in [0, 1]");
        }
        if (functions.empty()) {
            fail("function set must not be empty");
        }
        limits.validate();
        if (algorithm == AlgorithmKind::NSGA2 && !secondary) {
            fail("NSGA-II requires a secondary objective");
        }
        if (algorithm == AlgorithmKind::GA && secondary) {
            fail("the GA does not take a secondary objective (use the penalty instead)");
        }
        if (algorithm == AlgorithmKind::NSGA2 && penalty) {
            fail("the fitness penalty applies to the GA only");
        }
    }

    // Hash mode used to steer selection, if any.
    [[nodiscard]] auto steering_mode() const -> std::optional<HashMode>
    {
        if (algorithm == AlgorithmKind::GA) {
            return penalty ? std::optional(hash_mode) : std::nullopt;
        }
        if (secondary && secondary->is_distance()) {
            return secondary->hash_mode();
        }
        return std::nullopt;
    }
};

struct Individual {
    Tree tree;
    double fitness { 0.0 }; // R^2 on the training rows
    std::vector<double> objectives;
    double avg_distance { 0.0 };
    std::size_t rank { 0 };
    double crowding { 0.0 };
};

struct GenerationStats {
    std::size_t generation { 0 };
    double best_fitness { 0.0 };
    double median_fitness { 0.0 };
    double avg_structural_similarity { 0.0 };
    double avg_hybrid_similarity { 0.0 };
    double avg_tree_length { 0.0 };
    double distance_time_ms { 0.0 }; // steering distance matrix; 0 unless timing is recorded
};

struct RunResult {
    std::vector<Individual> population; // final generation
    std::vector<Individual> front;      // NSGA-II: rank-0 members of the final population
    Individual best;                    // highest training R^2
    std::vector<GenerationStats> stats;
    double distance_time_ms { 0.0 };
    double telemetry_time_ms { 0.0 };
};

namespace detail {
    using Clock = std::chrono::steady_clock;

    inline auto elapsed_ms(Clock::time_point since) -> double
    {
        return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
    }

    inline auto hash_population(std::span<Individual const> pop, HashMode mode) -> std::vector<HashSequence>
    {
        std::vector<HashSequence> hashes(pop.size());
        TreeHasher hasher(mode);
        for (std::size_t i = 0; i < pop.size(); ++i) {
            hasher.hash(pop[i].tree, hashes[i].values);
            std::sort(hashes[i].values.begin(), hashes[i].values.end());
            hashes[i].sorted = true;
        }
        return hashes;
    }

    inline auto population_distances(std::span<Individual const> pop, HashMode mode, std::size_t threads) -> DistanceMatrix
    {
        return distance_matrix(hash_population(pop, mode), threads);
    }

    class Evaluator {
    public:
        explicit Evaluator(Dataset const& ds)
            : ds_(ds)
        {
        }

        [[nodiscard]] auto fitness(Tree const& tree) const -> double
        {
            auto const rows = ds_.training();
            return r_squared(evaluate(tree, ds_, rows), ds_.target(rows));
        }

        [[nodiscard]] auto make(Tree tree) const -> Individual
        {
            Individual ind;
            ind.fitness = fitness(tree);
            ind.tree = std::move(tree);
            return ind;
        }

    private:
        Dataset const& ds_;
    };

    // Index of the best of `size` uniformly drawn contestants; ties keep the first drawn.
    template <typename Better>
    auto tournament(Random& rng, std::size_t n, std::size_t size, Better&& better) -> std::size_t
    {
        auto best = random::index(rng, n);
        for (std::size_t k = 1; k < size; ++k) {
            auto const c = random::index(rng, n);
            if (better(c, best)) {
                best = c;
            }
        }
        return best;
    }

    inline auto breed(Random& rng, AlgorithmConfig const& cfg, PrimitiveSet const& ps, Tree const& a, Tree const& b) -> Tree
    {
        auto child = random::bernoulli(rng, cfg.crossover_probability) ? subtree_crossover(rng, a, b, cfg.limits) : a;
        if (random::bernoulli(rng, cfg.mutation_probability)) {
            child = mutate(rng, child, cfg.limits, ps);
        }
        return child;
    }

    inline auto best_index(std::span<Individual const> pop) -> std::size_t
    {
        std::size_t best = 0;
        for (std::size_t i = 1; i < pop.size(); ++i) {
            if (pop[i].fitness > pop[best].fitness) {
                best = i;
            }
        }
        return best;
    }

    // Fills one GenerationStats entry; `steering` may be reused for the
    // similarity of its own mode. Sets each individual's avg_distance from the
    // matrix in `distance_mode`.
    inline auto record_generation(std::size_t generation, std::vector<Individual>& pop, AlgorithmConfig const& cfg,
        std::optional<std::pair<HashMode, DistanceMatrix const*>> steering, HashMode distance_mode, RunResult& result) -> GenerationStats
    {
        auto const start = Clock::now();
        GenerationStats st;
        st.generation = generation;

        std::vector<double> fitness(pop.size());
        double length = 0.0;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            fitness[i] = pop[i].fitness;
            length += static_cast<double>(pop[i].tree.length());
        }
        st.best_fitness = *std::max_element(fitness.begin(), fitness.end());
        st.median_fitness = median(fitness);
        st.avg_tree_length = length / static_cast<double>(pop.size());

        for (auto mode : { HashMode::Structural, HashMode::Hybrid }) {
            std::optional<DistanceMatrix> own;
            DistanceMatrix const* dm = nullptr;
            if (steering && steering->first == mode) {
                dm = steering->second;
            } else {
                own = population_distances(pop, mode, cfg.threads);
                dm = &*own;
            }
            auto const similarity = average_population_similarity(*dm);
            (mode == HashMode::Structural ? st.avg_structural_similarity : st.avg_hybrid_similarity) = similarity;
            if (mode == distance_mode) {
                auto avg = average_distances(*dm);
                for (std::size_t i = 0; i < pop.size(); ++i) {
                    pop[i].avg_distance = avg[i];
                }
            }
        }
        if (cfg.record_timing) {
            result.telemetry_time_ms += elapsed_ms(start);
        }
        return st;
    }
} // namespace detail

// Generational GA with tournament selection and an elite of one. With the
// penalty enabled, selection uses f' = f - s where s = 1 - average distance of
// the individual to the rest of the population (distance in cfg.hash_mode).
inline auto run_ga(AlgorithmConfig const& cfg, Dataset const& ds, Random& rng) -> RunResult
{
    cfg.validate();
    if (cfg.algorithm != AlgorithmKind::GA) {
        throw std::invalid_argument("run_ga: configuration is not a GA configuration");
    }
    PrimitiveSet const ps { cfg.functions, ds.variables(), cfg.leaves };
    ps.validate();
    detail::Evaluator const eval(ds);

    RunResult result;
    auto& pop = result.population;
    pop.reserve(cfg.population_size);
    for (std::size_t i = 0; i < cfg.population_size; ++i) {
        pop.push_back(eval.make(create_tree_ptc2(rng, cfg.limits, ps)));
    }

    std::vector<double> score(cfg.population_size);
    for (std::size_t gen = 0; gen < cfg.generations; ++gen) {
        std::optional<DistanceMatrix> steering;
        double dm_ms = 0.0;
        if (cfg.penalty) {
            auto const start = detail::Clock::now();
            steering = detail::population_distances(pop, cfg.hash_mode, cfg.threads);
            auto const avg = average_distances(*steering);
            if (cfg.record_timing) {
                dm_ms = detail::elapsed_ms(start);
            }
            for (std::size_t i = 0; i < pop.size(); ++i) {
                score[i] = penalized_fitness(pop[i].fitness, 1.0 - avg[i]);
            }
        } else {
            for (std::size_t i = 0; i < pop.size(); ++i) {
                score[i] = pop[i].fitness;
            }
        }
        std::optional<std::pair<HashMode, DistanceMatrix const*>> steer;
        if (steering) {
            steer = std::pair { cfg.hash_mode, &*steering };
        }
        auto st = detail::record_generation(gen, pop, cfg, steer, cfg.hash_mode, result);
        st.distance_time_ms = dm_ms;
        result.distance_time_ms += dm_ms;
        result.stats.push_back(st);

        if (gen + 1 == cfg.generations) {
            break;
        }

        std::vector<Individual> next;
        next.reserve(cfg.population_size);
        next.push_back(pop[detail::best_index(pop)]);
        auto better = [&](std::size_t a, std::size_t b) { return score[a] > score[b]; };
        while (next.size() < cfg.population_size) {
            auto const p1 = detail::tournament(rng, pop.size(), cfg.tournament_size, better);
            auto const p2 = detail::tournament(rng, pop.size(), cfg.tournament_size, better);
            next.push_back(eval.make(detail::breed(rng, cfg, ps, pop[p1].tree, pop[p2].tree)));
        }
        pop = std::move(next);
    }
    result.best = pop[detail::best_index(pop)];
    return result;
}

namespace detail {
    // Objective vectors (R^2, secondary) for `pop`; distance objectives are
    // average distances within `pop`. Returns the time spent on the distance
    // matrix in milliseconds (0 when not recorded).
    inline auto assign_objectives(std::vector<Individual>& pop, AlgorithmConfig const& cfg) -> double
    {
        auto const spec = *cfg.secondary;
        double ms = 0.0;
        std::vector<double> secondary(pop.size());
        if (spec.is_distance()) {
            auto const start = Clock::now();
            auto const avg = average_distances(population_distances(pop, spec.hash_mode(), cfg.threads));
            if (cfg.record_timing) {
                ms = elapsed_ms(start);
            }
            secondary = avg;
        } else {
            for (std::size_t i = 0; i < pop.size(); ++i) {
                secondary[i] = structural_objective(spec.kind, pop[i].tree);
            }
        }
        for (std::size_t i = 0; i < pop.size(); ++i) {
            pop[i].objectives = { pop[i].fitness, secondary[i] };
        }
        return ms;
    }

    // Sets rank and crowding distance of every individual; returns the fronts.
    inline auto rank_and_crowd(std::vector<Individual>& pop, std::span<Direction const> directions) -> std::vector<std::vector<std::size_t>>
    {
        std::vector<std::vector<double>> points(pop.size());
        for (std::size_t i = 0; i < pop.size(); ++i) {
            points[i] = pop[i].objectives;
        }
        auto sorted = fast_nondominated_sort(points, directions);
        for (auto const& front : sorted.fronts) {
            std::vector<std::vector<double>> fp;
            fp.reserve(front.size());
            for (auto i : front) {
                fp.push_back(points[i]);
            }
            auto const cd = crowding_distance(fp);
            for (std::size_t k = 0; k < front.size(); ++k) {
                pop[front[k]].rank = sorted.rank[front[k]];
                pop[front[k]].crowding = cd[k];
            }
        }
        return std::move(sorted.fronts);
    }
} // namespace detail

// NSGA-II with (maximize R^2, secondary objective). Parent selection uses
// tournaments of cfg.tournament_size under the crowded comparison (lower rank,
// then larger crowding distance). Distance objectives of the merged
// parent + offspring population are computed against that merged population.
inline auto run_nsga2(AlgorithmConfig const& cfg, Dataset const& ds, Random& rng) -> RunResult
{
    cfg.validate();
    if (cfg.algorithm != AlgorithmKind::NSGA2) {
        throw std::invalid_argument("run_nsga2: configuration is not an NSGA-II configuration");
    }
    PrimitiveSet const ps { cfg.functions, ds.variables(), cfg.leaves };
    ps.validate();
    detail::Evaluator const eval(ds);
    std::array<Direction, 2> const directions { Direction::Maximize, cfg.secondary->direction() };
    auto const distance_mode = cfg.secondary->is_distance() ? cfg.secondary->hash_mode() : cfg.hash_mode;
    auto const n = cfg.population_size;

    RunResult result;
    auto& pop = result.population;
    pop.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        pop.push_back(eval.make(create_tree_ptc2(rng, cfg.limits, ps)));
    }
    auto dm_ms = detail::assign_objectives(pop, cfg);
    detail::rank_and_crowd(pop, directions);

    for (std::size_t gen = 0;; ++gen) {
        auto st = detail::record_generation(gen, pop, cfg, std::nullopt, distance_mode, result);
        st.distance_time_ms = dm_ms;
        result.distance_time_ms += dm_ms;
        result.stats.push_back(st);
        if (gen + 1 == cfg.generations) {
            break;
        }

        auto crowded_better = [&](std::size_t a, std::size_t b) {
            return pop[a].rank < pop[b].rank || (pop[a].rank == pop[b].rank && pop[a].crowding > pop[b].crowding);
        };
        std::vector<Individual> merged = pop;
        merged.reserve(2 * n);
        for (std::size_t k = 0; k < n; ++k) {
            auto const p1 = detail::tournament(rng, n, cfg.tournament_size, crowded_better);
            auto const p2 = detail::tournament(rng, n, cfg.tournament_size, crowded_better);
            merged.push_back(eval.make(detail::breed(rng, cfg, ps, pop[p1].tree, pop[p2].tree)));
        }
        dm_ms = detail::assign_objectives(merged, cfg);
        auto const fronts = detail::rank_and_crowd(merged, directions);

        std::vector<Individual> next;
        next.reserve(n);
        for (auto const& front : fronts) {
            if (next.size() + front.size() <= n) {
                for (auto i : front) {
                    next.push_back(merged[i]);
                }
                continue;
            }
            auto last = front;
            std::stable_sort(last.begin(), last.end(), [&](auto a, auto b) { return merged[a].crowding > merged[b].crowding; });
            for (std::size_t k = 0; next.size() < n; ++k) {
                next.push_back(merged[last[k]]);
            }
            break;
        }
        pop = std::move(next);
    }

    for (auto const& ind : pop) {
        if (ind.rank == 0) {
            result.front.push_back(ind);
        }
    }
    result.best = pop[detail::best_index(pop)];
    return result;
}

inline auto run(AlgorithmConfig const& cfg, Dataset const& ds, Random& rng) -> RunResult
{
    return cfg.algorithm == AlgorithmKind::GA ? run_ga(cfg, ds, rng) : run_nsga2(cfg, ds, rng);
}

} // namespace divgp
