#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tcdiff/measure.hpp"
#include "tcdiff/parallel.hpp"
#include "tcdiff/rng.hpp"
#include "tcdiff/statistics.hpp"

namespace tcdiff::evolve {

using measure::MeasureGenome;

/// Model x dataset matrix of test-set macro-F1 scores. Holdout models are
/// carried along but excluded from fitness.
struct ScoreMatrix {
    std::vector<std::string> models;
    std::vector<std::string> datasets;
    std::vector<std::vector<double>> scores;  // [model][dataset], in [0,1]
    std::set<std::string> holdout_models;

    /// CSV: first column `dataset`, one column per model. Validates scores
    /// and requires at least 3 datasets.
    static ScoreMatrix from_csv(const std::filesystem::path& path,
                                const std::vector<std::string>& holdout = {});
    void validate() const;
};

/// Statistic vectors keyed by dataset, aligned with a ScoreMatrix.
struct StatMatrix {
    std::vector<std::string> datasets;
    std::vector<stats::StatisticVector> rows;

    /// CSV: first column `dataset`, then the 48 canonical statistic names.
    static StatMatrix from_csv(const std::filesystem::path& path);
    void write_csv(const std::filesystem::path& path) const;
};

/// Reorder `scores` rows to `stats` dataset order. Throws ConfigError listing
/// datasets missing from either side.
ScoreMatrix align(const StatMatrix& stats_matrix, const ScoreMatrix& scores);

struct EvolutionConfig {
    int parent_pairs = 400;
    int population_size = 200;
    double mutation_rate = 0.01;
    int stagnation_limit = 15;
    int restarts = 50;
    std::uint64_t seed = 0;
    std::set<int> excluded_statistics;  // ablation mask (canonical ids)
    Exec exec = Exec::parallel;
};

struct RestartResult {
    std::uint64_t seed = 0;
    MeasureGenome best;
    double best_fitness = 0.0;
    std::vector<double> history;  // best-so-far per generation, non-decreasing
};

struct EvolutionResult {
    MeasureGenome best;
    double best_fitness = 0.0;
    std::vector<double> history;  // history of the winning restart
    std::vector<RestartResult> restarts;
    /// How often each statistic appears in a restart's best genome.
    std::array<int, stats::kStatisticCount> selection_frequency{};
};

/// Pearson correlation; nullopt when either side has zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

/// Harmonic mean over non-holdout models of the negated correlation between
/// the genome's measure values and that model's scores. Any negated
/// correlation <= 1e-9 (or undefined) gives fitness 0, so positive fitness
/// means every model correlates negatively.
double fitness(const MeasureGenome& genome, const StatMatrix& stats_matrix,
               const ScoreMatrix& scores);

/// Fitness-proportional sampling with replacement; uniform when all
/// fitnesses are zero. Returns index pairs.
std::vector<std::pair<std::size_t, std::size_t>> select_parents(
    std::span<const double> fitnesses, int pairs, Rng& rng);

/// Each child bit copied from a uniformly chosen parent.
MeasureGenome crossover(const MeasureGenome& a, const MeasureGenome& b, Rng& rng);

/// Flip each bit independently with probability `rate`; a child with no bits
/// set is re-mutated from the input until non-empty (rate 0 is the identity).
MeasureGenome mutate(const MeasureGenome& genome, double rate, Rng& rng);

/// Full search: population seeded with the single-statistic genomes (minus
/// exclusions), fitness-proportional parent selection, crossover + mutation,
/// truncation to population_size with the best genome retained, stopping
/// after stagnation_limit generations without improvement. Restart r uses
/// derive_seed(seed, r); identical seeds give bit-identical results.
EvolutionResult run_evolution(const EvolutionConfig& config, const StatMatrix& stats_matrix,
                              const ScoreMatrix& scores);

/// One evolution per named exclusion mask, all from the same base seed.
std::map<std::string, EvolutionResult> run_ablations(
    const EvolutionConfig& config, const StatMatrix& stats_matrix, const ScoreMatrix& scores,
    const std::map<std::string, std::set<int>>& masks);

std::string to_json(const EvolutionResult& result);

}  // namespace tcdiff::evolve
