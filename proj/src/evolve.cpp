#include "tcdiff/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include <json.hpp>

#include "tcdiff/error.hpp"
#include "tcdiff/io.hpp"

namespace tcdiff::evolve {

namespace {

constexpr double kCorrelationFloor = 1e-9;

/// Per-dataset values of a genome's measure, in dataset order.
std::vector<double> measure_values(const MeasureGenome& genome, const StatMatrix& sm) {
    std::vector<double> values(sm.rows.size());
    for (std::size_t d = 0; d < sm.rows.size(); ++d) {
        values[d] = measure::evaluate(genome, sm.rows[d]);
    }
    return values;
}

}  // namespace

void ScoreMatrix::validate() const {
    if (datasets.size() < 3) {
        throw ConfigError("score matrix needs at least 3 datasets, got " +
                          std::to_string(datasets.size()));
    }
    std::size_t observed = 0;
    for (std::size_t m = 0; m < models.size(); ++m) {
        if (scores[m].size() != datasets.size()) {
            throw ConfigError("score matrix row '" + models[m] + "' has " +
                              std::to_string(scores[m].size()) + " cells, expected " +
                              std::to_string(datasets.size()));
        }
        if (holdout_models.count(models[m]) == 0) ++observed;
        for (const double s : scores[m]) {
            if (!(s >= 0.0 && s <= 1.0)) {
                throw ConfigError("score out of [0,1] for model '" + models[m] + "'");
            }
        }
    }
    if (observed == 0) throw ConfigError("all models are held out; nothing to fit");
}

ScoreMatrix ScoreMatrix::from_csv(const std::filesystem::path& path,
                                  const std::vector<std::string>& holdout) {
    const auto rows = io::read_delimited(path, ',');
    if (rows.size() < 2) throw ParseError(path.string() + ": empty score matrix");
    const auto& header = rows[0].fields;
    if (header.size() < 2 || header[0] != "dataset") {
        throw ParseError(path.string() + ": header must start with 'dataset' followed by model names");
    }

    ScoreMatrix sm;
    sm.models.assign(header.begin() + 1, header.end());
    sm.scores.assign(sm.models.size(), {});
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != header.size()) {
            throw ParseError(path.string() + ":" + std::to_string(row.line) +
                             ": expected " + std::to_string(header.size()) + " fields");
        }
        sm.datasets.push_back(row.fields[0]);
        for (std::size_t m = 0; m < sm.models.size(); ++m) {
            sm.scores[m].push_back(io::parse_double(
                row.fields[m + 1], path.string() + ":" + std::to_string(row.line)));
        }
    }
    for (const auto& name : holdout) {
        if (std::find(sm.models.begin(), sm.models.end(), name) == sm.models.end()) {
            throw ConfigError("holdout model '" + name + "' not present in " + path.string());
        }
        sm.holdout_models.insert(name);
    }
    sm.validate();
    return sm;
}

StatMatrix StatMatrix::from_csv(const std::filesystem::path& path) {
    const auto rows = io::read_delimited(path, ',');
    if (rows.size() < 2) throw ParseError(path.string() + ": empty statistic matrix");
    const auto& header = rows[0].fields;
    const auto expected = stats::csv_header();
    if (header != expected) {
        throw ParseError(path.string() +
                         ": header must be 'dataset' plus the 48 canonical statistic names");
    }

    StatMatrix sm;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != header.size()) {
            throw ParseError(path.string() + ":" + std::to_string(row.line) +
                             ": expected " + std::to_string(header.size()) + " fields");
        }
        stats::StatisticVector vec;
        vec.dataset_name = row.fields[0];
        for (int i = 0; i < stats::kStatisticCount; ++i) {
            vec.values[static_cast<std::size_t>(i)] = io::parse_double(
                row.fields[static_cast<std::size_t>(i) + 1],
                path.string() + ":" + std::to_string(row.line));
        }
        sm.datasets.push_back(vec.dataset_name);
        sm.rows.push_back(std::move(vec));
    }
    return sm;
}

void StatMatrix::write_csv(const std::filesystem::path& path) const {
    std::vector<std::vector<std::string>> out;
    out.reserve(rows.size() + 1);
    out.push_back(stats::csv_header());
    for (const auto& vec : rows) out.push_back(stats::csv_row(vec));
    io::write_delimited(path, out, ',');
}

ScoreMatrix align(const StatMatrix& stats_matrix, const ScoreMatrix& scores) {
    std::unordered_map<std::string, std::size_t> score_index;
    for (std::size_t d = 0; d < scores.datasets.size(); ++d) {
        score_index[scores.datasets[d]] = d;
    }

    std::vector<std::string> missing_scores;
    for (const auto& name : stats_matrix.datasets) {
        if (score_index.find(name) == score_index.end()) missing_scores.push_back(name);
    }
    std::vector<std::string> missing_stats;
    {
        std::set<std::string> stat_names(stats_matrix.datasets.begin(),
                                         stats_matrix.datasets.end());
        for (const auto& name : scores.datasets) {
            if (stat_names.count(name) == 0) missing_stats.push_back(name);
        }
    }
    if (!missing_scores.empty() || !missing_stats.empty()) {
        std::string msg = "statistic and score matrices disagree on datasets;";
        if (!missing_scores.empty()) {
            msg += " missing from scores:";
            for (const auto& n : missing_scores) msg += " '" + n + "'";
        }
        if (!missing_stats.empty()) {
            msg += " missing from statistics:";
            for (const auto& n : missing_stats) msg += " '" + n + "'";
        }
        throw ConfigError(msg);
    }

    ScoreMatrix aligned;
    aligned.models = scores.models;
    aligned.holdout_models = scores.holdout_models;
    aligned.datasets = stats_matrix.datasets;
    aligned.scores.assign(scores.models.size(), {});
    for (std::size_t m = 0; m < scores.models.size(); ++m) {
        aligned.scores[m].reserve(stats_matrix.datasets.size());
        for (const auto& name : stats_matrix.datasets) {
            aligned.scores[m].push_back(scores.scores[m][score_index[name]]);
        }
    }
    aligned.validate();
    return aligned;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3) return std::nullopt;
    const std::size_t n = x.size();
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

double fitness(const MeasureGenome& genome, const StatMatrix& stats_matrix,
               const ScoreMatrix& scores) {
    if (!genome.any()) return 0.0;
    const auto values = measure_values(genome, stats_matrix);

    double reciprocal_sum = 0.0;
    int model_count = 0;
    for (std::size_t m = 0; m < scores.models.size(); ++m) {
        if (scores.holdout_models.count(scores.models[m]) > 0) continue;
        const auto r = pearson(values, scores.scores[m]);
        if (!r) return 0.0;  // constant measure or constant scores
        const double negated = -*r;
        if (negated <= kCorrelationFloor) return 0.0;
        reciprocal_sum += 1.0 / negated;
        ++model_count;
    }
    if (model_count == 0) return 0.0;
    return static_cast<double>(model_count) / reciprocal_sum;
}

std::vector<std::pair<std::size_t, std::size_t>> select_parents(
    std::span<const double> fitnesses, int pairs, Rng& rng) {
    const std::size_t n = fitnesses.size();
    std::vector<double> cumulative(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total += fitnesses[i];
        cumulative[i] = total;
    }

    const auto draw = [&]() -> std::size_t {
        if (total <= 0.0) return rng.next_below(n);  // documented uniform fallback
        const double u = rng.next_double() * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        return std::min(static_cast<std::size_t>(it - cumulative.begin()), n - 1);
    };

    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(static_cast<std::size_t>(pairs));
    for (int p = 0; p < pairs; ++p) {
        const std::size_t a = draw();
        const std::size_t b = draw();
        out.emplace_back(a, b);
    }
    return out;
}

MeasureGenome crossover(const MeasureGenome& a, const MeasureGenome& b, Rng& rng) {
    MeasureGenome child;
    for (int i = 0; i < stats::kStatisticCount; ++i) {
        const MeasureGenome& parent = rng.next_bool() ? a : b;
        if (parent.test(i)) child.set(i);
    }
    return child;
}

MeasureGenome mutate(const MeasureGenome& genome, double rate, Rng& rng) {
    if (rate <= 0.0) return genome;
    MeasureGenome child = genome;
    do {
        for (int i = 0; i < stats::kStatisticCount; ++i) {
            if (rng.next_bernoulli(rate)) child.set(i, !child.test(i));
        }
        // An empty measure has no value to evaluate; re-mutate the result.
    } while (!child.any());
    return child;
}

namespace {

struct Candidate {
    MeasureGenome genome;
    double fitness = 0.0;
};

/// Fitness for every genome, fixed output order, optionally OpenMP-parallel.
void evaluate_population(std::vector<Candidate>& population, const StatMatrix& sm,
                         const ScoreMatrix& scores, Exec exec) {
    if (exec == Exec::parallel) {
        #pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(population.size()); ++i) {
            population[i].fitness = fitness(population[i].genome, sm, scores);
        }
    } else {
        for (auto& candidate : population) {
            candidate.fitness = fitness(candidate.genome, sm, scores);
        }
    }
}

/// mutate() restricted to statistics outside the ablation mask, so excluded
/// bits can never re-enter the population. Identical draw sequence to the
/// unmasked operation when the mask is empty.
MeasureGenome mutate_masked(const MeasureGenome& genome, double rate, Rng& rng,
                            const std::set<int>& excluded) {
    if (rate <= 0.0) return genome;
    MeasureGenome child = genome;
    do {
        for (int i = 0; i < stats::kStatisticCount; ++i) {
            if (excluded.count(i) > 0) continue;
            if (rng.next_bernoulli(rate)) child.set(i, !child.test(i));
        }
    } while (!child.any());
    return child;
}

RestartResult run_single(const EvolutionConfig& config, const StatMatrix& sm,
                         const ScoreMatrix& scores, std::uint64_t seed) {
    Rng rng(seed);

    // Non-random initialization: one single-statistic genome per statistic
    // that is not excluded by the ablation mask.
    std::vector<Candidate> population;
    for (int i = 0; i < stats::kStatisticCount; ++i) {
        if (config.excluded_statistics.count(i) > 0) continue;
        MeasureGenome g;
        g.set(i);
        population.push_back({std::move(g), 0.0});
    }
    if (population.empty()) {
        throw ConfigError("ablation mask excludes every statistic");
    }

    evaluate_population(population, sm, scores, config.exec);

    RestartResult result;
    result.seed = seed;
    auto best_it = std::max_element(
        population.begin(), population.end(),
        [](const Candidate& a, const Candidate& b) { return a.fitness < b.fitness; });
    result.best = best_it->genome;
    result.best_fitness = best_it->fitness;
    result.history.push_back(result.best_fitness);

    int stagnant = 0;
    while (stagnant < config.stagnation_limit) {
        std::vector<double> fitnesses(population.size());
        for (std::size_t i = 0; i < population.size(); ++i) {
            fitnesses[i] = population[i].fitness;
        }
        const auto parents = select_parents(fitnesses, config.parent_pairs, rng);

        std::vector<Candidate> children;
        children.reserve(parents.size() + 1);
        for (const auto& [a, b] : parents) {
            MeasureGenome child =
                crossover(population[a].genome, population[b].genome, rng);
            child = mutate_masked(child, config.mutation_rate, rng,
                                  config.excluded_statistics);
            children.push_back({std::move(child), 0.0});
        }
        evaluate_population(children, sm, scores, config.exec);

        // Elitism: the best-so-far genome competes with the children, so the
        // population never loses it and best fitness is monotone.
        children.push_back({result.best, result.best_fitness});
        std::stable_sort(children.begin(), children.end(),
                         [](const Candidate& a, const Candidate& b) {
                             return a.fitness > b.fitness;
                         });
        if (children.size() > static_cast<std::size_t>(config.population_size)) {
            children.resize(static_cast<std::size_t>(config.population_size));
        }
        population = std::move(children);

        if (population.front().fitness > result.best_fitness) {
            result.best_fitness = population.front().fitness;
            result.best = population.front().genome;
            stagnant = 0;
        } else {
            ++stagnant;
        }
        result.history.push_back(result.best_fitness);
    }
    return result;
}

}  // namespace

EvolutionResult run_evolution(const EvolutionConfig& config, const StatMatrix& stats_matrix,
                              const ScoreMatrix& scores) {
    if (config.parent_pairs < 1 || config.population_size < 1 || config.restarts < 1) {
        throw ConfigError("evolution sizes must be at least 1");
    }
    if (config.mutation_rate < 0.0 || config.mutation_rate > 1.0) {
        throw ConfigError("mutation rate must be in [0,1]");
    }
    if (config.stagnation_limit < 0) {
        throw ConfigError("stagnation limit must be >= 0");
    }
    if (stats_matrix.datasets != scores.datasets) {
        throw ConfigError("statistic and score matrices are not aligned; call align()");
    }
    if (static_cast<std::size_t>(stats::kStatisticCount) <=
        config.excluded_statistics.size()) {
        throw ConfigError("ablation mask excludes every statistic");
    }

    EvolutionResult result;
    result.restarts.resize(static_cast<std::size_t>(config.restarts));

    // Restarts are independent streams; safe to run in any order.
    if (config.exec == Exec::parallel) {
        EvolutionConfig inner = config;
        inner.exec = Exec::serial;  // parallelism lives at the restart level
        #pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t r = 0; r < config.restarts; ++r) {
            result.restarts[r] = run_single(
                inner, stats_matrix, scores,
                derive_seed(config.seed, static_cast<std::uint64_t>(r)));
        }
    } else {
        for (int r = 0; r < config.restarts; ++r) {
            result.restarts[static_cast<std::size_t>(r)] = run_single(
                config, stats_matrix, scores,
                derive_seed(config.seed, static_cast<std::uint64_t>(r)));
        }
    }

    // Winner: highest fitness, lowest restart index on ties.
    std::size_t best_index = 0;
    for (std::size_t r = 1; r < result.restarts.size(); ++r) {
        if (result.restarts[r].best_fitness > result.restarts[best_index].best_fitness) {
            best_index = r;
        }
    }
    result.best = result.restarts[best_index].best;
    result.best_fitness = result.restarts[best_index].best_fitness;
    result.history = result.restarts[best_index].history;
    for (const auto& restart : result.restarts) {
        for (int i = 0; i < stats::kStatisticCount; ++i) {
            if (restart.best.test(i)) ++result.selection_frequency[static_cast<std::size_t>(i)];
        }
    }
    return result;
}

std::map<std::string, EvolutionResult> run_ablations(
    const EvolutionConfig& config, const StatMatrix& stats_matrix, const ScoreMatrix& scores,
    const std::map<std::string, std::set<int>>& masks) {
    std::map<std::string, EvolutionResult> results;
    for (const auto& [name, mask] : masks) {
        EvolutionConfig masked = config;
        masked.excluded_statistics = mask;
        // Same base seed across masks: runs differ only by the exclusions.
        results.emplace(name, run_evolution(masked, stats_matrix, scores));
    }
    return results;
}

std::string to_json(const EvolutionResult& result) {
    nlohmann::ordered_json j;
    j["best"] = {{"statistics", result.best.names()}, {"fitness", result.best_fitness}};
    j["history"] = result.history;

    nlohmann::ordered_json restarts = nlohmann::ordered_json::array();
    for (const auto& restart : result.restarts) {
        restarts.push_back({{"seed", restart.seed},
                            {"fitness", restart.best_fitness},
                            {"statistics", restart.best.names()},
                            {"generations", restart.history.size()}});
    }
    j["restarts"] = std::move(restarts);

    nlohmann::ordered_json freq = nlohmann::ordered_json::object();
    for (int i = 0; i < stats::kStatisticCount; ++i) {
        const int count = result.selection_frequency[static_cast<std::size_t>(i)];
        if (count > 0) freq[stats::statistic_table()[static_cast<std::size_t>(i)].name] = count;
    }
    j["selection_frequency"] = std::move(freq);
    return j.dump(2);
}

}  // namespace tcdiff::evolve
