// Benchmark: serial reference vs OpenMP kernels for the statistics pipeline
// and the evolutionary search, with a bitwise-equality check on the results.

#include <algorithm>
#include <chrono>
#include <cstring>
#include <iostream>

#include "tcdiff/corpus.hpp"
#include "tcdiff/evolve.hpp"
#include "tcdiff/parallel.hpp"
#include "tcdiff/rng.hpp"
#include "tcdiff/statistics.hpp"

namespace {

using namespace tcdiff;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename Fn>
double time_call(Fn&& fn) {
    const auto start = Clock::now();
    fn();
    return seconds_since(start);
}

void bench_stats() {
    const auto dataset = corpus::make_synthetic_dataset(
        100, 200, corpus::SynthMode::random, /*seed=*/17, /*words_per_item=*/15);

    stats::StatisticVector serial_vec, parallel_vec;
    const double t_serial = time_call([&] {
        stats::StatsConfig cfg;
        cfg.exec = Exec::serial;
        serial_vec = stats::compute_all(dataset, cfg);
    });
    const double t_parallel = time_call([&] {
        stats::StatsConfig cfg;
        cfg.exec = Exec::parallel;
        parallel_vec = stats::compute_all(dataset, cfg);
    });

    const bool identical =
        std::memcmp(serial_vec.values.data(), parallel_vec.values.data(),
                    sizeof(serial_vec.values)) == 0 &&
        serial_vec.flags == parallel_vec.flags;

    std::cout << "compute_all (100 classes x 200 items, random text)\n";
    std::cout << "  serial:   " << t_serial << " s\n";
    std::cout << "  parallel: " << t_parallel << " s  (" << hardware_threads()
              << " threads, speedup " << t_serial / t_parallel << "x)\n";
    std::cout << "  bitwise identical: " << (identical ? "yes" : "NO") << "\n\n";
}

void bench_evolve() {
    // Synthetic matrices: scores follow the negated sum of three statistics.
    const int datasets = 40;
    Rng rng(99);
    evolve::StatMatrix sm;
    evolve::ScoreMatrix scores;
    scores.models = {"model_a", "model_b", "model_c"};
    scores.scores.assign(3, {});
    for (int d = 0; d < datasets; ++d) {
        stats::StatisticVector vec;
        vec.dataset_name = "bench_" + std::to_string(d);
        for (auto& v : vec.values) v = rng.next_double();
        sm.datasets.push_back(vec.dataset_name);
        sm.rows.push_back(vec);
        scores.datasets.push_back(vec.dataset_name);
        const double signal = vec.values[0] + vec.values[2] + vec.values[3];
        for (std::size_t m = 0; m < 3; ++m) {
            const double s = 0.9 - 0.2 * signal + rng.next_normal(0.0, 0.01);
            scores.scores[m].push_back(std::clamp(s, 0.0, 1.0));
        }
    }

    evolve::EvolutionConfig config;
    config.restarts = 8;
    config.seed = 7;

    evolve::EvolutionResult serial_result, parallel_result;
    const double t_serial = time_call([&] {
        config.exec = Exec::serial;
        serial_result = evolve::run_evolution(config, sm, scores);
    });
    const double t_parallel = time_call([&] {
        config.exec = Exec::parallel;
        parallel_result = evolve::run_evolution(config, sm, scores);
    });

    bool identical = serial_result.best == parallel_result.best &&
                     serial_result.best_fitness == parallel_result.best_fitness &&
                     serial_result.history == parallel_result.history;
    for (std::size_t r = 0; identical && r < serial_result.restarts.size(); ++r) {
        identical = serial_result.restarts[r].history == parallel_result.restarts[r].history;
    }

    std::cout << "run_evolution (40 datasets, 3 models, 8 restarts)\n";
    std::cout << "  serial:   " << t_serial << " s\n";
    std::cout << "  parallel: " << t_parallel << " s  (speedup "
              << t_serial / t_parallel << "x)\n";
    std::cout << "  best fitness: " << serial_result.best_fitness << "\n";
    std::cout << "  bitwise identical: " << (identical ? "yes" : "NO") << "\n";
}

}  // namespace

int main() {
    std::cout << "threads available: " << hardware_threads() << "\n\n";
    bench_stats();
    bench_evolve();
    return 0;
}
