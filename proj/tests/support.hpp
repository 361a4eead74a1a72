// Shared helpers for the test binaries: in-memory dataset construction,
// random micro-corpora, and the planted-recovery fixture generator.
#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "tcdiff/corpus.hpp"
#include "tcdiff/evolve.hpp"
#include "tcdiff/io.hpp"
#include "tcdiff/rng.hpp"
#include "tcdiff/statistics.hpp"

namespace support {

/// Score-matrix CSV form used for fixtures: dataset column + model columns.
inline void write_scores_csv(const tcdiff::evolve::ScoreMatrix& scores,
                             const std::filesystem::path& path) {
    namespace io = tcdiff::io;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header = {"dataset"};
    header.insert(header.end(), scores.models.begin(), scores.models.end());
    rows.push_back(std::move(header));
    for (std::size_t d = 0; d < scores.datasets.size(); ++d) {
        std::vector<std::string> row = {scores.datasets[d]};
        for (std::size_t m = 0; m < scores.models.size(); ++m) {
            row.push_back(io::format_double(scores.scores[m][d]));
        }
        rows.push_back(std::move(row));
    }
    io::write_delimited(path, rows, ',');
}

/// Dataset whose train split holds the given (tokens, label) items. Token
/// lists are taken as already normalized.
inline tcdiff::corpus::Dataset make_dataset(
    const std::vector<std::pair<std::vector<std::string>, std::string>>& items,
    std::string name = "test") {
    tcdiff::corpus::Dataset dataset;
    dataset.name = std::move(name);
    std::vector<std::string> seen;
    for (const auto& [tokens, label] : items) {
        std::string text;
        for (const auto& t : tokens) {
            if (!text.empty()) text.push_back(' ');
            text += t;
        }
        dataset.train.push_back({text, tokens, label});
        if (std::find(seen.begin(), seen.end(), label) == seen.end()) seen.push_back(label);
    }
    dataset.classes = std::move(seen);
    return dataset;
}

/// Random micro-corpus: <= max_tokens tokens spread over <= max_classes
/// classes, tiny vocabulary so collisions and ties actually happen.
inline tcdiff::corpus::Dataset random_micro_corpus(tcdiff::Rng& rng,
                                                   std::size_t max_tokens = 20,
                                                   std::size_t max_classes = 4) {
    static const std::vector<std::string> vocab = {
        "cat", "dog", "fox", "bird", "run", "jump", "blue", "red",
    };
    const std::size_t classes = 1 + rng.next_below(max_classes);
    const std::size_t items = 1 + rng.next_below(6);

    std::vector<std::pair<std::vector<std::string>, std::string>> records;
    std::size_t budget = 1 + rng.next_below(max_tokens);
    for (std::size_t i = 0; i < items; ++i) {
        const std::size_t len = std::min(budget, rng.next_below(7));
        std::vector<std::string> tokens;
        for (std::size_t t = 0; t < len; ++t) {
            tokens.push_back(vocab[rng.next_below(vocab.size())]);
        }
        budget -= len;
        records.emplace_back(std::move(tokens),
                             "class_" + std::to_string(rng.next_below(classes)));
    }
    return make_dataset(records, "micro");
}

struct PlantedFixture {
    tcdiff::evolve::StatMatrix stats;
    tcdiff::evolve::ScoreMatrix scores;
    std::vector<int> planted_ids;
};

/// Synthetic search fixture: model scores are a negated linear function of
/// three planted statistics plus Gaussian noise (sigma 0.02). A correct
/// search recovers the planted bits with high fitness.
inline PlantedFixture make_planted_fixture() {
    namespace sid = tcdiff::stats::sid;
    PlantedFixture fixture;
    fixture.planted_ids = {sid::shannon_class_diversity, sid::class_imbalance,
                           sid::max_hellinger};

    tcdiff::Rng rng(tcdiff::derive_seed(4242, "planted"));
    const int datasets = 40;
    const std::vector<double> intercepts = {0.95, 0.90, 0.85};
    const double slope = 0.15;

    fixture.scores.models = {"model_a", "model_b", "model_c"};
    fixture.scores.scores.assign(3, {});

    for (int d = 0; d < datasets; ++d) {
        tcdiff::stats::StatisticVector vec;
        char name[16];
        std::snprintf(name, sizeof name, "synth_%02d", d);
        vec.dataset_name = name;
        for (int i = 0; i < tcdiff::stats::kStatisticCount; ++i) {
            vec.values[static_cast<std::size_t>(i)] = rng.next_double();
        }
        // Planted statistics get wider, independent ranges.
        vec.values[static_cast<std::size_t>(fixture.planted_ids[0])] = 2.0 * rng.next_double();
        vec.values[static_cast<std::size_t>(fixture.planted_ids[1])] = 1.5 * rng.next_double();
        vec.values[static_cast<std::size_t>(fixture.planted_ids[2])] = rng.next_double();

        double signal = 0.0;
        for (const int id : fixture.planted_ids) {
            signal += vec.values[static_cast<std::size_t>(id)];
        }
        fixture.scores.datasets.push_back(vec.dataset_name);
        for (std::size_t m = 0; m < intercepts.size(); ++m) {
            const double s = intercepts[m] - slope * signal + rng.next_normal(0.0, 0.02);
            fixture.scores.scores[m].push_back(std::clamp(s, 0.0, 1.0));
        }

        fixture.stats.datasets.push_back(vec.dataset_name);
        fixture.stats.rows.push_back(std::move(vec));
    }
    return fixture;
}

}  // namespace support
