#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tcdiff::corpus {

/// One labeled example. `tokens` is the normalized form of `text`:
/// lowercase, punctuation stripped, whitespace-split, word-capped.
struct DataItem {
    std::string text;
    std::vector<std::string> tokens;
    std::string label;
};

enum class Split { train, validation, test, all };

/// A labeled text-classification dataset. Immutable once loaded; safe to
/// share across threads. `classes` lists labels in order of first appearance
/// (train, then validation, then test).
struct Dataset {
    std::string name;
    std::vector<DataItem> train;
    std::vector<DataItem> validation;
    std::vector<DataItem> test;
    std::vector<std::string> classes;

    /// Items of one split (pointers into this dataset).
    std::vector<const DataItem*> items(Split split) const;
    std::size_t size(Split split) const { return items(split).size(); }
};

enum class FileFormat { csv, tsv, jsonl };

struct IngestOptions {
    FileFormat format = FileFormat::csv;
    /// Truncate each item to this many tokens; nullopt disables the cap.
    std::optional<std::size_t> word_cap = 100;
    /// When loading a single file with no validation split, sample this
    /// fraction of train as validation (seeded). 0 disables.
    double split_validation = 0.0;
    std::uint64_t seed = 0;
    std::string name;  // defaults to the file stem
};

/// Infer csv/tsv/jsonl from a path extension. Throws ConfigError otherwise.
FileFormat format_from_path(const std::filesystem::path& path);

/// Load a single-file dataset (all records become train, minus the optional
/// seeded validation sample). Throws ParseError with "path:line" on
/// malformed records, ConfigError on empty input.
Dataset load_dataset(const std::filesystem::path& path, const IngestOptions& options);

/// Three-file layout. Validation/test paths may be empty.
Dataset load_dataset_splits(const std::filesystem::path& train_path,
                            const std::filesystem::path& validation_path,
                            const std::filesystem::path& test_path,
                            const IngestOptions& options);

/// Build a dataset from records already in memory (text,label pairs).
Dataset dataset_from_records(std::string name,
                             const std::vector<std::pair<std::string, std::string>>& records,
                             const IngestOptions& options);

/// Indices of `count` items sampled (without replacement) as the validation
/// split: the first k positions of a seeded Fisher-Yates shuffle of 0..n-1,
/// k = round(n * ratio), returned sorted. Seed derivation: derive_seed(seed, "split").
std::vector<std::size_t> validation_sample_indices(std::size_t count, double ratio,
                                                   std::uint64_t seed);

enum class SynthMode { identical, random };

/// Deterministic synthetic dataset: `classes` labels with `items_per_class`
/// items each. identical mode repeats one random string per class; random
/// mode draws a fresh string per item. Words come from a generated
/// pseudo-vocabulary. Seed derivation: derive_seed(seed, "synth").
Dataset make_synthetic_dataset(std::size_t classes, std::size_t items_per_class,
                               SynthMode mode, std::uint64_t seed,
                               std::size_t words_per_item = 10);

/// Write a dataset's train split as a text,label CSV (the synth output form).
void write_dataset_csv(const Dataset& dataset, const std::filesystem::path& path);

}  // namespace tcdiff::corpus
