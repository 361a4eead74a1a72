#include "tcdiff/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "tcdiff/error.hpp"
#include "tcdiff/io.hpp"
#include "tcdiff/rng.hpp"
#include "tcdiff/text.hpp"

namespace tcdiff::corpus {

namespace {

std::string lower_ascii(std::string s) {
    for (char& c : s) {
        if (c >= 'A' && c <= 'Z') c += 32;
    }
    return s;
}

std::vector<std::pair<std::string, std::string>> read_records(
    const std::filesystem::path& path, FileFormat format) {
    std::vector<std::pair<std::string, std::string>> records;

    if (format == FileFormat::csv || format == FileFormat::tsv) {
        const char delim = format == FileFormat::csv ? ',' : '\t';
        const auto rows = io::read_delimited(path, delim);
        if (rows.empty()) throw ConfigError("empty dataset file: " + path.string());

        std::size_t start = 0;
        const auto& first = rows[0].fields;
        if (first.size() == 2 && lower_ascii(first[0]) == "text" &&
            lower_ascii(first[1]) == "label") {
            start = 1;  // header row
        }
        for (std::size_t r = start; r < rows.size(); ++r) {
            const auto& row = rows[r];
            if (row.fields.size() != 2) {
                throw ParseError(path.string() + ":" + std::to_string(row.line) +
                                 ": expected 2 fields (text,label), got " +
                                 std::to_string(row.fields.size()));
            }
            records.emplace_back(row.fields[0], row.fields[1]);
        }
    } else {
        const std::string content = io::read_file(path);
        std::size_t line = 0;
        std::size_t pos = 0;
        while (pos < content.size()) {
            std::size_t end = content.find('\n', pos);
            if (end == std::string::npos) end = content.size();
            ++line;
            std::string text_line = content.substr(pos, end - pos);
            if (!text_line.empty() && text_line.back() == '\r') text_line.pop_back();
            pos = end + 1;
            if (text_line.empty()) continue;

            nlohmann::json obj;
            try {
                obj = nlohmann::json::parse(text_line);
            } catch (const nlohmann::json::exception& e) {
                throw ParseError(path.string() + ":" + std::to_string(line) +
                                 ": invalid JSON: " + e.what());
            }
            if (!obj.is_object() || !obj.contains("text") || !obj["text"].is_string()) {
                throw ParseError(path.string() + ":" + std::to_string(line) +
                                 ": missing string field \"text\"");
            }
            if (!obj.contains("label") || !obj["label"].is_string()) {
                throw ParseError(path.string() + ":" + std::to_string(line) +
                                 ": missing string field \"label\"");
            }
            records.emplace_back(obj["text"].get<std::string>(),
                                 obj["label"].get<std::string>());
        }
    }

    if (records.empty()) throw ConfigError("empty dataset file: " + path.string());
    return records;
}

std::vector<DataItem> make_items(std::vector<std::pair<std::string, std::string>>&& records,
                                 const IngestOptions& options) {
    std::vector<DataItem> items;
    items.reserve(records.size());
    for (auto& [text, label] : records) {
        auto tokens = normalize_text(text, options.word_cap);
        items.push_back({std::move(text), std::move(tokens), std::move(label)});
    }
    return items;
}

void collect_classes(Dataset& dataset) {
    std::unordered_set<std::string> seen;
    const auto scan = [&](const std::vector<DataItem>& items) {
        for (const auto& item : items) {
            if (seen.insert(item.label).second) dataset.classes.push_back(item.label);
        }
    };
    scan(dataset.train);
    scan(dataset.validation);
    scan(dataset.test);
}

}  // namespace

std::vector<const DataItem*> Dataset::items(Split split) const {
    std::vector<const DataItem*> out;
    const auto add = [&](const std::vector<DataItem>& v) {
        for (const auto& item : v) out.push_back(&item);
    };
    switch (split) {
        case Split::train: add(train); break;
        case Split::validation: add(validation); break;
        case Split::test: add(test); break;
        case Split::all:
            add(train);
            add(validation);
            add(test);
            break;
    }
    return out;
}

FileFormat format_from_path(const std::filesystem::path& path) {
    const std::string ext = lower_ascii(path.extension().string());
    if (ext == ".csv") return FileFormat::csv;
    if (ext == ".tsv") return FileFormat::tsv;
    if (ext == ".jsonl" || ext == ".ndjson") return FileFormat::jsonl;
    throw ConfigError("cannot infer dataset format from extension: " + path.string());
}

std::vector<std::size_t> validation_sample_indices(std::size_t count, double ratio,
                                                   std::uint64_t seed) {
    const auto k = static_cast<std::size_t>(
        std::llround(static_cast<double>(count) * ratio));
    std::vector<std::size_t> perm(count);
    for (std::size_t i = 0; i < count; ++i) perm[i] = i;

    Rng rng(derive_seed(seed, "split"));
    for (std::size_t i = count; i > 1; --i) {
        const std::size_t j = rng.next_below(i);
        std::swap(perm[i - 1], perm[j]);
    }
    std::vector<std::size_t> selected(perm.begin(), perm.begin() + std::min(k, count));
    std::sort(selected.begin(), selected.end());
    return selected;
}

Dataset dataset_from_records(std::string name,
                             const std::vector<std::pair<std::string, std::string>>& records,
                             const IngestOptions& options) {
    Dataset dataset;
    dataset.name = std::move(name);
    auto items = make_items(std::vector(records), options);

    if (options.split_validation > 0.0 && items.size() > 1) {
        const auto selected =
            validation_sample_indices(items.size(), options.split_validation, options.seed);
        std::size_t next = 0;
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (next < selected.size() && selected[next] == i) {
                dataset.validation.push_back(std::move(items[i]));
                ++next;
            } else {
                dataset.train.push_back(std::move(items[i]));
            }
        }
    } else {
        dataset.train = std::move(items);
    }

    if (dataset.train.empty()) throw ConfigError("dataset has an empty train split");
    collect_classes(dataset);
    return dataset;
}

Dataset load_dataset(const std::filesystem::path& path, const IngestOptions& options) {
    const auto records = read_records(path, options.format);
    std::string name = options.name.empty() ? path.stem().string() : options.name;
    return dataset_from_records(std::move(name), records, options);
}

Dataset load_dataset_splits(const std::filesystem::path& train_path,
                            const std::filesystem::path& validation_path,
                            const std::filesystem::path& test_path,
                            const IngestOptions& options) {
    Dataset dataset;
    dataset.name = options.name.empty() ? train_path.stem().string() : options.name;
    dataset.train = make_items(read_records(train_path, options.format), options);

    if (!validation_path.empty()) {
        dataset.validation = make_items(read_records(validation_path, options.format), options);
    } else if (options.split_validation > 0.0 && dataset.train.size() > 1) {
        IngestOptions single = options;
        single.name = dataset.name;
        std::vector<std::pair<std::string, std::string>> records;
        records.reserve(dataset.train.size());
        for (auto& item : dataset.train) records.emplace_back(item.text, item.label);
        Dataset resplit = dataset_from_records(dataset.name, records, single);
        dataset.train = std::move(resplit.train);
        dataset.validation = std::move(resplit.validation);
    }
    if (!test_path.empty()) {
        dataset.test = make_items(read_records(test_path, options.format), options);
    }
    if (dataset.train.empty()) throw ConfigError("dataset has an empty train split");
    collect_classes(dataset);
    return dataset;
}

Dataset make_synthetic_dataset(std::size_t classes, std::size_t items_per_class,
                               SynthMode mode, std::uint64_t seed,
                               std::size_t words_per_item) {
    if (classes < 1 || items_per_class < 1) {
        throw ConfigError("synthetic dataset needs at least 1 class and 1 item per class");
    }
    Rng rng(derive_seed(seed, "synth"));

    // Pseudo-vocabulary of random lowercase words, 3-8 letters.
    const std::size_t vocab_size = 5000;
    std::vector<std::string> vocab(vocab_size);
    for (auto& word : vocab) {
        const std::size_t len = 3 + rng.next_below(6);
        word.resize(len);
        for (auto& c : word) c = static_cast<char>('a' + rng.next_below(26));
    }

    const auto random_string = [&] {
        std::string text;
        for (std::size_t w = 0; w < words_per_item; ++w) {
            if (w > 0) text.push_back(' ');
            text += vocab[rng.next_below(vocab_size)];
        }
        return text;
    };

    Dataset dataset;
    dataset.name = "synthetic";
    dataset.train.reserve(classes * items_per_class);
    for (std::size_t c = 0; c < classes; ++c) {
        const std::string label = "class_" + std::to_string(c);
        if (mode == SynthMode::identical) {
            const std::string shared = random_string();
            const auto tokens = normalize_text(shared);
            for (std::size_t i = 0; i < items_per_class; ++i) {
                dataset.train.push_back({shared, tokens, label});
            }
        } else {
            for (std::size_t i = 0; i < items_per_class; ++i) {
                std::string text = random_string();
                auto tokens = normalize_text(text);
                dataset.train.push_back({std::move(text), std::move(tokens), label});
            }
        }
        dataset.classes.push_back(label);
    }
    return dataset;
}

void write_dataset_csv(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path.string());
    out << "text,label\n";
    for (const auto& item : dataset.train) {
        out << io::escape_field(item.text, ',') << ',' << io::escape_field(item.label, ',')
            << '\n';
    }
    if (!out) throw ConfigError("write failed: " + path.string());
}

}  // namespace tcdiff::corpus
