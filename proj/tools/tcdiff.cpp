// tcdiff: difficulty analysis for labeled text-classification datasets.
//
// Subcommands:
//   analyze  compute statistics for one dataset, evaluate a difficulty
//            measure, and write diagnostic reports
//   stats    batch-compute the 48-statistic matrix for many datasets
//   evolve   search for new difficulty measures against a model-score matrix
//   synth    generate synthetic datasets (fixtures, calibration corpora)
//
// Exit codes: 0 success, 2 usage/input error, 1 internal failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tcdiff/corpus.hpp"
#include "tcdiff/error.hpp"
#include "tcdiff/evolve.hpp"
#include "tcdiff/io.hpp"
#include "tcdiff/measure.hpp"
#include "tcdiff/reference_data.hpp"
#include "tcdiff/statistics.hpp"

namespace {

namespace fs = std::filesystem;
using namespace tcdiff;

/// JSON config files mirror the long flags: {"seed": 7, "cap-words": "off"}.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override {
        return "{}\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j;
        try {
            input >> j;
        } catch (const nlohmann::json::exception& e) {
            throw CLI::FileError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::FileError("config must be a JSON object");
        std::vector<CLI::ConfigItem> items;
        collect(j, {}, items);
        return items;
    }

private:
    // Nested objects address subcommands: {"analyze": {"measure": "d1"}}.
    static void collect(const nlohmann::json& obj, const std::vector<std::string>& parents,
                        std::vector<CLI::ConfigItem>& items) {
        for (const auto& [key, value] : obj.items()) {
            if (value.is_object()) {
                auto deeper = parents;
                deeper.push_back(key);
                collect(value, deeper, items);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_array()) {
                for (const auto& entry : value) item.inputs.push_back(to_string(entry));
            } else {
                item.inputs.push_back(to_string(value));
            }
            items.push_back(std::move(item));
        }
    }

    static std::string to_string(const nlohmann::json& value) {
        if (value.is_string()) return value.get<std::string>();
        if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
        return value.dump();
    }
};

struct CorpusFlags {
    std::string format;
    std::string cap_words = "100";
    double split_validation = 0.0;
    std::uint64_t seed = 0;
    bool all_splits = false;
    std::string valid_path;
    std::string test_path;
};

void add_corpus_flags(CLI::App* cmd, CorpusFlags& flags, bool split_files) {
    cmd->add_option("--format", flags.format, "Input format: csv, tsv, or jsonl (default: by extension)");
    cmd->add_option("--cap-words", flags.cap_words, "Word cap per item, or 'off'")
        ->capture_default_str();
    cmd->add_option("--split-validation", flags.split_validation,
                    "Fraction of train sampled (seeded) as validation")
        ->check(CLI::Range(0.0, 0.9));
    cmd->add_option("--seed", flags.seed, "Seed for all randomized steps")
        ->envname("TCDIFF_SEED");
    cmd->add_flag("--all-splits", flags.all_splits,
                  "Compute statistics over train+validation+test instead of train only");
    if (split_files) {
        cmd->add_option("--valid", flags.valid_path, "Validation split file (three-file layout)");
        cmd->add_option("--test", flags.test_path, "Test split file (three-file layout)");
    }
}

corpus::Dataset load_with_flags(const fs::path& path, const CorpusFlags& flags);

corpus::IngestOptions ingest_options(const CorpusFlags& flags, const fs::path& path) {
    corpus::IngestOptions options;
    if (flags.format.empty()) {
        options.format = corpus::format_from_path(path);
    } else if (flags.format == "csv") {
        options.format = corpus::FileFormat::csv;
    } else if (flags.format == "tsv") {
        options.format = corpus::FileFormat::tsv;
    } else if (flags.format == "jsonl") {
        options.format = corpus::FileFormat::jsonl;
    } else {
        throw ConfigError("unknown format '" + flags.format + "' (expected csv, tsv, or jsonl)");
    }
    if (flags.cap_words == "off") {
        options.word_cap = std::nullopt;
    } else {
        try {
            options.word_cap = std::stoul(flags.cap_words);
        } catch (const std::exception&) {
            throw ConfigError("--cap-words expects a number or 'off', got '" +
                              flags.cap_words + "'");
        }
    }
    options.split_validation = flags.split_validation;
    options.seed = flags.seed;
    return options;
}

corpus::Dataset load_with_flags(const fs::path& path, const CorpusFlags& flags) {
    const auto options = ingest_options(flags, path);
    if (!flags.valid_path.empty() || !flags.test_path.empty()) {
        return corpus::load_dataset_splits(path, flags.valid_path, flags.test_path, options);
    }
    return corpus::load_dataset(path, options);
}

stats::StatsConfig stats_config(const CorpusFlags& flags, int threads) {
    stats::StatsConfig config;
    config.split = flags.all_splits ? corpus::Split::all : corpus::Split::train;
    config.exec = threads == 1 ? Exec::serial : Exec::parallel;
    return config;
}

measure::MeasureGenome pick_measure(const std::string& choice) {
    if (choice == "d1") return measure::MeasureGenome::d1();
    if (choice == "d2") return measure::MeasureGenome::d2();
    if (fs::exists(choice)) return measure::MeasureGenome::from_json_file(choice);
    throw ConfigError("unknown measure '" + choice + "' (expected d1, d2, or a genome JSON file)");
}

int run_analyze(const fs::path& dataset_path, const CorpusFlags& corpus_flags,
                const std::string& measure_choice, const std::string& baseline_path,
                const std::vector<std::string>& outs, const std::string& stats_out,
                bool context, double threshold, int threads) {
    const auto dataset = load_with_flags(dataset_path, corpus_flags);
    const auto vec = stats::compute_all(dataset, stats_config(corpus_flags, threads));
    if (!stats_out.empty()) io::write_file(stats_out, stats::to_json(vec) + "\n");

    const auto genome = pick_measure(measure_choice);
    const auto baseline = baseline_path.empty()
                              ? measure::BaselineTable::builtin()
                              : measure::BaselineTable::from_json_file(baseline_path);
    const auto rep = measure::report(vec, genome, baseline, threshold);

    std::cout << "dataset:    " << rep.dataset << "\n";
    std::cout << "measure:    " << rep.measure_name << "\n";
    std::cout << "difficulty: " << io::format_double(rep.difficulty) << "\n";
    std::cout << "band:       " << measure::band_name(rep.difficulty_band) << "\n";
    for (const auto& row : rep.rows) {
        std::cout << "  " << row.statistic << " = " << io::format_double(row.value);
        if (row.z) {
            std::cout << " (z " << io::format_double(*row.z) << ")";
            if (row.notable) std::cout << " [notable]";
        }
        if (row.flag == stats::StatFlag::degenerate) std::cout << " [degenerate]";
        if (row.flag == stats::StatFlag::saturated) std::cout << " [saturated]";
        std::cout << "\n";
    }
    if (rep.diversity_domination) {
        std::cout << "warning: class diversity dominates this measure (many balanced "
                     "classes); the total is unreliable as a performance estimate\n";
    }

    for (const auto& out : outs) {
        const fs::path out_path(out);
        const std::string ext = out_path.extension().string();
        if (ext == ".json") {
            io::write_file(out_path, measure::to_json(rep, context) + "\n");
        } else if (ext == ".md" || ext == ".markdown") {
            io::write_file(out_path, measure::to_markdown(rep, context));
        } else {
            throw ConfigError("cannot infer report format from '" + out +
                              "' (expected .json or .md)");
        }
    }
    return 0;
}

int run_stats(const std::vector<std::string>& dataset_paths, const CorpusFlags& corpus_flags,
              const fs::path& out_path, int threads) {
    evolve::StatMatrix matrix;
    for (const auto& path_str : dataset_paths) {
        const fs::path path(path_str);
        corpus::Dataset dataset;
        try {
            dataset = load_with_flags(path, corpus_flags);
        } catch (const std::exception& e) {
            throw ConfigError("failed to load '" + path_str + "': " + e.what());
        }
        matrix.rows.push_back(stats::compute_all(dataset, stats_config(corpus_flags, threads)));
        matrix.datasets.push_back(matrix.rows.back().dataset_name);
    }
    matrix.write_csv(out_path);
    std::cout << "wrote " << matrix.rows.size() << " rows to " << out_path.string() << "\n";
    return 0;
}

int run_evolve(const fs::path& stats_path, const fs::path& scores_path,
               const std::vector<std::string>& holdout,
               const std::vector<std::string>& excludes, const std::string& ablation_path,
               evolve::EvolutionConfig config, const fs::path& out_path) {
    const auto stat_matrix = evolve::StatMatrix::from_csv(stats_path);
    const auto score_matrix =
        evolve::align(stat_matrix, evolve::ScoreMatrix::from_csv(scores_path, holdout));

    for (const auto& name : excludes) {
        const int id = stats::statistic_index(name);
        if (id < 0) throw ConfigError("--exclude: unknown statistic '" + name + "'");
        config.excluded_statistics.insert(id);
    }

    nlohmann::ordered_json output;
    if (!ablation_path.empty()) {
        nlohmann::json spec;
        try {
            spec = nlohmann::json::parse(io::read_file(ablation_path));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(ablation_path + ": invalid JSON: " + e.what());
        }
        std::map<std::string, std::set<int>> masks;
        for (const auto& [name, names] : spec.items()) {
            std::set<int> mask = config.excluded_statistics;
            for (const auto& stat_name : names) {
                const int id = stats::statistic_index(stat_name.get<std::string>());
                if (id < 0) {
                    throw ConfigError(ablation_path + ": unknown statistic '" +
                                      stat_name.get<std::string>() + "' in mask '" + name + "'");
                }
                mask.insert(id);
            }
            masks[name] = std::move(mask);
        }
        const auto results = evolve::run_ablations(config, stat_matrix, score_matrix, masks);
        for (const auto& [name, result] : results) {
            output[name] = nlohmann::ordered_json::parse(evolve::to_json(result));
            std::cout << name << ": best fitness "
                      << io::format_double(result.best_fitness) << "\n";
        }
    } else {
        const auto result = evolve::run_evolution(config, stat_matrix, score_matrix);
        output = nlohmann::ordered_json::parse(evolve::to_json(result));
        std::cout << "best fitness: " << io::format_double(result.best_fitness) << "\n";
        std::cout << "best measure:";
        for (const auto& name : result.best.names()) std::cout << " + " << name;
        std::cout << "\n";
    }

    if (!out_path.empty()) {
        io::write_file(out_path, output.dump(2) + "\n");
        std::cout << "wrote " << out_path.string() << "\n";
    }
    return 0;
}

int run_synth(std::size_t classes, std::size_t items, const std::string& mode_name,
              std::uint64_t seed, std::size_t words, const fs::path& out_path) {
    corpus::SynthMode mode;
    if (mode_name == "identical") mode = corpus::SynthMode::identical;
    else if (mode_name == "random") mode = corpus::SynthMode::random;
    else throw ConfigError("unknown synth mode '" + mode_name + "'");

    const auto dataset = corpus::make_synthetic_dataset(classes, items, mode, seed, words);
    corpus::write_dataset_csv(dataset, out_path);
    std::cout << "wrote " << dataset.train.size() << " items (" << classes
              << " classes) to " << out_path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Difficulty analysis for labeled text-classification datasets"};
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON config file mirroring the flags");

    int threads = hardware_threads();
    app.add_option("--threads", threads, "Worker threads (1 forces the serial path)")
        ->check(CLI::PositiveNumber);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Analyze one dataset's difficulty");
    std::string analyze_input;
    CorpusFlags analyze_corpus;
    std::string measure_choice = "d2";
    std::string baseline_path;
    std::string vector_out;
    std::vector<std::string> analyze_outs;
    bool context = false;
    double threshold = 4.0;
    analyze->add_option("dataset", analyze_input, "Dataset file (csv/tsv/jsonl)")->required();
    add_corpus_flags(analyze, analyze_corpus, /*split_files=*/true);
    analyze->add_option("--measure", measure_choice,
                        "d1, d2, or a genome JSON file")->capture_default_str();
    analyze->add_option("--baseline", baseline_path,
                        "Baseline JSON overriding the built-in means/sigmas");
    analyze->add_option("--out", analyze_outs,
                        "Report output path (.json or .md); repeatable");
    analyze->add_option("--stats-out", vector_out,
                        "Also write the full 48-statistic vector as JSON");
    analyze->add_flag("--context", context,
                      "Attach reference correlation data to the report");
    analyze->add_option("--band-threshold", threshold,
                        "Difficulty above this is banded 'hard'")->capture_default_str();

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "Write the 48-statistic matrix for datasets");
    std::vector<std::string> stats_inputs;
    CorpusFlags stats_corpus;
    std::string stats_out = "stats.csv";
    stats_cmd->add_option("datasets", stats_inputs, "Dataset files")->required();
    add_corpus_flags(stats_cmd, stats_corpus, /*split_files=*/false);
    stats_cmd->add_option("--out", stats_out, "Output CSV path")->capture_default_str();

    // evolve
    auto* evolve_cmd = app.add_subcommand("evolve", "Search for difficulty measures");
    std::string evolve_stats, evolve_scores, ablation_file, evolve_out = "evolution.json";
    std::vector<std::string> holdout, excludes;
    evolve::EvolutionConfig evo_config;
    evolve_cmd->add_option("--stats", evolve_stats, "Statistic matrix CSV")->required();
    evolve_cmd->add_option("--scores", evolve_scores, "Model score matrix CSV")->required();
    evolve_cmd->add_option("--holdout-model", holdout,
                           "Model column excluded from fitness; repeatable");
    evolve_cmd->add_option("--exclude", excludes, "Statistic excluded from evolution; repeatable");
    evolve_cmd->add_option("--ablation-file", ablation_file,
                           "JSON of named exclusion masks: {name: [statistic, ...]}");
    evolve_cmd->add_option("--parent-pairs", evo_config.parent_pairs)->capture_default_str();
    evolve_cmd->add_option("--population", evo_config.population_size)->capture_default_str();
    evolve_cmd->add_option("--mutation-rate", evo_config.mutation_rate)->capture_default_str();
    evolve_cmd->add_option("--stagnation", evo_config.stagnation_limit)->capture_default_str();
    evolve_cmd->add_option("--restarts", evo_config.restarts)->capture_default_str();
    evolve_cmd->add_option("--seed", evo_config.seed, "Base seed; restart r derives from it")
        ->envname("TCDIFF_SEED");
    evolve_cmd->add_option("--out", evolve_out, "Result JSON path")->capture_default_str();

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset CSV");
    std::size_t classes = 2, items = 100, words = 10;
    std::string mode_name = "identical";
    std::uint64_t synth_seed = 0;
    std::string synth_out = "synthetic.csv";
    synth->add_option("--classes", classes, "Number of classes")->capture_default_str();
    synth->add_option("--items", items, "Items per class")->capture_default_str();
    synth->add_option("--mode", mode_name, "identical or random")->capture_default_str();
    synth->add_option("--words", words, "Words per item")->capture_default_str();
    synth->add_option("--seed", synth_seed)->envname("TCDIFF_SEED")->capture_default_str();
    synth->add_option("--out", synth_out, "Output CSV path")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

#ifdef _OPENMP
    omp_set_num_threads(threads);
#endif

    try {
        if (analyze->parsed()) {
            return run_analyze(analyze_input, analyze_corpus, measure_choice, baseline_path,
                               analyze_outs, vector_out, context, threshold, threads);
        }
        if (stats_cmd->parsed()) {
            return run_stats(stats_inputs, stats_corpus, stats_out, threads);
        }
        if (evolve_cmd->parsed()) {
            evo_config.exec = threads == 1 ? Exec::serial : Exec::parallel;
            return run_evolve(evolve_stats, evolve_scores, holdout, excludes, ablation_file,
                              evo_config, evolve_out);
        }
        if (synth->parsed()) {
            return run_synth(classes, items, mode_name, synth_seed, words, synth_out);
        }
        std::cerr << "no subcommand given\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
