#include "tcdiff/measure.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "tcdiff/error.hpp"
#include "tcdiff/io.hpp"
#include "tcdiff/reference_data.hpp"

namespace tcdiff::measure {

namespace {

namespace sid = stats::sid;

// Balanced class count from which class diversity overwhelms the measure.
constexpr double kDominationMinClasses = 25.0;
constexpr double kDominationMaxImbalance = 0.25;

}  // namespace

MeasureGenome MeasureGenome::d2() {
    MeasureGenome g("d2");
    g.set(sid::distinct_total);  // unigram slot
    g.set(sid::class_imbalance);
    g.set(sid::shannon_class_diversity);
    g.set(sid::max_hellinger);  // unigram slot
    g.set(sid::top_mutual_info);  // unigram slot
    return g;
}

MeasureGenome MeasureGenome::d1() {
    MeasureGenome g = d2();
    g.set_name("d1");
    g.set(sid::top_interference + 4);  // 5-gram slot
    return g;
}

MeasureGenome MeasureGenome::from_names(const std::vector<std::string>& names,
                                        std::string name) {
    MeasureGenome g(std::move(name));
    for (const auto& stat_name : names) {
        const int id = stats::statistic_index(stat_name);
        if (id < 0) throw ConfigError("unknown statistic name: '" + stat_name + "'");
        g.set(id);
    }
    return g;
}

MeasureGenome MeasureGenome::from_json_file(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(io::read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": invalid JSON: " + e.what());
    }
    if (!j.contains("statistics") || !j["statistics"].is_array()) {
        throw ParseError(path.string() + ": expected a \"statistics\" array");
    }
    std::vector<std::string> names;
    for (const auto& entry : j["statistics"]) {
        if (!entry.is_string()) throw ParseError(path.string() + ": statistic names must be strings");
        names.push_back(entry.get<std::string>());
    }
    std::string name = j.value("name", path.stem().string());
    return from_names(names, std::move(name));
}

std::vector<std::string> MeasureGenome::names() const {
    std::vector<std::string> out;
    for (int i = 0; i < stats::kStatisticCount; ++i) {
        if (test(i)) out.emplace_back(stats::statistic_table()[i].name);
    }
    return out;
}

double evaluate(const MeasureGenome& genome, const StatisticVector& vec) {
    double sum = 0.0;
    for (int i = 0; i < stats::kStatisticCount; ++i) {
        if (genome.test(i)) sum += vec.values[i];
    }
    return sum;
}

Band band(double difficulty, double threshold) {
    return difficulty > threshold ? Band::hard : Band::standard;
}

const char* band_name(Band b) { return b == Band::hard ? "hard" : "standard"; }

BaselineTable BaselineTable::builtin() {
    BaselineTable table;
    table.set(sid::distinct_total, {0.0666, 0.0528});
    table.set(sid::class_imbalance, {0.503, 0.365});
    table.set(sid::shannon_class_diversity, {0.905, 0.759});
    table.set(sid::max_hellinger, {0.554, 0.165});
    table.set(sid::top_mutual_info, {1.23, 0.430});
    return table;
}

BaselineTable BaselineTable::from_json_file(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(io::read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": invalid JSON: " + e.what());
    }
    BaselineTable table = builtin();
    for (const auto& [key, value] : j.items()) {
        const int id = stats::statistic_index(key);
        if (id < 0) throw ParseError(path.string() + ": unknown statistic name: '" + key + "'");
        if (!value.contains("mean") || !value.contains("sigma")) {
            throw ParseError(path.string() + ": '" + key + "' needs {mean, sigma}");
        }
        table.set(id, {value["mean"].get<double>(), value["sigma"].get<double>()});
    }
    return table;
}

std::optional<BaselineEntry> BaselineTable::lookup(int id) const {
    const auto it = entries_.find(id);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

AnalysisReport report(const StatisticVector& vec, const MeasureGenome& genome,
                      const BaselineTable& baseline, double band_threshold) {
    AnalysisReport rep;
    rep.dataset = vec.dataset_name;
    rep.measure_name = genome.name().empty() ? "custom" : genome.name();
    rep.band_threshold = band_threshold;

    double sum = 0.0;
    for (int i = 0; i < stats::kStatisticCount; ++i) {
        if (!genome.test(i)) continue;
        ReportRow row;
        row.id = i;
        row.statistic = stats::statistic_table()[i].name;
        row.value = vec.values[i];
        row.flag = vec.flags[i];
        if (const auto entry = baseline.lookup(i); entry && entry->sigma > 0.0) {
            row.baseline = entry;
            row.z = (row.value - entry->mean) / entry->sigma;
            row.notable = std::abs(*row.z) > 1.0;
        }
        sum += row.value;
        rep.rows.push_back(std::move(row));
    }
    rep.difficulty = sum;
    rep.difficulty_band = band(sum, band_threshold);

    // exp(H) recovers the class count exactly when classes are balanced,
    // which is the only regime where the warning applies. The epsilon keeps
    // the <<25 balanced classes>> boundary case inside the warning.
    const double class_diversity = vec.values[sid::shannon_class_diversity];
    const double imbalance = vec.values[sid::class_imbalance];
    rep.diversity_domination =
        vec.flags[sid::shannon_class_diversity] == StatFlag::ok &&
        imbalance <= kDominationMaxImbalance &&
        class_diversity >= std::log(kDominationMinClasses) - 1e-9;

    return rep;
}

namespace {

nlohmann::ordered_json context_json() {
    nlohmann::ordered_json ctx;
    ctx["discovered_measures"] = nlohmann::ordered_json::parse(
        reference::discovered_measures_json());
    ctx["statistic_correlations"] = nlohmann::ordered_json::parse(
        reference::statistic_correlations_json());
    return ctx;
}

}  // namespace

std::string to_json(const AnalysisReport& report, bool include_context) {
    nlohmann::ordered_json j;
    j["dataset"] = report.dataset;
    j["measure"] = report.measure_name;
    j["difficulty"] = report.difficulty;
    j["band"] = band_name(report.difficulty_band);
    j["band_threshold"] = report.band_threshold;
    j["diversity_domination"] = report.diversity_domination;

    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
        nlohmann::ordered_json r;
        r["statistic"] = row.statistic;
        r["value"] = row.value;
        if (row.baseline) {
            r["baseline_mean"] = row.baseline->mean;
            r["baseline_sigma"] = row.baseline->sigma;
            r["z"] = *row.z;
            r["notable"] = row.notable;
        } else {
            r["baseline"] = "no baseline";
        }
        if (row.flag == StatFlag::degenerate) r["flag"] = "degenerate";
        if (row.flag == StatFlag::saturated) r["flag"] = "saturated";
        rows.push_back(std::move(r));
    }
    j["constituents"] = std::move(rows);
    if (include_context) j["context"] = context_json();
    return j.dump(2);
}

namespace {

std::string bar(double value, double scale, int width = 32) {
    if (scale <= 0.0) scale = 1.0;
    int filled = static_cast<int>(std::lround(value / scale * width));
    filled = std::clamp(filled, 0, width);
    return std::string(static_cast<std::size_t>(filled), '#') +
           std::string(static_cast<std::size_t>(width - filled), '.');
}

}  // namespace

std::string to_markdown(const AnalysisReport& report, bool include_context) {
    std::ostringstream out;
    out << "# Difficulty report: " << report.dataset << "\n\n";
    out << "- measure: **" << report.measure_name << "**\n";
    out << "- difficulty: **" << io::format_double(report.difficulty) << "**\n";
    out << "- band: **" << band_name(report.difficulty_band) << "** (threshold "
        << io::format_double(report.band_threshold) << ", strictly above = hard)\n";
    if (report.diversity_domination) {
        out << "- **warning:** many balanced classes; class diversity dominates the "
               "measure, so the total is unreliable as a performance estimate. The "
               "per-constituent rows below are still meaningful.\n";
    }
    out << "\n| constituent | value | baseline mean | sigma | z | flags |\n";
    out << "|---|---|---|---|---|---|\n";
    for (const auto& row : report.rows) {
        out << "| " << row.statistic << " | " << io::format_double(row.value) << " | ";
        if (row.baseline) {
            out << io::format_double(row.baseline->mean) << " | "
                << io::format_double(row.baseline->sigma) << " | "
                << io::format_double(*row.z);
            if (row.notable) out << " **(notable)**";
        } else {
            out << "no baseline | - | -";
        }
        out << " | ";
        if (row.flag == StatFlag::degenerate) out << "degenerate";
        if (row.flag == StatFlag::saturated) out << "saturated";
        out << " |\n";
    }

    // Value-vs-mean bars, scaled per row against max(value, mean + sigma).
    out << "\n```\n";
    for (const auto& row : report.rows) {
        const double mean = row.baseline ? row.baseline->mean : 0.0;
        const double sigma = row.baseline ? row.baseline->sigma : 0.0;
        const double scale = std::max(row.value, mean + sigma);
        out << row.statistic << "\n";
        out << "  value " << bar(row.value, scale) << " "
            << io::format_double(row.value) << "\n";
        if (row.baseline) {
            out << "  mean  " << bar(mean, scale) << " " << io::format_double(mean)
                << " (sigma " << io::format_double(sigma) << ")\n";
        }
    }
    out << "```\n";

    if (include_context) {
        const auto& correlations = reference::statistic_correlations();
        out << "\n## Reference context\n\n";
        out << "Correlation magnitude of each constituent with model scores, from the "
               "published study:\n\n";
        for (const auto& row : report.rows) {
            out << "- " << row.statistic << ": "
                << io::format_double(correlations[static_cast<std::size_t>(row.id)]) << "\n";
        }
        out << "\nStrongest previously discovered measures:\n\n";
        const auto& measures = reference::discovered_measures();
        const std::size_t shown = std::min<std::size_t>(5, measures.size());
        for (std::size_t i = 0; i < shown; ++i) {
            out << "- correlation " << io::format_double(measures[i].correlation) << ": ";
            for (std::size_t s = 0; s < measures[i].statistics.size(); ++s) {
                if (s > 0) out << " + ";
                out << stats::statistic_table()[static_cast<std::size_t>(
                                                    measures[i].statistics[s])].name;
            }
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace tcdiff::measure
