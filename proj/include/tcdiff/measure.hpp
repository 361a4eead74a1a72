#pragma once

#include <bitset>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tcdiff/statistics.hpp"

namespace tcdiff::measure {

using stats::StatFlag;
using stats::StatisticVector;

/// A difficulty measure: the subset of the 48 statistics that gets summed.
class MeasureGenome {
public:
    MeasureGenome() = default;
    explicit MeasureGenome(std::string name) : name_(std::move(name)) {}

    /// The recommended word-count-only measure: distinct:total unigrams,
    /// class imbalance, class diversity, max unigram Hellinger similarity,
    /// top unigram mutual information.
    static MeasureGenome d2();
    /// d2 plus top 5-gram interference (the highest-correlation measure).
    static MeasureGenome d1();

    /// Throws ConfigError on an unknown statistic name.
    static MeasureGenome from_names(const std::vector<std::string>& names,
                                    std::string name = {});
    /// Genome file: {"name": ..., "statistics": ["...", ...]}.
    static MeasureGenome from_json_file(const std::filesystem::path& path);

    bool test(int id) const { return bits_.test(static_cast<std::size_t>(id)); }
    void set(int id, bool value = true) { bits_.set(static_cast<std::size_t>(id), value); }
    std::size_t count() const { return bits_.count(); }
    bool any() const { return bits_.any(); }

    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    /// Canonical statistic names of the set bits, canonical order.
    std::vector<std::string> names() const;

    bool operator==(const MeasureGenome& other) const { return bits_ == other.bits_; }

private:
    std::bitset<stats::kStatisticCount> bits_;
    std::string name_;
};

/// Unweighted sum of the selected statistics, in canonical order.
double evaluate(const MeasureGenome& genome, const StatisticVector& vec);

enum class Band { standard, hard };

/// hard iff difficulty is strictly above the threshold.
Band band(double difficulty, double threshold = 4.0);

const char* band_name(Band b);

struct BaselineEntry {
    double mean = 0.0;
    double sigma = 0.0;
};

/// Published per-statistic means and deviations used for z-score context in
/// reports. The built-in table covers the five d2 constituents.
class BaselineTable {
public:
    static BaselineTable builtin();
    /// JSON: {"Statistic Name": {"mean": m, "sigma": s}, ...}. Entries merge
    /// over the built-in table.
    static BaselineTable from_json_file(const std::filesystem::path& path);

    std::optional<BaselineEntry> lookup(int id) const;
    void set(int id, BaselineEntry entry) { entries_[id] = entry; }

private:
    std::map<int, BaselineEntry> entries_;
};

struct ReportRow {
    int id = 0;
    std::string statistic;
    double value = 0.0;
    std::optional<BaselineEntry> baseline;
    std::optional<double> z;  // (value - mean) / sigma
    bool notable = false;     // |z| > 1
    StatFlag flag = StatFlag::ok;
};

struct AnalysisReport {
    std::string dataset;
    std::string measure_name;
    double difficulty = 0.0;
    Band difficulty_band = Band::standard;
    double band_threshold = 4.0;
    std::vector<ReportRow> rows;  // canonical order; sums exactly to difficulty
    bool diversity_domination = false;
};

/// Per-constituent breakdown with z-scores against the baseline table.
/// Rows missing a baseline entry are kept, marked "no baseline".
/// The diversity-domination warning fires when the class distribution looks
/// balanced (imbalance <= 0.25) and the class count implied by the diversity
/// entry (exp H, exact for balanced classes) reaches 25.
AnalysisReport report(const StatisticVector& vec, const MeasureGenome& genome,
                      const BaselineTable& baseline, double band_threshold = 4.0);

std::string to_json(const AnalysisReport& report, bool include_context = false);
std::string to_markdown(const AnalysisReport& report, bool include_context = false);

}  // namespace tcdiff::measure
