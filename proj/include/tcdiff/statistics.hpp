#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tcdiff/distribution.hpp"
#include "tcdiff/parallel.hpp"
#include "tcdiff/stopwords.hpp"

namespace tcdiff::stats {

inline constexpr int kStatisticCount = 48;
inline constexpr int kNgramSizes = 5;

enum class StatGroup {
    class_diversity,
    class_balance,
    class_interference,
    data_complexity,
};

/// Position of the Mean-over-n entry relative to its five per-n entries.
inline constexpr int kMeanSlot = 5;

struct StatisticInfo {
    const char* name;  // canonical, used in CSV headers and JSON keys
    StatGroup group;
    int ngram;  // 1..5, 0 = not n-gram based, 6 = mean over n-gram sizes
};

/// The canonical 48-statistic table, fixed order. Indices below are stable.
const std::array<StatisticInfo, kStatisticCount>& statistic_table();

/// Index for a canonical name, -1 if unknown.
int statistic_index(std::string_view name);

// Canonical indices. Families are laid out per-n (n = 1..5) then the mean.
namespace sid {
inline constexpr int shannon_class_diversity = 0;
inline constexpr int shannon_class_equitability = 1;
inline constexpr int class_imbalance = 2;
inline constexpr int max_hellinger = 3;        // .. 7, mean at 8
inline constexpr int avg_hellinger = 9;        // .. 13, mean at 14
inline constexpr int top_interference = 15;    // .. 19, mean at 20
inline constexpr int top_mutual_info = 21;     // .. 25, mean at 26
inline constexpr int distinct_total = 27;      // .. 31, mean at 32
inline constexpr int ngram_diversity = 33;     // .. 37, mean at 38
inline constexpr int ngram_equitability = 39;  // .. 43, mean at 44
inline constexpr int char_diversity = 45;
inline constexpr int char_equitability = 46;
inline constexpr int inverse_fre = 47;
}  // namespace sid

enum class StatFlag : std::uint8_t { ok, degenerate, saturated };

/// The 48 statistic values of one dataset, canonical order, always finite.
/// Statistics whose inputs were degenerate hold their documented default
/// (0, or the saturation value for inverse reading ease) and carry a flag.
struct StatisticVector {
    std::string dataset_name;
    std::array<double, kStatisticCount> values{};
    std::array<StatFlag, kStatisticCount> flags{};
};

/// Aggregate result that records whether its inputs were degenerate.
struct FlaggedValue {
    double value = 0.0;
    bool degenerate = false;
};

using corpus::CountDistribution;
using corpus::Dataset;
using corpus::PerClassDistributions;
using corpus::Split;

// ── Scalar statistics ───────────────────────────────────────────────────────

/// H = -sum p_i ln p_i (natural log).
double shannon_diversity(const CountDistribution& dist);

/// H / ln(richness), clamped to [0,1]. Richness 1 -> 0 (degenerate).
double shannon_equitability(const CountDistribution& dist);

/// sum_c |1/C - n_c/T| over the class distribution. 0 when balanced, at most
/// 2(1 - 1/C) (all mass in one class).
double class_imbalance(const CountDistribution& class_dist);

/// 1 - (1/sqrt 2)*sqrt(sum (sqrt p_i - sqrt q_i)^2) over the union of both
/// supports, clamped to [0,1].
double hellinger_similarity(const CountDistribution& p, const CountDistribution& q);

/// richness / total. 1 means every n-gram occurs exactly once.
double distinct_total_ratio(const CountDistribution& dist);

// ── Pairwise class-interference aggregates ──────────────────────────────────

enum class PairMode { average, maximum };

/// Hellinger similarity over all unordered pairs of non-degenerate class
/// distributions; mean or max. Fewer than 2 usable classes -> degenerate 0.
FlaggedValue class_interference_hellinger(const PerClassDistributions& per_class,
                                          PairMode mode, Exec exec = Exec::serial);

/// The k most frequent n-grams, skipping n-grams made entirely of stopwords.
/// Ties: higher count first, then lexicographic.
std::vector<std::string> top_k_ngrams(const CountDistribution& dist, std::size_t k,
                                      const StopwordList& stopwords);

/// Mean Jaccard similarity |A∩B|/|A∪B| of per-class top-k sets. Pairs with
/// both sets empty are skipped; no usable pair -> degenerate 0.
FlaggedValue top_ngram_interference(const PerClassDistributions& per_class,
                                    const StopwordList& stopwords, std::size_t k = 10,
                                    Exec exec = Exec::serial);

/// Mean over class pairs (X,Y) of sum over n-grams w present in both classes
/// and in the union of their top-k sets of p(w) ln(p(w)/(p_X(w) p_Y(w))),
/// where p(w) pools both classes' counts. Degenerate when no pair shares
/// any top n-gram.
FlaggedValue top_ngram_mutual_information(const PerClassDistributions& per_class,
                                          const StopwordList& stopwords, std::size_t k = 10,
                                          Exec exec = Exec::serial);

// ── Readability ─────────────────────────────────────────────────────────────

struct ReadingEase {
    double inverse = 0.0;  // 1 / max(score, 1e-6)
    double score = 0.0;    // 206.835 - 1.015 w/s - 84.6 y/w
    bool saturated = false;  // score <= 0
    std::uint64_t words = 0;
    std::uint64_t sentences = 0;  // one per item (normalized text keeps no
                                  // sentence punctuation)
    std::uint64_t syllables = 0;
};

/// nullopt when the split has no words.
std::optional<ReadingEase> inverse_flesch_reading_ease(const Dataset& dataset, Split split);

// ── Full vector ─────────────────────────────────────────────────────────────

struct StatsConfig {
    /// Statistics are computed on train only by default; Split::all widens
    /// to every split.
    Split split = Split::train;
    std::size_t top_k = 10;
    const StopwordList* stopwords = nullptr;  // null -> builtin list
    Exec exec = Exec::parallel;
};

/// Compute all 48 statistics. Never throws on degenerate inputs: affected
/// entries take their documented defaults and are flagged. Results are
/// bitwise-identical between serial and parallel execution.
StatisticVector compute_all(const Dataset& dataset, const StatsConfig& config = {});

/// JSON object {"dataset": ..., "statistics": {name: value}, "flags": {...}}.
std::string to_json(const StatisticVector& vec);

/// Header row ("dataset" + 48 canonical names) and a vector's CSV row form.
std::vector<std::string> csv_header();
std::vector<std::string> csv_row(const StatisticVector& vec);

}  // namespace tcdiff::stats
