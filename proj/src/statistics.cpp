#include "tcdiff/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <json.hpp>

#include "tcdiff/io.hpp"
#include "tcdiff/text.hpp"

namespace tcdiff::stats {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kFreEpsilon = 1e-6;

constexpr std::array<StatisticInfo, kStatisticCount> kTable = {{
    {"Shannon Class Diversity", StatGroup::class_diversity, 0},
    {"Shannon Class Equitability", StatGroup::class_diversity, 0},
    {"Class Imbalance", StatGroup::class_balance, 0},
    {"Maximum Unigram Hellinger Similarity", StatGroup::class_interference, 1},
    {"Maximum Bigram Hellinger Similarity", StatGroup::class_interference, 2},
    {"Maximum Trigram Hellinger Similarity", StatGroup::class_interference, 3},
    {"Maximum 4-gram Hellinger Similarity", StatGroup::class_interference, 4},
    {"Maximum 5-gram Hellinger Similarity", StatGroup::class_interference, 5},
    {"Mean Maximum Hellinger Similarity", StatGroup::class_interference, 6},
    {"Average Unigram Hellinger Similarity", StatGroup::class_interference, 1},
    {"Average Bigram Hellinger Similarity", StatGroup::class_interference, 2},
    {"Average Trigram Hellinger Similarity", StatGroup::class_interference, 3},
    {"Average 4-gram Hellinger Similarity", StatGroup::class_interference, 4},
    {"Average 5-gram Hellinger Similarity", StatGroup::class_interference, 5},
    {"Mean Average Hellinger Similarity", StatGroup::class_interference, 6},
    {"Top Unigram Interference", StatGroup::class_interference, 1},
    {"Top Bigram Interference", StatGroup::class_interference, 2},
    {"Top Trigram Interference", StatGroup::class_interference, 3},
    {"Top 4-gram Interference", StatGroup::class_interference, 4},
    {"Top 5-gram Interference", StatGroup::class_interference, 5},
    {"Mean Top n-gram Interference", StatGroup::class_interference, 6},
    {"Top Unigram Mutual Information", StatGroup::class_interference, 1},
    {"Top Bigram Mutual Information", StatGroup::class_interference, 2},
    {"Top Trigram Mutual Information", StatGroup::class_interference, 3},
    {"Top 4-gram Mutual Information", StatGroup::class_interference, 4},
    {"Top 5-gram Mutual Information", StatGroup::class_interference, 5},
    {"Mean Top n-gram Mutual Information", StatGroup::class_interference, 6},
    {"Distinct Unigrams : Total Unigrams", StatGroup::data_complexity, 1},
    {"Distinct Bigrams : Total Bigrams", StatGroup::data_complexity, 2},
    {"Distinct Trigrams : Total Trigrams", StatGroup::data_complexity, 3},
    {"Distinct 4-grams : Total 4-grams", StatGroup::data_complexity, 4},
    {"Distinct 5-grams : Total 5-grams", StatGroup::data_complexity, 5},
    {"Mean Distinct n-grams : Total n-grams", StatGroup::data_complexity, 6},
    {"Unigram Shannon Diversity", StatGroup::data_complexity, 1},
    {"Bigram Shannon Diversity", StatGroup::data_complexity, 2},
    {"Trigram Shannon Diversity", StatGroup::data_complexity, 3},
    {"4-gram Shannon Diversity", StatGroup::data_complexity, 4},
    {"5-gram Shannon Diversity", StatGroup::data_complexity, 5},
    {"Mean n-gram Shannon Diversity", StatGroup::data_complexity, 6},
    {"Unigram Shannon Equitability", StatGroup::data_complexity, 1},
    {"Bigram Shannon Equitability", StatGroup::data_complexity, 2},
    {"Trigram Shannon Equitability", StatGroup::data_complexity, 3},
    {"4-gram Shannon Equitability", StatGroup::data_complexity, 4},
    {"5-gram Shannon Equitability", StatGroup::data_complexity, 5},
    {"Mean n-gram Shannon Equitability", StatGroup::data_complexity, 6},
    {"Shannon Character Diversity", StatGroup::data_complexity, 0},
    {"Shannon Character Equitability", StatGroup::data_complexity, 0},
    {"Inverse Flesch Reading Ease", StatGroup::data_complexity, 0},
}};

/// Non-degenerate class distributions in label order (std::map order).
std::vector<const CountDistribution*> usable_classes(const PerClassDistributions& per_class) {
    std::vector<const CountDistribution*> usable;
    for (const auto& [label, dist] : per_class) {
        if (dist) usable.push_back(&*dist);
    }
    return usable;
}

std::vector<std::pair<int, int>> class_pairs(std::size_t count) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(count * (count - 1) / 2);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) {
            pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
    }
    return pairs;
}

/// Evaluate `fn(pair_index, i, j)` over every pair, parallel or serial, into
/// a fixed-order vector so that the reduction below is identical either way.
template <typename Fn>
std::vector<double> map_pairs(const std::vector<std::pair<int, int>>& pairs, Exec exec,
                              Fn&& fn) {
    std::vector<double> out(pairs.size());
    if (exec == Exec::parallel) {
        #pragma omp parallel for schedule(dynamic, 64)
        for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(pairs.size()); ++p) {
            out[p] = fn(static_cast<std::size_t>(p), pairs[p].first, pairs[p].second);
        }
    } else {
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            out[p] = fn(p, pairs[p].first, pairs[p].second);
        }
    }
    return out;
}

double mean_in_order(const std::vector<double>& values) {
    double sum = 0.0;
    for (const double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

}  // namespace

const std::array<StatisticInfo, kStatisticCount>& statistic_table() { return kTable; }

int statistic_index(std::string_view name) {
    static const std::unordered_map<std::string_view, int> index = [] {
        std::unordered_map<std::string_view, int> m;
        for (int i = 0; i < kStatisticCount; ++i) m[kTable[i].name] = i;
        return m;
    }();
    const auto it = index.find(name);
    return it == index.end() ? -1 : it->second;
}

double shannon_diversity(const CountDistribution& dist) {
    const auto total = static_cast<double>(dist.total());
    double h = 0.0;
    for (const auto& entry : dist.entries()) {
        const double p = static_cast<double>(entry.count) / total;
        h += p * std::log(p);
    }
    return -h + 0.0;  // -0.0 -> 0.0 for the single-key case
}

double shannon_equitability(const CountDistribution& dist) {
    if (dist.richness() <= 1) return 0.0;
    const double h = shannon_diversity(dist);
    const double e = h / std::log(static_cast<double>(dist.richness()));
    return std::clamp(e, 0.0, 1.0);
}

double class_imbalance(const CountDistribution& class_dist) {
    const double c = static_cast<double>(class_dist.richness());
    const double total = static_cast<double>(class_dist.total());
    double sum = 0.0;
    for (const auto& entry : class_dist.entries()) {
        sum += std::abs(1.0 / c - static_cast<double>(entry.count) / total);
    }
    return sum;
}

double hellinger_similarity(const CountDistribution& p, const CountDistribution& q) {
    const auto& pe = p.entries();
    const auto& qe = q.entries();
    const auto pt = static_cast<double>(p.total());
    const auto qt = static_cast<double>(q.total());

    // Merge-join over the sorted supports; absent keys contribute their
    // counterpart's probability to the squared-difference sum.
    double sum = 0.0;
    std::size_t i = 0, j = 0;
    while (i < pe.size() || j < qe.size()) {
        int cmp;
        if (i == pe.size()) cmp = 1;
        else if (j == qe.size()) cmp = -1;
        else cmp = pe[i].key.compare(qe[j].key);

        if (cmp < 0) {
            sum += static_cast<double>(pe[i].count) / pt;
            ++i;
        } else if (cmp > 0) {
            sum += static_cast<double>(qe[j].count) / qt;
            ++j;
        } else {
            const double d = std::sqrt(static_cast<double>(pe[i].count) / pt) -
                             std::sqrt(static_cast<double>(qe[j].count) / qt);
            sum += d * d;
            ++i;
            ++j;
        }
    }
    return std::clamp(1.0 - std::sqrt(sum) / kSqrt2, 0.0, 1.0);
}

double distinct_total_ratio(const CountDistribution& dist) {
    return static_cast<double>(dist.richness()) / static_cast<double>(dist.total());
}

FlaggedValue class_interference_hellinger(const PerClassDistributions& per_class,
                                          PairMode mode, Exec exec) {
    const auto usable = usable_classes(per_class);
    if (usable.size() < 2) return {0.0, true};

    const auto pairs = class_pairs(usable.size());
    const auto values = map_pairs(pairs, exec, [&](std::size_t, int i, int j) {
        return hellinger_similarity(*usable[i], *usable[j]);
    });

    if (mode == PairMode::maximum) {
        double best = values[0];
        for (const double v : values) best = std::max(best, v);
        return {best, false};
    }
    return {mean_in_order(values), false};
}

namespace {

std::vector<const CountDistribution::Entry*> top_k_entries(const CountDistribution& dist,
                                                           std::size_t k,
                                                           const StopwordList& stopwords) {
    std::vector<const CountDistribution::Entry*> kept;
    kept.reserve(dist.entries().size());
    for (const auto& entry : dist.entries()) {
        if (!stopwords.all_stopwords(entry.key)) kept.push_back(&entry);
    }
    // Entries are already key-sorted, so a stable sort by count descending
    // gives the documented tie-break (count desc, then lexicographic asc).
    std::stable_sort(kept.begin(), kept.end(),
                     [](const auto* a, const auto* b) { return a->count > b->count; });
    if (kept.size() > k) kept.resize(k);
    return kept;
}

}  // namespace

std::vector<std::string> top_k_ngrams(const CountDistribution& dist, std::size_t k,
                                      const StopwordList& stopwords) {
    const auto kept = top_k_entries(dist, k, stopwords);
    std::vector<std::string> out;
    out.reserve(kept.size());
    for (const auto* entry : kept) out.push_back(entry->key);
    return out;
}

namespace {

/// A class's top-k n-grams in key order, with the class's own counts.
struct TopSet {
    std::vector<std::string_view> keys;
    std::vector<std::uint64_t> counts;
};

std::vector<TopSet> sorted_top_sets(const std::vector<const CountDistribution*>& classes,
                                    const StopwordList& stopwords, std::size_t k, Exec exec) {
    std::vector<TopSet> tops(classes.size());
    const auto build = [&](std::size_t i) {
        auto kept = top_k_entries(*classes[i], k, stopwords);
        std::sort(kept.begin(), kept.end(),
                  [](const auto* a, const auto* b) { return a->key < b->key; });
        TopSet& top = tops[i];
        top.keys.reserve(kept.size());
        top.counts.reserve(kept.size());
        for (const auto* entry : kept) {
            top.keys.push_back(entry->key);  // views into the distribution
            top.counts.push_back(entry->count);
        }
    };
    if (exec == Exec::parallel) {
        #pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(classes.size()); ++i) {
            build(static_cast<std::size_t>(i));
        }
    } else {
        for (std::size_t i = 0; i < classes.size(); ++i) build(i);
    }
    return tops;
}

}  // namespace

FlaggedValue top_ngram_interference(const PerClassDistributions& per_class,
                                    const StopwordList& stopwords, std::size_t k,
                                    Exec exec) {
    const auto usable = usable_classes(per_class);
    if (usable.size() < 2) return {0.0, true};
    const auto tops = sorted_top_sets(usable, stopwords, k, exec);

    const auto pairs = class_pairs(usable.size());
    // -1 marks a skipped pair (both top sets empty after stopword removal).
    const auto values = map_pairs(pairs, exec, [&](std::size_t, int i, int j) -> double {
        const auto& a = tops[i].keys;
        const auto& b = tops[j].keys;
        if (a.empty() && b.empty()) return -1.0;
        std::size_t common = 0;
        std::size_t x = 0, y = 0;
        while (x < a.size() && y < b.size()) {
            const int cmp = a[x].compare(b[y]);
            if (cmp < 0) ++x;
            else if (cmp > 0) ++y;
            else { ++common; ++x; ++y; }
        }
        const std::size_t unions = a.size() + b.size() - common;
        return static_cast<double>(common) / static_cast<double>(unions);
    });

    double sum = 0.0;
    std::size_t counted = 0;
    for (const double v : values) {
        if (v >= 0.0) {
            sum += v;
            ++counted;
        }
    }
    if (counted == 0) return {0.0, true};
    return {sum / static_cast<double>(counted), false};
}

FlaggedValue top_ngram_mutual_information(const PerClassDistributions& per_class,
                                          const StopwordList& stopwords, std::size_t k,
                                          Exec exec) {
    const auto usable = usable_classes(per_class);
    if (usable.size() < 2) return {0.0, true};
    const auto tops = sorted_top_sets(usable, stopwords, k, exec);

    const auto pairs = class_pairs(usable.size());
    std::vector<std::uint8_t> pair_shared(pairs.size(), 0);
    const auto values = map_pairs(pairs, exec, [&](std::size_t p, int i, int j) -> double {
        const CountDistribution& px = *usable[i];
        const CountDistribution& py = *usable[j];
        const double tx = static_cast<double>(px.total());
        const double ty = static_cast<double>(py.total());
        const TopSet& tx_set = tops[i];
        const TopSet& ty_set = tops[j];

        // Walk the union of the two sorted top sets. Counts within the
        // owning class ride along; only the opposite class needs a lookup.
        double sum = 0.0;
        bool shared = false;
        std::size_t x = 0, y = 0;
        while (x < tx_set.keys.size() || y < ty_set.keys.size()) {
            int cmp;
            if (x == tx_set.keys.size()) cmp = 1;
            else if (y == ty_set.keys.size()) cmp = -1;
            else cmp = tx_set.keys[x].compare(ty_set.keys[y]);

            std::uint64_t cx, cy;
            if (cmp < 0) {
                cx = tx_set.counts[x];
                cy = py.count(tx_set.keys[x]);
                ++x;
            } else if (cmp > 0) {
                cx = px.count(ty_set.keys[y]);
                cy = ty_set.counts[y];
                ++y;
            } else {
                cx = tx_set.counts[x];
                cy = ty_set.counts[y];
                ++x;
                ++y;
            }
            if (cx == 0 || cy == 0) continue;  // ln undefined for zero counts
            shared = true;
            const double joint = (static_cast<double>(cx) + static_cast<double>(cy)) / (tx + ty);
            const double wx = static_cast<double>(cx) / tx;
            const double wy = static_cast<double>(cy) / ty;
            sum += joint * std::log(joint / (wx * wy));
        }
        pair_shared[p] = shared ? 1 : 0;
        return sum;
    });

    bool any_shared = false;
    for (const auto s : pair_shared) any_shared |= (s != 0);
    return {mean_in_order(values), !any_shared};
}

std::optional<ReadingEase> inverse_flesch_reading_ease(const Dataset& dataset, Split split) {
    const auto items = dataset.items(split);
    if (items.empty()) return std::nullopt;

    ReadingEase result;
    for (const auto* item : items) {
        result.sentences += 1;  // every item counts as at least one sentence
        result.words += item->tokens.size();
        for (const auto& token : item->tokens) {
            result.syllables += static_cast<std::uint64_t>(syllable_count(token));
        }
    }
    if (result.words == 0) return std::nullopt;

    result.score = 206.835 -
                   1.015 * (static_cast<double>(result.words) /
                            static_cast<double>(result.sentences)) -
                   84.6 * (static_cast<double>(result.syllables) /
                           static_cast<double>(result.words));
    result.saturated = result.score <= 0.0;
    result.inverse = 1.0 / std::max(result.score, kFreEpsilon);
    return result;
}

StatisticVector compute_all(const Dataset& dataset, const StatsConfig& config) {
    const StopwordList& stopwords =
        config.stopwords ? *config.stopwords : builtin_stopwords();
    const Exec exec = config.exec;

    StatisticVector vec;
    vec.dataset_name = dataset.name;

    const auto set = [&](int id, double value, StatFlag flag = StatFlag::ok) {
        vec.values[id] = value;
        vec.flags[id] = flag;
    };
    const auto set_flagged = [&](int id, const FlaggedValue& fv) {
        set(id, fv.value, fv.degenerate ? StatFlag::degenerate : StatFlag::ok);
    };
    // Mean over the five per-n entries of a family, in n order; degenerate
    // when any constituent is.
    const auto set_mean = [&](int base) {
        double sum = 0.0;
        bool degenerate = false;
        for (int n = 0; n < kNgramSizes; ++n) {
            sum += vec.values[base + n];
            degenerate |= vec.flags[base + n] != StatFlag::ok;
        }
        set(base + kMeanSlot, sum / static_cast<double>(kNgramSizes),
            degenerate ? StatFlag::degenerate : StatFlag::ok);
    };

    // Class diversity / balance.
    const auto class_dist = corpus::class_distribution(dataset, config.split);
    if (class_dist) {
        set(sid::shannon_class_diversity, shannon_diversity(*class_dist));
        if (class_dist->richness() > 1) {
            set(sid::shannon_class_equitability, shannon_equitability(*class_dist));
        } else {
            set(sid::shannon_class_equitability, 0.0, StatFlag::degenerate);
        }
        set(sid::class_imbalance, class_imbalance(*class_dist));
    } else {
        set(sid::shannon_class_diversity, 0.0, StatFlag::degenerate);
        set(sid::shannon_class_equitability, 0.0, StatFlag::degenerate);
        set(sid::class_imbalance, 0.0, StatFlag::degenerate);
    }

    // Per-n families. Items are grouped by label once; the whole-split
    // distribution is the pooled per-class counts (classes partition the
    // split), which avoids a second counting pass.
    const auto by_label = corpus::group_by_label(dataset, config.split);
    for (int n = 1; n <= kNgramSizes; ++n) {
        const int slot = n - 1;
        const auto per_class = corpus::per_class_ngram_distributions(by_label, n, exec);
        const auto full = corpus::merge_distributions(per_class);

        set_flagged(sid::max_hellinger + slot,
                    class_interference_hellinger(per_class, PairMode::maximum, exec));
        set_flagged(sid::avg_hellinger + slot,
                    class_interference_hellinger(per_class, PairMode::average, exec));
        set_flagged(sid::top_interference + slot,
                    top_ngram_interference(per_class, stopwords, config.top_k, exec));
        set_flagged(sid::top_mutual_info + slot,
                    top_ngram_mutual_information(per_class, stopwords, config.top_k, exec));

        if (full) {
            set(sid::distinct_total + slot, distinct_total_ratio(*full));
            set(sid::ngram_diversity + slot, shannon_diversity(*full));
            if (full->richness() > 1) {
                set(sid::ngram_equitability + slot, shannon_equitability(*full));
            } else {
                set(sid::ngram_equitability + slot, 0.0, StatFlag::degenerate);
            }
        } else {
            set(sid::distinct_total + slot, 0.0, StatFlag::degenerate);
            set(sid::ngram_diversity + slot, 0.0, StatFlag::degenerate);
            set(sid::ngram_equitability + slot, 0.0, StatFlag::degenerate);
        }
    }
    set_mean(sid::max_hellinger);
    set_mean(sid::avg_hellinger);
    set_mean(sid::top_interference);
    set_mean(sid::top_mutual_info);
    set_mean(sid::distinct_total);
    set_mean(sid::ngram_diversity);
    set_mean(sid::ngram_equitability);

    // Characters.
    const auto chars = corpus::char_distribution(dataset, config.split, exec);
    if (chars) {
        set(sid::char_diversity, shannon_diversity(*chars));
        if (chars->richness() > 1) {
            set(sid::char_equitability, shannon_equitability(*chars));
        } else {
            set(sid::char_equitability, 0.0, StatFlag::degenerate);
        }
    } else {
        set(sid::char_diversity, 0.0, StatFlag::degenerate);
        set(sid::char_equitability, 0.0, StatFlag::degenerate);
    }

    // Readability.
    if (const auto fre = inverse_flesch_reading_ease(dataset, config.split)) {
        set(sid::inverse_fre, fre->inverse,
            fre->saturated ? StatFlag::saturated : StatFlag::ok);
    } else {
        set(sid::inverse_fre, 0.0, StatFlag::degenerate);
    }

    return vec;
}

std::string to_json(const StatisticVector& vec) {
    nlohmann::ordered_json j;
    j["dataset"] = vec.dataset_name;
    nlohmann::ordered_json stats;
    for (int i = 0; i < kStatisticCount; ++i) stats[kTable[i].name] = vec.values[i];
    j["statistics"] = std::move(stats);
    nlohmann::ordered_json flags = nlohmann::ordered_json::object();
    for (int i = 0; i < kStatisticCount; ++i) {
        if (vec.flags[i] == StatFlag::degenerate) flags[kTable[i].name] = "degenerate";
        else if (vec.flags[i] == StatFlag::saturated) flags[kTable[i].name] = "saturated";
    }
    j["flags"] = std::move(flags);
    return j.dump(2);
}

std::vector<std::string> csv_header() {
    std::vector<std::string> header;
    header.reserve(kStatisticCount + 1);
    header.emplace_back("dataset");
    for (const auto& info : kTable) header.emplace_back(info.name);
    return header;
}

std::vector<std::string> csv_row(const StatisticVector& vec) {
    std::vector<std::string> row;
    row.reserve(kStatisticCount + 1);
    row.push_back(vec.dataset_name);
    for (const double v : vec.values) row.push_back(io::format_double(v));
    return row;
}

}  // namespace tcdiff::stats
