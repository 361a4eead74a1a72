#include "tcdiff/distribution.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tcdiff::corpus {

namespace {

using CountMap = std::unordered_map<std::string, std::uint64_t>;

void count_item_ngrams(const DataItem& item, int n, CountMap& counts) {
    const auto& toks = item.tokens;
    if (toks.size() < static_cast<std::size_t>(n)) return;
    std::string key;
    for (std::size_t i = 0; i + n <= toks.size(); ++i) {
        key.clear();
        for (int j = 0; j < n; ++j) {
            if (j > 0) key.push_back(' ');
            key += toks[i + j];
        }
        ++counts[key];
    }
}

CountMap count_ngrams_serial(std::span<const DataItem* const> items, int n) {
    CountMap counts;
    for (const DataItem* item : items) count_item_ngrams(*item, n, counts);
    return counts;
}

// Per-thread local maps merged by thread index. Counts are exact integers,
// so the merge order cannot change any value.
CountMap count_ngrams_parallel(std::span<const DataItem* const> items, int n) {
#ifdef _OPENMP
    const int threads = omp_get_max_threads();
    std::vector<CountMap> locals(threads);
    #pragma omp parallel num_threads(threads)
    {
        CountMap& local = locals[omp_get_thread_num()];
        #pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(items.size()); ++i) {
            count_item_ngrams(*items[i], n, local);
        }
    }
    CountMap merged = std::move(locals[0]);
    for (int t = 1; t < threads; ++t) {
        for (auto& [key, c] : locals[t]) merged[key] += c;
    }
    return merged;
#else
    return count_ngrams_serial(items, n);
#endif
}

}  // namespace

std::optional<CountDistribution> CountDistribution::from_counts(
    std::unordered_map<std::string, std::uint64_t> counts) {
    CountDistribution dist;
    dist.entries_.reserve(counts.size());
    for (auto& [key, count] : counts) {
        if (count == 0) continue;
        dist.total_ += count;
        dist.entries_.push_back({key, count});
    }
    if (dist.entries_.empty()) return std::nullopt;
    std::sort(dist.entries_.begin(), dist.entries_.end(),
              [](const Entry& a, const Entry& b) { return a.key < b.key; });
    return dist;
}

std::uint64_t CountDistribution::count(std::string_view key) const {
    const auto it = std::lower_bound(
        entries_.begin(), entries_.end(), key,
        [](const Entry& e, std::string_view k) { return e.key < k; });
    return (it != entries_.end() && it->key == key) ? it->count : 0;
}

std::optional<CountDistribution> ngram_distribution(std::span<const DataItem* const> items,
                                                    int n, Exec exec) {
    CountMap counts = exec == Exec::parallel ? count_ngrams_parallel(items, n)
                                             : count_ngrams_serial(items, n);
    return CountDistribution::from_counts(std::move(counts));
}

std::optional<CountDistribution> class_distribution(const Dataset& dataset, Split split) {
    CountMap counts;
    for (const DataItem* item : dataset.items(split)) ++counts[item->label];
    return CountDistribution::from_counts(std::move(counts));
}

std::map<std::string, std::vector<const DataItem*>> group_by_label(const Dataset& dataset,
                                                                   Split split) {
    std::map<std::string, std::vector<const DataItem*>> by_label;
    for (const DataItem* item : dataset.items(split)) by_label[item->label].push_back(item);
    return by_label;
}

PerClassDistributions per_class_ngram_distributions(
    const std::map<std::string, std::vector<const DataItem*>>& by_label, int n, Exec exec) {
    std::vector<const std::vector<const DataItem*>*> groups;
    std::vector<const std::string*> labels;
    groups.reserve(by_label.size());
    labels.reserve(by_label.size());
    for (const auto& [label, items] : by_label) {
        labels.push_back(&label);
        groups.push_back(&items);
    }

    std::vector<std::optional<CountDistribution>> dists(groups.size());
    if (exec == Exec::parallel) {
        #pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(groups.size()); ++i) {
            dists[i] = ngram_distribution(*groups[i], n, Exec::serial);
        }
    } else {
        for (std::size_t i = 0; i < groups.size(); ++i) {
            dists[i] = ngram_distribution(*groups[i], n, Exec::serial);
        }
    }

    PerClassDistributions result;
    for (std::size_t i = 0; i < groups.size(); ++i) result[*labels[i]] = std::move(dists[i]);
    return result;
}

PerClassDistributions per_class_ngram_distributions(const Dataset& dataset, int n,
                                                    Split split, Exec exec) {
    return per_class_ngram_distributions(group_by_label(dataset, split), n, exec);
}

std::optional<CountDistribution> merge_distributions(const PerClassDistributions& per_class) {
    CountMap merged;
    for (const auto& [label, dist] : per_class) {
        if (!dist) continue;
        for (const auto& entry : dist->entries()) merged[entry.key] += entry.count;
    }
    return CountDistribution::from_counts(std::move(merged));
}

namespace {

// Single-byte characters take the array fast path; multi-byte code points
// fall back to the map.
struct CharCounts {
    std::array<std::uint64_t, 128> ascii{};
    CountMap other;
};

void count_chars(const DataItem& item, CharCounts& counts) {
    for (const auto& token : item.tokens) {
        std::size_t pos = 0;
        while (pos < token.size()) {
            const auto b = static_cast<unsigned char>(token[pos]);
            if (b < 0x80) {
                ++counts.ascii[b];
                ++pos;
                continue;
            }
            // one key per UTF-8 encoded code point
            std::size_t len = 1;
            if ((b & 0xE0) == 0xC0) len = 2;
            else if ((b & 0xF0) == 0xE0) len = 3;
            else if ((b & 0xF8) == 0xF0) len = 4;
            if (pos + len > token.size()) len = 1;
            ++counts.other[token.substr(pos, len)];
            pos += len;
        }
    }
}

CountMap finish_chars(CharCounts&& counts) {
    CountMap merged = std::move(counts.other);
    for (int b = 0; b < 128; ++b) {
        if (counts.ascii[static_cast<std::size_t>(b)] > 0) {
            merged[std::string(1, static_cast<char>(b))] +=
                counts.ascii[static_cast<std::size_t>(b)];
        }
    }
    return merged;
}

}  // namespace

std::optional<CountDistribution> char_distribution(const Dataset& dataset, Split split,
                                                   Exec exec) {
    const auto items = dataset.items(split);

    CharCounts counts;
    if (exec == Exec::parallel) {
#ifdef _OPENMP
        const int threads = omp_get_max_threads();
        std::vector<CharCounts> locals(threads);
        #pragma omp parallel num_threads(threads)
        {
            CharCounts& local = locals[omp_get_thread_num()];
            #pragma omp for schedule(static)
            for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(items.size()); ++i) {
                count_chars(*items[i], local);
            }
        }
        counts = std::move(locals[0]);
        for (int t = 1; t < threads; ++t) {
            for (std::size_t b = 0; b < 128; ++b) counts.ascii[b] += locals[t].ascii[b];
            for (auto& [key, c] : locals[t].other) counts.other[key] += c;
        }
#else
        for (const DataItem* item : items) count_chars(*item, counts);
#endif
    } else {
        for (const DataItem* item : items) count_chars(*item, counts);
    }
    return CountDistribution::from_counts(finish_chars(std::move(counts)));
}

}  // namespace tcdiff::corpus
