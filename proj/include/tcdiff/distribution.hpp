#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tcdiff/corpus.hpp"
#include "tcdiff/parallel.hpp"

namespace tcdiff::corpus {

/// A count-based probability distribution over string keys (n-grams,
/// characters, or class labels). Immutable; entries are sorted by key so all
/// downstream floating-point reductions run in one canonical order no matter
/// how the counts were accumulated.
class CountDistribution {
public:
    struct Entry {
        std::string key;
        std::uint64_t count;
    };

    /// nullopt when the counts are empty (degenerate distribution).
    static std::optional<CountDistribution> from_counts(
        std::unordered_map<std::string, std::uint64_t> counts);

    const std::vector<Entry>& entries() const { return entries_; }
    std::uint64_t total() const { return total_; }
    std::size_t richness() const { return entries_.size(); }

    std::uint64_t count(std::string_view key) const;
    double probability(std::string_view key) const {
        return static_cast<double>(count(key)) / static_cast<double>(total_);
    }

private:
    CountDistribution() = default;
    std::vector<Entry> entries_;
    std::uint64_t total_ = 0;
};

/// Per-class distributions keyed by label (ordered map: deterministic pair
/// enumeration). A class with no n-grams maps to nullopt (degenerate).
using PerClassDistributions = std::map<std::string, std::optional<CountDistribution>>;

/// Count space-joined n-grams across items; n-grams never span item
/// boundaries, items shorter than n contribute nothing. nullopt when no item
/// produces an n-gram.
std::optional<CountDistribution> ngram_distribution(std::span<const DataItem* const> items,
                                                    int n, Exec exec = Exec::serial);

/// Items-per-class counts for one split. nullopt when the split is empty.
std::optional<CountDistribution> class_distribution(const Dataset& dataset, Split split);

PerClassDistributions per_class_ngram_distributions(const Dataset& dataset, int n,
                                                    Split split, Exec exec = Exec::serial);

/// Split items grouped by label, labels sorted. Lets callers that need all
/// five n-gram sizes group once.
std::map<std::string, std::vector<const DataItem*>> group_by_label(const Dataset& dataset,
                                                                   Split split);

PerClassDistributions per_class_ngram_distributions(
    const std::map<std::string, std::vector<const DataItem*>>& by_label, int n,
    Exec exec = Exec::serial);

/// Pool per-class counts back into one distribution. Classes partition a
/// split, so this equals counting the whole split directly.
std::optional<CountDistribution> merge_distributions(const PerClassDistributions& per_class);

/// Character counts over the normalized tokens of a split (token-separating
/// spaces excluded). nullopt when there are no characters.
std::optional<CountDistribution> char_distribution(const Dataset& dataset, Split split,
                                                   Exec exec = Exec::serial);

}  // namespace tcdiff::corpus
