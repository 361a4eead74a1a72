#pragma once

#include <string>
#include <string_view>
#include <unordered_set>

namespace tcdiff {

/// A fixed lowercase stopword vocabulary. The built-in list is versioned so
/// results stay reproducible across releases.
struct StopwordList {
    std::unordered_set<std::string> words;
    std::string source;

    bool contains(std::string_view token) const {
        return words.find(std::string(token)) != words.end();
    }

    /// True when every space-separated token of the n-gram key is a stopword.
    bool all_stopwords(std::string_view ngram_key) const;
};

/// Built-in English function-word list ("builtin-en-v1", 178 words, already
/// normalized: lowercase, apostrophes stripped).
const StopwordList& builtin_stopwords();

}  // namespace tcdiff
