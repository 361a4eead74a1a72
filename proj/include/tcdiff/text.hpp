#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tcdiff {

// Text normalization: lowercase, strip punctuation and symbols, split on
// whitespace runs. The stripped set is a documented approximation of the
// Unicode P* and S* general categories:
//   ASCII        !-/ :-@ [-` {-~
//   Latin-1      U+00A1-00BF, U+00D7, U+00F7
//   Punctuation  U+2010-2027, U+2030-205E, U+2060
//   Currency     U+20A0-20BF
//   Symbols      U+2100-214F, U+2190-2BFF
//   CJK punct.   U+3001-303F
//   Small forms  U+FE10-FE19, U+FE30-FE6F
//   Fullwidth    U+FF01-FF0F, U+FF1A-FF20, U+FF3B-FF40, U+FF5B-FF65
//   Emoji etc.   U+1F000-1FAFF
// Digits are kept. Unicode space separators (U+00A0, U+2000-200B, U+2028,
// U+2029, U+202F, U+205F, U+3000) split tokens like ASCII whitespace.
// Case folding covers ASCII and Latin-1; other scripts pass through.

constexpr bool is_space_codepoint(char32_t cp) {
    switch (cp) {
        case U'\t': case U'\n': case U'\v': case U'\f': case U'\r': case U' ':
        case 0x85: case 0xA0: case 0x1680:
        case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200B;
    }
}

constexpr bool is_stripped_codepoint(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
               (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
    }
    if (cp <= 0xFF) return (cp >= 0xA1 && cp <= 0xBF) || cp == 0xD7 || cp == 0xF7;
    return (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E) ||
           cp == 0x2060 ||
           (cp >= 0x20A0 && cp <= 0x20BF) ||
           (cp >= 0x2100 && cp <= 0x214F) || (cp >= 0x2190 && cp <= 0x2BFF) ||
           (cp >= 0x3001 && cp <= 0x303F) ||
           (cp >= 0xFE10 && cp <= 0xFE19) || (cp >= 0xFE30 && cp <= 0xFE6F) ||
           (cp >= 0xFF01 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) ||
           (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFF65) ||
           (cp >= 0x1F000 && cp <= 0x1FAFF);
}

/// Lowercase, strip punctuation, split on whitespace runs. Keeps at most
/// `word_cap` leading tokens when a cap is given. Empty input -> empty.
std::vector<std::string> normalize_text(std::string_view raw,
                                        std::optional<std::size_t> word_cap = std::nullopt);

/// Deterministic syllable estimate for a normalized (lowercase) word:
/// count maximal runs of [aeiouy]; subtract one for a lone trailing 'e'
/// when other vowel runs exist; minimum 1.
int syllable_count(std::string_view word);

}  // namespace tcdiff
