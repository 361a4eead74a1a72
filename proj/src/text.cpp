#include "tcdiff/text.hpp"

#include <array>

namespace tcdiff {

namespace {

struct Decoded {
    char32_t cp;
    std::size_t len;
};

// Minimal UTF-8 decoder. Invalid sequences are passed through byte-by-byte
// as opaque word characters so that binary junk never drops silently.
Decoded decode_utf8(std::string_view s, std::size_t pos) {
    const auto b0 = static_cast<unsigned char>(s[pos]);
    if (b0 < 0x80) return {b0, 1};

    auto cont = [&](std::size_t off) -> int {
        if (pos + off >= s.size()) return -1;
        const auto b = static_cast<unsigned char>(s[pos + off]);
        return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
    };

    if ((b0 & 0xE0) == 0xC0) {
        const int c1 = cont(1);
        if (c1 >= 0) return {static_cast<char32_t>(((b0 & 0x1F) << 6) | c1), 2};
    } else if ((b0 & 0xF0) == 0xE0) {
        const int c1 = cont(1), c2 = cont(2);
        if (c1 >= 0 && c2 >= 0)
            return {static_cast<char32_t>(((b0 & 0x0F) << 12) | (c1 << 6) | c2), 3};
    } else if ((b0 & 0xF8) == 0xF0) {
        const int c1 = cont(1), c2 = cont(2), c3 = cont(3);
        if (c1 >= 0 && c2 >= 0 && c3 >= 0)
            return {static_cast<char32_t>(((b0 & 0x07) << 18) | (c1 << 12) | (c2 << 6) | c3), 4};
    }
    return {0xFFFD, 1};
}

void encode_utf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

char32_t fold_case(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 32;
    // Latin-1 uppercase block, skipping the multiplication sign.
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
    return cp;
}

// Per-byte ASCII classification: 0 keep (lowercased), 1 space, 2 strip.
struct AsciiTable {
    std::array<unsigned char, 128> kind{};
    std::array<char, 128> lower{};
    constexpr AsciiTable() {
        for (int c = 0; c < 128; ++c) {
            const auto cp = static_cast<char32_t>(c);
            kind[c] = is_space_codepoint(cp) ? 1 : (is_stripped_codepoint(cp) ? 2 : 0);
            lower[c] = (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32)
                                              : static_cast<char>(c);
        }
    }
};

constexpr AsciiTable kAscii{};

}  // namespace

std::vector<std::string> normalize_text(std::string_view raw,
                                        std::optional<std::size_t> word_cap) {
    std::vector<std::string> tokens;
    std::string current;
    const auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    };

    std::size_t pos = 0;
    while (pos < raw.size()) {
        if (word_cap && tokens.size() >= *word_cap) break;
        const auto byte = static_cast<unsigned char>(raw[pos]);
        if (byte < 0x80) {
            ++pos;
            switch (kAscii.kind[byte]) {
                case 0: current.push_back(kAscii.lower[byte]); break;
                case 1: flush(); break;
                default: break;  // stripped
            }
            continue;
        }
        const Decoded d = decode_utf8(raw, pos);
        pos += d.len;
        if (is_space_codepoint(d.cp)) {
            flush();
        } else if (!is_stripped_codepoint(d.cp)) {
            encode_utf8(fold_case(d.cp), current);
        }
    }
    if (!word_cap || tokens.size() < *word_cap) flush();
    return tokens;
}

int syllable_count(std::string_view word) {
    const auto is_vowel = [](char c) {
        return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
    };
    int runs = 0;
    bool in_run = false;
    bool last_run_is_trailing_e = false;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (is_vowel(word[i])) {
            if (!in_run) {
                ++runs;
                in_run = true;
                last_run_is_trailing_e = (word[i] == 'e' && i + 1 == word.size());
            } else {
                last_run_is_trailing_e = false;
            }
        } else {
            in_run = false;
        }
    }
    if (runs > 1 && last_run_is_trailing_e) --runs;
    return runs < 1 ? 1 : runs;
}

}  // namespace tcdiff
