#pragma once

// Tweet tokenization helpers shared by the taggers and the normalizer.
// Text is treated as UTF-8; punctuation covers ASCII punctuation plus the
// common Unicode punctuation blocks (dashes, quotes, ellipsis, ...).

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace rtecontra {

namespace utf8 {

/// Decodes the code point starting at s[i] and advances i. Invalid bytes are
/// returned as-is, one at a time.
inline char32_t next(std::string_view s, std::size_t& i) noexcept {
    const auto b0 = static_cast<unsigned char>(s[i]);
    auto cont = [&](std::size_t k) -> unsigned {
        return i + k < s.size() ? static_cast<unsigned char>(s[i + k]) & 0x3Fu : 0u;
    };
    auto valid_cont = [&](std::size_t n) {
        for (std::size_t k = 1; k <= n; ++k)
            if (i + k >= s.size() || (static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return false;
        return true;
    };
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    if ((b0 & 0xE0) == 0xC0 && valid_cont(1)) {
        char32_t cp = ((b0 & 0x1Fu) << 6) | cont(1);
        i += 2;
        return cp;
    }
    if ((b0 & 0xF0) == 0xE0 && valid_cont(2)) {
        char32_t cp = ((b0 & 0x0Fu) << 12) | (cont(1) << 6) | cont(2);
        i += 3;
        return cp;
    }
    if ((b0 & 0xF8) == 0xF0 && valid_cont(3)) {
        char32_t cp = ((b0 & 0x07u) << 18) | (cont(1) << 12) | (cont(2) << 6) | cont(3);
        i += 4;
        return cp;
    }
    ++i;
    return b0;
}

}  // namespace utf8

inline bool is_ascii_punct(char32_t c) noexcept {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
           (c >= 0x7B && c <= 0x7E);
}

inline bool is_punct_codepoint(char32_t c) noexcept {
    if (c < 0x80) return is_ascii_punct(c);
    switch (c) {
        case 0x00A1: case 0x00A7: case 0x00AB: case 0x00B6: case 0x00B7: case 0x00BB: case 0x00BF:
        case 0x3001: case 0x3002: case 0x300C: case 0x300D: case 0xFF01: case 0xFF0C: case 0xFF1F:
            return true;
        default:
            return (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E);
    }
}

/// True if the token is nonempty and made only of punctuation.
inline bool is_punctuation_token(std::string_view tok) noexcept {
    if (tok.empty()) return false;
    for (std::size_t i = 0; i < tok.size();)
        if (!is_punct_codepoint(utf8::next(tok, i))) return false;
    return true;
}

inline bool has_digit(std::string_view tok) noexcept {
    for (char c : tok)
        if (c >= '0' && c <= '9') return true;
    return false;
}

inline std::vector<std::string_view> split_whitespace(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    auto space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
    while (i < s.size()) {
        while (i < s.size() && space(s[i])) ++i;
        const auto start = i;
        while (i < s.size() && !space(s[i])) ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

/// Whitespace split, then leading and trailing punctuation runs become their
/// own tokens ("Sydney.." -> "Sydney", ".."). Inner punctuation stays, so
/// "co-pilot" and "don't" survive as single tokens.
inline std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    for (auto chunk : split_whitespace(text)) {
        std::size_t lead_end = 0;
        while (lead_end < chunk.size()) {
            std::size_t j = lead_end;
            if (!is_punct_codepoint(utf8::next(chunk, j))) break;
            lead_end = j;
        }
        if (lead_end == chunk.size()) {
            out.emplace_back(chunk);
            continue;
        }
        // Find where the trailing punctuation run starts.
        std::size_t trail_start = chunk.size();
        for (std::size_t i = lead_end; i < chunk.size();) {
            const auto at = i;
            if (is_punct_codepoint(utf8::next(chunk, i))) {
                if (trail_start == chunk.size()) trail_start = at;
            } else {
                trail_start = chunk.size();
            }
        }
        if (lead_end > 0) out.emplace_back(chunk.substr(0, lead_end));
        out.emplace_back(chunk.substr(lead_end, trail_start - lead_end));
        if (trail_start < chunk.size()) out.emplace_back(chunk.substr(trail_start));
    }
    return out;
}

/// ASCII and Latin-1 letters are lowercased; everything else is copied.
inline std::string to_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        const auto start = i;
        const char32_t c = utf8::next(s, i);
        if (c >= 'A' && c <= 'Z') {
            out += static_cast<char>(c - 'A' + 'a');
        } else if (c >= 0xC0 && c <= 0xDE && c != 0xD7) {
            const char32_t lower = c + 0x20;
            out += static_cast<char>(0xC0 | (lower >> 6));
            out += static_cast<char>(0x80 | (lower & 0x3F));
        } else {
            out.append(s.substr(start, i - start));
        }
    }
    return out;
}

}  // namespace rtecontra
