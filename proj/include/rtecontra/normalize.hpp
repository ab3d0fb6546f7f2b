#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rtecontra/porter_stemmer.hpp"
#include "rtecontra/tagger.hpp"
#include "rtecontra/tokenize.hpp"

namespace rtecontra {

/// A tweet after cleaning, tagging, lowercasing and stemming. The four
/// vectors are parallel.
struct NormalizedTweet {
    std::vector<std::string> tokens;
    std::vector<std::string> pos;
    std::vector<std::string> stems;
    std::vector<bool> is_content;

    std::size_t size() const noexcept { return tokens.size(); }

    friend bool operator==(const NormalizedTweet&, const NormalizedTweet&) = default;
};

namespace detail {

inline std::size_t find_url_start(std::string_view tok) {
    const std::string lower = to_lower(tok);
    std::size_t best = std::string::npos;
    for (std::string_view marker : {"http://", "https://", "www.", "pic.twitter.com/"}) {
        const auto at = lower.find(marker);
        if (at < best) best = at;
    }
    return best;
}

inline bool is_mention(std::string_view tok) {
    std::size_t i = 0;
    while (i < tok.size() && tok[i] != '@' && is_ascii_punct(static_cast<unsigned char>(tok[i]))) ++i;
    return i < tok.size() && tok[i] == '@';
}

}  // namespace detail

/// Removes @mentions, strips the leading '#' of hashtags and replaces URLs
/// with the mask token "URL". The result is single-space separated.
inline std::string clean(std::string_view raw) {
    std::string out;
    for (auto chunk : split_whitespace(raw)) {
        if (detail::is_mention(chunk)) continue;
        std::string tok(chunk);
        if (auto at = detail::find_url_start(tok); at != std::string::npos) tok = tok.substr(0, at) + std::string(kUrlMask);
        // '#' is dropped only from the leading punctuation run ("#tag", "(#tag").
        std::size_t i = 0;
        while (i < tok.size() && is_ascii_punct(static_cast<unsigned char>(tok[i]))) {
            if (tok[i] == '#') tok.erase(i, 1);
            else ++i;
        }
        if (tok.empty()) continue;
        if (!out.empty()) out += ' ';
        out += tok;
    }
    return out;
}

/// Tokenizes and tags cleaned text; the URL mask is always tagged NN.
inline TaggedTokens tokenize_tag(std::string_view cleaned, const PosTagger& tagger) {
    TaggedTokens tt = tagger.tokenize_tag(cleaned);
    if (tt.tags.size() != tt.tokens.size()) throw TaggerError("tag/token count mismatch");
    for (std::size_t i = 0; i < tt.tokens.size(); ++i)
        if (tt.tokens[i] == kUrlMask) tt.tags[i] = "NN";
    return tt;
}

/// Porter stemming, except that tokens containing digits and the URL mask
/// pass through unchanged. Apostrophes are removed first.
inline std::string stem_token(std::string_view lowered) {
    std::string bare;
    bare.reserve(lowered.size());
    for (std::size_t i = 0; i < lowered.size();) {
        const auto start = i;
        const char32_t c = utf8::next(lowered, i);
        if (c == '\'' || c == 0x2019) continue;
        bare.append(lowered.substr(start, i - start));
    }
    if (bare == "url" || has_digit(bare)) return bare;
    return porter_stem(bare);
}

inline NormalizedTweet normalize(std::string_view raw, const PosTagger& tagger) {
    const auto tagged = tokenize_tag(clean(raw), tagger);
    NormalizedTweet out;
    for (std::size_t i = 0; i < tagged.tokens.size(); ++i) {
        std::string lowered = to_lower(tagged.tokens[i]);
        if (lowered.empty() || is_punctuation_token(lowered)) continue;
        std::string stem = stem_token(lowered);
        if (stem.empty()) continue;
        out.is_content.push_back(is_content_tag(tagged.tags[i]));
        out.pos.push_back(tagged.tags[i]);
        out.tokens.push_back(std::move(lowered));
        out.stems.push_back(std::move(stem));
    }
    return out;
}

/// Distinct stems of content tokens.
inline std::set<std::string> content_stems(const NormalizedTweet& t) {
    std::set<std::string> out;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t.is_content[i]) out.insert(t.stems[i]);
    return out;
}

/// Distinct POS tags of content tokens.
inline std::set<std::string> content_pos(const NormalizedTweet& t) {
    std::set<std::string> out;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t.is_content[i]) out.insert(t.pos[i]);
    return out;
}

}  // namespace rtecontra
