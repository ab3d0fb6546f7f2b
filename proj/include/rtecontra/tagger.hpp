#pragma once

// Part-of-speech taggers producing PENN Treebank tags.
//
// BaselineTagger is a small lexicon plus suffix and shape heuristics. It is
// good enough to separate content words from function words in tweets, not a
// state-of-the-art tagger. PretaggedTagger passes through tags produced by an
// external tool ("surface/TAG" tokens).

#include <algorithm>
#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rtecontra/tokenize.hpp"

namespace rtecontra {

inline constexpr std::string_view kUrlMask = "URL";

class TaggerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline bool is_penn_tag(std::string_view tag) {
    static const std::unordered_set<std::string_view> tags{
        "CC",  "CD",  "DT",   "EX",  "FW",  "IN",  "JJ",  "JJR", "JJS", "LS",   "MD",   "NN",
        "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS",  "RP",   "SYM",
        "TO",  "UH",  "VB",   "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT", "WP",   "WP$",  "WRB",
        "#",   "$",   "''",   "``",  "(",   ")",   ",",   ".",   ":",   "-LRB-", "-RRB-"};
    return tags.contains(tag);
}

/// Nouns, verbs, adjectives, adverbs and cardinal numbers.
inline bool is_content_tag(std::string_view tag) noexcept {
    static constexpr std::array<std::string_view, 17> content{
        "NN", "NNS", "NNP", "NNPS", "VB", "VBD", "VBG", "VBN", "VBP",
        "VBZ", "JJ", "JJR", "JJS", "RB", "RBR", "RBS", "CD"};
    return std::find(content.begin(), content.end(), tag) != content.end();
}

struct TaggedTokens {
    std::vector<std::string> tokens;
    std::vector<std::string> tags;
};

class PosTagger {
public:
    virtual ~PosTagger() = default;

    /// One PENN tag per input token.
    virtual std::vector<std::string> tag(std::span<const std::string> tokens) const = 0;

    /// Splits cleaned text into tokens and tags them. Taggers that consume
    /// pre-tokenized input override this.
    virtual TaggedTokens tokenize_tag(std::string_view cleaned) const {
        TaggedTokens out;
        out.tokens = tokenize(cleaned);
        out.tags = tag(out.tokens);
        if (out.tags.size() != out.tokens.size())
            throw TaggerError("tagger returned " + std::to_string(out.tags.size()) + " tags for " +
                              std::to_string(out.tokens.size()) + " tokens");
        return out;
    }
};

// ---------------------------------------------------------------------------

class BaselineTagger final : public PosTagger {
public:
    BaselineTagger() : lexicon_(default_lexicon()) {}

    std::vector<std::string> tag(std::span<const std::string> tokens) const override {
        std::vector<std::string> tags;
        tags.reserve(tokens.size());
        bool sentence_start = true;
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            const std::string_view prev_tag = tags.empty() ? std::string_view{} : std::string_view(tags.back());
            const std::string prev_word = i > 0 ? to_lower(tokens[i - 1]) : std::string{};
            tags.push_back(tag_one(tokens[i], prev_word, prev_tag, sentence_start));
            const auto& t = tags.back();
            sentence_start = t == "." || (t == ":" && i + 1 < tokens.size());
        }
        return tags;
    }

private:
    std::unordered_map<std::string, std::string> lexicon_;

    static std::string punct_tag(std::string_view tok) {
        if (tok == "." || tok == "!" || tok == "?" || tok.find_first_not_of(".!?") == std::string_view::npos)
            return ".";
        if (tok == ",") return ",";
        if (tok == "(" || tok == "[" || tok == "{") return "(";
        if (tok == ")" || tok == "]" || tok == "}") return ")";
        if (tok == "\"" || tok == "''" || tok == "\xE2\x80\x9D") return "''";
        if (tok == "``" || tok == "\xE2\x80\x9C") return "``";
        if (tok == "#") return "#";
        if (tok == "$") return "$";
        return ":";
    }

    static bool is_number(std::string_view tok) {
        bool digit = false;
        for (char c : tok) {
            if (c >= '0' && c <= '9') digit = true;
            else if (c != ',' && c != '.' && c != ':' && c != '/' && c != '-' && c != '+' && c != '%')
                return false;
        }
        return digit;
    }

    static bool ends_with(std::string_view s, std::string_view suf) {
        return s.size() > suf.size() && s.substr(s.size() - suf.size()) == suf;
    }

    static bool has_ascii_letter(std::string_view s) {
        return std::any_of(s.begin(), s.end(), [](char c) { return (c | 0x20) >= 'a' && (c | 0x20) <= 'z'; });
    }

    static bool all_caps(std::string_view s) {
        bool letters = false;
        for (char c : s) {
            if (c >= 'a' && c <= 'z') return false;
            if (c >= 'A' && c <= 'Z') letters = true;
        }
        return letters;
    }

    std::string tag_one(const std::string& tok, std::string_view prev_word, std::string_view prev_tag,
                        bool sentence_start) const {
        if (tok == kUrlMask) return "NN";
        if (is_punctuation_token(tok)) return punct_tag(tok);
        if (is_number(tok)) return "CD";
        const std::string lower = to_lower(tok);
        if (auto it = lexicon_.find(lower); it != lexicon_.end()) return it->second;
        if (!has_ascii_letter(tok)) {
            return has_digit(tok) ? "CD" : "SYM";
        }
        if (has_digit(tok)) return "NN";
        if (all_caps(tok) && tok.size() >= 2) return "NNP";
        const bool capitalised = tok[0] >= 'A' && tok[0] <= 'Z';
        if (capitalised && !sentence_start) return ends_with(lower, "s") && lower.size() > 3 ? "NNPS" : "NNP";

        if (prev_tag == "TO" || prev_tag == "MD") return "VB";
        if (ends_with(lower, "ing") && lower.size() > 4) return "VBG";
        if (ends_with(lower, "ed") && lower.size() > 3) {
            static const std::unordered_set<std::string_view> aux{
                "has", "have", "had", "was", "were", "is", "are", "been", "be", "being", "'s", "get", "got"};
            return aux.contains(prev_word) ? "VBN" : "VBD";
        }
        if (ends_with(lower, "ly") && lower.size() > 3) return "RB";
        static constexpr std::array<std::string_view, 13> adj{
            "ous", "ful", "ive", "able", "ible", "ical", "less", "ish", "ic", "al", "ary", "ent", "ant"};
        static constexpr std::array<std::string_view, 12> noun{
            "tion", "sion", "ment", "ness", "ity", "ism", "ist", "ance", "ence", "ship", "hood", "er"};
        for (auto s : noun)
            if (ends_with(lower, s)) return "NN";
        for (auto s : adj)
            if (ends_with(lower, s)) return "JJ";
        if (ends_with(lower, "s") && !ends_with(lower, "ss") && !ends_with(lower, "us") && !ends_with(lower, "is")) {
            static const std::unordered_set<std::string_view> subj{"he", "she", "it", "who", "that", "which"};
            return subj.contains(prev_word) ? "VBZ" : "NNS";
        }
        return "NN";
    }

    static std::unordered_map<std::string, std::string> default_lexicon() {
        std::unordered_map<std::string, std::string> lex;
        auto add = [&](std::string_view tag, std::initializer_list<std::string_view> words) {
            for (auto w : words) lex.emplace(std::string(w), std::string(tag));
        };
        add("DT", {"the", "a", "an", "this", "these", "those", "every", "each", "some", "any", "no",
                   "another", "either", "neither", "all", "both"});
        add("PDT", {"such", "half"});
        add("IN", {"of", "in", "on", "at", "by", "for", "with", "from", "about", "after", "before",
                   "over", "under", "into", "onto", "through", "during", "inside", "outside", "near",
                   "since", "until", "against", "among", "between", "without", "within", "upon",
                   "via", "as", "than", "if", "because", "while", "although", "though", "whether",
                   "like", "per", "across", "behind", "beyond", "despite", "toward", "towards",
                   "amid", "around", "off", "out", "up", "down", "that", "so"});
        add("TO", {"to"});
        add("CC", {"and", "or", "but", "nor", "yet", "&", "plus"});
        add("PRP", {"i", "you", "he", "she", "it", "we", "they", "me", "him", "us", "them",
                    "myself", "yourself", "himself", "herself", "itself", "ourselves", "themselves",
                    "u", "im", "i'm", "it's", "you're", "we're", "they're", "he's", "she's"});
        add("PRP$", {"my", "your", "his", "her", "its", "our", "their"});
        add("WP", {"who", "what", "whom", "whoever", "whatever"});
        add("WP$", {"whose"});
        add("WDT", {"which", "whichever"});
        add("WRB", {"when", "where", "why", "how", "whenever", "wherever"});
        add("EX", {"there"});
        add("MD", {"can", "could", "will", "would", "shall", "should", "may", "might", "must",
                   "'ll", "cannot", "can't", "won't", "wouldn't", "shouldn't", "couldn't"});
        add("VB", {"be", "do", "have", "go", "get", "make", "take", "see", "say", "know", "stop",
                   "pray", "help", "stay", "keep", "let", "please", "think", "come", "give"});
        add("VBZ", {"is", "has", "does", "says", "isn't", "doesn't", "hasn't", "seems", "goes"});
        add("VBP", {"are", "am", "'re", "'ve", "'m", "aren't", "don't", "haven't", "think", "hope"});
        add("VBD", {"was", "were", "had", "did", "said", "told", "left", "took", "made", "came",
                    "went", "got", "saw", "found", "fled", "ran", "began", "became", "wasn't",
                    "weren't", "didn't", "hadn't", "stormed", "died", "killed"});
        add("VBN", {"been", "seen", "done", "gone", "known", "taken", "given", "shown", "held",
                    "shot", "hit", "hurt", "confirmed", "reported", "injured", "wounded", "caught"});
        add("VBG", {"being", "having", "breaking", "developing", "according"});
        add("RB", {"not", "n't", "never", "very", "also", "now", "just", "still", "already", "only",
                   "even", "too", "again", "here", "then", "soon", "reportedly", "apparently",
                   "really", "maybe", "perhaps", "always", "often", "almost", "ago", "away",
                   "back", "today", "tonight", "yesterday", "tomorrow", "together", "else",
                   "however", "rather", "quite", "instead", "ever", "once", "well", "why"});
        add("RBR", {"more", "less", "better", "worse", "further", "later"});
        add("RBS", {"most", "least", "best", "worst"});
        add("JJ", {"good", "bad", "new", "old", "big", "small", "other", "many", "much", "few",
                   "first", "last", "next", "live", "dead", "fatal", "several", "many", "same",
                   "own", "real", "false", "true", "sure", "sad", "awful", "terrible", "horrible",
                   "great", "whole", "little", "high", "low", "young", "armed", "unconfirmed",
                   "possible", "likely", "safe", "free", "latest", "main", "local", "french",
                   "german", "canadian", "australian", "islamic", "military", "domestic"});
        add("JJR", {"bigger", "higher", "larger", "lower", "older", "younger"});
        add("JJS", {"biggest", "highest", "largest", "lowest", "oldest", "youngest"});
        add("CD", {"one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
                   "eleven", "twelve", "thirteen", "fourteen", "fifteen", "twenty", "thirty",
                   "fifty", "hundred", "hundreds", "thousand", "thousands", "million", "millions",
                   "dozen", "dozens"});
        add("UH", {"oh", "wow", "lol", "omg", "yes", "yeah", "ok", "okay", "hey", "please", "rip",
                   "wtf", "haha", "ugh"});
        add("POS", {"'s", "'"});
        add("RP", {"away"});
        // The retweet marker carries no lexical content.
        add("SYM", {"rt", "via"});
        return lex;
    }
};

// ---------------------------------------------------------------------------

/// Reads "surface/TAG" tokens produced by an external tagger. The split is at
/// the last '/', so surfaces may contain slashes. A bare "URL" mask token
/// (left behind by URL masking) is tagged NN.
class PretaggedTagger final : public PosTagger {
public:
    static std::pair<std::string, std::string> split_token(std::string_view tok) {
        if (tok == kUrlMask) return {std::string(kUrlMask), "NN"};
        const auto slash = tok.rfind('/');
        if (slash == std::string_view::npos || slash + 1 == tok.size())
            throw TaggerError("pre-tagged token '" + std::string(tok) + "' has no tag");
        std::string tag(tok.substr(slash + 1));
        if (!is_penn_tag(tag)) throw TaggerError("pre-tagged token '" + std::string(tok) + "' has non-PENN tag");
        return {std::string(tok.substr(0, slash)), std::move(tag)};
    }

    std::vector<std::string> tag(std::span<const std::string> tokens) const override {
        std::vector<std::string> tags;
        tags.reserve(tokens.size());
        for (const auto& t : tokens) tags.push_back(split_token(t).second);
        return tags;
    }

    TaggedTokens tokenize_tag(std::string_view cleaned) const override {
        TaggedTokens out;
        for (auto tok : split_whitespace(cleaned)) {
            auto [surface, tag] = split_token(tok);
            if (surface.empty()) continue;  // e.g. a bare "#/#" whose '#' was stripped
            out.tokens.push_back(std::move(surface));
            out.tags.push_back(std::move(tag));
        }
        return out;
    }
};

}  // namespace rtecontra
