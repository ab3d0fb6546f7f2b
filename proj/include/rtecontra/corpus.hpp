#pragma once

// Tweet-pair datasets: the XML-like RTE pair format, the JSON-lines thread
// schema, and the conversion from annotated thread replies to RTE pairs.

#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rtecontra/label.hpp"

namespace rtecontra {

struct TweetPair {
    std::string id;
    std::string text;
    std::string hypothesis;
    std::optional<RteLabel> label;
    std::string event;
    Scenario scenario = Scenario::IPosts;

    friend bool operator==(const TweetPair&, const TweetPair&) = default;
};

enum class ResponseType : unsigned char { Agreed, Disagreed, AppealForMoreInfo, Comment };

inline std::optional<ResponseType> parse_response_type(std::string_view s) noexcept {
    if (s == "Agreed") return ResponseType::Agreed;
    if (s == "Disagreed") return ResponseType::Disagreed;
    if (s == "AppealforMoreInfo") return ResponseType::AppealForMoreInfo;
    if (s == "Comment") return ResponseType::Comment;
    return std::nullopt;
}

struct ThreadRecord {
    std::string source_tweet;
    std::string reply_tweet;
    ResponseType response_type = ResponseType::Comment;
    bool is_direct_reply = true;
    std::string event;
    std::string id;  // optional in the input; generated when empty
};

/// Errors raised for malformed input files. `line` is 1-based, 0 if unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Per-event, per-label counts plus everything that was skipped on the way.
struct LoadReport {
    std::map<std::string, std::map<std::string, std::size_t>> counts;  // event -> label -> n
    std::size_t loaded = 0;
    std::size_t rejected = 0;
    std::size_t dropped_indirect = 0;
    std::vector<std::string> diagnostics;
    std::vector<std::string> warnings;

    void count(const TweetPair& p) {
        ++loaded;
        ++counts[p.event][p.label ? std::string(to_string(*p.label)) : "unlabeled"];
    }

    void reject(std::string why) {
        ++rejected;
        diagnostics.push_back(std::move(why));
    }

    std::size_t total(RteLabel l) const {
        std::size_t n = 0;
        for (const auto& [event, by_label] : counts) {
            if (auto it = by_label.find(std::string(to_string(l))); it != by_label.end())
                n += it->second;
        }
        return n;
    }

    /// Associative merge, for reports built from independent chunks.
    void merge(const LoadReport& other) {
        for (const auto& [event, by_label] : other.counts)
            for (const auto& [label, n] : by_label) counts[event][label] += n;
        loaded += other.loaded;
        rejected += other.rejected;
        dropped_indirect += other.dropped_indirect;
        diagnostics.insert(diagnostics.end(), other.diagnostics.begin(), other.diagnostics.end());
        warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
    }
};

inline nlohmann::json to_json(const LoadReport& r) {
    nlohmann::json j;
    j["loaded"] = r.loaded;
    j["rejected"] = r.rejected;
    j["dropped_indirect"] = r.dropped_indirect;
    j["counts"] = nlohmann::json::object();
    for (const auto& [event, by_label] : r.counts)
        for (const auto& [label, n] : by_label) j["counts"][event][label] = n;
    j["diagnostics"] = r.diagnostics;
    j["warnings"] = r.warnings;
    return j;
}

struct Dataset {
    std::vector<TweetPair> pairs;
    LoadReport report;
};

// ---------------------------------------------------------------------------
// Label mapping and text/hypothesis assignment

constexpr RteLabel map_response_type(ResponseType rt) noexcept {
    switch (rt) {
        case ResponseType::Agreed: return RteLabel::ENT;
        case ResponseType::Disagreed: return RteLabel::CON;
        case ResponseType::AppealForMoreInfo:
        case ResponseType::Comment: return RteLabel::UNK;
    }
    return RteLabel::UNK;
}

namespace detail {

inline bool is_space(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline std::string_view trim(std::string_view s) noexcept {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

}  // namespace detail

inline std::size_t whitespace_token_count(std::string_view s) noexcept {
    std::size_t n = 0;
    bool in_token = false;
    for (char c : s) {
        const bool sp = detail::is_space(c);
        if (!sp && !in_token) ++n;
        in_token = !sp;
    }
    return n;
}

struct TextHypothesis {
    std::string text;
    std::string hypothesis;
};

/// The tweet with more whitespace tokens becomes the text; on a tie the first
/// argument does.
inline TextHypothesis assign_text_hypothesis(std::string_view a, std::string_view b) {
    a = detail::trim(a);
    b = detail::trim(b);
    if (a.empty() || b.empty()) throw std::invalid_argument("empty tweet");
    if (whitespace_token_count(b) > whitespace_token_count(a)) return {std::string(b), std::string(a)};
    return {std::string(a), std::string(b)};
}

// ---------------------------------------------------------------------------
// Thread records

inline std::vector<ThreadRecord> read_thread_records(std::istream& in, LoadReport& report) {
    std::vector<ThreadRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const std::string where = "line " + std::to_string(line_no) + ": ";
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            report.reject(where + "invalid JSON (" + e.what() + ")");
            continue;
        }
        if (!j.is_object()) {
            report.reject(where + "record is not a JSON object");
            continue;
        }
        ThreadRecord rec;
        try {
            rec.source_tweet = j.at("source_tweet").get<std::string>();
            rec.reply_tweet = j.at("reply_tweet").get<std::string>();
            rec.event = j.at("event").get<std::string>();
            rec.is_direct_reply = j.at("is_direct_reply").get<bool>();
            const auto rt = j.at("response_type").get<std::string>();
            auto parsed = parse_response_type(rt);
            if (!parsed) {
                report.reject(where + "unknown response type '" + rt + "'");
                continue;
            }
            rec.response_type = *parsed;
            if (j.contains("id")) rec.id = j["id"].get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            report.reject(where + "bad record (" + e.what() + ")");
            continue;
        }
        if (rec.event.empty()) {
            report.reject(where + "empty event");
            continue;
        }
        out.push_back(std::move(rec));
    }
    return out;
}

/// Keeps direct replies only; maps the response type onto an RTE label and
/// assigns text/hypothesis by token length. Pair ids default to
/// "<event>-<record index>".
inline Dataset threads_to_pairs(const std::vector<ThreadRecord>& records) {
    Dataset ds;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        if (!rec.is_direct_reply) {
            ++ds.report.dropped_indirect;
            continue;
        }
        TweetPair p;
        p.id = rec.id.empty() ? rec.event + "-" + std::to_string(i) : rec.id;
        try {
            auto th = assign_text_hypothesis(rec.source_tweet, rec.reply_tweet);
            p.text = std::move(th.text);
            p.hypothesis = std::move(th.hypothesis);
        } catch (const std::invalid_argument& e) {
            ds.report.reject("record " + std::to_string(i) + ": " + e.what());
            continue;
        }
        if (!seen.insert(p.id).second) {
            ds.report.reject("record " + std::to_string(i) + ": duplicate id '" + p.id + "'");
            continue;
        }
        p.label = map_response_type(rec.response_type);
        p.event = rec.event;
        p.scenario = Scenario::Threads;
        ds.report.count(p);
        ds.pairs.push_back(std::move(p));
    }
    if (ds.pairs.empty()) ds.report.warnings.push_back("no pairs produced");
    return ds;
}

// ---------------------------------------------------------------------------
// RTE pair format

namespace detail {

inline std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

inline void append_utf8(std::string& out, unsigned long cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

inline std::string xml_unescape(std::string_view s, std::size_t line) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '&') {
            out += s[i];
            continue;
        }
        const auto semi = s.find(';', i);
        if (semi == std::string_view::npos) throw ParseError(line, "unterminated entity");
        const auto ent = s.substr(i + 1, semi - i - 1);
        if (ent == "amp") out += '&';
        else if (ent == "lt") out += '<';
        else if (ent == "gt") out += '>';
        else if (ent == "quot") out += '"';
        else if (ent == "apos") out += '\'';
        else if (ent.size() > 1 && ent[0] == '#') {
            try {
                const bool hex = ent[1] == 'x' || ent[1] == 'X';
                append_utf8(out, std::stoul(std::string(ent.substr(hex ? 2 : 1)), nullptr, hex ? 16 : 10));
            } catch (const std::logic_error&) {
                throw ParseError(line, "bad character reference '&" + std::string(ent) + ";'");
            }
        } else {
            throw ParseError(line, "unknown entity '&" + std::string(ent) + ";'");
        }
        i = semi;
    }
    return out;
}

/// Cursor over the whole document that tracks line numbers.
class PairScanner {
public:
    explicit PairScanner(std::string doc) : doc_(std::move(doc)) {}

    bool at_end() {
        skip_space();
        return pos_ >= doc_.size();
    }
    std::size_t line() const noexcept { return line_; }

    bool at_pair_tag() const {
        if (!starts_with("<pair") || pos_ + 5 >= doc_.size()) return false;
        const char next = doc_[pos_ + 5];
        return next == '>' || is_space(next);
    }

    void skip_space() {
        while (pos_ < doc_.size() && is_space(doc_[pos_])) advance(1);
    }

    bool starts_with(std::string_view s) const {
        return std::string_view(doc_).substr(pos_, s.size()) == s;
    }

    void advance(std::size_t n) {
        for (std::size_t k = 0; k < n && pos_ < doc_.size(); ++k, ++pos_)
            if (doc_[pos_] == '\n') ++line_;
    }

    /// Consumes everything up to and including `end`.
    std::string_view take_until(std::string_view end, std::string_view what) {
        const auto at = doc_.find(end, pos_);
        if (at == std::string::npos) throw ParseError(line_, "unterminated " + std::string(what));
        std::string_view body(doc_.data() + pos_, at - pos_);
        advance(at - pos_ + end.size());
        return body;
    }

    void expect(std::string_view s) {
        skip_space();
        if (!starts_with(s)) throw ParseError(line_, "malformed element: expected '" + std::string(s) + "'");
        advance(s.size());
    }

private:
    std::string doc_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

inline std::map<std::string, std::string> parse_attributes(std::string_view s, std::size_t line) {
    std::map<std::string, std::string> attrs;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < s.size() && is_space(s[i])) ++i;
    };
    for (skip(); i < s.size(); skip()) {
        const auto eq = s.find('=', i);
        if (eq == std::string_view::npos) throw ParseError(line, "malformed attribute list");
        auto name = trim(s.substr(i, eq - i));
        i = eq + 1;
        skip();
        if (i >= s.size() || (s[i] != '"' && s[i] != '\''))
            throw ParseError(line, "attribute '" + std::string(name) + "' is not quoted");
        const char q = s[i++];
        const auto close = s.find(q, i);
        if (close == std::string_view::npos)
            throw ParseError(line, "unterminated attribute '" + std::string(name) + "'");
        if (!attrs.emplace(std::string(name), xml_unescape(s.substr(i, close - i), line)).second)
            throw ParseError(line, "duplicate attribute '" + std::string(name) + "'");
        i = close + 1;
    }
    return attrs;
}

}  // namespace detail

/// Parses a pair document. Unknown wrapper elements, XML declarations and
/// comments are skipped. `default_scenario` applies to pairs without a
/// scenario attribute; without it such pairs are an error.
inline Dataset parse_rte_pairs(std::string doc, std::optional<Scenario> default_scenario = {}) {
    Dataset ds;
    std::unordered_set<std::string> ids;
    detail::PairScanner sc(std::move(doc));
    while (!sc.at_end()) {
        if (sc.starts_with("<?")) {
            sc.take_until("?>", "processing instruction");
            continue;
        }
        if (sc.starts_with("<!--")) {
            sc.take_until("-->", "comment");
            continue;
        }
        if (!sc.at_pair_tag()) {
            if (sc.starts_with("<")) {
                // Wrapper element such as <entailment-corpus>; skip the tag.
                sc.take_until(">", "tag");
                continue;
            }
            throw ParseError(sc.line(), "malformed element: unexpected text outside <pair>");
        }
        const auto pair_line = sc.line();
        sc.advance(5);
        const auto attrs = detail::parse_attributes(sc.take_until(">", "<pair> tag"), pair_line);

        TweetPair p;
        auto attr = [&](const char* key) -> const std::string* {
            auto it = attrs.find(key);
            return it == attrs.end() ? nullptr : &it->second;
        };
        if (auto v = attr("id"); v && !v->empty()) p.id = *v;
        else throw ParseError(pair_line, "pair without id");
        if (auto v = attr("event"); v && !v->empty()) p.event = *v;
        else throw ParseError(pair_line, "pair '" + p.id + "' without event");
        if (auto v = attr("entailment"); v && !v->empty()) {
            auto l = parse_label(*v);
            if (!l) throw ParseError(pair_line, "unknown entailment value '" + *v + "'");
            p.label = *l;
        }
        if (auto v = attr("scenario")) {
            auto s = parse_scenario(*v);
            if (!s) throw ParseError(pair_line, "unknown scenario '" + *v + "'");
            p.scenario = *s;
        } else if (default_scenario) {
            p.scenario = *default_scenario;
        } else {
            throw ParseError(pair_line, "pair '" + p.id + "' without scenario");
        }

        sc.expect("<t>");
        const auto t_line = sc.line();
        p.text = std::string(detail::trim(detail::xml_unescape(sc.take_until("</t>", "<t> element"), t_line)));
        sc.expect("<h>");
        const auto h_line = sc.line();
        p.hypothesis =
            std::string(detail::trim(detail::xml_unescape(sc.take_until("</h>", "<h> element"), h_line)));
        sc.expect("</pair>");

        if (!ids.insert(p.id).second) throw ParseError(pair_line, "duplicate id '" + p.id + "'");
        ds.report.count(p);
        ds.pairs.push_back(std::move(p));
    }
    if (ds.pairs.empty()) ds.report.warnings.push_back("no pairs in input");
    return ds;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Dataset load_rte_pairs(const std::string& path, std::optional<Scenario> default_scenario = {}) {
    return parse_rte_pairs(read_file(path), default_scenario);
}

inline void write_rte_pairs(std::ostream& out, const std::vector<TweetPair>& pairs) {
    using detail::xml_escape;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<entailment-corpus>\n";
    for (const auto& p : pairs) {
        out << "  <pair id=\"" << xml_escape(p.id) << '"';
        if (p.label) out << " entailment=\"" << to_string(*p.label) << '"';
        out << " event=\"" << xml_escape(p.event) << "\" scenario=\"" << to_string(p.scenario) << "\">\n"
            << "    <t>" << xml_escape(p.text) << "</t>\n"
            << "    <h>" << xml_escape(p.hypothesis) << "</h>\n"
            << "  </pair>\n";
    }
    out << "</entailment-corpus>\n";
}

}  // namespace rtecontra
