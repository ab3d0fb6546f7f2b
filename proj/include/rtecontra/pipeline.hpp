#pragma once

// Pair file -> feature rows, plus the pre-tagged sidecar used when tagging is
// done by an external tool.

#include <charconv>
#include <istream>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rtecontra/corpus.hpp"
#include "rtecontra/features.hpp"
#include "rtecontra/normalize.hpp"
#include "rtecontra/parallel.hpp"
#include "rtecontra/tagger.hpp"

namespace rtecontra {

inline FeatureRow featurize_pair(const TweetPair& p, const PosTagger& tagger, const AlignOptions& align = {}) {
    FeatureRow row;
    row.pair_id = p.id;
    row.event = p.event;
    row.scenario = p.scenario;
    row.label = p.label;
    row.features = featurize(normalize(p.text, tagger), normalize(p.hypothesis, tagger), align);
    return row;
}

/// Row order follows pair order regardless of `jobs`.
inline std::vector<FeatureRow> featurize_pairs(std::span<const TweetPair> pairs, const PosTagger& tagger,
                                               const AlignOptions& align = {}, unsigned jobs = 1) {
    std::vector<FeatureRow> rows(pairs.size());
    parallel_for(pairs.size(), jobs, [&](std::size_t i) {
        try {
            rows[i] = featurize_pair(pairs[i], tagger, align);
        } catch (const TaggerError& e) {
            throw TaggerError("pair '" + pairs[i].id + "': " + e.what());
        }
    });
    return rows;
}

/// Pre-tagged tweets keyed "<pair id>/t" and "<pair id>/h".
using PretaggedStore = std::map<std::string, std::string>;

/// `tagged` holds one tweet per line as space-separated "surface/TAG"
/// tokens; `index` is a TSV of "<pair id>/t|h<TAB><1-based line number>".
inline PretaggedStore read_pretagged(std::istream& tagged, std::istream& index) {
    std::vector<std::string> lines;
    for (std::string line; std::getline(tagged, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    PretaggedStore store;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(index, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim(line).empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError(line_no, "expected '<pair id>/t|h<TAB><line number>'");
        std::string key = line.substr(0, tab);
        if (key.size() < 3 || (key.compare(key.size() - 2, 2, "/t") != 0 && key.compare(key.size() - 2, 2, "/h") != 0))
            throw ParseError(line_no, "key '" + key + "' must end in /t or /h");
        const auto field = detail::trim(std::string_view(line).substr(tab + 1));
        std::size_t target = 0;
        const auto res = std::from_chars(field.data(), field.data() + field.size(), target);
        if (res.ec != std::errc() || res.ptr != field.data() + field.size() || target == 0 || target > lines.size())
            throw ParseError(line_no, "bad line number '" + std::string(field) + "'");
        if (!store.emplace(key, lines[target - 1]).second) throw ParseError(line_no, "duplicate key '" + key + "'");
    }
    return store;
}

/// Replaces text and hypothesis with their pre-tagged versions.
inline void apply_pretagged(std::vector<TweetPair>& pairs, const PretaggedStore& store) {
    for (auto& p : pairs) {
        auto t = store.find(p.id + "/t");
        auto h = store.find(p.id + "/h");
        if (t == store.end() || h == store.end()) throw TaggerError("no pre-tagged text for pair '" + p.id + "'");
        p.text = t->second;
        p.hypothesis = h->second;
    }
}

}  // namespace rtecontra
