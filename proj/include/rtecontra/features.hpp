#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rtecontra/align.hpp"
#include "rtecontra/csv.hpp"
#include "rtecontra/label.hpp"
#include "rtecontra/normalize.hpp"

namespace rtecontra {

inline constexpr std::size_t kNumFeatures = 6;
inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames{
    "cosine", "f_score", "cosine_pos", "f_score_pos", "laProp", "laPropS"};

struct FeatureVector {
    double cosine = 0;
    double f_score = 0;
    double cosine_pos = 0;
    double f_score_pos = 0;
    double la_prop = 0;
    double la_prop_short = 0;

    std::array<double, kNumFeatures> values() const noexcept {
        return {cosine, f_score, cosine_pos, f_score_pos, la_prop, la_prop_short};
    }

    static FeatureVector from_values(std::span<const double> v) {
        if (v.size() != kNumFeatures) throw std::invalid_argument("feature vector needs 6 values");
        return {v[0], v[1], v[2], v[3], v[4], v[5]};
    }

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

template <class Set>
std::size_t intersection_size(const Set& a, const Set& b) {
    std::size_t n = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else {
            ++n;
            ++ia;
            ++ib;
        }
    }
    return n;
}

/// |X & Y| / sqrt(|X| |Y|); 0 if either set is empty.
template <class Set>
double cosine_overlap(const Set& x, const Set& y) {
    if (x.empty() || y.empty()) return 0.0;
    const auto common = static_cast<double>(intersection_size(x, y));
    return common / std::sqrt(static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

/// Harmonic mean of |X & Y|/|X| and |X & Y|/|Y|, i.e. 2|X & Y| / (|X| + |Y|).
template <class Set>
double f1_overlap(const Set& x, const Set& y) {
    if (x.empty() || y.empty()) return 0.0;
    const auto common = static_cast<double>(intersection_size(x, y));
    if (common == 0) return 0.0;
    return 2.0 * common / static_cast<double>(x.size() + y.size());
}

/// Proportion of aligned tokens over both tweets and over the shorter one.
struct AlignmentProportions {
    double la_prop = 0;
    double la_prop_short = 0;
};

inline AlignmentProportions alignment_proportions(std::size_t n_x, std::size_t n_y, std::size_t m_x,
                                                  std::size_t m_y) {
    AlignmentProportions out;
    if (n_x + n_y == 0) return out;
    out.la_prop = static_cast<double>(m_x + m_y) / static_cast<double>(n_x + n_y);
    if (n_x < n_y) {
        out.la_prop_short = n_x ? static_cast<double>(m_x) / static_cast<double>(n_x) : 0.0;
    } else if (n_y < n_x) {
        out.la_prop_short = n_y ? static_cast<double>(m_y) / static_cast<double>(n_y) : 0.0;
    } else {
        // Equal lengths: both tweets are "the shorter one"; take the better
        // covered so the value does not depend on argument order.
        out.la_prop_short = static_cast<double>(std::max(m_x, m_y)) / static_cast<double>(n_x);
    }
    return out;
}

inline FeatureVector featurize(const NormalizedTweet& a, const NormalizedTweet& b, const AlignOptions& align = {}) {
    FeatureVector f;
    const auto stems_a = content_stems(a);
    const auto stems_b = content_stems(b);
    const auto pos_a = content_pos(a);
    const auto pos_b = content_pos(b);
    f.cosine = cosine_overlap(stems_a, stems_b);
    f.f_score = f1_overlap(stems_a, stems_b);
    f.cosine_pos = cosine_overlap(pos_a, pos_b);
    f.f_score_pos = f1_overlap(pos_a, pos_b);

    const auto al = iterative_align(a.stems, b.stems, align);
    const auto props = alignment_proportions(a.size(), b.size(), al.m_x(), al.m_y());
    f.la_prop = props.la_prop;
    f.la_prop_short = props.la_prop_short;
    return f;
}

// ---------------------------------------------------------------------------
// Feature matrix CSV

struct FeatureRow {
    std::string pair_id;
    std::string event;
    Scenario scenario = Scenario::IPosts;
    std::optional<RteLabel> label;
    FeatureVector features;
};

inline constexpr std::string_view kFeatureCsvHeader =
    "pair_id,event,scenario,label,cosine,f_score,cosine_pos,f_score_pos,laProp,laPropS";

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, std::size_t line) {
    double v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ParseError(line, "not a number: '" + std::string(s) + "'");
    return v;
}

inline void write_feature_csv(std::ostream& out, const std::vector<FeatureRow>& rows) {
    out << kFeatureCsvHeader << '\n';
    for (const auto& r : rows) {
        out << csv::quote(r.pair_id) << ',' << csv::quote(r.event) << ',' << to_string(r.scenario) << ','
            << (r.label ? to_string(*r.label) : std::string_view{});
        for (double v : r.features.values()) out << ',' << format_double(v);
        out << '\n';
    }
}

/// Columns are located by header name. With `require_labels` a missing label
/// column, or an empty label cell, is an error.
inline std::vector<FeatureRow> read_feature_csv(std::istream& in, bool require_labels) {
    std::vector<std::string> fields;
    std::size_t line = 0;
    if (!csv::read_record(in, fields, line)) throw ParseError(0, "empty feature file (no header)");
    auto column = [&](std::string_view name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < fields.size(); ++i)
            if (fields[i] == name) return i;
        return std::nullopt;
    };
    auto required = [&](std::string_view name) {
        auto c = column(name);
        if (!c) throw ParseError(1, "missing column '" + std::string(name) + "'");
        return *c;
    };
    const auto c_id = required("pair_id");
    const auto c_event = required("event");
    const auto c_scenario = required("scenario");
    const auto c_label = column("label");
    if (require_labels && !c_label) throw ParseError(1, "missing column 'label'");
    std::array<std::size_t, kNumFeatures> c_feat{};
    for (std::size_t k = 0; k < kNumFeatures; ++k) c_feat[k] = required(kFeatureNames[k]);
    const auto width = fields.size();

    std::vector<FeatureRow> rows;
    while (csv::read_record(in, fields, line)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() != width)
            throw ParseError(line, "expected " + std::to_string(width) + " fields, got " + std::to_string(fields.size()));
        FeatureRow r;
        r.pair_id = fields[c_id];
        r.event = fields[c_event];
        auto sc = parse_scenario(fields[c_scenario]);
        if (!sc) throw ParseError(line, "unknown scenario '" + fields[c_scenario] + "'");
        r.scenario = *sc;
        if (c_label && !fields[*c_label].empty()) {
            auto l = parse_label(fields[*c_label]);
            if (!l) throw ParseError(line, "unknown label '" + fields[*c_label] + "'");
            r.label = *l;
        } else if (require_labels) {
            throw ParseError(line, "row without label");
        }
        std::array<double, kNumFeatures> v{};
        for (std::size_t k = 0; k < kNumFeatures; ++k) v[k] = parse_double(fields[c_feat[k]], line);
        r.features = FeatureVector::from_values(v);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace rtecontra
