#pragma once

// Rank tests, false discovery rate adjustment and boxplot summaries for the
// per-class feature distributions.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <nlohmann/json.hpp>

#include "rtecontra/features.hpp"
#include "rtecontra/label.hpp"
#include "rtecontra/parallel.hpp"

namespace rtecontra {

/// Upper tail of the chi-square distribution, Q(df/2, x/2).
inline double chi_square_sf(double x, double df) {
    if (!(df > 0)) throw std::invalid_argument("chi-square needs df > 0");
    if (!(x > 0)) return 1.0;
    return boost::math::gamma_q(df / 2.0, x / 2.0);
}

inline double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

struct RankResult {
    std::vector<double> ranks;  // 1-based, ties get the average rank
    double tie_term = 0;        // sum over tie groups of t^3 - t
};

inline RankResult average_ranks(std::span<const double> values) {
    const auto n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    RankResult out;
    out.ranks.assign(n, 0.0);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i + 1;
        while (j < n && values[order[j]] == values[order[i]]) ++j;
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) out.ranks[order[k]] = rank;
        const auto t = static_cast<double>(j - i);
        out.tie_term += t * t * t - t;
        i = j;
    }
    return out;
}

struct KruskalResult {
    double h = 0;
    double p = 1;
};

inline KruskalResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) throw std::invalid_argument("kruskal_wallis needs at least 2 groups");
    std::vector<double> all;
    for (const auto& g : groups) {
        if (g.empty()) throw std::invalid_argument("kruskal_wallis: empty group");
        all.insert(all.end(), g.begin(), g.end());
    }
    const auto n = static_cast<double>(all.size());
    if (all.size() < 3) throw std::invalid_argument("kruskal_wallis needs N >= 3");
    for (double v : all)
        if (std::isnan(v)) throw std::invalid_argument("kruskal_wallis: NaN value");

    const auto ranked = average_ranks(all);
    const double correction = 1.0 - ranked.tie_term / (n * n * n - n);
    if (correction <= 0) return {0.0, 1.0};

    double sum = 0;
    std::size_t at = 0;
    for (const auto& g : groups) {
        double r = 0;
        for (std::size_t k = 0; k < g.size(); ++k) r += ranked.ranks[at++];
        sum += r * r / static_cast<double>(g.size());
    }
    const double h = (12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0)) / correction;
    const double h_clamped = std::max(h, 0.0);
    return {h_clamped, chi_square_sf(h_clamped, static_cast<double>(groups.size() - 1))};
}

struct MannWhitneyResult {
    double u = 0;  // U statistic of the first sample
    double p = 1;
};

/// Two-sided Mann-Whitney U test, normal approximation with tie and
/// continuity correction.
inline MannWhitneyResult mann_whitney(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) throw std::invalid_argument("mann_whitney: empty sample");
    std::vector<double> all(x.begin(), x.end());
    all.insert(all.end(), y.begin(), y.end());
    const auto ranked = average_ranks(all);
    const auto n1 = static_cast<double>(x.size());
    const auto n2 = static_cast<double>(y.size());
    const double n = n1 + n2;
    double r1 = 0;
    for (std::size_t k = 0; k < x.size(); ++k) r1 += ranked.ranks[k];
    const double u1 = r1 - n1 * (n1 + 1.0) / 2.0;
    const double u2 = n1 * n2 - u1;
    const double mu = n1 * n2 / 2.0;
    const double sigma = std::sqrt(n1 * n2 / 12.0 * ((n + 1.0) - ranked.tie_term / (n * (n - 1.0))));
    if (!(sigma > 0)) return {u1, 1.0};
    const double z = (std::max(u1, u2) - mu - 0.5) / sigma;
    return {u1, std::min(1.0, 2.0 * normal_sf(z))};
}

enum class FdrMethod { BH, BY };

inline std::string_view to_string(FdrMethod m) noexcept { return m == FdrMethod::BH ? "BH" : "BY"; }

inline std::optional<FdrMethod> parse_fdr_method(std::string_view s) noexcept {
    if (s == "BH") return FdrMethod::BH;
    if (s == "BY") return FdrMethod::BY;
    return std::nullopt;
}

/// Step-up adjusted p-values, returned in input order.
inline std::vector<double> fdr_adjust(std::span<const double> p, FdrMethod method = FdrMethod::BY) {
    for (double v : p)
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("p-value outside [0, 1]");
    const auto m = p.size();
    std::vector<double> out(m);
    if (m == 0) return out;
    double c = 1.0;
    if (method == FdrMethod::BY) {
        c = 0.0;
        for (std::size_t i = 1; i <= m; ++i) c += 1.0 / static_cast<double>(i);
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p[a] < p[b]; });
    double running = 1.0;
    for (std::size_t r = m; r-- > 0;) {
        const auto idx = order[r];
        // The factor is >= 1; the max keeps rounding from pushing adj below p.
        const double adj = std::max(p[idx], p[idx] * static_cast<double>(m) * c / static_cast<double>(r + 1));
        running = std::min(running, adj);
        out[idx] = std::min(1.0, running);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Post hoc pairwise comparisons

/// Class pairs in report order.
inline constexpr std::array<std::pair<RteLabel, RteLabel>, 3> kClassPairs{{
    {RteLabel::ENT, RteLabel::CON},
    {RteLabel::ENT, RteLabel::UNK},
    {RteLabel::CON, RteLabel::UNK},
}};

struct PosthocResult {
    std::array<double, 3> p_raw{1, 1, 1};
    std::array<double, 3> p_adj{1, 1, 1};
    std::array<bool, 3> significant{false, false, false};
};

/// Pairwise rank tests between the three class groups (indexed by label),
/// adjusted within the family of three.
inline PosthocResult posthoc_pairwise(const std::array<std::vector<double>, kNumLabels>& groups, double alpha = 0.05,
                                      FdrMethod method = FdrMethod::BY) {
    PosthocResult out;
    for (std::size_t k = 0; k < kClassPairs.size(); ++k) {
        const auto& a = groups[label_index(kClassPairs[k].first)];
        const auto& b = groups[label_index(kClassPairs[k].second)];
        out.p_raw[k] = mann_whitney(a, b).p;
    }
    const auto adj = fdr_adjust(out.p_raw, method);
    for (std::size_t k = 0; k < 3; ++k) {
        out.p_adj[k] = adj[k];
        out.significant[k] = adj[k] < alpha;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Quantiles and boxplots

/// Quantile of sorted data by linear interpolation between order statistics
/// at position q * (n - 1).
inline double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty data");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level outside [0, 1]");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    return quantile_sorted(values, q);
}

struct BoxplotSummary {
    std::string dataset;
    std::string event;
    std::string feature;
    RteLabel label = RteLabel::ENT;
    std::size_t n = 0;
    double min = 0;  // lower whisker
    double q1 = 0;
    double median = 0;
    double q3 = 0;
    double max = 0;  // upper whisker
    std::vector<double> outliers;
};

/// Whiskers reach the most extreme values within 1.5 IQR of the quartiles;
/// anything beyond is an outlier.
inline BoxplotSummary summarize(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("boxplot of empty data");
    std::sort(values.begin(), values.end());
    BoxplotSummary s;
    s.n = values.size();
    s.q1 = quantile_sorted(values, 0.25);
    s.median = quantile_sorted(values, 0.5);
    s.q3 = quantile_sorted(values, 0.75);
    const double iqr = s.q3 - s.q1;
    const double lo_fence = s.q1 - 1.5 * iqr;
    const double hi_fence = s.q3 + 1.5 * iqr;
    s.min = s.q1;
    s.max = s.q3;
    for (double v : values) {
        if (v < lo_fence || v > hi_fence) s.outliers.push_back(v);
        else {
            s.min = std::min(s.min, v);
            s.max = std::max(s.max, v);
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Corpus statistics over a feature matrix

struct TestResult {
    std::string dataset;
    std::string event;
    std::string feature;
    double h = 0;
    double p_raw = 1;
    double p_adj = 1;
    std::array<bool, 3> significant{false, false, false};
};

struct CorpusStats {
    std::vector<TestResult> tests;
    std::vector<BoxplotSummary> boxplots;
    std::vector<std::string> warnings;
};

/// Feature values of labeled rows grouped as dataset -> event -> class.
using ClassGroups = std::map<std::string, std::map<std::string, std::array<std::vector<FeatureVector>, kNumLabels>>>;

inline ClassGroups group_by_class(std::span<const FeatureRow> rows) {
    ClassGroups g;
    for (const auto& r : rows) {
        if (!r.label) continue;
        g[std::string(to_string(r.scenario))][r.event][label_index(*r.label)].push_back(r.features);
    }
    return g;
}

/// One Kruskal-Wallis test per (dataset, event, feature) cell, adjusted
/// across all cells of the run; post hoc tests only where all three classes
/// are present.
inline CorpusStats corpus_stats(std::span<const FeatureRow> rows, FdrMethod method = FdrMethod::BY,
                                double alpha = 0.05, unsigned jobs = 1) {
    CorpusStats out;
    const auto groups = group_by_class(rows);

    struct Cell {
        const std::string* dataset;
        const std::string* event;
        const std::array<std::vector<FeatureVector>, kNumLabels>* by_class;
        std::size_t feature;
    };
    std::vector<Cell> cells;
    for (const auto& [dataset, events] : groups)
        for (const auto& [event, by_class] : events) {
            for (auto l : kAllLabels)
                if (by_class[label_index(l)].empty())
                    out.warnings.push_back(dataset + "/" + event + ": no " + std::string(to_string(l)) +
                                           " instances; summaries for that class omitted");
            for (std::size_t f = 0; f < kNumFeatures; ++f) cells.push_back({&dataset, &event, &by_class, f});
        }

    std::vector<std::optional<TestResult>> tests(cells.size());
    std::vector<std::vector<BoxplotSummary>> boxes(cells.size());
    parallel_for(cells.size(), jobs, [&](std::size_t c) {
        const auto& cell = cells[c];
        std::array<std::vector<double>, kNumLabels> values;
        std::vector<std::vector<double>> present;
        for (auto l : kAllLabels) {
            for (const auto& fv : (*cell.by_class)[label_index(l)]) values[label_index(l)].push_back(fv.values()[cell.feature]);
            if (values[label_index(l)].empty()) continue;
            present.push_back(values[label_index(l)]);
            auto s = summarize(values[label_index(l)]);
            s.dataset = *cell.dataset;
            s.event = *cell.event;
            s.feature = std::string(kFeatureNames[cell.feature]);
            s.label = l;
            boxes[c].push_back(std::move(s));
        }
        std::size_t total = 0;
        for (const auto& g : present) total += g.size();
        if (present.size() < 2 || total < 3) return;
        TestResult t;
        t.dataset = *cell.dataset;
        t.event = *cell.event;
        t.feature = std::string(kFeatureNames[cell.feature]);
        const auto kw = kruskal_wallis(present);
        t.h = kw.h;
        t.p_raw = kw.p;
        if (present.size() == kNumLabels) t.significant = posthoc_pairwise(values, alpha, method).significant;
        tests[c] = std::move(t);
    });

    for (std::size_t c = 0; c < cells.size(); ++c) {
        if (tests[c]) out.tests.push_back(std::move(*tests[c]));
        else
            out.warnings.push_back(*cells[c].dataset + "/" + *cells[c].event + "/" +
                                   std::string(kFeatureNames[cells[c].feature]) +
                                   ": fewer than two classes, no test");
        for (auto& b : boxes[c]) out.boxplots.push_back(std::move(b));
    }
    std::vector<double> raw;
    for (const auto& t : out.tests) raw.push_back(t.p_raw);
    const auto adj = fdr_adjust(raw, method);
    for (std::size_t k = 0; k < out.tests.size(); ++k) out.tests[k].p_adj = adj[k];
    return out;
}

inline constexpr std::string_view kStatsCsvHeader =
    "dataset,event,feature,H,p_raw,p_adj,sig_ENT_CON,sig_ENT_UNK,sig_CON_UNK";

inline void write_stats_csv(std::ostream& out, std::span<const TestResult> tests) {
    out << kStatsCsvHeader << '\n';
    for (const auto& t : tests) {
        out << csv::quote(t.dataset) << ',' << csv::quote(t.event) << ',' << t.feature << ',' << format_double(t.h)
            << ',' << format_double(t.p_raw) << ',' << format_double(t.p_adj);
        for (bool s : t.significant) out << ',' << (s ? 1 : 0);
        out << '\n';
    }
}

inline nlohmann::json to_json(const BoxplotSummary& s) {
    return {{"dataset", s.dataset}, {"event", s.event},   {"feature", s.feature},
            {"class", to_string(s.label)}, {"n", s.n},     {"min", s.min},
            {"q1", s.q1},                 {"median", s.median}, {"q3", s.q3},
            {"max", s.max},               {"outliers", s.outliers}};
}

inline nlohmann::json boxplots_to_json(std::span<const BoxplotSummary> boxes) {
    auto j = nlohmann::json::array();
    for (const auto& b : boxes) j.push_back(to_json(b));
    return j;
}

// ---------------------------------------------------------------------------
// SVG rendering: one panel per feature, one box per class, for a single
// (dataset, event).

namespace detail {

inline std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace detail

inline std::string render_boxplot_svg(const std::string& dataset, const std::string& event,
                                      std::span<const BoxplotSummary> boxes) {
    constexpr double panel_w = 180, panel_h = 220, top = 40, plot_h = 150, left = 40;
    constexpr double width = left + panel_w * kNumFeatures + 20;
    constexpr double height = top + panel_h;
    constexpr std::array<std::string_view, kNumLabels> colors{"#4c72b0", "#c44e52", "#8c8c8c"};
    using detail::fmt2;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt2(width) << "\" height=\"" << fmt2(height)
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<text x=\"" << fmt2(left) << "\" y=\"20\" font-size=\"14\">" << detail::xml_escape(dataset) << " / "
        << detail::xml_escape(event) << "</text>\n";
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
        const double x0 = left + panel_w * static_cast<double>(f);
        auto y_of = [&](double v) { return top + plot_h * (1.0 - std::clamp(v, 0.0, 1.0)); };
        svg << "<g>\n<rect x=\"" << fmt2(x0 + 10) << "\" y=\"" << fmt2(top) << "\" width=\"" << fmt2(panel_w - 20)
            << "\" height=\"" << fmt2(plot_h) << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
        svg << "<text x=\"" << fmt2(x0 + panel_w / 2) << "\" y=\"" << fmt2(top + plot_h + 32)
            << "\" text-anchor=\"middle\">" << kFeatureNames[f] << "</text>\n";
        for (double tick : {0.0, 0.5, 1.0})
            svg << "<text x=\"" << fmt2(x0 + 6) << "\" y=\"" << fmt2(y_of(tick) + 4) << "\" text-anchor=\"end\">"
                << fmt2(tick) << "</text>\n";
        for (const auto& b : boxes) {
            if (b.feature != kFeatureNames[f] || b.dataset != dataset || b.event != event) continue;
            const auto k = label_index(b.label);
            const double cx = x0 + 10 + (panel_w - 20) * (static_cast<double>(k) + 0.5) / kNumLabels;
            const double half = 14;
            const auto color = colors[k];
            svg << "<line x1=\"" << fmt2(cx) << "\" y1=\"" << fmt2(y_of(b.max)) << "\" x2=\"" << fmt2(cx)
                << "\" y2=\"" << fmt2(y_of(b.min)) << "\" stroke=\"" << color << "\"/>\n";
            svg << "<rect x=\"" << fmt2(cx - half) << "\" y=\"" << fmt2(y_of(b.q3)) << "\" width=\"" << fmt2(2 * half)
                << "\" height=\"" << fmt2(y_of(b.q1) - y_of(b.q3)) << "\" fill=\"" << color
                << "\" fill-opacity=\"0.4\" stroke=\"" << color << "\"/>\n";
            svg << "<line x1=\"" << fmt2(cx - half) << "\" y1=\"" << fmt2(y_of(b.median)) << "\" x2=\""
                << fmt2(cx + half) << "\" y2=\"" << fmt2(y_of(b.median)) << "\" stroke=\"#000000\" stroke-width=\"2\"/>\n";
            for (double o : b.outliers)
                svg << "<circle cx=\"" << fmt2(cx) << "\" cy=\"" << fmt2(y_of(o)) << "\" r=\"1.5\" fill=\"" << color
                    << "\"/>\n";
            svg << "<text x=\"" << fmt2(cx) << "\" y=\"" << fmt2(top + plot_h + 14) << "\" text-anchor=\"middle\">"
                << to_string(b.label) << "</text>\n";
        }
        svg << "</g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace rtecontra
