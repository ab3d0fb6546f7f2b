#pragma once

// Event-held-out cross-validation and precision/recall/F1 scoring.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rtecontra/balance.hpp"
#include "rtecontra/features.hpp"
#include "rtecontra/label.hpp"
#include "rtecontra/matrix.hpp"
#include "rtecontra/model.hpp"
#include "rtecontra/parallel.hpp"

namespace rtecontra {

/// Rows are gold labels, columns predictions.
struct ConfusionMatrix {
    std::array<std::array<std::size_t, kNumLabels>, kNumLabels> counts{};

    void add(RteLabel gold, RteLabel predicted) noexcept { ++counts[label_index(gold)][label_index(predicted)]; }

    std::size_t total() const noexcept {
        std::size_t n = 0;
        for (const auto& row : counts)
            for (auto c : row) n += c;
        return n;
    }

    void merge(const ConfusionMatrix& other) noexcept {
        for (std::size_t g = 0; g < kNumLabels; ++g)
            for (std::size_t p = 0; p < kNumLabels; ++p) counts[g][p] += other.counts[g][p];
    }

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct ClassScores {
    double precision = 0;
    double recall = 0;
    double f1 = 0;
    double support = 0;  // gold count; fractional after averaging folds
};

struct Scores {
    std::array<ClassScores, kNumLabels> per_class{};
    double accuracy = 0;
    ClassScores macro;
    ClassScores weighted;
};

inline double safe_ratio(double num, double den) noexcept { return den > 0 ? num / den : 0.0; }

inline Scores score(const ConfusionMatrix& cm) {
    const auto total = static_cast<double>(cm.total());
    if (total == 0) throw std::invalid_argument("cannot score an empty confusion matrix");
    Scores s;
    double trace = 0;
    for (std::size_t k = 0; k < kNumLabels; ++k) {
        double predicted = 0;
        double gold = 0;
        for (std::size_t o = 0; o < kNumLabels; ++o) {
            predicted += static_cast<double>(cm.counts[o][k]);
            gold += static_cast<double>(cm.counts[k][o]);
        }
        const auto tp = static_cast<double>(cm.counts[k][k]);
        trace += tp;
        auto& c = s.per_class[k];
        c.precision = safe_ratio(tp, predicted);
        c.recall = safe_ratio(tp, gold);
        c.f1 = safe_ratio(2.0 * c.precision * c.recall, c.precision + c.recall);
        c.support = gold;
    }
    s.accuracy = trace / total;
    for (const auto& c : s.per_class) {
        s.macro.precision += c.precision / kNumLabels;
        s.macro.recall += c.recall / kNumLabels;
        s.macro.f1 += c.f1 / kNumLabels;
        s.weighted.precision += c.precision * c.support / total;
        s.weighted.recall += c.recall * c.support / total;
        s.weighted.f1 += c.f1 * c.support / total;
    }
    s.macro.support = total;
    s.weighted.support = total;
    return s;
}

/// Arithmetic mean of every metric over a list of score sets.
inline Scores mean_scores(std::span<const Scores> all) {
    Scores m;
    if (all.empty()) return m;
    const auto n = static_cast<double>(all.size());
    auto add = [&](ClassScores& into, const ClassScores& c) {
        into.precision += c.precision / n;
        into.recall += c.recall / n;
        into.f1 += c.f1 / n;
        into.support += c.support / n;
    };
    for (const auto& s : all) {
        for (std::size_t k = 0; k < kNumLabels; ++k) add(m.per_class[k], s.per_class[k]);
        add(m.macro, s.macro);
        add(m.weighted, s.weighted);
        m.accuracy += s.accuracy / n;
    }
    return m;
}

// ---------------------------------------------------------------------------
// Folds

struct Fold {
    std::string event;
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// One fold per event: that event's rows are the test set, all others train.
/// Events listed in `expected` that have no rows are skipped with a warning.
inline std::vector<Fold> event_holdout_folds(std::span<const std::string> row_events,
                                             std::span<const std::string> expected = {},
                                             std::vector<std::string>* warnings = nullptr) {
    std::map<std::string, std::vector<std::size_t>> by_event;
    for (std::size_t i = 0; i < row_events.size(); ++i) by_event[row_events[i]].push_back(i);
    for (const auto& e : expected)
        if (!by_event.count(e) && warnings) warnings->push_back("event '" + e + "' has no pairs; fold skipped");
    if (by_event.size() < 2) throw std::invalid_argument("event-held-out CV needs at least 2 distinct events");
    std::vector<Fold> folds;
    for (const auto& [event, rows] : by_event) {
        Fold f;
        f.event = event;
        f.test = rows;
        for (std::size_t i = 0; i < row_events.size(); ++i)
            if (row_events[i] != event) f.train.push_back(i);
        folds.push_back(std::move(f));
    }
    return folds;
}

// ---------------------------------------------------------------------------
// Cross-validation

enum class BalanceMode { PerFold, Global, None };

inline std::string_view to_string(BalanceMode b) noexcept {
    switch (b) {
        case BalanceMode::PerFold: return "per-fold";
        case BalanceMode::Global: return "global";
        case BalanceMode::None: return "none";
    }
    return "per-fold";
}

inline std::optional<BalanceMode> parse_balance_mode(std::string_view s) noexcept {
    if (s == "per-fold") return BalanceMode::PerFold;
    if (s == "global") return BalanceMode::Global;
    if (s == "none") return BalanceMode::None;
    return std::nullopt;
}

enum class Aggregation { FoldMean, Pooled };

inline std::string_view to_string(Aggregation a) noexcept { return a == Aggregation::FoldMean ? "fold-mean" : "pooled"; }

inline std::optional<Aggregation> parse_aggregation(std::string_view s) noexcept {
    if (s == "fold-mean") return Aggregation::FoldMean;
    if (s == "pooled") return Aggregation::Pooled;
    return std::nullopt;
}

struct CvOptions {
    std::uint64_t seed = 1;
    BalanceMode balance = BalanceMode::PerFold;
    Aggregation aggregation = Aggregation::FoldMean;
    unsigned jobs = 1;
};

struct FoldReport {
    std::string event;
    std::size_t n_train = 0;  // after balancing
    std::size_t n_test = 0;
    std::vector<std::size_t> train_rows;  // indices into the input rows
    ConfusionMatrix confusion;
    Scores scores;
    std::vector<std::string> notes;
};

struct CvReport {
    std::vector<FoldReport> folds;
    Scores mean;    // arithmetic mean over folds
    Scores pooled;  // from the summed confusion matrix
    std::vector<std::string> warnings;

    const Scores& headline(Aggregation a) const noexcept { return a == Aggregation::FoldMean ? mean : pooled; }
};

inline Matrix feature_matrix(std::span<const FeatureRow> rows, std::span<const std::size_t> idx) {
    Matrix x(0, kNumFeatures);
    for (auto i : idx) x.push_row(rows[i].features.values());
    return x;
}

inline std::vector<RteLabel> gold_labels(std::span<const FeatureRow> rows, std::span<const std::size_t> idx) {
    std::vector<RteLabel> y;
    y.reserve(idx.size());
    for (auto i : idx) {
        if (!rows[i].label) throw std::invalid_argument("row '" + rows[i].pair_id + "' has no gold label");
        y.push_back(*rows[i].label);
    }
    return y;
}

/// Generic event-held-out CV. `fit(train_rows, fold_index, notes)` returns a
/// predictor callable as `predict(const FeatureRow&) -> RteLabel`; train
/// indices are already balanced according to the options.
template <class Fit>
CvReport cross_validate(std::span<const FeatureRow> rows, const CvOptions& opts, Fit&& fit) {
    CvReport report;
    std::vector<std::size_t> universe(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) universe[i] = i;
    const auto all_labels = gold_labels(rows, universe);
    if (opts.balance == BalanceMode::Global) universe = balance(all_labels, opts.seed, 0).indices;

    std::vector<std::string> events;
    for (auto i : universe) events.push_back(rows[i].event);
    auto folds = event_holdout_folds(events, {}, &report.warnings);
    for (auto& f : folds) {
        for (auto& i : f.train) i = universe[i];
        for (auto& i : f.test) i = universe[i];
    }

    report.folds.resize(folds.size());
    parallel_for(folds.size(), opts.jobs, [&](std::size_t k) {
        auto& fr = report.folds[k];
        const auto& fold = folds[k];
        fr.event = fold.event;
        fr.train_rows = fold.train;
        if (opts.balance == BalanceMode::PerFold) {
            const auto y = gold_labels(rows, fold.train);
            const auto kept = balance(y, opts.seed, k + 1).indices;
            fr.train_rows.clear();
            for (auto i : kept) fr.train_rows.push_back(fold.train[i]);
        }
        fr.n_train = fr.train_rows.size();
        fr.n_test = fold.test.size();
        const auto predictor = fit(std::span<const std::size_t>(fr.train_rows), k, fr.notes);
        for (auto i : fold.test) fr.confusion.add(*rows[i].label, predictor(rows[i]));
        fr.scores = score(fr.confusion);
    });

    std::vector<Scores> per_fold;
    ConfusionMatrix pooled;
    for (const auto& f : report.folds) {
        per_fold.push_back(f.scores);
        pooled.merge(f.confusion);
    }
    report.mean = mean_scores(per_fold);
    report.pooled = score(pooled);
    return report;
}

/// Per-fold seed for a classifier so folds train independently of run order.
inline std::uint64_t fold_seed(std::uint64_t seed, std::size_t fold) { return derive_seed(seed, "fold", fold); }

/// CV with one of the two built-in classifiers.
inline CvReport cross_validate(std::span<const FeatureRow> rows, const ClassifierSpec& spec, const CvOptions& opts) {
    return cross_validate(rows, opts, [&](std::span<const std::size_t> train, std::size_t fold, std::vector<std::string>& notes) {
        const auto x = feature_matrix(rows, train);
        const auto y = gold_labels(rows, train);
        auto clf = Classifier::fit(x, y, spec, fold_seed(opts.seed, fold), 1, &notes);
        return [clf = std::move(clf)](const FeatureRow& r) { return clf.predict(r.features.values()); };
    });
}

// ---------------------------------------------------------------------------
// Grid search

/// Candidate specs in preference order; ties keep the earlier candidate, so
/// the defaults come first.
inline std::vector<ClassifierSpec> tuning_grid(const ClassifierSpec& base) {
    std::vector<ClassifierSpec> grid;
    if (base.kind == ClassifierKind::NC) {
        for (double d : {0.0, 0.5, 1.0, 2.0}) {
            auto s = base;
            s.delta = d;
            grid.push_back(s);
        }
    } else {
        for (std::size_t m : {std::size_t{2}, std::size_t{1}, std::size_t{3}}) {
            auto s = base;
            s.mtry = m;
            grid.push_back(s);
        }
    }
    return grid;
}

struct TuningResult {
    ClassifierSpec best;
    std::vector<std::pair<ClassifierSpec, double>> tried;  // spec, macro F1
};

/// Picks the grid point with the highest macro F1 under inner event-held-out
/// CV on `rows`. Grid points the data cannot support are skipped.
inline TuningResult grid_search(std::span<const FeatureRow> rows, const ClassifierSpec& base, const CvOptions& opts) {
    TuningResult out;
    out.best = base;
    double best = -1;
    CvOptions inner = opts;
    inner.jobs = 1;
    for (const auto& spec : tuning_grid(base)) {
        double f1 = 0;
        try {
            const auto r = cross_validate(rows, spec, inner);
            f1 = r.headline(opts.aggregation).macro.f1;
        } catch (const std::invalid_argument&) {
            continue;
        }
        out.tried.emplace_back(spec, f1);
        if (f1 > best) {
            best = f1;
            out.best = spec;
        }
    }
    return out;
}

/// CV where each outer fold tunes its own classifier settings on its training
/// rows.
inline CvReport cross_validate_tuned(std::span<const FeatureRow> rows, const ClassifierSpec& base, const CvOptions& opts) {
    return cross_validate(rows, opts, [&](std::span<const std::size_t> train, std::size_t fold, std::vector<std::string>& notes) {
        std::vector<FeatureRow> subset;
        for (auto i : train) subset.push_back(rows[i]);
        CvOptions inner = opts;
        inner.seed = fold_seed(opts.seed, fold);
        inner.balance = BalanceMode::None;  // already balanced
        const auto tuned = grid_search(subset, base, inner);
        notes.push_back("tuned " + to_json(tuned.best).dump());
        const auto x = feature_matrix(rows, train);
        const auto y = gold_labels(rows, train);
        auto clf = Classifier::fit(x, y, tuned.best, fold_seed(opts.seed, fold), 1, &notes);
        return [clf = std::move(clf)](const FeatureRow& r) { return clf.predict(r.features.values()); };
    });
}

// ---------------------------------------------------------------------------
// Report output

inline nlohmann::json to_json(const ClassScores& c) {
    return {{"precision", c.precision}, {"recall", c.recall}, {"f1", c.f1}, {"support", c.support}};
}

inline nlohmann::json to_json(const Scores& s) {
    nlohmann::json j;
    for (auto l : kAllLabels) j["classes"][std::string(to_string(l))] = to_json(s.per_class[label_index(l)]);
    j["accuracy"] = s.accuracy;
    j["macro"] = to_json(s.macro);
    j["weighted"] = to_json(s.weighted);
    return j;
}

inline nlohmann::json to_json(const ConfusionMatrix& cm) {
    auto j = nlohmann::json::array();
    for (const auto& row : cm.counts) j.push_back(row);
    return j;
}

inline nlohmann::json to_json(const CvReport& r, Aggregation headline) {
    nlohmann::json j;
    j["aggregation"] = to_string(headline);
    j["summary"] = to_json(r.headline(headline));
    j["fold_mean"] = to_json(r.mean);
    j["pooled"] = to_json(r.pooled);
    j["folds"] = nlohmann::json::array();
    for (const auto& f : r.folds) {
        j["folds"].push_back({{"event", f.event},
                              {"n_train", f.n_train},
                              {"n_test", f.n_test},
                              {"confusion", to_json(f.confusion)},
                              {"scores", to_json(f.scores)},
                              {"notes", f.notes}});
    }
    j["warnings"] = r.warnings;
    return j;
}

/// Plain-text table: metric rows per class (CON, ENT, UNK columns), then
/// accuracy and the weighted means.
inline std::string format_table(const Scores& s, std::string_view title) {
    constexpr std::array<RteLabel, kNumLabels> columns{RteLabel::CON, RteLabel::ENT, RteLabel::UNK};
    std::ostringstream out;
    auto num = [](double v) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%8.2f", v);
        return std::string(buf);
    };
    out << title << '\n';
    out << "            ";
    for (auto l : columns) out << "     " << to_string(l);
    out << "     mean\n";
    auto row = [&](std::string_view name, auto member) {
        char head[16];
        std::snprintf(head, sizeof head, "%-12s", std::string(name).c_str());
        out << head;
        for (auto l : columns) out << num(s.per_class[label_index(l)].*member);
        out << num(s.macro.*member) << '\n';
    };
    row("F1", &ClassScores::f1);
    row("precision", &ClassScores::precision);
    row("recall", &ClassScores::recall);
    out << "accuracy    " << num(s.accuracy) << '\n';
    out << "wgt F1      " << num(s.weighted.f1) << '\n';
    out << "wgt prec.   " << num(s.weighted.precision) << '\n';
    out << "wgt recall  " << num(s.weighted.recall) << '\n';
    return out.str();
}

}  // namespace rtecontra
