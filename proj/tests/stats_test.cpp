#include <gtest/gtest.h>

#include <cmath>

#include "rtecontra/rng.hpp"
#include "rtecontra/stats.hpp"

using namespace rtecontra;

namespace {

// Values frozen from tests/oracles/reference_stats.py.
const std::vector<double> kA{2.1, 3.4, 1.9, 5.6, 4.4, 3.4, 2.8};
const std::vector<double> kB{6.1, 5.9, 7.2, 3.4, 6.6, 8.0};
const std::vector<double> kC{1.0, 2.2, 1.5, 2.8, 0.7};

void expect_rel(double got, double want, double rel) {
    EXPECT_LE(std::abs(got - want), rel * std::abs(want)) << "got " << got << " want " << want;
}

std::vector<double> normal_sample(Engine& eng, std::size_t n, double shift) {
    std::vector<double> v(n);
    for (auto& x : v) x = standard_normal(eng) + shift;
    return v;
}

}  // namespace

TEST(ChiSquare, SurvivalMatchesReference) {
    const std::vector<std::tuple<double, double, double>> cases{
        {7.2, 2, 0.027323722447292555},  {3.84, 1, 0.05004352124870519},
        {10.0, 5, 0.07523524614651217},  {0.5, 3, 0.9188914116546758},
        {50.0, 4, 3.610865404890647e-10}, {123.4, 7, 1.4991023516438912e-23},
        {1e-3, 1, 0.9747728793699604},
    };
    for (const auto& [x, df, sf] : cases) expect_rel(chi_square_sf(x, df), sf, 1e-10);
    EXPECT_EQ(chi_square_sf(0.0, 3), 1.0);
}

TEST(KruskalWallis, ReferenceValues) {
    auto r = kruskal_wallis({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
    EXPECT_NEAR(r.h, 7.2, 1e-9);
    EXPECT_NEAR(r.p, 0.0273, 1e-4);
    expect_rel(r.p, 0.02732372244729252, 1e-10);

    r = kruskal_wallis({kA, kB, kC});
    expect_rel(r.h, 12.057705986959094, 1e-12);
    expect_rel(r.p, 0.0024082546788658185, 1e-10);

    r = kruskal_wallis({kA, kB});
    expect_rel(r.h, 6.6857142857142815, 1e-12);
    expect_rel(r.p, 0.009718857244699586, 1e-10);
}

TEST(KruskalWallis, IdenticalValuesAndErrors) {
    auto r = kruskal_wallis({{2, 2}, {2, 2}, {2, 2}});
    EXPECT_EQ(r.h, 0.0);
    EXPECT_EQ(r.p, 1.0);
    EXPECT_THROW(kruskal_wallis({{1, 2}, {}}), std::invalid_argument);
    EXPECT_THROW(kruskal_wallis({{1, 2, 3}}), std::invalid_argument);
    EXPECT_THROW(kruskal_wallis({{1}, {2}}), std::invalid_argument);
}

TEST(KruskalWallis, ShiftedGroupsLargeN) {
    Engine eng = make_engine(1, "kw-shift");
    auto r = kruskal_wallis({normal_sample(eng, 300, 0.0), normal_sample(eng, 300, 0.5)});
    EXPECT_LT(r.p, 0.001);
}

TEST(KruskalWallis, InvariantUnderMonotoneTransform) {
    Engine eng = make_engine(2, "kw-monotone");
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::vector<double>> g(3), t(3);
        for (std::size_t k = 0; k < 3; ++k) {
            g[k] = normal_sample(eng, 3 + uniform_index(eng, 20), 0.3 * static_cast<double>(k));
            for (auto& v : g[k]) v = std::round(v * 4) / 4;  // force ties
            for (double v : g[k]) t[k].push_back(std::exp(2 * v) + 5);
        }
        const auto a = kruskal_wallis(g);
        const auto b = kruskal_wallis(t);
        EXPECT_NEAR(a.h, b.h, 1e-9);
        EXPECT_NEAR(a.p, b.p, 1e-12);
    }
}

TEST(MannWhitney, ReferenceValues) {
    auto r = mann_whitney(kA, kB);
    EXPECT_EQ(r.u, 3.0);
    expect_rel(r.p, 0.011942103817533961, 1e-10);
    r = mann_whitney(kA, kC);
    EXPECT_EQ(r.u, 30.5);
    expect_rel(r.p, 0.041636997606412075, 1e-10);
    r = mann_whitney(kB, kC);
    EXPECT_EQ(r.u, 30.0);
    expect_rel(r.p, 0.00811311726556578, 1e-10);
}

TEST(Fdr, WorkedExamples) {
    const std::vector<double> p{0.01, 0.04, 0.03, 0.005};
    EXPECT_EQ(fdr_adjust(p, FdrMethod::BH), (std::vector<double>{0.02, 0.04, 0.04, 0.02}));
    const auto by = fdr_adjust(p, FdrMethod::BY);
    const std::vector<double> by_ref{0.04166666666666666, 0.08333333333333331, 0.08333333333333331, 0.04166666666666666};
    for (std::size_t i = 0; i < p.size(); ++i) expect_rel(by[i], by_ref[i], 1e-12);

    const std::vector<double> q{0.2, 0.001, 0.049, 0.7, 0.03, 0.5};
    const std::vector<double> bh_ref{0.30000000000000004, 0.006, 0.098, 0.7, 0.09, 0.6};
    const std::vector<double> by_ref2{0.735, 0.0147, 0.24009999999999998, 1.0, 0.22049999999999997, 1.0};
    const auto bh2 = fdr_adjust(q, FdrMethod::BH);
    const auto by2 = fdr_adjust(q, FdrMethod::BY);
    for (std::size_t i = 0; i < q.size(); ++i) {
        expect_rel(bh2[i], bh_ref[i], 1e-12);
        expect_rel(by2[i], by_ref2[i], 1e-12);
    }
}

TEST(Fdr, TrivialCasesAndErrors) {
    EXPECT_EQ(fdr_adjust(std::vector<double>{0.03}, FdrMethod::BH), std::vector<double>{0.03});
    EXPECT_EQ(fdr_adjust(std::vector<double>{1, 1, 1}, FdrMethod::BY), (std::vector<double>{1, 1, 1}));
    EXPECT_TRUE(fdr_adjust(std::vector<double>{}).empty());
    EXPECT_THROW(fdr_adjust(std::vector<double>{0.5, 1.5}), std::invalid_argument);
    EXPECT_THROW(fdr_adjust(std::vector<double>{-0.1}), std::invalid_argument);
    EXPECT_THROW(fdr_adjust(std::vector<double>{std::nan("")}), std::invalid_argument);
}

TEST(Fdr, OrderInvarianceAndDominance) {
    Engine eng = make_engine(3, "fdr-props");
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> p(1 + uniform_index(eng, 30));
        for (auto& v : p) v = uniform_index(eng, 5) == 0 ? 0.5 : uniform_real(eng) * uniform_real(eng);
        const auto bh = fdr_adjust(p, FdrMethod::BH);
        const auto by = fdr_adjust(p, FdrMethod::BY);
        std::vector<std::size_t> perm(p.size());
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        shuffle(std::span<std::size_t>(perm), eng);
        std::vector<double> permuted;
        for (auto i : perm) permuted.push_back(p[i]);
        const auto bh_perm = fdr_adjust(permuted, FdrMethod::BH);
        for (std::size_t k = 0; k < p.size(); ++k) {
            EXPECT_EQ(bh_perm[k], bh[perm[k]]);
            EXPECT_GE(by[k], bh[k]);
            EXPECT_GE(bh[k], p[k]);
            EXPECT_LE(by[k], 1.0);
        }
    }
}

TEST(Posthoc, OnlyShiftedClassDiffers) {
    Engine eng = make_engine(4, "posthoc-unk");
    std::array<std::vector<double>, kNumLabels> g{normal_sample(eng, 200, 0), normal_sample(eng, 200, 0),
                                                  normal_sample(eng, 200, 1.5)};
    const auto r = posthoc_pairwise(g);
    EXPECT_FALSE(r.significant[0]);
    EXPECT_TRUE(r.significant[1]);
    EXPECT_TRUE(r.significant[2]);
}

TEST(Posthoc, IdenticalAndSeparated) {
    std::array<std::vector<double>, kNumLabels> same{std::vector<double>{1, 2, 3, 4}, {1, 2, 3, 4}, {1, 2, 3, 4}};
    for (bool s : posthoc_pairwise(same).significant) EXPECT_FALSE(s);
    Engine eng = make_engine(5, "posthoc-sep");
    std::array<std::vector<double>, kNumLabels> apart{normal_sample(eng, 60, 6), normal_sample(eng, 60, 3),
                                                      normal_sample(eng, 60, 0)};
    for (bool s : posthoc_pairwise(apart).significant) EXPECT_TRUE(s);
}

TEST(Quantiles, LinearInterpolation) {
    std::vector<double> v(100);
    std::iota(v.begin(), v.end(), 1.0);
    EXPECT_EQ(quantile(v, 0.0), 1.0);
    EXPECT_EQ(quantile(v, 0.25), 25.75);
    EXPECT_EQ(quantile(v, 0.5), 50.5);
    EXPECT_EQ(quantile(v, 0.75), 75.25);
    EXPECT_EQ(quantile(v, 1.0), 100.0);
    const std::vector<double> w{3, 1, 4, 1, 5, 9, 2, 6};
    EXPECT_DOUBLE_EQ(quantile(w, 0.25), 1.75);
    EXPECT_DOUBLE_EQ(quantile(w, 0.5), 3.5);
    EXPECT_DOUBLE_EQ(quantile(w, 0.75), 5.25);
}

TEST(Boxplot, SummaryInvariants) {
    auto s = summarize({0.4, 0.4, 0.4});
    EXPECT_EQ(s.min, 0.4);
    EXPECT_EQ(s.q1, 0.4);
    EXPECT_EQ(s.median, 0.4);
    EXPECT_EQ(s.q3, 0.4);
    EXPECT_EQ(s.max, 0.4);

    std::vector<double> v(100);
    std::iota(v.begin(), v.end(), 1.0);
    v.push_back(1000);
    s = summarize(v);
    EXPECT_EQ(s.outliers, std::vector<double>{1000});
    EXPECT_EQ(s.max, 100.0);

    Engine eng = make_engine(6, "boxplot");
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> x(1 + uniform_index(eng, 40));
        for (auto& e : x) e = std::round(standard_normal(eng) * 3) / 3;
        const auto b = summarize(x);
        EXPECT_LE(b.min, b.q1);
        EXPECT_LE(b.q1, b.median);
        EXPECT_LE(b.median, b.q3);
        EXPECT_LE(b.q3, b.max);
    }
}

TEST(CorpusStats, ConstantFeatureAndMissingClass) {
    std::vector<FeatureRow> rows;
    Engine eng = make_engine(7, "corpus-stats");
    for (int i = 0; i < 90; ++i) {
        FeatureRow r;
        r.pair_id = std::to_string(i);
        r.event = i < 60 ? "ottawa" : "gwings";
        r.scenario = Scenario::IPosts;
        r.label = label_from_index(static_cast<std::size_t>(i % 3));
        if (r.event == "gwings" && r.label == RteLabel::CON) r.label = RteLabel::ENT;
        const double shift = r.label == RteLabel::ENT ? 0.4 : r.label == RteLabel::CON ? 0.2 : 0.0;
        r.features = {0.5, std::clamp(shift + 0.1 * standard_normal(eng), 0.0, 1.0), 0.3, 0.3, 0.3, 0.3};
        rows.push_back(r);
    }
    const auto st = corpus_stats(rows);
    ASSERT_EQ(st.tests.size(), 12u);
    for (const auto& t : st.tests) {
        if (t.feature == "cosine") {
            EXPECT_EQ(t.h, 0.0);
            EXPECT_EQ(t.p_raw, 1.0);
        }
        EXPECT_GE(t.p_adj, t.p_raw);
        if (t.feature == "f_score") {
            EXPECT_LT(t.p_adj, 0.05);
        }
        if (t.event == "gwings") {
            EXPECT_EQ(t.significant, (std::array<bool, 3>{false, false, false}));
        }
    }
    EXPECT_FALSE(st.warnings.empty());
    // gwings has no CON rows: 6 features x 2 classes, ottawa 6 x 3.
    EXPECT_EQ(st.boxplots.size(), 30u);

    std::ostringstream csv;
    write_stats_csv(csv, st.tests);
    EXPECT_EQ(csv.str().substr(0, kStatsCsvHeader.size()), kStatsCsvHeader);
    const auto svg = render_boxplot_svg("iposts", "ottawa", st.boxplots);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_EQ(svg, render_boxplot_svg("iposts", "ottawa", st.boxplots));
}
