#include <gtest/gtest.h>

#include <sstream>

#include "rtecontra/features.hpp"
#include "rtecontra/rng.hpp"
#include "support/fixtures.hpp"

using namespace rtecontra;
using Set = std::set<std::string>;

namespace {

NormalizedTweet tweet(std::vector<std::string> stems, std::vector<std::string> pos = {}) {
    NormalizedTweet t;
    if (pos.empty()) pos.assign(stems.size(), "NN");
    t.tokens = stems;
    t.stems = std::move(stems);
    t.pos = std::move(pos);
    for (const auto& p : t.pos) t.is_content.push_back(is_content_tag(p));
    return t;
}

}  // namespace

TEST(Overlap, WorkedExamples) {
    const Set x{"a", "b", "c"}, y{"b", "c", "d"};
    EXPECT_DOUBLE_EQ(cosine_overlap(x, y), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(f1_overlap(x, y), 2.0 / 3.0);
    EXPECT_EQ(cosine_overlap(x, x), 1.0);
    EXPECT_EQ(f1_overlap(x, x), 1.0);
    EXPECT_EQ(cosine_overlap(Set{}, y), 0.0);
    EXPECT_EQ(f1_overlap(Set{}, Set{}), 0.0);
    EXPECT_EQ(f1_overlap(Set{"a"}, Set{"b"}), 0.0);
    EXPECT_DOUBLE_EQ(cosine_overlap(Set{"a"}, Set{"a", "b", "c", "d"}), 0.5);
    EXPECT_DOUBLE_EQ(f1_overlap(Set{"a"}, Set{"a", "b", "c", "d"}), 0.4);
}

TEST(AlignmentProportions, ShorterTweetAndEmptyCases) {
    auto p = alignment_proportions(5, 7, 5, 5);
    EXPECT_EQ(p.la_prop, 10.0 / 12.0);
    EXPECT_EQ(p.la_prop_short, 1.0);
    p = alignment_proportions(0, 0, 0, 0);
    EXPECT_EQ(p.la_prop, 0.0);
    EXPECT_EQ(p.la_prop_short, 0.0);
    p = alignment_proportions(0, 4, 0, 0);
    EXPECT_EQ(p.la_prop_short, 0.0);
    p = alignment_proportions(4, 4, 1, 3);
    EXPECT_EQ(p.la_prop_short, 0.75);
    EXPECT_EQ(alignment_proportions(4, 4, 3, 1).la_prop_short, 0.75);
}

TEST(Featurize, CatAndMouse) {
    const auto x = tweet({"the", "cat", "chase", "the", "mous"}, {"DT", "NN", "VBD", "DT", "NN"});
    const auto y = tweet({"the", "mous", "wa", "chase", "by", "the", "cat"}, {"DT", "NN", "VBD", "VBN", "IN", "DT", "NN"});
    const auto f = featurize(x, y);
    EXPECT_EQ(f.la_prop, 10.0 / 12.0);
    EXPECT_EQ(f.la_prop_short, 1.0);
}

TEST(Featurize, IdenticalAndDisjoint) {
    const auto a = tweet({"gunmen", "storm", "offic"}, {"NNS", "VBD", "NN"});
    const auto f = featurize(a, a);
    for (double v : f.values()) EXPECT_EQ(v, 1.0);

    const auto b = tweet({"pray", "famili"}, {"VB", "NNS"});
    const auto c = tweet({"gunmen", "storm"}, {"JJ", "RB"});
    for (double v : featurize(b, c).values()) EXPECT_EQ(v, 0.0);
}

TEST(Featurize, EmptyTweets) {
    const auto e = tweet({});
    for (double v : featurize(e, e).values()) EXPECT_EQ(v, 0.0);
    for (double v : featurize(e, tweet({"a"})).values()) EXPECT_EQ(v, 0.0);
}

TEST(Featurize, PureFunction) {
    BaselineTagger tagger;
    for (const auto& p : testkit::synthetic_corpus(8, 20)) {
        const auto a = normalize(p.text, tagger);
        const auto b = normalize(p.hypothesis, tagger);
        EXPECT_EQ(featurize(a, b), featurize(a, b));
    }
}

TEST(FeatureProperties, BoundsOrderingAndSymmetry) {
    // Sub-properties that hold for every input; the shorter-tweet ordering is
    // exercised separately below because it does not.
    Engine eng = make_engine(21, "feature-props");
    const std::vector<std::string> vocab{"a", "b", "c", "d", "e", "f"};
    const std::vector<std::string> tags{"NN", "VBD", "JJ", "DT", "IN", "CD", "RB"};
    for (int trial = 0; trial < 5000; ++trial) {
        std::vector<std::string> sx, px, sy, py;
        for (auto n = uniform_index(eng, 10); n > 0; --n) {
            sx.push_back(vocab[uniform_index(eng, vocab.size())]);
            px.push_back(tags[uniform_index(eng, tags.size())]);
        }
        for (auto n = uniform_index(eng, 10); n > 0; --n) {
            sy.push_back(vocab[uniform_index(eng, vocab.size())]);
            py.push_back(tags[uniform_index(eng, tags.size())]);
        }
        const auto x = tweet(sx, px);
        const auto y = tweet(sy, py);
        const auto f = featurize(x, y);
        for (double v : f.values()) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
        EXPECT_GE(f.cosine, f.f_score);
        EXPECT_GE(f.cosine_pos, f.f_score_pos);
        EXPECT_EQ(featurize(y, x), f);
    }
}

TEST(FeatureProperties, ShorterTweetProportionCanFallBelowOverall) {
    // One token of the shorter tweet aligns to three in the longer one, so the
    // overall proportion exceeds the shorter tweet's own coverage.
    const auto f = featurize(tweet({"a", "b"}), tweet({"a", "a", "a"}));
    EXPECT_DOUBLE_EQ(f.la_prop, 4.0 / 5.0);
    EXPECT_DOUBLE_EQ(f.la_prop_short, 1.0 / 2.0);
}

TEST(FeatureProperties, ShorterTweetProportionDominatesWithoutRepeats) {
    // With no repeated stems every aligned token pairs with exactly one
    // partner, so m_x == m_y and the shorter tweet's proportion is larger.
    Engine eng = make_engine(22, "feature-props-distinct");
    for (int trial = 0; trial < 3000; ++trial) {
        std::vector<std::string> pool{"a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l"};
        shuffle(std::span<std::string>(pool), eng);
        std::vector<std::string> x(pool.begin(), pool.begin() + static_cast<long>(uniform_index(eng, 7)));
        shuffle(std::span<std::string>(pool), eng);
        std::vector<std::string> y(pool.begin(), pool.begin() + static_cast<long>(uniform_index(eng, 7)));
        const auto f = featurize(tweet(x), tweet(y));
        EXPECT_GE(f.la_prop_short, f.la_prop) << trial;
    }
}

TEST(FeatureCsv, RoundTripAndHeader) {
    std::vector<FeatureRow> rows;
    rows.push_back({"p,1", "ottawa", Scenario::Threads, RteLabel::CON, {0.1, 0.2, 1.0 / 3.0, 0.0, 1.0, 0.5}});
    rows.push_back({"p\"2", "ssiege", Scenario::IPosts, std::nullopt, {1e-17, 0.25, 0.125, 0.7, 0.3, 0.9}});
    std::ostringstream out;
    write_feature_csv(out, rows);
    EXPECT_EQ(out.str().substr(0, kFeatureCsvHeader.size()), kFeatureCsvHeader);
    std::istringstream in(out.str());
    const auto back = read_feature_csv(in, false);
    ASSERT_EQ(back.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(back[i].pair_id, rows[i].pair_id);
        EXPECT_EQ(back[i].event, rows[i].event);
        EXPECT_EQ(back[i].scenario, rows[i].scenario);
        EXPECT_EQ(back[i].label, rows[i].label);
        EXPECT_EQ(back[i].features, rows[i].features);
    }
    std::istringstream again(out.str());
    EXPECT_THROW(read_feature_csv(again, true), ParseError);
}

TEST(FeatureCsv, HeaderOnlyAndMissingColumns) {
    std::istringstream header_only(std::string(kFeatureCsvHeader) + "\n");
    EXPECT_TRUE(read_feature_csv(header_only, true).empty());
    std::istringstream no_label("pair_id,event,scenario,cosine,f_score,cosine_pos,f_score_pos,laProp,laPropS\n");
    EXPECT_THROW(read_feature_csv(no_label, true), ParseError);
    std::istringstream bad_number(std::string(kFeatureCsvHeader) + "\np,e,iposts,ENT,x,0,0,0,0,0\n");
    try {
        read_feature_csv(bad_number, true);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}
