#include <gtest/gtest.h>

#include <sstream>

#include "rtecontra/corpus.hpp"
#include "support/fixtures.hpp"

using namespace rtecontra;

TEST(ResponseTypeMapping, FourTypesOntoThreeLabels) {
    EXPECT_EQ(map_response_type(ResponseType::Agreed), RteLabel::ENT);
    EXPECT_EQ(map_response_type(ResponseType::Disagreed), RteLabel::CON);
    EXPECT_EQ(map_response_type(ResponseType::AppealForMoreInfo), RteLabel::UNK);
    EXPECT_EQ(map_response_type(ResponseType::Comment), RteLabel::UNK);
    EXPECT_FALSE(parse_response_type("agreed"));
    EXPECT_EQ(parse_response_type("AppealforMoreInfo"), ResponseType::AppealForMoreInfo);
}

TEST(LabelNames, SerializeExactly) {
    for (auto l : kAllLabels) EXPECT_EQ(parse_label(to_string(l)), l);
    EXPECT_EQ(to_string(RteLabel::CON), "CON");
    EXPECT_FALSE(parse_label("con"));
}

TEST(AssignTextHypothesis, LongerTweetBecomesText) {
    auto th = assign_text_hypothesis("w1 w2 w3", "w1 w2");
    EXPECT_EQ(th.text, "w1 w2 w3");
    EXPECT_EQ(th.hypothesis, "w1 w2");

    th = assign_text_hypothesis("w1 w2", "w1 w2 w3");
    EXPECT_EQ(th.text, "w1 w2 w3");
}

TEST(AssignTextHypothesis, TieKeepsFirstArgumentAsText) {
    auto th = assign_text_hypothesis("a b", "c d");
    EXPECT_EQ(th.text, "a b");
    EXPECT_EQ(th.hypothesis, "c d");
}

TEST(AssignTextHypothesis, TenTokenSourceVersusFiveTokenReply) {
    const std::string source = "one two three four five six seven eight nine ten";
    const std::string reply = "a b c d e";
    EXPECT_EQ(assign_text_hypothesis(reply, source).text, source);
    EXPECT_EQ(assign_text_hypothesis(source, reply).text, source);
}

TEST(AssignTextHypothesis, EmptyTweetRejected) {
    EXPECT_THROW(assign_text_hypothesis("  ", "a"), std::invalid_argument);
    EXPECT_THROW(assign_text_hypothesis("a", ""), std::invalid_argument);
}

TEST(ThreadsToPairs, DirectDisagreedReplyGivesOneConPair) {
    ThreadRecord r{"the source tweet with words", "no way", ResponseType::Disagreed, true, "ottawa", ""};
    auto ds = threads_to_pairs({r});
    ASSERT_EQ(ds.pairs.size(), 1u);
    EXPECT_EQ(ds.pairs[0].label, RteLabel::CON);
    EXPECT_EQ(ds.pairs[0].scenario, Scenario::Threads);
    EXPECT_EQ(ds.pairs[0].text, "the source tweet with words");
    EXPECT_EQ(ds.pairs[0].hypothesis, "no way");
    EXPECT_EQ(ds.pairs[0].id, "ottawa-0");
}

TEST(ThreadsToPairs, NonDirectReplyDropped) {
    ThreadRecord r{"source", "reply", ResponseType::Agreed, false, "ottawa", ""};
    auto ds = threads_to_pairs({r});
    EXPECT_TRUE(ds.pairs.empty());
    EXPECT_EQ(ds.report.dropped_indirect, 1u);
}

TEST(ThreadsToPairs, NoRecordsNoPairs) {
    auto ds = threads_to_pairs({});
    EXPECT_TRUE(ds.pairs.empty());
    EXPECT_FALSE(ds.report.warnings.empty());
}

TEST(ThreadsToPairs, EmptyTweetIsRejectedNotFatal) {
    ThreadRecord bad{"source", "   ", ResponseType::Agreed, true, "ottawa", ""};
    ThreadRecord good{"source", "reply", ResponseType::Agreed, true, "ottawa", ""};
    auto ds = threads_to_pairs({bad, good});
    EXPECT_EQ(ds.pairs.size(), 1u);
    EXPECT_EQ(ds.report.rejected, 1u);
}

TEST(ThreadRecords, UnknownResponseTypeSkippedAndCounted) {
    std::istringstream in(
        R"({"source_tweet":"s","reply_tweet":"r","response_type":"Agreed","is_direct_reply":true,"event":"e"})"
        "\n"
        R"({"source_tweet":"s","reply_tweet":"r","response_type":"Supporting","is_direct_reply":true,"event":"e"})"
        "\n\n"
        "not json\n"
        R"({"source_tweet":"s","reply_tweet":"r","response_type":"Comment","event":"e"})"
        "\n");
    LoadReport report;
    auto recs = read_thread_records(in, report);
    EXPECT_EQ(recs.size(), 1u);
    EXPECT_EQ(report.rejected, 3u);
    ASSERT_EQ(report.diagnostics.size(), 3u);
    EXPECT_NE(report.diagnostics[0].find("line 2"), std::string::npos);
    EXPECT_NE(report.diagnostics[0].find("Supporting"), std::string::npos);
}

TEST(PairFile, ParsesAttributesAndEntities) {
    const std::string doc = R"(<?xml version="1.0"?>
<entailment-corpus>
  <!-- a comment -->
  <pair id="p1" entailment="CON" event="chebdo" scenario="iposts">
    <t>12 people &amp; more &lt;3</t>
    <h>  11 shot dead  </h>
  </pair>
  <pair id='p2' event="chebdo" scenario="threads"><t>a</t><h>b</h></pair>
</entailment-corpus>
)";
    auto ds = parse_rte_pairs(doc);
    ASSERT_EQ(ds.pairs.size(), 2u);
    EXPECT_EQ(ds.pairs[0].text, "12 people & more <3");
    EXPECT_EQ(ds.pairs[0].hypothesis, "11 shot dead");
    EXPECT_EQ(ds.pairs[0].label, RteLabel::CON);
    EXPECT_FALSE(ds.pairs[1].label.has_value());
    EXPECT_EQ(ds.pairs[1].scenario, Scenario::Threads);
    EXPECT_EQ(ds.report.counts.at("chebdo").at("CON"), 1u);
    EXPECT_EQ(ds.report.counts.at("chebdo").at("unlabeled"), 1u);
}

TEST(PairFile, EmptyFileGivesEmptyDatasetWithWarning) {
    auto ds = parse_rte_pairs("");
    EXPECT_TRUE(ds.pairs.empty());
    EXPECT_EQ(ds.report.warnings.size(), 1u);
}

TEST(PairFile, MalformedElementReportsLine) {
    const std::string doc = "<pair id=\"a\" event=\"e\" scenario=\"iposts\">\n<t>x</t>\n<h>y\n</pair>\n";
    try {
        parse_rte_pairs(doc);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(PairFile, MissingHypothesisElement) {
    const std::string doc = "<pair id=\"a\" event=\"e\" scenario=\"iposts\">\n<t>x</t>\n</pair>\n";
    try {
        parse_rte_pairs(doc);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(PairFile, DuplicateIdRejected) {
    const std::string doc =
        "<pair id=\"a\" event=\"e\" scenario=\"iposts\"><t>x</t><h>y</h></pair>\n"
        "<pair id=\"a\" event=\"e\" scenario=\"iposts\"><t>x</t><h>y</h></pair>\n";
    try {
        parse_rte_pairs(doc);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_NE(std::string(e.what()).find("duplicate"), std::string::npos);
    }
}

TEST(PairFile, BadLabelAndMissingScenario) {
    EXPECT_THROW(parse_rte_pairs("<pair id=\"a\" entailment=\"YES\" event=\"e\" scenario=\"iposts\"><t>x</t><h>y</h></pair>"),
                 ParseError);
    EXPECT_THROW(parse_rte_pairs("<pair id=\"a\" event=\"e\"><t>x</t><h>y</h></pair>"), ParseError);
    auto ds = parse_rte_pairs("<pair id=\"a\" event=\"e\"><t>x</t><h>y</h></pair>", Scenario::Threads);
    EXPECT_EQ(ds.pairs.at(0).scenario, Scenario::Threads);
}

TEST(PairFile, WriteThenReadIsContentIdempotent) {
    // Random pairs including characters that need escaping.
    Engine eng = make_engine(7, "pairfile-roundtrip");
    const std::vector<std::string> pieces{"a", "b&c", "<x>", "\"q\"", "it's", "URL", "#tag", "@user", "12", "é"};
    std::vector<TweetPair> pairs;
    for (int i = 0; i < 200; ++i) {
        TweetPair p;
        p.id = "id" + std::to_string(i);
        for (int k = 0; k < 1 + static_cast<int>(uniform_index(eng, 6)); ++k)
            p.text += (k ? " " : "") + pieces[uniform_index(eng, pieces.size())];
        for (int k = 0; k < 1 + static_cast<int>(uniform_index(eng, 4)); ++k)
            p.hypothesis += (k ? " " : "") + pieces[uniform_index(eng, pieces.size())];
        if (uniform_index(eng, 4) != 0) p.label = label_from_index(uniform_index(eng, 3));
        p.event = i % 2 ? "ottawa" : "ev&nt";
        p.scenario = i % 3 ? Scenario::IPosts : Scenario::Threads;
        pairs.push_back(p);
    }
    std::ostringstream out;
    write_rte_pairs(out, pairs);
    auto ds = parse_rte_pairs(out.str());
    EXPECT_EQ(ds.pairs, pairs);

    std::ostringstream again;
    write_rte_pairs(again, ds.pairs);
    EXPECT_EQ(again.str(), out.str());
}

TEST(LoadReport, MergeIsAssociative) {
    auto a = threads_to_pairs({{"s t", "r", ResponseType::Agreed, true, "e1", "x"}}).report;
    auto b = threads_to_pairs({{"s t", "r", ResponseType::Disagreed, true, "e2", "y"}}).report;
    auto c = threads_to_pairs({{"s t", "r", ResponseType::Comment, false, "e1", "z"}}).report;
    LoadReport left = a;
    left.merge(b);
    left.merge(c);
    LoadReport bc = b;
    bc.merge(c);
    LoadReport right = a;
    right.merge(bc);
    EXPECT_EQ(to_json(left), to_json(right));
}

TEST(ThreadsFixture, TableShapedCountsAndConProportion) {
    std::istringstream in(testkit::threads_jsonl(25, 2));
    LoadReport report;
    auto recs = read_thread_records(in, report);
    auto ds = threads_to_pairs(recs);
    EXPECT_EQ(report.rejected, 2u);
    EXPECT_EQ(ds.report.dropped_indirect, 25u);
    EXPECT_EQ(ds.pairs.size(), 1850u);
    EXPECT_EQ(ds.report.total(RteLabel::ENT), 373u);
    EXPECT_EQ(ds.report.total(RteLabel::CON), 136u);
    EXPECT_EQ(ds.report.total(RteLabel::UNK), 1341u);
    EXPECT_NEAR(136.0 / 1850.0, 0.0735, 5e-5);
    for (const auto& p : ds.pairs) EXPECT_GE(whitespace_token_count(p.text), whitespace_token_count(p.hypothesis));
}
