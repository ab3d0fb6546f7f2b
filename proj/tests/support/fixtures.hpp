#pragma once

// Test fixtures: corpora shaped like the published dataset sizes, and a
// seeded generator of synthetic rumour tweet pairs for end-to-end runs.

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "rtecontra/corpus.hpp"
#include "rtecontra/rng.hpp"

namespace rtecontra::testkit {

struct EventCounts {
    std::string_view event;
    std::size_t ent;
    std::size_t con;
    std::size_t unk;
};

// Pairs per event and class for the two datasets (Threads / iPosts).
inline constexpr std::array<EventCounts, 4> kThreadsCounts{{
    {"chebdo", 143, 34, 486},
    {"gwings", 39, 6, 107},
    {"ottawa", 79, 37, 292},
    {"ssiege", 112, 59, 456},
}};

inline constexpr std::array<EventCounts, 4> kIPostsCounts{{
    {"chebdo", 647, 427, 866},
    {"gwings", 461, 257, 447},
    {"ottawa", 555, 377, 168},
    {"ssiege", 332, 317, 565},
}};

/// JSON-lines thread records reproducing the Threads counts. Unknown-class
/// replies alternate between the two response types that map to UNK.
/// `indirect` extra non-direct replies and `bad` malformed records are mixed in.
inline std::string threads_jsonl(std::size_t indirect = 0, std::size_t bad = 0) {
    std::ostringstream out;
    std::size_t serial = 0;
    auto emit = [&](std::string_view event, std::string_view rt, bool direct) {
        nlohmann::json j;
        j["source_tweet"] = "source tweet number " + std::to_string(serial) + " about the " + std::string(event) + " claim";
        j["reply_tweet"] = "reply " + std::to_string(serial);
        j["response_type"] = rt;
        j["is_direct_reply"] = direct;
        j["event"] = event;
        j["id"] = std::string(event) + "-t" + std::to_string(serial++);
        out << j.dump() << '\n';
    };
    for (const auto& c : kThreadsCounts) {
        for (std::size_t i = 0; i < c.ent; ++i) emit(c.event, "Agreed", true);
        for (std::size_t i = 0; i < c.con; ++i) emit(c.event, "Disagreed", true);
        for (std::size_t i = 0; i < c.unk; ++i) emit(c.event, i % 3 == 0 ? "AppealforMoreInfo" : "Comment", true);
    }
    for (std::size_t i = 0; i < indirect; ++i) emit("ottawa", "Disagreed", false);
    for (std::size_t i = 0; i < bad; ++i)
        out << R"({"source_tweet":"a b","reply_tweet":"c","response_type":"Questioning","is_direct_reply":true,"event":"ottawa"})"
            << '\n';
    return out.str();
}

inline std::vector<TweetPair> ipost_pairs() {
    std::vector<TweetPair> pairs;
    std::size_t serial = 0;
    for (const auto& c : kIPostsCounts) {
        auto add = [&](RteLabel l, std::size_t n) {
            for (std::size_t i = 0; i < n; ++i) {
                TweetPair p;
                p.id = "ip" + std::to_string(serial++);
                p.text = "independent post " + std::to_string(serial) + " on " + std::string(c.event);
                p.hypothesis = "another post";
                p.label = l;
                p.event = std::string(c.event);
                p.scenario = Scenario::IPosts;
                pairs.push_back(std::move(p));
            }
        };
        add(RteLabel::ENT, c.ent);
        add(RteLabel::CON, c.con);
        add(RteLabel::UNK, c.unk);
    }
    return pairs;
}

// ---------------------------------------------------------------------------
// Synthetic rumour corpus

struct SyntheticEvent {
    std::string_view name;
    std::string_view hashtag;
    std::vector<std::string_view> vocab;
};

inline const std::vector<SyntheticEvent>& synthetic_events() {
    static const std::vector<SyntheticEvent> events{
        {"chebdo", "#CharlieHebdo",
         {"gunmen", "stormed", "magazine", "office", "Paris", "cartoonists", "killed", "police",
          "editor", "suspects", "fled", "car", "hostages", "printer", "brothers", "raid"}},
        {"gwings", "#4U9525",
         {"plane", "crashed", "Alps", "copilot", "cockpit", "locked", "pilot", "passengers",
          "airline", "recorder", "descent", "flight", "wreckage", "victims", "investigators", "door"}},
        {"ottawa", "#OttawaShooting",
         {"soldier", "shot", "memorial", "parliament", "gunman", "Ottawa", "building", "guard",
          "police", "lockdown", "suspect", "killed", "hill", "shots", "fired", "sergeant"}},
        {"ssiege", "#sydneysiege",
         {"hostages", "cafe", "Sydney", "gunman", "flag", "police", "siege", "held", "escaped",
          "Lindt", "officers", "stormed", "demands", "negotiators", "injured", "ended"}},
    };
    return events;
}

inline constexpr std::array<std::string_view, 24> kChatter{
    "pray", "for", "everyone", "so", "sad", "what", "is", "happening", "this", "world",
    "thoughts", "with", "families", "unbelievable", "why", "would", "anyone", "do", "that",
    "stay", "safe", "people", "terrible", "news"};

inline constexpr std::array<std::string_view, 8> kNumbers{"2", "3", "4", "11", "12", "20", "dozen", "two"};

inline std::string pick(Engine& eng, std::span<const std::string_view> words) {
    return std::string(words[uniform_index(eng, words.size())]);
}

inline std::string join(const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

/// A labelled corpus of tweet pairs in which entailing replies reuse most of
/// the claim, contradicting ones reuse part of it with a changed number or a
/// denial, and unknown ones are mostly chatter.
inline std::vector<TweetPair> synthetic_corpus(std::uint64_t seed, std::size_t pairs_per_event,
                                               Scenario scenario = Scenario::IPosts) {
    std::vector<TweetPair> out;
    Engine eng = make_engine(seed, "synthetic-corpus");
    std::size_t serial = 0;
    for (const auto& ev : synthetic_events()) {
        for (std::size_t n = 0; n < pairs_per_event; ++n) {
            const auto r = uniform_real(eng);
            const RteLabel label = r < 0.35 ? RteLabel::ENT : r < 0.6 ? RteLabel::CON : RteLabel::UNK;

            std::vector<std::string> claim;
            const auto number = pick(eng, kNumbers);
            claim.push_back(number);
            const auto k = 5 + uniform_index(eng, 4);
            for (auto idx : sample_without_replacement(ev.vocab.size(), k, eng)) claim.emplace_back(ev.vocab[idx]);

            std::vector<std::string> source;
            if (uniform_real(eng) < 0.3) source.push_back("BREAKING:");
            for (std::size_t i = 0; i < claim.size(); ++i) {
                source.push_back(claim[i]);
                if (i == 2) source.push_back("at the");
            }
            source.emplace_back(ev.hashtag);
            if (uniform_real(eng) < 0.5) source.push_back("http://t.co/" + std::to_string(serial));

            std::vector<std::string> reply;
            if (uniform_real(eng) < 0.4) reply.push_back("@user" + std::to_string(uniform_index(eng, 50)));
            auto keep_fraction = [&](double lo, double hi) {
                const double f = lo + (hi - lo) * uniform_real(eng);
                std::vector<std::string> kept;
                for (std::size_t i = 1; i < claim.size(); ++i)
                    if (uniform_real(eng) < f) kept.push_back(claim[i]);
                return kept;
            };
            switch (label) {
                case RteLabel::ENT: {
                    auto kept = keep_fraction(0.6, 0.95);
                    if (kept.size() > 2 && uniform_real(eng) < 0.5) std::rotate(kept.begin(), kept.begin() + 2, kept.end());
                    reply.push_back(number);
                    reply.insert(reply.end(), kept.begin(), kept.end());
                    if (uniform_real(eng) < 0.5) reply.push_back("confirmed");
                    break;
                }
                case RteLabel::CON: {
                    auto kept = keep_fraction(0.3, 0.7);
                    std::string other = pick(eng, kNumbers);
                    while (other == number) other = pick(eng, kNumbers);
                    static constexpr std::array<std::string_view, 4> denial{"not", "no", "false", "denied"};
                    reply.push_back(pick(eng, denial));
                    reply.push_back(other);
                    reply.insert(reply.end(), kept.begin(), kept.end());
                    for (std::size_t i = uniform_index(eng, 3); i > 0; --i) reply.push_back(pick(eng, kChatter));
                    break;
                }
                case RteLabel::UNK: {
                    auto kept = keep_fraction(0.0, 0.25);
                    for (std::size_t i = 3 + uniform_index(eng, 6); i > 0; --i) reply.push_back(pick(eng, kChatter));
                    reply.insert(reply.begin() + static_cast<std::ptrdiff_t>(reply.size() / 2), kept.begin(), kept.end());
                    break;
                }
            }
            if (uniform_real(eng) < 0.3) reply.emplace_back(ev.hashtag);

            auto th = assign_text_hypothesis(join(source), join(reply));
            TweetPair p;
            p.id = std::string(ev.name) + "-" + std::to_string(serial++);
            p.text = std::move(th.text);
            p.hypothesis = std::move(th.hypothesis);
            p.label = label;
            p.event = std::string(ev.name);
            p.scenario = scenario;
            out.push_back(std::move(p));
        }
    }
    return out;
}

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::size_t counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("rtecontra-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path operator/(std::string_view name) const { return path_ / name; }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, std::string_view content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

}  // namespace rtecontra::testkit
