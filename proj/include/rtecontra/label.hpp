#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rtecontra {

/// Three-way textual entailment label. The enumerator order is also the
/// tie-break order used by every classifier in this library.
enum class RteLabel : unsigned char { ENT = 0, CON = 1, UNK = 2 };

inline constexpr std::size_t kNumLabels = 3;
inline constexpr std::array<RteLabel, kNumLabels> kAllLabels{RteLabel::ENT, RteLabel::CON,
                                                             RteLabel::UNK};

constexpr std::size_t label_index(RteLabel l) noexcept { return static_cast<std::size_t>(l); }

constexpr RteLabel label_from_index(std::size_t i) {
    if (i >= kNumLabels) throw std::out_of_range("label index out of range");
    return static_cast<RteLabel>(i);
}

constexpr std::string_view to_string(RteLabel l) noexcept {
    switch (l) {
        case RteLabel::ENT: return "ENT";
        case RteLabel::CON: return "CON";
        case RteLabel::UNK: return "UNK";
    }
    return "UNK";
}

inline std::optional<RteLabel> parse_label(std::string_view s) noexcept {
    if (s == "ENT") return RteLabel::ENT;
    if (s == "CON") return RteLabel::CON;
    if (s == "UNK") return RteLabel::UNK;
    return std::nullopt;
}

inline RteLabel parse_label_or_throw(std::string_view s) {
    if (auto l = parse_label(s)) return *l;
    throw std::invalid_argument("unknown RTE label '" + std::string(s) + "'");
}

enum class Scenario : unsigned char { Threads, IPosts };

constexpr std::string_view to_string(Scenario s) noexcept {
    return s == Scenario::Threads ? "threads" : "iposts";
}

inline std::optional<Scenario> parse_scenario(std::string_view s) noexcept {
    if (s == "threads") return Scenario::Threads;
    if (s == "iposts") return Scenario::IPosts;
    return std::nullopt;
}

}  // namespace rtecontra
