#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rtecontra/label.hpp"
#include "rtecontra/rng.hpp"

namespace rtecontra {

struct BalancedSample {
    std::vector<std::size_t> indices;  // ascending, into the input
    std::size_t per_class = 0;
    std::uint64_t seed = 0;
};

/// Downsamples every class, without replacement, to the minority class size.
/// `stream_index` selects an independent substream (e.g. the fold number).
inline BalancedSample balance(std::span<const RteLabel> labels, std::uint64_t seed, std::uint64_t stream_index = 0) {
    std::array<std::vector<std::size_t>, kNumLabels> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[label_index(labels[i])].push_back(i);
    std::size_t smallest = labels.size();
    for (auto l : kAllLabels) {
        if (by_class[label_index(l)].empty())
            throw std::invalid_argument("cannot balance: no " + std::string(to_string(l)) + " instances");
        smallest = std::min(smallest, by_class[label_index(l)].size());
    }
    BalancedSample out;
    out.per_class = smallest;
    out.seed = seed;
    for (auto l : kAllLabels) {
        Engine eng = make_engine(seed, std::string("balance/") + std::string(to_string(l)), stream_index);
        const auto& members = by_class[label_index(l)];
        for (auto k : sample_without_replacement(members.size(), smallest, eng)) out.indices.push_back(members[k]);
    }
    std::sort(out.indices.begin(), out.indices.end());
    return out;
}

}  // namespace rtecontra
