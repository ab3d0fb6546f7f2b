#pragma once

// Random forest of Gini CART trees. Each tree is grown on a bootstrap sample
// until its nodes are pure or hold fewer than two instances; every split
// considers `mtry` features drawn without replacement.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "rtecontra/label.hpp"
#include "rtecontra/matrix.hpp"
#include "rtecontra/parallel.hpp"
#include "rtecontra/rng.hpp"

namespace rtecontra {

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0;
    std::uint32_t left = 0;   // x[feature] <= threshold
    std::uint32_t right = 0;
    RteLabel label = RteLabel::ENT;

    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

using ClassCounts = std::array<std::size_t, kNumLabels>;

inline RteLabel majority(const ClassCounts& c) noexcept {
    std::size_t best = 0;
    for (std::size_t k = 1; k < kNumLabels; ++k)
        if (c[k] > c[best]) best = k;
    return static_cast<RteLabel>(best);
}

inline double gini(const ClassCounts& c, std::size_t n) noexcept {
    if (n == 0) return 0.0;
    double sum = 0;
    for (auto v : c) {
        const double p = static_cast<double>(v) / static_cast<double>(n);
        sum += p * p;
    }
    return 1.0 - sum;
}

class DecisionTree {
public:
    /// Grows a tree on rows `sample` of x (repeats allowed).
    static DecisionTree grow(const Matrix& x, std::span<const RteLabel> y, std::vector<std::size_t> sample,
                             std::size_t mtry, Engine& eng) {
        if (sample.empty()) throw std::invalid_argument("decision tree: empty sample");
        DecisionTree t;
        struct Task {
            std::uint32_t node;
            std::size_t begin;
            std::size_t end;
        };
        std::vector<Task> stack;
        t.nodes_.push_back({});
        stack.push_back({0, 0, sample.size()});
        std::vector<std::pair<double, RteLabel>> column;
        while (!stack.empty()) {
            const Task task = stack.back();
            stack.pop_back();
            const auto n = task.end - task.begin;
            ClassCounts counts{};
            for (auto k = task.begin; k < task.end; ++k) ++counts[label_index(y[sample[k]])];
            t.nodes_[task.node].label = majority(counts);
            const bool pure = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) <= 1;
            if (pure || n < 2) continue;

            const double parent = gini(counts, n);
            double best_gain = 0;
            int best_feature = -1;
            double best_threshold = 0;
            for (auto f : sample_without_replacement(x.cols(), mtry, eng)) {
                column.clear();
                for (auto k = task.begin; k < task.end; ++k) column.emplace_back(x(sample[k], f), y[sample[k]]);
                std::sort(column.begin(), column.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
                ClassCounts left{};
                for (std::size_t k = 0; k + 1 < n; ++k) {
                    ++left[label_index(column[k].second)];
                    if (column[k].first == column[k + 1].first) continue;
                    ClassCounts right{};
                    for (std::size_t c = 0; c < kNumLabels; ++c) right[c] = counts[c] - left[c];
                    const auto nl = k + 1;
                    const auto nr = n - nl;
                    const double child = (static_cast<double>(nl) * gini(left, nl) + static_cast<double>(nr) * gini(right, nr)) /
                                         static_cast<double>(n);
                    const double gain = parent - child;
                    if (gain > best_gain + 1e-12) {
                        best_gain = gain;
                        best_feature = static_cast<int>(f);
                        best_threshold = column[k].first + (column[k + 1].first - column[k].first) / 2.0;
                        if (!(best_threshold < column[k + 1].first)) best_threshold = column[k].first;
                    }
                }
            }
            if (best_feature < 0) continue;

            auto mid = std::partition(sample.begin() + static_cast<std::ptrdiff_t>(task.begin),
                                      sample.begin() + static_cast<std::ptrdiff_t>(task.end), [&](std::size_t r) {
                                          return x(r, static_cast<std::size_t>(best_feature)) <= best_threshold;
                                      });
            const auto split = static_cast<std::size_t>(mid - sample.begin());
            const auto left_id = static_cast<std::uint32_t>(t.nodes_.size());
            t.nodes_.push_back({});
            t.nodes_.push_back({});
            auto& node = t.nodes_[task.node];
            node.feature = best_feature;
            node.threshold = best_threshold;
            node.left = left_id;
            node.right = left_id + 1;
            // Right pushed first so the left subtree is expanded first.
            stack.push_back({left_id + 1, split, task.end});
            stack.push_back({left_id, task.begin, split});
        }
        return t;
    }

    RteLabel predict(std::span<const double> x) const {
        std::uint32_t at = 0;
        while (nodes_[at].feature >= 0) {
            const auto& n = nodes_[at];
            at = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
        }
        return nodes_[at].label;
    }

    const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }

    friend void to_json(nlohmann::json& j, const DecisionTree& t) {
        // Compact node tuples: [feature, threshold, left, right, label].
        j = nlohmann::json::array();
        for (const auto& n : t.nodes_)
            j.push_back({n.feature, n.threshold, n.left, n.right, label_index(n.label)});
    }
    friend void from_json(const nlohmann::json& j, DecisionTree& t) {
        t.nodes_.clear();
        for (const auto& e : j) {
            TreeNode n;
            n.feature = e.at(0).get<int>();
            n.threshold = e.at(1).get<double>();
            n.left = e.at(2).get<std::uint32_t>();
            n.right = e.at(3).get<std::uint32_t>();
            n.label = label_from_index(e.at(4).get<std::size_t>());
            t.nodes_.push_back(n);
        }
        if (t.nodes_.empty()) throw std::invalid_argument("decision tree: no nodes");
        for (std::size_t i = 0; i < t.nodes_.size(); ++i) {
            const auto& n = t.nodes_[i];
            // Children always follow their parent, which rules out cycles.
            if (n.feature >= 0 && (n.left <= i || n.right <= i || n.left >= t.nodes_.size() || n.right >= t.nodes_.size()))
                throw std::invalid_argument("decision tree: child index out of range");
        }
    }

    friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

private:
    std::vector<TreeNode> nodes_;
};

struct ForestOptions {
    std::size_t n_trees = 500;
    std::size_t mtry = 2;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
};

class RandomForest {
public:
    static RandomForest fit(const Matrix& x, std::span<const RteLabel> y, const ForestOptions& opts) {
        if (opts.n_trees < 1) throw std::invalid_argument("random forest needs n_trees >= 1");
        if (opts.mtry < 1 || opts.mtry > x.cols())
            throw std::invalid_argument("mtry must be between 1 and the feature count (" + std::to_string(x.cols()) + ")");
        if (x.rows() != y.size()) throw std::invalid_argument("row/label count mismatch");
        if (x.rows() == 0) throw std::invalid_argument("random forest: no training rows");
        RandomForest f;
        f.dim_ = x.cols();
        f.mtry_ = opts.mtry;
        f.seed_ = opts.seed;
        f.trees_.resize(opts.n_trees);
        parallel_for(opts.n_trees, opts.jobs, [&](std::size_t t) {
            Engine boot = make_engine(opts.seed, "bootstrap", t);
            std::vector<std::size_t> sample(x.rows());
            for (auto& s : sample) s = static_cast<std::size_t>(uniform_index(boot, x.rows()));
            Engine split = make_engine(opts.seed, "mtry", t);
            f.trees_[t] = DecisionTree::grow(x, y, std::move(sample), opts.mtry, split);
        });
        return f;
    }

    ClassCounts votes(std::span<const double> x) const {
        if (x.size() != dim_) throw std::invalid_argument("random forest: dimension mismatch");
        ClassCounts v{};
        for (const auto& t : trees_) ++v[label_index(t.predict(x))];
        return v;
    }

    /// Majority vote; ties go to the earlier label.
    RteLabel predict(std::span<const double> x) const { return majority(votes(x)); }

    std::size_t dim() const noexcept { return dim_; }
    std::size_t mtry() const noexcept { return mtry_; }
    std::uint64_t seed() const noexcept { return seed_; }
    const std::vector<DecisionTree>& trees() const noexcept { return trees_; }

    friend void to_json(nlohmann::json& j, const RandomForest& f) {
        j = {{"dim", f.dim_}, {"mtry", f.mtry_}, {"seed", f.seed_}, {"n_trees", f.trees_.size()}, {"trees", f.trees_}};
    }
    friend void from_json(const nlohmann::json& j, RandomForest& f) {
        j.at("dim").get_to(f.dim_);
        j.at("mtry").get_to(f.mtry_);
        j.at("seed").get_to(f.seed_);
        j.at("trees").get_to(f.trees_);
        if (f.trees_.empty()) throw std::invalid_argument("random forest: no trees");
        for (const auto& t : f.trees_)
            for (const auto& n : t.nodes())
                if (n.feature >= static_cast<int>(f.dim_)) throw std::invalid_argument("random forest: feature index out of range");
    }

    friend bool operator==(const RandomForest&, const RandomForest&) = default;

private:
    std::size_t dim_ = 0;
    std::size_t mtry_ = 2;
    std::uint64_t seed_ = 1;
    std::vector<DecisionTree> trees_;
};

}  // namespace rtecontra
