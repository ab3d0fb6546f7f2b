#pragma once

// Nearest shrunken centroids. Class centroids are pulled toward the overall
// centroid by soft-thresholding the standardized differences
//   d_ik = (xbar_ik - xbar_i) / (m_k (s_i + s0)),  m_k = sqrt(1/n_k - 1/n),
// by delta; a new point goes to the class minimizing
//   sum_i (x_i - xbar'_ik)^2 / (s_i + s0)^2 - 2 log(prior_k).

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "rtecontra/label.hpp"
#include "rtecontra/matrix.hpp"

namespace rtecontra {

class NcModel {
public:
    static NcModel fit(const Matrix& x, std::span<const RteLabel> y, double delta) {
        if (!(delta >= 0)) throw std::invalid_argument("shrinkage delta must be >= 0");
        if (x.rows() != y.size()) throw std::invalid_argument("row/label count mismatch");
        const auto p = x.cols();
        const auto n = x.rows();
        std::array<std::size_t, kNumLabels> count{};
        for (auto l : y) ++count[label_index(l)];
        NcModel m;
        std::size_t classes = 0;
        for (std::size_t k = 0; k < kNumLabels; ++k) {
            m.present_[k] = count[k] > 0;
            classes += m.present_[k];
        }
        if (classes < 2) throw std::invalid_argument("nearest centroids needs at least 2 classes");
        if (n <= classes) throw std::invalid_argument("nearest centroids needs more rows than classes");

        m.delta_ = delta;
        m.overall_.assign(p, 0.0);
        for (auto& c : m.raw_) c.assign(p, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < p; ++j) {
                m.raw_[label_index(y[i])][j] += x(i, j);
                m.overall_[j] += x(i, j);
            }
        for (std::size_t j = 0; j < p; ++j) m.overall_[j] /= static_cast<double>(n);
        for (std::size_t k = 0; k < kNumLabels; ++k)
            if (count[k])
                for (auto& v : m.raw_[k]) v /= static_cast<double>(count[k]);

        // Pooled within-class standard deviation per feature.
        m.s_.assign(p, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < p; ++j) {
                const double d = x(i, j) - m.raw_[label_index(y[i])][j];
                m.s_[j] += d * d;
            }
        for (auto& s : m.s_) s = std::sqrt(s / static_cast<double>(n - classes));
        std::vector<double> sorted = m.s_;
        std::sort(sorted.begin(), sorted.end());
        const auto mid = sorted.size() / 2;
        m.s0_ = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
        if (!(m.s0_ > 0)) {
            // Degenerate spread; fall back to the largest s_i so scales stay finite.
            m.s0_ = sorted.back() > 0 ? sorted.back() : 1.0;
        }

        for (std::size_t k = 0; k < kNumLabels; ++k) {
            if (!count[k]) continue;
            const double mk = std::sqrt(1.0 / static_cast<double>(count[k]) - 1.0 / static_cast<double>(n));
            m.shrunken_[k] = m.raw_[k];
            m.prior_[k] = 1.0 / static_cast<double>(classes);
            for (std::size_t j = 0; j < p; ++j) {
                const double scale = mk * (m.s_[j] + m.s0_);
                const double d = (m.raw_[k][j] - m.overall_[j]) / scale;
                const double cut = std::min(std::abs(d), delta);
                // delta = 0 subtracts exactly zero, leaving the raw centroid.
                m.shrunken_[k][j] -= std::copysign(cut, d) * scale;
            }
        }
        return m;
    }

    std::size_t dim() const noexcept { return s_.size(); }
    double delta() const noexcept { return delta_; }
    double s0() const noexcept { return s0_; }
    const std::vector<double>& s() const noexcept { return s_; }
    const std::vector<double>& overall_centroid() const noexcept { return overall_; }
    const std::vector<double>& raw_centroid(RteLabel l) const noexcept { return raw_[label_index(l)]; }
    const std::vector<double>& centroid(RteLabel l) const noexcept { return shrunken_[label_index(l)]; }

    bool has_class(RteLabel l) const noexcept { return present_[label_index(l)]; }

    /// Discriminant per class; +inf for classes absent from training.
    std::array<double, kNumLabels> discriminants(std::span<const double> x) const {
        if (x.size() != dim()) throw std::invalid_argument("nearest centroids: dimension mismatch");
        std::array<double, kNumLabels> out{};
        for (auto l : kAllLabels) {
            const auto k = label_index(l);
            if (!present_[k]) {
                out[k] = std::numeric_limits<double>::infinity();
                continue;
            }
            double score = 0;
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double diff = x[j] - shrunken_[k][j];
                const double scale = s_[j] + s0_;
                score += diff * diff / (scale * scale);
            }
            out[k] = score - 2.0 * std::log(prior_[k]);
        }
        return out;
    }

    /// Smallest discriminant; ties go to the earlier label.
    RteLabel predict(std::span<const double> x) const {
        const auto d = discriminants(x);
        std::size_t best = 0;
        for (std::size_t k = 1; k < kNumLabels; ++k)
            if (d[k] < d[best]) best = k;
        return label_from_index(best);
    }

    friend void to_json(nlohmann::json& j, const NcModel& m) {
        j = {{"delta", m.delta_},    {"s", m.s_},           {"s0", m.s0_},   {"overall", m.overall_},
             {"raw", m.raw_},        {"centroids", m.shrunken_}, {"priors", m.prior_}, {"present", m.present_}};
    }
    friend void from_json(const nlohmann::json& j, NcModel& m) {
        j.at("delta").get_to(m.delta_);
        j.at("s").get_to(m.s_);
        j.at("s0").get_to(m.s0_);
        j.at("overall").get_to(m.overall_);
        j.at("raw").get_to(m.raw_);
        j.at("centroids").get_to(m.shrunken_);
        j.at("priors").get_to(m.prior_);
        j.at("present").get_to(m.present_);
        for (std::size_t k = 0; k < kNumLabels; ++k)
            if (m.present_[k] && (m.raw_[k].size() != m.s_.size() || m.shrunken_[k].size() != m.s_.size()))
                throw std::invalid_argument("nearest centroids: inconsistent model sizes");
    }

private:
    double delta_ = 0;
    double s0_ = 0;
    std::vector<double> s_;
    std::vector<double> overall_;
    std::array<std::vector<double>, kNumLabels> raw_;
    std::array<std::vector<double>, kNumLabels> shrunken_;
    std::array<double, kNumLabels> prior_{};
    std::array<bool, kNumLabels> present_{};
};

}  // namespace rtecontra
