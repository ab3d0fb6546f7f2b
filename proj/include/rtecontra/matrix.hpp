#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace rtecontra {

/// Row-major dense matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }

    void push_row(std::span<const double> r) {
        if (rows_ == 0 && cols_ == 0) cols_ = r.size();
        if (r.size() != cols_) throw std::invalid_argument("row has " + std::to_string(r.size()) + " columns, expected " + std::to_string(cols_));
        data_.insert(data_.end(), r.begin(), r.end());
        ++rows_;
    }

    Matrix select_rows(std::span<const std::size_t> idx) const {
        Matrix out(0, cols_);
        out.data_.reserve(idx.size() * cols_);
        for (auto i : idx) out.push_row(row(i));
        return out;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Centers and scales features with statistics from the training matrix.
/// Zero-variance features are dropped.
class Scaler {
public:
    Scaler() = default;

    static Scaler fit(const Matrix& x, std::vector<std::string>* warnings = nullptr) {
        if (x.rows() < 2) throw std::invalid_argument("scaler needs at least 2 training rows");
        Scaler s;
        s.input_dim_ = x.cols();
        const auto n = static_cast<double>(x.rows());
        for (std::size_t j = 0; j < x.cols(); ++j) {
            double mean = 0;
            for (std::size_t i = 0; i < x.rows(); ++i) mean += x(i, j);
            mean /= n;
            double ss = 0;
            for (std::size_t i = 0; i < x.rows(); ++i) ss += (x(i, j) - mean) * (x(i, j) - mean);
            const double sd = std::sqrt(ss / (n - 1.0));
            if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
                if (warnings) warnings->push_back("feature " + std::to_string(j) + " has zero variance; dropped");
                continue;
            }
            s.kept_.push_back(j);
            s.mean_.push_back(mean);
            s.sd_.push_back(sd);
        }
        if (s.kept_.empty()) throw std::invalid_argument("every feature has zero variance");
        return s;
    }

    std::size_t input_dim() const noexcept { return input_dim_; }
    std::size_t output_dim() const noexcept { return kept_.size(); }
    const std::vector<std::size_t>& kept() const noexcept { return kept_; }
    const std::vector<double>& mean() const noexcept { return mean_; }
    const std::vector<double>& sd() const noexcept { return sd_; }

    std::vector<double> transform(std::span<const double> x) const {
        if (x.size() != input_dim_) throw std::invalid_argument("scaler: dimension mismatch");
        std::vector<double> out(kept_.size());
        for (std::size_t k = 0; k < kept_.size(); ++k) out[k] = (x[kept_[k]] - mean_[k]) / sd_[k];
        return out;
    }

    Matrix transform(const Matrix& x) const {
        Matrix out(0, kept_.size());
        for (std::size_t i = 0; i < x.rows(); ++i) out.push_row(transform(x.row(i)));
        return out;
    }

    friend void to_json(nlohmann::json& j, const Scaler& s) {
        j = {{"input_dim", s.input_dim_}, {"kept", s.kept_}, {"mean", s.mean_}, {"sd", s.sd_}};
    }
    friend void from_json(const nlohmann::json& j, Scaler& s) {
        j.at("input_dim").get_to(s.input_dim_);
        j.at("kept").get_to(s.kept_);
        j.at("mean").get_to(s.mean_);
        j.at("sd").get_to(s.sd_);
        if (s.kept_.size() != s.mean_.size() || s.kept_.size() != s.sd_.size())
            throw std::invalid_argument("scaler: inconsistent sizes");
        for (auto k : s.kept_)
            if (k >= s.input_dim_) throw std::invalid_argument("scaler: kept index out of range");
    }

    friend bool operator==(const Scaler&, const Scaler&) = default;

private:
    std::size_t input_dim_ = 0;
    std::vector<std::size_t> kept_;
    std::vector<double> mean_;
    std::vector<double> sd_;
};

}  // namespace rtecontra
