#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "rtecontra/align.hpp"
#include "rtecontra/features.hpp"
#include "rtecontra/matrix.hpp"
#include "rtecontra/nearest_centroid.hpp"
#include "rtecontra/random_forest.hpp"

namespace rtecontra {

inline constexpr int kModelFormatVersion = 1;

enum class ClassifierKind { NC, RF };

inline std::string_view to_string(ClassifierKind k) noexcept { return k == ClassifierKind::NC ? "nc" : "rf"; }

inline std::optional<ClassifierKind> parse_classifier(std::string_view s) noexcept {
    if (s == "nc") return ClassifierKind::NC;
    if (s == "rf") return ClassifierKind::RF;
    return std::nullopt;
}

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::NC;
    double delta = 0.0;
    std::size_t mtry = 2;
    std::size_t n_trees = 500;

    friend bool operator==(const ClassifierSpec&, const ClassifierSpec&) = default;
};

inline nlohmann::json to_json(const ClassifierSpec& s) {
    nlohmann::json j{{"classifier", to_string(s.kind)}};
    if (s.kind == ClassifierKind::NC) j["delta"] = s.delta;
    else {
        j["mtry"] = s.mtry;
        j["n_trees"] = s.n_trees;
    }
    return j;
}

/// Scaler plus fitted classifier; predicts from unscaled feature vectors.
class Classifier {
public:
    static Classifier fit(const Matrix& raw, std::span<const RteLabel> y, const ClassifierSpec& spec,
                          std::uint64_t seed, unsigned jobs = 1, std::vector<std::string>* warnings = nullptr) {
        Classifier c;
        c.spec_ = spec;
        c.scaler_ = Scaler::fit(raw, warnings);
        const Matrix x = c.scaler_.transform(raw);
        if (spec.kind == ClassifierKind::NC) {
            c.model_ = NcModel::fit(x, y, spec.delta);
        } else {
            ForestOptions opts;
            opts.n_trees = spec.n_trees;
            opts.mtry = spec.mtry;
            opts.seed = seed;
            opts.jobs = jobs;
            c.model_ = RandomForest::fit(x, y, opts);
        }
        return c;
    }

    RteLabel predict(std::span<const double> raw) const {
        const auto x = scaler_.transform(raw);
        return std::visit([&](const auto& m) { return m.predict(x); }, model_);
    }

    const ClassifierSpec& spec() const noexcept { return spec_; }
    const Scaler& scaler() const noexcept { return scaler_; }
    const NcModel* nc() const noexcept { return std::get_if<NcModel>(&model_); }
    const RandomForest* rf() const noexcept { return std::get_if<RandomForest>(&model_); }

    friend void to_json(nlohmann::json& j, const Classifier& c) {
        j = to_json(c.spec_);
        j["scaler"] = c.scaler_;
        std::visit([&](const auto& m) { j["model"] = m; }, c.model_);
    }
    friend void from_json(const nlohmann::json& j, Classifier& c) {
        const auto kind = parse_classifier(j.at("classifier").get<std::string>());
        if (!kind) throw std::invalid_argument("unknown classifier '" + j.at("classifier").get<std::string>() + "'");
        c.spec_.kind = *kind;
        j.at("scaler").get_to(c.scaler_);
        if (*kind == ClassifierKind::NC) {
            j.at("delta").get_to(c.spec_.delta);
            auto m = j.at("model").get<NcModel>();
            if (m.dim() != c.scaler_.output_dim()) throw std::invalid_argument("model/scaler dimension mismatch");
            c.model_ = std::move(m);
        } else {
            j.at("mtry").get_to(c.spec_.mtry);
            j.at("n_trees").get_to(c.spec_.n_trees);
            auto m = j.at("model").get<RandomForest>();
            if (m.dim() != c.scaler_.output_dim()) throw std::invalid_argument("model/scaler dimension mismatch");
            c.model_ = std::move(m);
        }
    }

private:
    ClassifierSpec spec_;
    Scaler scaler_;
    std::variant<NcModel, RandomForest> model_;
};

/// A classifier together with the feature extraction settings it was
/// trained under.
struct TrainedModel {
    Classifier classifier;
    std::uint64_t seed = 1;
    std::string tagger = "baseline";
    AlignOptions align;
    std::size_t training_rows = 0;

    RteLabel predict(const FeatureVector& f) const {
        const auto v = f.values();
        return classifier.predict(v);
    }
};

inline nlohmann::json to_json(const TrainedModel& m) {
    nlohmann::json j;
    j["format_version"] = kModelFormatVersion;
    j["seed"] = m.seed;
    j["tagger"] = m.tagger;
    j["align"] = {{"min_length", m.align.min_length}, {"zero_rows_and_columns", m.align.zero_rows_and_columns}};
    j["training_rows"] = m.training_rows;
    j["features"] = kFeatureNames;
    j["classifier"] = m.classifier;
    return j;
}

inline TrainedModel model_from_json(const nlohmann::json& j) {
    const auto version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion)
        throw std::runtime_error("model format version " + std::to_string(version) + " is not supported (expected " +
                                 std::to_string(kModelFormatVersion) + ")");
    if (j.at("features").get<std::vector<std::string>>() !=
        std::vector<std::string>(kFeatureNames.begin(), kFeatureNames.end()))
        throw std::runtime_error("model was trained on a different feature set");
    TrainedModel m;
    j.at("seed").get_to(m.seed);
    j.at("tagger").get_to(m.tagger);
    j.at("align").at("min_length").get_to(m.align.min_length);
    j.at("align").at("zero_rows_and_columns").get_to(m.align.zero_rows_and_columns);
    j.at("training_rows").get_to(m.training_rows);
    j.at("classifier").get_to(m.classifier);
    if (m.classifier.scaler().input_dim() != kNumFeatures) throw std::runtime_error("model input dimension mismatch");
    return m;
}

inline void save_model(const std::string& path, const TrainedModel& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << to_json(m).dump(1) << '\n';
}

inline TrainedModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return model_from_json(j);
}

}  // namespace rtecontra
