// rte-contra: contradiction detection between rumour tweets as three-way RTE.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "rtecontra.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rtecontra;

namespace {

struct RunConfig {
    std::string command;
    std::string input;
    std::string output;
    std::string model;
    std::string table;
    std::string metrics;
    std::string pretagged;
    std::string pretagged_index;
    std::string scenario;  // default scenario for pair files without one
    std::string dataset;   // restrict cv/train to one dataset
    std::string tagger = "baseline";
    int threshold = 1;
    bool no_crossing = false;
    std::string classifier = "nc";
    double delta = 0.0;
    std::size_t mtry = 2;
    std::size_t n_trees = 500;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    std::string balance = "per-fold";
    std::string aggregate = "fold-mean";
    std::string fdr = "BY";
    double alpha = 0.05;
    bool tune = false;
};

// Keys accepted in --config files and written to resolved configs.
void from_json(const json& j, RunConfig& c) {
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) j.at(key).get_to(field);
    };
    get("input", c.input);
    get("output", c.output);
    get("model", c.model);
    get("table", c.table);
    get("metrics", c.metrics);
    get("pretagged", c.pretagged);
    get("pretagged_index", c.pretagged_index);
    get("scenario", c.scenario);
    get("dataset", c.dataset);
    get("tagger", c.tagger);
    get("threshold", c.threshold);
    get("no_crossing", c.no_crossing);
    get("classifier", c.classifier);
    get("delta", c.delta);
    get("mtry", c.mtry);
    get("trees", c.n_trees);
    get("seed", c.seed);
    get("jobs", c.jobs);
    get("balance", c.balance);
    get("aggregate", c.aggregate);
    get("fdr", c.fdr);
    get("alpha", c.alpha);
    get("tune", c.tune);
}

json resolved(const RunConfig& c) {
    json j{{"command", c.command}, {"seed", c.seed}, {"jobs", c.jobs}, {"tagger", c.tagger}, {"input", c.input}};
    if (!c.output.empty()) j["output"] = c.output;
    if (!c.model.empty()) j["model"] = c.model;
    if (!c.scenario.empty()) j["scenario"] = c.scenario;
    if (!c.pretagged.empty()) {
        j["pretagged"] = c.pretagged;
        j["pretagged_index"] = c.pretagged_index;
    }
    if (c.command == "featurize" || c.command == "train") {
        j["threshold"] = c.threshold;
        j["no_crossing"] = c.no_crossing;
    }
    if (c.command == "stats") {
        j["fdr"] = c.fdr;
        j["alpha"] = c.alpha;
    }
    if (c.command == "cv" || c.command == "train") {
        j["classifier"] = c.classifier;
        if (c.classifier == "nc") j["delta"] = c.delta;
        else {
            j["mtry"] = c.mtry;
            j["trees"] = c.n_trees;
        }
        j["balance"] = c.balance;
        j["tune"] = c.tune;
        if (!c.dataset.empty()) j["dataset"] = c.dataset;
    }
    if (c.command == "cv") j["aggregate"] = c.aggregate;
    return j;
}

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_resolved_config(const RunConfig& c, const std::string& primary_output) {
    const auto path = primary_output + ".config.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << resolved(c).dump(2) << '\n';
}

std::ofstream open_output(const std::string& path) {
    if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

std::optional<Scenario> default_scenario(const RunConfig& c) {
    if (c.scenario.empty()) return std::nullopt;
    return *parse_scenario(c.scenario);
}

void log_report(const LoadReport& r) {
    for (const auto& d : r.diagnostics) spdlog::warn("{}", d);
    for (const auto& w : r.warnings) spdlog::warn("{}", w);
    spdlog::info("loaded {} pairs (ENT {}, CON {}, UNK {}), rejected {}, dropped {} non-direct replies", r.loaded,
                 r.total(RteLabel::ENT), r.total(RteLabel::CON), r.total(RteLabel::UNK), r.rejected,
                 r.dropped_indirect);
}

std::unique_ptr<PosTagger> make_tagger(const std::string& name) {
    if (name == "pretagged") return std::make_unique<PretaggedTagger>();
    return std::make_unique<BaselineTagger>();
}

AlignOptions align_options(const RunConfig& c) {
    AlignOptions a;
    a.min_length = c.threshold;
    a.zero_rows_and_columns = c.no_crossing;
    return a;
}

std::vector<TweetPair> load_pairs_for_tagging(const RunConfig& c, const std::string& tagger) {
    auto ds = load_rte_pairs(c.input, default_scenario(c));
    log_report(ds.report);
    if (!c.pretagged.empty()) {
        if (tagger != "pretagged") throw UsageError("--pretagged requires --tagger pretagged");
        if (c.pretagged_index.empty()) throw UsageError("--pretagged requires --pretagged-index");
        std::ifstream tagged(c.pretagged, std::ios::binary);
        if (!tagged) throw std::runtime_error("cannot open '" + c.pretagged + "'");
        std::ifstream index(c.pretagged_index, std::ios::binary);
        if (!index) throw std::runtime_error("cannot open '" + c.pretagged_index + "'");
        apply_pretagged(ds.pairs, read_pretagged(tagged, index));
    }
    return std::move(ds.pairs);
}

std::vector<FeatureRow> load_features(const RunConfig& c) {
    std::ifstream in(c.input, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + c.input + "'");
    auto rows = read_feature_csv(in, true);
    if (!c.dataset.empty()) {
        const auto want = *parse_scenario(c.dataset);
        std::erase_if(rows, [&](const FeatureRow& r) { return r.scenario != want; });
    } else {
        std::set<Scenario> seen;
        for (const auto& r : rows) seen.insert(r.scenario);
        if (seen.size() > 1) throw UsageError("feature file mixes datasets; choose one with --dataset");
    }
    if (rows.empty()) throw std::runtime_error("no labeled feature rows in '" + c.input + "'");
    return rows;
}

ClassifierSpec classifier_spec(const RunConfig& c) {
    ClassifierSpec s;
    s.kind = *parse_classifier(c.classifier);
    s.delta = c.delta;
    s.mtry = c.mtry;
    s.n_trees = c.n_trees;
    return s;
}

// ---------------------------------------------------------------------------

int cmd_convert(const RunConfig& c) {
    std::ifstream in(c.input, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + c.input + "'");
    LoadReport report;
    const auto records = read_thread_records(in, report);
    auto ds = threads_to_pairs(records);
    report.merge(ds.report);
    log_report(report);
    auto out = open_output(c.output);
    write_rte_pairs(out, ds.pairs);
    auto rep = open_output(c.output + ".report.json");
    rep << to_json(report).dump(2) << '\n';
    write_resolved_config(c, c.output);
    return 0;
}

int cmd_featurize(const RunConfig& c) {
    const auto pairs = load_pairs_for_tagging(c, c.tagger);
    const auto tagger = make_tagger(c.tagger);
    const auto rows = featurize_pairs(pairs, *tagger, align_options(c), c.jobs);
    auto out = open_output(c.output);
    write_feature_csv(out, rows);
    spdlog::info("wrote {} feature rows to {}", rows.size(), c.output);
    write_resolved_config(c, c.output);
    return 0;
}

int cmd_stats(const RunConfig& c) {
    std::ifstream in(c.input, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + c.input + "'");
    const auto rows = read_feature_csv(in, true);
    const auto result = corpus_stats(rows, *parse_fdr_method(c.fdr), c.alpha, c.jobs);
    for (const auto& w : result.warnings) spdlog::warn("{}", w);

    auto out = open_output(c.output);
    write_stats_csv(out, result.tests);

    const fs::path base(c.output);
    const auto stem = (base.parent_path() / base.stem()).string();
    auto bj = open_output(stem + ".boxplots.json");
    bj << boxplots_to_json(result.boxplots).dump(1) << '\n';
    std::map<std::pair<std::string, std::string>, std::vector<BoxplotSummary>> cells;
    for (const auto& b : result.boxplots) cells[{b.dataset, b.event}].push_back(b);
    for (const auto& [key, boxes] : cells) {
        auto svg = open_output(stem + "." + key.first + "." + key.second + ".svg");
        svg << render_boxplot_svg(key.first, key.second, boxes);
    }
    std::size_t significant = 0;
    for (const auto& t : result.tests) significant += t.p_adj < c.alpha;
    spdlog::info("{} of {} Kruskal-Wallis tests significant after {} adjustment", significant, result.tests.size(), c.fdr);
    write_resolved_config(c, c.output);
    return 0;
}

int cmd_cv(const RunConfig& c) {
    const auto rows = load_features(c);
    CvOptions opts;
    opts.seed = c.seed;
    opts.balance = *parse_balance_mode(c.balance);
    opts.aggregation = *parse_aggregation(c.aggregate);
    opts.jobs = c.jobs;
    const auto spec = classifier_spec(c);
    const auto report = c.tune ? cross_validate_tuned(rows, spec, opts) : cross_validate(rows, spec, opts);
    for (const auto& w : report.warnings) spdlog::warn("{}", w);

    auto j = to_json(report, opts.aggregation);
    j["classifier"] = to_json(spec);
    j["seed"] = c.seed;
    j["balance"] = c.balance;
    auto out = open_output(c.output);
    out << j.dump(2) << '\n';

    const auto table_path = c.table.empty() ? (fs::path(c.output).replace_extension(".txt")).string() : c.table;
    auto table = open_output(table_path);
    const auto title = std::string(to_string(spec.kind)) + " event-held-out CV (" + std::string(to_string(opts.aggregation)) + ")";
    const auto text = format_table(report.headline(opts.aggregation), title);
    table << text;
    std::cout << text;
    write_resolved_config(c, c.output);
    return 0;
}

int cmd_train(const RunConfig& c) {
    const auto rows = load_features(c);
    std::vector<std::size_t> idx(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) idx[i] = i;
    if (c.balance != "none") idx = balance(gold_labels(rows, idx), c.seed, 0).indices;

    auto spec = classifier_spec(c);
    if (c.tune) {
        std::vector<FeatureRow> subset;
        for (auto i : idx) subset.push_back(rows[i]);
        CvOptions inner;
        inner.seed = c.seed;
        inner.balance = BalanceMode::None;
        const auto tuned = grid_search(subset, spec, inner);
        for (const auto& [s, f1] : tuned.tried) spdlog::info("grid {} -> macro F1 {:.4f}", to_json(s).dump(), f1);
        spec = tuned.best;
    }
    std::vector<std::string> notes;
    TrainedModel m;
    m.classifier = Classifier::fit(feature_matrix(rows, idx), gold_labels(rows, idx), spec, c.seed, c.jobs, &notes);
    for (const auto& n : notes) spdlog::warn("{}", n);
    m.seed = c.seed;
    m.tagger = c.tagger;
    m.align = align_options(c);
    m.training_rows = idx.size();
    if (auto parent = fs::path(c.model).parent_path(); !parent.empty()) fs::create_directories(parent);
    save_model(c.model, m);
    spdlog::info("trained {} on {} rows -> {}", to_json(spec).dump(), idx.size(), c.model);
    write_resolved_config(c, c.model);
    return 0;
}

int cmd_predict(const RunConfig& c) {
    const auto model = load_model(c.model);
    const auto pairs = load_pairs_for_tagging(c, model.tagger);
    const auto tagger = make_tagger(model.tagger);
    const auto rows = featurize_pairs(pairs, *tagger, model.align, c.jobs);

    auto out = open_output(c.output);
    out << "pair_id,event,predicted,gold\n";
    ConfusionMatrix cm;
    bool all_labeled = !rows.empty();
    for (const auto& r : rows) {
        const auto pred = model.predict(r.features);
        out << csv::quote(r.pair_id) << ',' << csv::quote(r.event) << ',' << to_string(pred) << ','
            << (r.label ? to_string(*r.label) : std::string_view{}) << '\n';
        if (r.label) cm.add(*r.label, pred);
        else all_labeled = false;
    }
    spdlog::info("labeled {} pairs -> {}", rows.size(), c.output);
    if (all_labeled) {
        const auto s = score(cm);
        std::cout << format_table(s, "predictions against gold labels");
        if (!c.metrics.empty()) {
            auto m = open_output(c.metrics);
            m << json{{"scores", to_json(s)}, {"confusion", to_json(cm)}}.dump(2) << '\n';
        }
    } else if (!c.metrics.empty()) {
        spdlog::warn("input has unlabeled pairs; no metrics written");
    }
    write_resolved_config(c, c.output);
    return 0;
}

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("rte-contra");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::info);
    if (const char* env = std::getenv("RTE_CONTRA_LOG")) {
        const auto level = spdlog::level::from_str(env);
        if (level == spdlog::level::off && std::string(env) != "off")
            spdlog::warn("RTE_CONTRA_LOG='{}' is not a log level; using info", env);
        else
            spdlog::set_level(level);
    }
}

// Config files bypass the flag validators, so every enumerated value is
// checked again here.
std::optional<std::string> validate(const RunConfig& c) {
    if (!parse_classifier(c.classifier)) return "unknown classifier '" + c.classifier + "'";
    if (!parse_balance_mode(c.balance)) return "unknown balance mode '" + c.balance + "'";
    if (!parse_aggregation(c.aggregate)) return "unknown aggregation '" + c.aggregate + "'";
    if (!parse_fdr_method(c.fdr)) return "unknown FDR method '" + c.fdr + "'";
    if (c.tagger != "baseline" && c.tagger != "pretagged") return "unknown tagger '" + c.tagger + "'";
    if (!c.scenario.empty() && !parse_scenario(c.scenario)) return "unknown scenario '" + c.scenario + "'";
    if (!c.dataset.empty() && !parse_scenario(c.dataset)) return "unknown dataset '" + c.dataset + "'";
    if (c.threshold < 1) return "alignment threshold must be >= 1";
    if (c.jobs < 1) return "--jobs must be >= 1";
    if (c.n_trees < 1) return "--trees must be >= 1";
    if (c.mtry < 1) return "--mtry must be >= 1";
    if (!(c.delta >= 0)) return "--delta must be >= 0";
    return std::nullopt;
}

// The config file supplies defaults that explicit flags override, so it is
// read before the command line is parsed.
std::optional<std::string> find_config_arg(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        std::string_view a = argv[i];
        if (a == "--config" && i + 1 < argc) return argv[i + 1];
        if (a.starts_with("--config=")) return std::string(a.substr(9));
    }
    return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();
    RunConfig cfg;
    std::string config_path;
    try {
        if (auto path = find_config_arg(argc, argv)) {
            std::ifstream in(*path, std::ios::binary);
            if (!in) throw std::runtime_error("cannot open config '" + *path + "'");
            from_json(json::parse(in), cfg);
        }
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 2;
    }

    CLI::App app{"Contradiction detection between rumour tweets as three-way textual entailment"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", cfg.seed, "Random seed for every sampling step")->capture_default_str();
    app.add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--tagger", cfg.tagger, "POS tagger")
        ->check(CLI::IsMember({"baseline", "pretagged"}))
        ->capture_default_str();
    app.add_option("--config", config_path, "JSON file with option defaults");

    auto* convert = app.add_subcommand("convert", "Thread JSON lines -> RTE pair file");
    convert->add_option("-i,--input", cfg.input, "Thread records (JSON lines)")->required();
    convert->add_option("-o,--output", cfg.output, "Pair file to write")->required();

    auto add_pair_input = [&](CLI::App* sub) {
        sub->add_option("-i,--input", cfg.input, "Pair file")->required();
        sub->add_option("--scenario", cfg.scenario, "Scenario for pairs without one")
            ->check(CLI::IsMember({"threads", "iposts"}));
        sub->add_option("--pretagged", cfg.pretagged, "Pre-tagged tweets, one per line");
        sub->add_option("--pretagged-index", cfg.pretagged_index, "TSV mapping <pair id>/t|h to a line of --pretagged");
    };
    auto* featurize = app.add_subcommand("featurize", "Pair file -> feature CSV");
    add_pair_input(featurize);
    featurize->add_option("-o,--output", cfg.output, "Feature CSV to write")->required();
    featurize->add_option("-t,--threshold", cfg.threshold, "Minimum aligned substring length")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    featurize->add_flag("--no-crossing", cfg.no_crossing, "Zero whole rows and columns after each alignment");

    auto* stats = app.add_subcommand("stats", "Feature CSV -> per-class tests and boxplots");
    stats->add_option("-i,--input", cfg.input, "Labeled feature CSV")->required();
    stats->add_option("-o,--output", cfg.output, "Stats CSV to write")->required();
    stats->add_option("--fdr", cfg.fdr, "FDR method")->check(CLI::IsMember({"BH", "BY"}))->capture_default_str();
    stats->add_option("--alpha", cfg.alpha, "Significance level")->check(CLI::Range(0.0, 1.0))->capture_default_str();

    auto add_classifier = [&](CLI::App* sub) {
        sub->add_option("-i,--input", cfg.input, "Labeled feature CSV")->required();
        sub->add_option("--classifier", cfg.classifier, "nc or rf")
            ->check(CLI::IsMember({"nc", "rf"}))
            ->capture_default_str();
        sub->add_option("--delta", cfg.delta, "NC shrinkage")->check(CLI::NonNegativeNumber)->capture_default_str();
        sub->add_option("--mtry", cfg.mtry, "RF candidate features per split")->check(CLI::PositiveNumber)->capture_default_str();
        sub->add_option("--trees", cfg.n_trees, "RF tree count")->check(CLI::PositiveNumber)->capture_default_str();
        sub->add_option("--balance", cfg.balance, "Class balancing")
            ->check(CLI::IsMember({"per-fold", "global", "none"}))
            ->capture_default_str();
        sub->add_option("--dataset", cfg.dataset, "Use only rows of this dataset")
            ->check(CLI::IsMember({"threads", "iposts"}));
        sub->add_flag("--tune", cfg.tune, "Grid-search delta or mtry by inner event-held-out CV");
    };
    auto* cv = app.add_subcommand("cv", "Event-held-out cross-validation");
    add_classifier(cv);
    cv->add_option("-o,--output", cfg.output, "JSON report to write")->required();
    cv->add_option("--table", cfg.table, "Text table (default: report path with .txt)");
    cv->add_option("--aggregate", cfg.aggregate, "Headline aggregation over folds")
        ->check(CLI::IsMember({"fold-mean", "pooled"}))
        ->capture_default_str();

    auto* train = app.add_subcommand("train", "Train a model on a feature CSV");
    add_classifier(train);
    train->add_option("-m,--model", cfg.model, "Model JSON to write")->required();
    train->add_option("-t,--threshold", cfg.threshold, "Alignment threshold recorded for prediction")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train->add_flag("--no-crossing", cfg.no_crossing, "Record non-crossing alignment for prediction");

    auto* predict = app.add_subcommand("predict", "Label a pair file with a trained model");
    add_pair_input(predict);
    predict->add_option("-m,--model", cfg.model, "Model JSON")->required();
    predict->add_option("-o,--output", cfg.output, "Labels CSV to write")->required();
    predict->add_option("--metrics", cfg.metrics, "Metrics JSON (labeled input only)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Help and version exit 0; every other parse failure is a usage error.
        return app.exit(e) == 0 ? 0 : 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    if (auto problem = validate(cfg)) {
        spdlog::error("{}", *problem);
        return 2;
    }

    try {
        if (cfg.command == "convert") return cmd_convert(cfg);
        if (cfg.command == "featurize") return cmd_featurize(cfg);
        if (cfg.command == "stats") return cmd_stats(cfg);
        if (cfg.command == "cv") return cmd_cv(cfg);
        if (cfg.command == "train") return cmd_train(cfg);
        if (cfg.command == "predict") return cmd_predict(cfg);
    } catch (const UsageError& e) {
        spdlog::error("{}", e.what());
        return 2;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 1;
}
