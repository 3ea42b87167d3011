#include "commands.hpp"

#include "manifest.hpp"

#include "sxai/analysis.hpp"
#include "sxai/checkpoint.hpp"
#include "sxai/data.hpp"
#include "sxai/error.hpp"
#include "sxai/exports.hpp"
#include "sxai/lime.hpp"
#include "sxai/model.hpp"
#include "sxai/plot.hpp"
#include "sxai/shap.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

#include <fmt/format.h>

namespace sxai::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kForecastHorizonHours = 24;

void prepare_out(const RunConfig& c) {
    std::error_code ec;
    fs::create_directories(c.out, ec);
    if (ec || !fs::is_directory(c.out))
        throw InputError(fmt::format("cannot create output directory '{}'", c.out.string()));
}

const fs::path& require_path(const fs::path& p, std::string_view flag) {
    if (p.empty()) throw InputError(fmt::format("--{} is required for this command", flag));
    return p;
}

RunManifest start(std::string_view command, const RunConfig& c) {
    RunManifest m(std::string(command), c);
    if (!c.config_file.empty()) m.input(c.config_file);
    return m;
}

void note(const fs::path& p) { std::cout << "wrote " << p.generic_string() << '\n'; }

// Train/test windows rebuilt from a checkpoint's split recipe and normalization.
struct Pipeline {
    std::vector<Sample> train_raw;
    std::vector<Sample> test_raw;
    SequenceSet train;
    SequenceSet test;
};

Pipeline build_pipeline(const std::vector<Sample>& samples, double fraction, std::uint64_t seed,
                        std::size_t window, const NormStats* norm, NormStats* fitted) {
    Split s = split(samples, fraction, seed);
    Pipeline p;
    NormStats stats = norm ? *norm : fit_norm(s.train);
    if (fitted) *fitted = stats;
    p.train = windowize(normalize(s.train, stats), window);
    p.test = windowize(normalize(s.test, stats), window);
    p.train_raw = std::move(s.train);
    p.test_raw = std::move(s.test);
    if (p.train.empty()) throw InputError(fmt::format("no training windows of length {} in the data", window));
    if (p.test.empty()) throw InputError(fmt::format("no test windows of length {} in the data", window));
    return p;
}

struct Loaded {
    Checkpoint ckpt;
    Pipeline pipe;
};

Loaded load_model_and_data(const RunConfig& c, RunManifest& m) {
    const auto& model_path = require_path(c.model, "model");
    const auto& data_path = require_path(c.data, "data");
    Loaded l;
    l.ckpt = load_checkpoint(model_path);
    check_feature_order(l.ckpt);
    const auto samples = load_csv(data_path);
    m.input(data_path);
    m.input(model_path);
    l.pipe = build_pipeline(samples, l.ckpt.train_fraction, l.ckpt.split_seed, l.ckpt.window_length, &l.ckpt.norm,
                            nullptr);
    return l;
}

std::vector<Mat> windows_of(const SequenceSet& set, std::size_t max_samples) {
    std::vector<Mat> w;
    const std::size_t n = max_samples == 0 ? set.size() : std::min(max_samples, set.size());
    for (std::size_t i = 0; i < n; ++i) w.push_back(set.sequences[i].window);
    return w;
}

json metrics_json(const Evaluation& e, const SequenceSet& test, double threshold) {
    return {{"tss", e.skill.tss},
            {"sensitivity", e.skill.sensitivity},
            {"false_alarm_rate", e.skill.false_alarm},
            {"degenerate", e.skill.degenerate},
            {"threshold", threshold},
            {"confusion", {{"TP", e.counts.tp}, {"FP", e.counts.fp}, {"TN", e.counts.tn}, {"FN", e.counts.fn}}},
            {"n_test_windows", test.size()},
            {"forecast_horizon_hours", kForecastHorizonHours}};
}

ExplainOptions explain_options(const RunConfig& c) {
    ExplainOptions o;
    o.method = c.method;
    o.n_coalitions = c.n_coalitions;
    o.n_steps = c.n_steps;
    o.seed = derive_seed(c.seed, 2);
    o.threads = c.threads;
    return o;
}

Background background_for(const RunConfig& c, const SequenceSet& train) {
    return sample_background(train, c.background, derive_seed(c.seed, 1));
}

Mat final_steps(std::span<const Mat> windows) {
    const std::size_t d = windows.empty() ? kNumFeatures : windows.front().cols();
    Mat out(windows.size(), d);
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const auto last = windows[i].row(windows[i].rows() - 1);
        std::copy(last.begin(), last.end(), out.row(i).begin());
    }
    return out;
}

void write_plot_pair(const fs::path& dir, std::string_view name, const PlotSpec& spec, RunManifest& m) {
    for (const auto& p : write_plot(dir, name, spec)) {
        m.artifact(p);
        note(p);
    }
}

void emit_json(const fs::path& path, const json& j, RunManifest& m) {
    write_json(path, j);
    m.artifact(path);
    note(path);
}

}  // namespace

void cmd_synth(const RunConfig& c) {
    SynthConfig sc;
    sc.n_ars = c.n_ars;
    sc.samples_per_ar = c.samples_per_ar;
    sc.seed = c.seed;
    sc.plant = make_plant(c.dominant, c.correlate, c.rho, c.label_noise);
    const auto samples = synth_generate(sc);

    prepare_out(c);
    auto m = start("synth", c);
    const auto csv = c.out / "synth.csv";
    write_csv(csv, samples);
    m.artifact(csv);
    note(csv);
    emit_json(c.out / "synth_manifest.json", synth_manifest(sc, samples), m);
    note(m.write());
}

void cmd_train(const RunConfig& c) {
    const auto& data_path = require_path(c.data, "data");
    const auto samples = load_csv(data_path);
    prepare_out(c);
    auto m = start("train", c);
    m.input(data_path);

    Checkpoint ckpt;
    ckpt.window_length = c.window;
    ckpt.train_fraction = c.train_fraction;
    ckpt.split_seed = c.seed;
    ckpt.features = catalog_names();
    const Pipeline p = build_pipeline(samples, c.train_fraction, c.seed, c.window, nullptr, &ckpt.norm);

    ckpt.config.hidden = c.hidden;
    ckpt.config.epochs = c.epochs;
    ckpt.config.batch = c.batch;
    ckpt.config.learning_rate = c.lr;
    ckpt.config.seed = c.seed;
    TrainResult result = train(p.train, ckpt.config);
    ckpt.params = std::move(result.params);
    ckpt.trained = c.epochs > 0;
    ckpt.pos_weight = result.pos_weight;
    ckpt.neg_weight = result.neg_weight;

    const auto model_path = c.out / "model.json";
    save_checkpoint(model_path, ckpt);
    m.artifact(model_path);
    note(model_path);

    const LstmModel model(ckpt.params);
    json metrics = metrics_json(evaluate(model, p.test, c.threshold), p.test, c.threshold);
    metrics["trained"] = ckpt.trained;
    metrics["flags"] = ckpt.trained ? json::array() : json::array({"untrained"});
    metrics["loss_history"] = result.loss_history;
    metrics["n_train_windows"] = p.train.size();
    metrics["dropped_samples"] = p.train.dropped_samples + p.test.dropped_samples;
    emit_json(c.out / "metrics.json", metrics, m);
    note(m.write());
}

void cmd_evaluate(const RunConfig& c) {
    prepare_out(c);
    auto m = start("evaluate", c);
    const Loaded l = load_model_and_data(c, m);
    const LstmModel model(l.ckpt.params);
    json metrics = metrics_json(evaluate(model, l.pipe.test, c.threshold), l.pipe.test, c.threshold);
    metrics["trained"] = l.ckpt.trained;
    metrics["flags"] = l.ckpt.trained ? json::array() : json::array({"untrained"});
    emit_json(c.out / "metrics.json", metrics, m);
    note(m.write());
}

void cmd_explain_global(const RunConfig& c) {
    prepare_out(c);
    auto m = start("explain-global", c);
    const Loaded l = load_model_and_data(c, m);
    const LstmModel model(l.ckpt.params);
    const auto windows = windows_of(l.pipe.test, c.max_samples);
    const Background bg = background_for(c, l.pipe.train);
    const auto expls = explain_all(model, windows, bg, explain_options(c));

    std::vector<std::size_t> ids(expls.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    emit_json(c.out / "shap.json", shap_to_json(expls, ids), m);

    const auto names = catalog_names();
    const GlobalImportance imp = global_importance(expls);
    const double base = expls.front().base;
    json ranking = json::array();
    for (std::size_t j : imp.ranking) ranking.push_back({{"feature", names[j]}, {"mean_abs_shap", imp.mean_abs[j]}});
    emit_json(c.out / "importance.json",
              {{"method", method_name(c.method)},
               {"n_explained", expls.size()},
               {"background_size", bg.size()},
               {"base_value_background", base},
               {"base_value_train", base_value(model, l.pipe.train)},
               {"ranking", ranking}},
              m);

    write_plot_pair(c.out, "beeswarm", beeswarm_spec(expls, final_steps(windows), imp, names), m);
    write_plot_pair(c.out, "bar", bar_spec(imp, names), m);
    const auto paths = decision_path(expls, imp.ranking, base);
    write_plot_pair(c.out, "decision", decision_spec(paths, imp.ranking, base, names), m);
    note(m.write());
}

void cmd_explain_local(const RunConfig& c) {
    if (!c.sample_id) throw InputError("--sample-id is required for explain-local");
    prepare_out(c);
    auto m = start("explain-local", c);
    const Loaded l = load_model_and_data(c, m);
    const std::size_t id = *c.sample_id;
    if (id >= l.pipe.test.size())
        throw InputError(fmt::format("unknown sample-id {}: the test split has {} windows (ids 0..{})", id,
                                     l.pipe.test.size(), l.pipe.test.size() - 1));
    const LstmModel model(l.ckpt.params);
    const Discretizer disc = discretizer_fit(feature_matrix(normalize(l.pipe.train_raw, l.ckpt.norm)));
    LimeOptions o;
    o.n = c.lime_n;
    o.k = c.lime_k;
    o.width = c.lime_width;
    o.lambda = c.lime_lambda;
    o.seed = derive_seed(c.seed, 3 + id);
    o.mode = c.lime_mode == "raw" ? SamplingMode::raw : SamplingMode::discretized;
    const LimeExplanation e = explain_local(model, l.pipe.test.sequences[id].window, disc, o);

    const std::string name = fmt::format("lime_{}", id);
    emit_json(c.out / (name + ".json"), lime_to_json(e, id), m);
    write_plot_pair(c.out, name + "_plot", lime_spec(e, std::to_string(id)), m);
    note(m.write());
}

void cmd_correlate(const RunConfig& c) {
    prepare_out(c);
    auto m = start("correlate", c);
    const Loaded l = load_model_and_data(c, m);
    const LstmModel model(l.ckpt.params);

    const CorrMatrix matrix = correlation_matrix(l.pipe.train_raw);
    const auto csv = c.out / "corr.csv";
    write_text(csv, corr_to_csv(matrix));
    m.artifact(csv);
    note(csv);
    emit_json(c.out / "corr.json", corr_to_json(matrix), m);

    std::vector<ShapExplanation> expls;
    std::vector<Mat> windows;
    if (!c.shap.empty()) {
        std::ifstream in(c.shap);
        if (!in) throw InputError(fmt::format("cannot open '{}'", c.shap.string()));
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw InputError(fmt::format("{}: invalid JSON: {}", c.shap.string(), e.what()));
        }
        std::vector<std::size_t> ids;
        expls = shap_from_json(j, &ids);
        for (std::size_t id : ids) {
            if (id >= l.pipe.test.size())
                throw InputError(fmt::format("{}: sample_id {} is not a test window", c.shap.string(), id));
            windows.push_back(l.pipe.test.sequences[id].window);
        }
        m.input(c.shap);
    } else {
        windows = windows_of(l.pipe.test, c.max_samples);
        expls = explain_all(model, windows, background_for(c, l.pipe.train), explain_options(c));
    }
    if (expls.empty()) throw InputError("no explanations to build dependence plots from");

    const GlobalImportance imp = global_importance(expls);
    json summary = json::object();
    for (const auto& [label, feature] : {std::pair{"top", imp.ranking.front()}, std::pair{"bottom", imp.ranking.back()}}) {
        const DependenceData dep = dependence_data(feature, expls, windows, matrix);
        const Correlate corr = strongest_correlate(feature, matrix);
        summary[label] = {{"feature", dep.feature_name},
                          {"correlate", dep.correlate_name},
                          {"correlation", corr.value},
                          {"no_positive_correlate", corr.no_positive}};
        write_plot_pair(c.out, fmt::format("dependence_{}", label), dependence_spec(dep), m);
    }
    emit_json(c.out / "dependence.json", summary, m);
    note(m.write());
}

}  // namespace sxai::cli
