#include "config.hpp"

#include "sxai/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

namespace sxai::cli {

const std::vector<KeySpec>& config_keys() {
    static const std::vector<KeySpec> keys{
        {"seed", "42", "global seed; every stochastic step derives from it"},
        {"out", ".", "artifact directory"},
        {"data", "", "input CSV"},
        {"model", "", "model checkpoint (model.json)"},
        {"method", "gradient", "SHAP method: exact, kernel or gradient"},
        {"sample-id", "", "test window index for explain-local"},
        {"threads", "1", "worker threads for per-sample explanations"},
        {"n-ars", "100", "synth: active regions"},
        {"samples-per-ar", "34", "synth: samples per active region"},
        {"dominant", "TOTPOT", "synth: planted dominant feature"},
        {"correlate", "SAVNCPP", "synth: planted correlate of the dominant feature"},
        {"rho", "0.95", "synth: target correlation of the planted pair"},
        {"label-noise", "0.01", "synth: label flip probability, at most 0.02"},
        {"window", "10", "window length T"},
        {"train-fraction", "0.8", "fraction of active regions used for training"},
        {"hidden", "32", "LSTM hidden size"},
        {"epochs", "30", "training epochs"},
        {"batch", "32", "minibatch size"},
        {"lr", "0.001", "Adam learning rate"},
        {"threshold", "0.5", "decision threshold for metrics"},
        {"background", "100", "background windows for SHAP"},
        {"n-coalitions", "2048", "kernel SHAP coalitions"},
        {"n-steps", "5", "gradient SHAP interpolation points per background window"},
        {"max-samples", "0", "explain at most this many test windows (0 = all)"},
        {"shap", "", "correlate: reuse an existing shap.json"},
        {"lime-n", "5000", "LIME perturbations"},
        {"lime-k", "12", "LIME features reported"},
        {"lime-width", "0", "LIME kernel width (0 = 0.75 sqrt(d))"},
        {"lime-lambda", "1", "LIME ridge penalty"},
        {"lime-mode", "discretized", "LIME sampling: discretized or raw"},
    };
    return keys;
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string canonical_key(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
}

bool known_key(std::string_view key) {
    const auto& keys = config_keys();
    return std::any_of(keys.begin(), keys.end(), [&](const KeySpec& k) { return k.name == key; });
}

std::size_t to_count(const RawConfig& raw, const std::string& key, std::size_t min = 0) {
    const std::string& text = raw.at(key);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw InputError(fmt::format("{}: expected a non-negative integer, got '{}'", key, text));
    if (value < min) throw InputError(fmt::format("{}: must be at least {}, got {}", key, min, value));
    return value;
}

double to_real(const RawConfig& raw, const std::string& key) {
    const std::string& text = raw.at(key);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value))
        throw InputError(fmt::format("{}: expected a finite number, got '{}'", key, text));
    return value;
}

}  // namespace

RawConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError(fmt::format("cannot open config file '{}'", path.string()));
    RawConfig values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const std::string body = trim(std::string_view(line).substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw InputError(fmt::format("{}:{}: expected 'key = value'", path.string(), line_no));
        const std::string key = canonical_key(trim(std::string_view(body).substr(0, eq)));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (!known_key(key)) throw InputError(fmt::format("{}:{}: unknown config key '{}'", path.string(), line_no, key));
        if (values.count(key))
            throw InputError(fmt::format("{}:{}: key '{}' given twice", path.string(), line_no, key));
        values[key] = value;
    }
    return values;
}

RunConfig resolve_config(const RawConfig& file_values, const RawConfig& flag_values) {
    RawConfig raw;
    for (const auto& k : config_keys()) raw[std::string(k.name)] = std::string(k.default_value);
    for (const auto* layer : {&file_values, &flag_values}) {
        for (const auto& [key, value] : *layer) {
            if (!known_key(key)) throw InputError(fmt::format("unknown config key '{}'", key));
            raw[key] = value;
        }
    }

    RunConfig c;
    c.seed = to_count(raw, "seed");
    c.out = raw.at("out").empty() ? "." : raw.at("out");
    c.data = raw.at("data");
    c.model = raw.at("model");
    c.shap = raw.at("shap");
    const auto method = parse_method(raw.at("method"));
    if (!method) throw InputError(fmt::format("method: expected exact, kernel or gradient, got '{}'", raw.at("method")));
    c.method = *method;
    if (!raw.at("sample-id").empty()) c.sample_id = to_count(raw, "sample-id");
    c.threads = to_count(raw, "threads", 1);

    c.n_ars = to_count(raw, "n-ars", 1);
    c.samples_per_ar = to_count(raw, "samples-per-ar", 1);
    c.dominant = raw.at("dominant");
    c.correlate = raw.at("correlate");
    c.rho = to_real(raw, "rho");
    c.label_noise = to_real(raw, "label-noise");

    c.window = to_count(raw, "window", 1);
    c.train_fraction = to_real(raw, "train-fraction");
    if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0))
        throw InputError(fmt::format("train-fraction must lie strictly between 0 and 1, got {}", c.train_fraction));
    c.hidden = to_count(raw, "hidden", 1);
    c.epochs = to_count(raw, "epochs");
    c.batch = to_count(raw, "batch", 1);
    c.lr = to_real(raw, "lr");
    if (!(c.lr > 0.0)) throw InputError("lr must be positive");
    c.threshold = to_real(raw, "threshold");
    if (!(c.threshold > 0.0 && c.threshold < 1.0)) throw InputError("threshold must lie strictly between 0 and 1");

    c.background = to_count(raw, "background", 1);
    c.n_coalitions = to_count(raw, "n-coalitions", 1);
    c.n_steps = to_count(raw, "n-steps", 1);
    c.max_samples = to_count(raw, "max-samples");

    c.lime_n = to_count(raw, "lime-n", 2);
    c.lime_k = to_count(raw, "lime-k", 1);
    c.lime_width = to_real(raw, "lime-width");
    if (c.lime_width < 0.0) throw InputError("lime-width must be >= 0");
    c.lime_lambda = to_real(raw, "lime-lambda");
    if (c.lime_lambda < 0.0) throw InputError("lime-lambda must be >= 0");
    c.lime_mode = raw.at("lime-mode");
    if (c.lime_mode != "discretized" && c.lime_mode != "raw")
        throw InputError(fmt::format("lime-mode: expected discretized or raw, got '{}'", c.lime_mode));

    c.resolved = std::move(raw);
    return c;
}

}  // namespace sxai::cli
