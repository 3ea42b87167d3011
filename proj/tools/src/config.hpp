#pragma once

#include "sxai/shap.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace sxai::cli {

struct KeySpec {
    std::string_view name;  // flag spelling without the leading dashes
    std::string_view default_value;
    std::string_view help;
};

// Every key accepted in a config file or as a flag, in manifest order.
const std::vector<KeySpec>& config_keys();

using RawConfig = std::map<std::string, std::string>;

// Flat "key = value" lines; '#' starts a comment. Keys may use '_' or '-'.
// Unknown keys and malformed lines are rejected with the line number.
RawConfig parse_config_file(const std::filesystem::path& path);

struct RunConfig {
    std::filesystem::path config_file;
    std::uint64_t seed = 42;
    std::filesystem::path out = ".";
    std::filesystem::path data;
    std::filesystem::path model;
    std::filesystem::path shap;
    ShapMethod method = ShapMethod::gradient;
    std::optional<std::size_t> sample_id;
    std::size_t threads = 1;

    std::size_t n_ars = 100;
    std::size_t samples_per_ar = 34;
    std::string dominant = "TOTPOT";
    std::string correlate = "SAVNCPP";
    double rho = 0.95;
    double label_noise = 0.01;

    std::size_t window = 10;
    double train_fraction = 0.8;
    std::size_t hidden = 32;
    std::size_t epochs = 30;
    std::size_t batch = 32;
    double lr = 1e-3;
    double threshold = 0.5;

    std::size_t background = 100;
    std::size_t n_coalitions = 2048;
    std::size_t n_steps = 5;
    std::size_t max_samples = 0;  // 0 explains every test window

    std::size_t lime_n = 5000;
    std::size_t lime_k = 12;
    double lime_width = 0.0;  // 0 selects the default width
    double lime_lambda = 1.0;
    std::string lime_mode = "discretized";

    RawConfig resolved;  // every key with its final textual value
};

// Defaults, then the file, then flags. Validates every value.
RunConfig resolve_config(const RawConfig& file_values, const RawConfig& flag_values);

}  // namespace sxai::cli
