#include "sxai/checkpoint.hpp"

#include "sxai/error.hpp"

#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace sxai {

using nlohmann::json;

json checkpoint_to_json(const Checkpoint& ckpt) {
    json params = json::object();
    for (const auto& [name, block] : ckpt.params.blocks()) {
        params[std::string(name)] = std::vector<double>(block.begin(), block.end());
    }
    std::vector<int> constant(ckpt.norm.constant.begin(), ckpt.norm.constant.end());
    return {
        {"schema", kCheckpointSchema},
        {"features", ckpt.features},
        {"trained", ckpt.trained},
        {"config",
         {{"input_dim", ckpt.params.input_dim},
          {"hidden", ckpt.params.hidden},
          {"epochs", ckpt.config.epochs},
          {"batch", ckpt.config.batch},
          {"learning_rate", ckpt.config.learning_rate},
          {"beta1", ckpt.config.beta1},
          {"beta2", ckpt.config.beta2},
          {"epsilon", ckpt.config.epsilon},
          {"seed", ckpt.config.seed},
          {"window_length", ckpt.window_length},
          {"train_fraction", ckpt.train_fraction},
          {"split_seed", ckpt.split_seed}}},
        {"class_weights", {{"P", ckpt.pos_weight}, {"N", ckpt.neg_weight}}},
        {"normalization", {{"mean", ckpt.norm.mean}, {"stddev", ckpt.norm.stddev}, {"constant", constant}}},
        {"params", params},
    };
}

Checkpoint checkpoint_from_json(const json& j) {
    try {
        if (j.at("schema").get<std::string>() != kCheckpointSchema) {
            throw InputError(fmt::format("unsupported checkpoint schema '{}'", j.at("schema").get<std::string>()));
        }
        Checkpoint c;
        c.features = j.at("features").get<std::vector<std::string>>();
        c.trained = j.at("trained").get<bool>();
        const auto& cfg = j.at("config");
        const auto input_dim = cfg.at("input_dim").get<std::size_t>();
        c.config.hidden = cfg.at("hidden").get<std::size_t>();
        c.config.epochs = cfg.at("epochs").get<std::size_t>();
        c.config.batch = cfg.at("batch").get<std::size_t>();
        c.config.learning_rate = cfg.at("learning_rate").get<double>();
        c.config.beta1 = cfg.at("beta1").get<double>();
        c.config.beta2 = cfg.at("beta2").get<double>();
        c.config.epsilon = cfg.at("epsilon").get<double>();
        c.config.seed = cfg.at("seed").get<std::uint64_t>();
        c.window_length = cfg.at("window_length").get<std::size_t>();
        c.train_fraction = cfg.at("train_fraction").get<double>();
        c.split_seed = cfg.at("split_seed").get<std::uint64_t>();
        c.pos_weight = j.at("class_weights").at("P").get<double>();
        c.neg_weight = j.at("class_weights").at("N").get<double>();

        const auto& norm = j.at("normalization");
        c.norm.mean = norm.at("mean").get<std::vector<double>>();
        c.norm.stddev = norm.at("stddev").get<std::vector<double>>();
        for (int flag : norm.at("constant").get<std::vector<int>>()) c.norm.constant.push_back(flag != 0);
        if (c.norm.mean.size() != input_dim || c.norm.stddev.size() != input_dim ||
            c.norm.constant.size() != input_dim || c.features.size() != input_dim) {
            throw InputError("checkpoint normalization/feature arrays do not match input_dim");
        }

        c.params = LstmParams::zeros(input_dim, c.config.hidden);
        const auto& params = j.at("params");
        for (auto& [name, block] : c.params.blocks()) {
            const auto values = params.at(std::string(name)).get<std::vector<double>>();
            if (values.size() != block.size()) {
                throw InputError(fmt::format("checkpoint block '{}' has {} values, expected {}", name,
                                             values.size(), block.size()));
            }
            std::copy(values.begin(), values.end(), block.begin());
        }
        if (!c.params.all_finite()) throw InputError("checkpoint contains non-finite parameters");
        return c;
    } catch (const json::exception& e) {
        throw InputError(fmt::format("malformed checkpoint: {}", e.what()));
    }
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(fmt::format("cannot write checkpoint '{}'", path.string()));
    out << checkpoint_to_json(ckpt).dump(1) << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(fmt::format("cannot open model checkpoint '{}'", path.string()));
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError(fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
    }
    return checkpoint_from_json(j);
}

void check_feature_order(const Checkpoint& ckpt) {
    if (ckpt.features.size() != kNumFeatures) {
        throw InputError(fmt::format("checkpoint has {} features, dataset schema has {}", ckpt.features.size(),
                                     kNumFeatures));
    }
    for (std::size_t i = 0; i < kNumFeatures; ++i) {
        if (ckpt.features[i] != feature_name(i)) {
            throw InputError(fmt::format("feature order mismatch at position {}: checkpoint has '{}', dataset has '{}'",
                                         i, ckpt.features[i], feature_name(i)));
        }
    }
}

}  // namespace sxai
