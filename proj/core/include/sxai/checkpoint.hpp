#pragma once

#include "sxai/data.hpp"
#include "sxai/model.hpp"

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace sxai {

inline constexpr const char* kCheckpointSchema = "sxai-model/1";

// Everything needed to rebuild the model and its data pipeline: parameters,
// training config, window length, normalization and the train/test split recipe.
struct Checkpoint {
    LstmParams params;
    TrainConfig config;
    std::size_t window_length = 10;
    NormStats norm;
    double train_fraction = 0.8;
    std::uint64_t split_seed = 42;
    std::vector<std::string> features;  // feature order the model was trained with
    bool trained = true;
    double pos_weight = 1.0;
    double neg_weight = 1.0;
};

nlohmann::json checkpoint_to_json(const Checkpoint& ckpt);
Checkpoint checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Throws InputError when the checkpoint's feature order differs from the catalog.
void check_feature_order(const Checkpoint& ckpt);

}  // namespace sxai
