#pragma once

#include "sxai/analysis.hpp"
#include "sxai/lime.hpp"
#include "sxai/shap.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace sxai {

// [{sample_id, method, base, fx, phi[d]}], sample ids are positions in `ids`.
nlohmann::json shap_to_json(std::span<const ShapExplanation> explanations, std::span<const std::size_t> ids);
std::vector<ShapExplanation> shap_from_json(const nlohmann::json& j, std::vector<std::size_t>* ids = nullptr);

nlohmann::json lime_to_json(const LimeExplanation& explanation, std::size_t sample_id);

// Header row and first column carry the feature names.
std::string corr_to_csv(const CorrMatrix& matrix);
nlohmann::json corr_to_json(const CorrMatrix& matrix);

// Writes bytes verbatim, throwing InputError on failure.
void write_text(const std::filesystem::path& path, std::string_view text);
// Indented dump plus trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace sxai
