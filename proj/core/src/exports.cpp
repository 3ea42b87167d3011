#include "sxai/exports.hpp"

#include "sxai/error.hpp"
#include "sxai/svg.hpp"

#include <fstream>

#include <fmt/format.h>

namespace sxai {

using nlohmann::json;

json shap_to_json(std::span<const ShapExplanation> explanations, std::span<const std::size_t> ids) {
    if (ids.size() != explanations.size()) throw InputError("shap export: one id per explanation");
    json out = json::array();
    for (std::size_t i = 0; i < explanations.size(); ++i) {
        const auto& e = explanations[i];
        out.push_back({{"sample_id", ids[i]},
                       {"method", method_name(e.method)},
                       {"base", e.base},
                       {"fx", e.fx},
                       {"phi", e.phi}});
    }
    return out;
}

std::vector<ShapExplanation> shap_from_json(const json& j, std::vector<std::size_t>* ids) {
    if (!j.is_array()) throw InputError("shap export must be a JSON array");
    std::vector<ShapExplanation> out;
    for (const auto& item : j) {
        ShapExplanation e;
        const auto method = parse_method(item.at("method").get<std::string>());
        if (!method) throw InputError("shap export: unknown method");
        e.method = *method;
        e.base = item.at("base").get<double>();
        e.fx = item.at("fx").get<double>();
        e.phi = item.at("phi").get<Vec>();
        if (ids) ids->push_back(item.at("sample_id").get<std::size_t>());
        out.push_back(std::move(e));
    }
    return out;
}

json lime_to_json(const LimeExplanation& explanation, std::size_t sample_id) {
    json entries = json::array();
    for (const auto& e : explanation.entries)
        entries.push_back({{"feature", e.feature_name}, {"rule", e.rule}, {"weight", e.weight}});
    return {{"sample_id", sample_id},
            {"intercept", explanation.intercept},
            {"fidelity", explanation.fidelity},
            {"local_pred", explanation.local_pred},
            {"model_pred", explanation.model_pred},
            {"entries", entries},
            {"flags", explanation.flags}};
}

std::string corr_to_csv(const CorrMatrix& matrix) {
    const std::size_t d = matrix.size();
    std::string out = "feature";
    for (const auto& n : matrix.names) out += "," + n;
    out += '\n';
    for (std::size_t i = 0; i < d; ++i) {
        out += matrix.names[i];
        for (std::size_t j = 0; j < d; ++j) out += "," + svg::exact(matrix.values(i, j));
        out += '\n';
    }
    return out;
}

json corr_to_json(const CorrMatrix& matrix) {
    const std::size_t d = matrix.size();
    json values = json::array();
    json flags = json::array();
    for (std::size_t i = 0; i < d; ++i) {
        json row = json::array();
        json frow = json::array();
        for (std::size_t j = 0; j < d; ++j) {
            row.push_back(matrix.values(i, j));
            frow.push_back(static_cast<bool>(matrix.constant[i][j]));
        }
        values.push_back(row);
        flags.push_back(frow);
    }
    return {{"features", matrix.names}, {"values", values}, {"constant_input", flags}};
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
    out << text;
    if (!out) throw InputError(fmt::format("write failed for '{}'", path.string()));
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(1) + "\n"); }

}  // namespace sxai
