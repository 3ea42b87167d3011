#pragma once

#include "sxai/analysis.hpp"
#include "sxai/lime.hpp"
#include "sxai/shap.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace sxai {

inline constexpr const char* kPlotSpecSchema = "plotspec/1";

enum class PlotKind { beeswarm, bar, decision, dependence, lime_local };

std::string_view plot_kind_name(PlotKind kind);
std::optional<PlotKind> parse_plot_kind(std::string_view name);

// Renderer-independent plot description. The payload layout depends on kind;
// render_svg() reads nothing but this struct.
struct PlotSpec {
    PlotKind kind = PlotKind::bar;
    std::string title;
    std::string x_label;
    std::string y_label;
    double width = 900.0;
    double height = 600.0;
    nlohmann::json color_scale = nlohmann::json::object();
    nlohmann::json payload = nlohmann::json::object();
};

nlohmann::json plotspec_to_json(const PlotSpec& spec);
PlotSpec plotspec_from_json(const nlohmann::json& j);

// feature_values: n x d normalized values used for dot colour (one row per explanation).
PlotSpec beeswarm_spec(std::span<const ShapExplanation> explanations, const Mat& feature_values,
                       const GlobalImportance& importance, std::span<const std::string> names);
PlotSpec bar_spec(const GlobalImportance& importance, std::span<const std::string> names);
// paths from decision_path(); ranking is most-important first.
PlotSpec decision_spec(std::span<const Vec> paths, std::span<const std::size_t> ranking, double base,
                       std::span<const std::string> names);
PlotSpec dependence_spec(const DependenceData& data);
PlotSpec lime_spec(const LimeExplanation& explanation, std::string_view sample_id = "");

std::string render_svg(const PlotSpec& spec);

std::string render_beeswarm(std::span<const ShapExplanation> explanations, const Mat& feature_values,
                            const GlobalImportance& importance, std::span<const std::string> names);
std::string render_bar(const GlobalImportance& importance, std::span<const std::string> names);
std::string render_decision(std::span<const Vec> paths, std::span<const std::size_t> ranking, double base,
                            std::span<const std::string> names);
std::string render_dependence(const DependenceData& data);
std::string render_lime(const LimeExplanation& explanation);

// Writes <dir>/<name>.svg and <dir>/<name>.json; returns both paths.
std::vector<std::filesystem::path> write_plot(const std::filesystem::path& dir, std::string_view name,
                                              const PlotSpec& spec);

std::vector<std::string> catalog_names();

}  // namespace sxai
