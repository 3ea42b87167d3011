#include "sxai/plot.hpp"

#include "sxai/catalog.hpp"
#include "sxai/error.hpp"
#include "sxai/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

namespace sxai {

using nlohmann::json;
using svg::Attrs;
using svg::num;

namespace {

constexpr double kLeft = 200.0;
constexpr double kLimeLeft = 260.0;
constexpr double kRight = 40.0;
constexpr double kColorBarRight = 130.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;
constexpr double kPlotWidth = 600.0;
constexpr double kRowHeight = 36.0;
constexpr double kScatterHeight = 420.0;
constexpr double kJitterFraction = 0.4;
constexpr double kDotRadius = 3.0;

void require_finite(double v, std::string_view what) {
    if (!std::isfinite(v)) throw InputError(fmt::format("plot payload: non-finite {}", what));
}

json anchor_of(std::span<const double> values) {
    Vec v(values.begin(), values.end());
    const double lo = *std::min_element(v.begin(), v.end());
    const double hi = *std::max_element(v.begin(), v.end());
    const double med = quantiles(v, std::array{0.5})[0];
    return json::array({lo, med, hi});
}

svg::DivergingScale scale_of(const json& anchor) {
    return {anchor.at(0).get<double>(), anchor.at(1).get<double>(), anchor.at(2).get<double>()};
}

// Uniform in [-1, 1] from (sample, row); fixed for a given pair.
double jitter_unit(std::size_t sample, std::size_t row) {
    const std::uint64_t h = derive_seed(static_cast<std::uint64_t>(sample), static_cast<std::uint64_t>(row));
    return static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

std::string tick_label(double v) {
    std::string s = fmt::format("{:.3g}", v);
    if (s == "-0") s = "0";
    return s;
}

void frame(svg::Document& doc, const PlotSpec& spec, double left, double plot_w, double plot_h) {
    doc.text(spec.width / 2.0, 28.0, spec.title,
             {{"text-anchor", "middle"}, {"font-size", "16"}, {"class", "title"}});
    doc.text(left + plot_w / 2.0, kTop + plot_h + 45.0, spec.x_label,
             {{"text-anchor", "middle"}, {"class", "x-label"}});
    if (!spec.y_label.empty()) {
        doc.text(16.0, kTop + plot_h / 2.0, spec.y_label,
                 {{"text-anchor", "middle"}, {"class", "y-label"},
                  {"transform", fmt::format("rotate(-90 16 {})", num(kTop + plot_h / 2.0))}});
    }
    doc.element("rect", {{"x", num(left)}, {"y", num(kTop)}, {"width", num(plot_w)}, {"height", num(plot_h)},
                         {"fill", "none"}, {"stroke", "#cccccc"}});
}

void x_ticks(svg::Document& doc, const svg::Axis& ax, double y) {
    doc.open_group({{"class", "x-ticks"}});
    for (int k = 0; k <= 4; ++k) {
        const double v = ax.d0 + (ax.d1 - ax.d0) * k / 4.0;
        const double px = ax.to_px(v);
        doc.element("line", {{"x1", num(px)}, {"y1", num(y)}, {"x2", num(px)}, {"y2", num(y + 5.0)},
                             {"stroke", "#333333"}});
        doc.text(px, y + 18.0, tick_label(v), {{"text-anchor", "middle"}});
    }
    doc.close_group();
}

Attrs axis_meta(std::string_view cls, const svg::Axis& x, const svg::Axis* y = nullptr) {
    Attrs a{{"class", std::string(cls)},
            {"data-x0", svg::exact(x.d0)},
            {"data-x1", svg::exact(x.d1)},
            {"data-px0", svg::exact(x.p0)},
            {"data-px1", svg::exact(x.p1)}};
    if (y) {
        a.emplace_back("data-y0", svg::exact(y->d0));
        a.emplace_back("data-y1", svg::exact(y->d1));
        a.emplace_back("data-py0", svg::exact(y->p0));
        a.emplace_back("data-py1", svg::exact(y->p1));
    }
    return a;
}

// --- beeswarm ---------------------------------------------------------------

std::string render_beeswarm_svg(const PlotSpec& spec) {
    const auto& rows = spec.payload.at("rows");
    const auto n_samples = spec.payload.at("n_samples").get<std::size_t>();
    const double plot_h = kRowHeight * static_cast<double>(rows.size());
    double lo = 0.0, hi = 0.0;
    for (const auto& row : rows)
        for (const auto& p : row.at("points")) {
            lo = std::min(lo, p.at("phi").get<double>());
            hi = std::max(hi, p.at("phi").get<double>());
        }
    const auto [x0, x1] = svg::nice_range(lo, hi);
    const svg::Axis ax{x0, x1, kLeft, kLeft + kPlotWidth};

    svg::Document doc(spec.width, spec.height);
    frame(doc, spec, kLeft, kPlotWidth, plot_h);
    doc.element("line", {{"class", "zero-line"}, {"x1", num(ax.to_px(0.0))}, {"y1", num(kTop)},
                         {"x2", num(ax.to_px(0.0))}, {"y2", num(kTop + plot_h)}, {"stroke", "#888888"}});
    doc.open_group(axis_meta("plot-area", ax));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const double cy = kTop + (static_cast<double>(r) + 0.5) * kRowHeight;
        const auto scale = scale_of(row.at("anchor"));
        doc.text(kLeft - 8.0, cy + 4.0, row.at("feature").get<std::string>(), {{"text-anchor", "end"}});
        doc.open_group({{"class", "swarm-row"}, {"data-feature", row.at("feature").get<std::string>()}});
        for (const auto& p : row.at("points")) {
            const auto sample = p.at("sample").get<std::size_t>();
            const double phi = p.at("phi").get<double>();
            const double jitter =
                n_samples > 1 ? jitter_unit(sample, row.at("index").get<std::size_t>()) * kJitterFraction * kRowHeight
                              : 0.0;
            doc.element("circle", {{"cx", num(ax.to_px(phi))},
                                   {"cy", num(cy + jitter)},
                                   {"r", num(kDotRadius)},
                                   {"fill", scale.color(p.at("value").get<double>()).hex()},
                                   {"data-x", svg::exact(phi)},
                                   {"data-sample", std::to_string(sample)}});
        }
        doc.close_group();
    }
    doc.close_group();
    x_ticks(doc, ax, kTop + plot_h);
    return doc.finish();
}

// --- bar --------------------------------------------------------------------

std::string render_bar_svg(const PlotSpec& spec) {
    const auto& bars = spec.payload.at("bars");
    const double plot_h = kRowHeight * static_cast<double>(bars.size());
    double hi = 0.0;
    for (const auto& b : bars) hi = std::max(hi, b.at("value").get<double>());
    svg::Document doc(spec.width, spec.height);
    frame(doc, spec, kLeft, kPlotWidth, plot_h);
    const svg::Axis ax{0.0, hi > 0.0 ? hi : 1.0, kLeft, kLeft + kPlotWidth};
    doc.open_group(axis_meta("plot-area", ax));
    for (std::size_t r = 0; r < bars.size(); ++r) {
        const auto& b = bars[r];
        const double value = b.at("value").get<double>();
        const double y = kTop + static_cast<double>(r) * kRowHeight;
        const double len = hi > 0.0 ? value / hi * kPlotWidth : 0.0;
        doc.text(kLeft - 8.0, y + kRowHeight / 2.0 + 4.0, b.at("feature").get<std::string>(), {{"text-anchor", "end"}});
        doc.element("rect", {{"class", "bar"},
                             {"x", num(kLeft)},
                             {"y", num(y + 6.0)},
                             {"width", num(len)},
                             {"height", num(kRowHeight - 12.0)},
                             {"fill", svg::kRed.hex()},
                             {"data-x", svg::exact(value)},
                             {"data-feature", b.at("feature").get<std::string>()}});
        doc.text(kLeft + len + 6.0, y + kRowHeight / 2.0 + 4.0, fmt::format("{:.3f}", value),
                 {{"class", "bar-label"}});
    }
    doc.close_group();
    x_ticks(doc, ax, kTop + plot_h);
    return doc.finish();
}

// --- decision ---------------------------------------------------------------

std::string render_decision_svg(const PlotSpec& spec) {
    const auto& names = spec.payload.at("rows_bottom_to_top");
    const auto& paths = spec.payload.at("paths");
    const double base = spec.payload.at("base").get<double>();
    const std::size_t d = names.size();
    const double plot_h = kRowHeight * static_cast<double>(d);
    const double bottom = kTop + plot_h;

    double lo = base, hi = base;
    for (const auto& p : paths)
        for (const auto& v : p.at("values")) {
            lo = std::min(lo, v.get<double>());
            hi = std::max(hi, v.get<double>());
        }
    const auto [x0, x1] = svg::nice_range(lo, hi);
    const svg::Axis ax{x0, x1, kLeft, kLeft + kPlotWidth};
    const auto scale = scale_of(spec.color_scale.at("anchor"));

    svg::Document doc(spec.width, spec.height);
    frame(doc, spec, kLeft, kPlotWidth, plot_h);
    for (std::size_t r = 0; r < d; ++r) {
        const double y = bottom - (static_cast<double>(r) + 0.5) * kRowHeight;
        doc.text(kLeft - 8.0, y + 4.0, names[r].get<std::string>(), {{"text-anchor", "end"}});
        doc.element("line", {{"x1", num(kLeft)}, {"y1", num(bottom - static_cast<double>(r + 1) * kRowHeight)},
                             {"x2", num(kLeft + kPlotWidth)}, {"y2", num(bottom - static_cast<double>(r + 1) * kRowHeight)},
                             {"stroke", "#eeeeee"}});
    }
    doc.element("line", {{"class", "base-line"}, {"x1", num(ax.to_px(base))}, {"y1", num(kTop)},
                         {"x2", num(ax.to_px(base))}, {"y2", num(bottom)}, {"stroke", "#888888"},
                         {"stroke-dasharray", "4 3"}, {"data-x", svg::exact(base)}});
    doc.open_group(axis_meta("plot-area", ax));
    for (const auto& p : paths) {
        const auto& values = p.at("values");
        std::string pts;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) pts += ' ';
            pts += num(ax.to_px(values[i].get<double>())) + "," +
                   num(bottom - static_cast<double>(i) * kRowHeight);
        }
        const double final_value = values.back().get<double>();
        doc.element("polyline", {{"points", pts},
                                 {"fill", "none"},
                                 {"stroke", scale.color(final_value).hex()},
                                 {"stroke-width", "1.2"},
                                 {"data-final", svg::exact(final_value)},
                                 {"data-sample", std::to_string(p.at("sample").get<std::size_t>())}});
    }
    doc.close_group();
    x_ticks(doc, ax, bottom);
    return doc.finish();
}

// --- dependence -------------------------------------------------------------

std::string render_dependence_svg(const PlotSpec& spec) {
    const auto& points = spec.payload.at("points");
    double xlo = 0.0, xhi = 0.0, ylo = 0.0, yhi = 0.0;
    bool first = true;
    for (const auto& p : points) {
        const double x = p.at("x").get<double>();
        const double y = p.at("y").get<double>();
        xlo = first ? x : std::min(xlo, x);
        xhi = first ? x : std::max(xhi, x);
        ylo = std::min(ylo, y);
        yhi = std::max(yhi, y);
        first = false;
    }
    const auto [x0, x1] = svg::nice_range(xlo, xhi);
    const auto [y0, y1] = svg::nice_range(ylo, yhi);
    const double plot_h = kScatterHeight;
    const svg::Axis ax{x0, x1, kLeft, kLeft + kPlotWidth};
    const svg::Axis ay{y0, y1, kTop + plot_h, kTop};
    const auto& anchor = spec.payload.at("anchor");
    const auto scale = scale_of(anchor);

    svg::Document doc(spec.width, spec.height);
    frame(doc, spec, kLeft, kPlotWidth, plot_h);
    doc.element("line", {{"class", "zero-line"}, {"x1", num(kLeft)}, {"y1", num(ay.to_px(0.0))},
                         {"x2", num(kLeft + kPlotWidth)}, {"y2", num(ay.to_px(0.0))}, {"stroke", "#888888"}});
    for (int k = 0; k <= 4; ++k) {
        const double v = ay.d0 + (ay.d1 - ay.d0) * k / 4.0;
        doc.text(kLeft - 8.0, ay.to_px(v) + 4.0, tick_label(v), {{"text-anchor", "end"}});
    }
    doc.open_group(axis_meta("plot-area", ax, &ay));
    for (const auto& p : points) {
        const double x = p.at("x").get<double>();
        const double y = p.at("y").get<double>();
        doc.element("circle", {{"cx", num(ax.to_px(x))},
                               {"cy", num(ay.to_px(y))},
                               {"r", num(kDotRadius)},
                               {"fill", scale.color(p.at("c").get<double>()).hex()},
                               {"data-x", svg::exact(x)},
                               {"data-y", svg::exact(y)}});
    }
    doc.close_group();
    x_ticks(doc, ax, kTop + plot_h);

    // colour bar
    const double bx = kLeft + kPlotWidth + 30.0;
    doc.raw("<defs><linearGradient id=\"cbar\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">"
            "<stop offset=\"0\" stop-color=\"" + svg::kBlue.hex() + "\"/>"
            "<stop offset=\"0.5\" stop-color=\"" + svg::kPurple.hex() + "\"/>"
            "<stop offset=\"1\" stop-color=\"" + svg::kRed.hex() + "\"/></linearGradient></defs>");
    doc.element("rect", {{"class", "color-bar"}, {"x", num(bx)}, {"y", num(kTop)}, {"width", "14.000"},
                         {"height", num(plot_h)}, {"fill", "url(#cbar)"}});
    doc.text(bx + 20.0, kTop + 10.0, tick_label(anchor.at(2).get<double>()), {{"class", "color-bar-max"}});
    doc.text(bx + 20.0, kTop + plot_h, tick_label(anchor.at(0).get<double>()), {{"class", "color-bar-min"}});
    doc.text(bx + 40.0, kTop + plot_h / 2.0, spec.payload.at("correlate").get<std::string>(),
             {{"text-anchor", "middle"}, {"class", "color-bar-label"},
              {"transform", fmt::format("rotate(90 {} {})", num(bx + 40.0), num(kTop + plot_h / 2.0))}});
    return doc.finish();
}

// --- lime -------------------------------------------------------------------

std::string render_lime_svg(const PlotSpec& spec) {
    const auto& entries = spec.payload.at("entries");
    const double plot_h = kRowHeight * static_cast<double>(std::max<std::size_t>(1, entries.size()));
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, std::abs(e.at("weight").get<double>()));
    if (!(m > 0.0)) m = 1.0;
    const svg::Axis ax{-1.1 * m, 1.1 * m, kLimeLeft, kLimeLeft + kPlotWidth};
    const double zero = ax.to_px(0.0);

    svg::Document doc(spec.width, spec.height);
    frame(doc, spec, kLimeLeft, kPlotWidth, plot_h);
    doc.element("line", {{"class", "zero-line"}, {"x1", num(zero)}, {"y1", num(kTop)}, {"x2", num(zero)},
                         {"y2", num(kTop + plot_h)}, {"stroke", "#888888"}});
    doc.open_group(axis_meta("plot-area", ax));
    for (std::size_t r = 0; r < entries.size(); ++r) {
        const auto& e = entries[r];
        const double w = e.at("weight").get<double>();
        const double y = kTop + static_cast<double>(r) * kRowHeight;
        const double px = ax.to_px(w);
        doc.text(kLimeLeft - 8.0, y + kRowHeight / 2.0 + 4.0, e.at("rule").get<std::string>(), {{"text-anchor", "end"}});
        doc.element("rect", {{"class", w >= 0.0 ? "bar positive" : "bar negative"},
                             {"x", num(std::min(zero, px))},
                             {"y", num(y + 6.0)},
                             {"width", num(std::abs(px - zero))},
                             {"height", num(kRowHeight - 12.0)},
                             {"fill", (w >= 0.0 ? svg::kRed : svg::kBlue).hex()},
                             {"data-x", svg::exact(w)},
                             {"data-feature", e.at("feature").get<std::string>()}});
    }
    doc.close_group();
    x_ticks(doc, ax, kTop + plot_h);
    return doc.finish();
}

double rows_height(std::size_t rows) { return kTop + kRowHeight * static_cast<double>(rows) + kBottom; }

}  // namespace

std::string_view plot_kind_name(PlotKind kind) {
    switch (kind) {
        case PlotKind::beeswarm: return "beeswarm";
        case PlotKind::bar: return "bar";
        case PlotKind::decision: return "decision";
        case PlotKind::dependence: return "dependence";
        case PlotKind::lime_local: return "lime_local";
    }
    return "unknown";
}

std::optional<PlotKind> parse_plot_kind(std::string_view name) {
    for (auto k : {PlotKind::beeswarm, PlotKind::bar, PlotKind::decision, PlotKind::dependence, PlotKind::lime_local})
        if (plot_kind_name(k) == name) return k;
    return std::nullopt;
}

json plotspec_to_json(const PlotSpec& spec) {
    return {{"schema", kPlotSpecSchema},
            {"kind", plot_kind_name(spec.kind)},
            {"title", spec.title},
            {"x_label", spec.x_label},
            {"y_label", spec.y_label},
            {"width", spec.width},
            {"height", spec.height},
            {"color_scale", spec.color_scale},
            {"payload", spec.payload}};
}

PlotSpec plotspec_from_json(const json& j) {
    if (j.at("schema").get<std::string>() != kPlotSpecSchema) throw InputError("unsupported plot spec schema");
    const auto kind = parse_plot_kind(j.at("kind").get<std::string>());
    if (!kind) throw InputError("unknown plot kind");
    PlotSpec s;
    s.kind = *kind;
    s.title = j.at("title").get<std::string>();
    s.x_label = j.at("x_label").get<std::string>();
    s.y_label = j.at("y_label").get<std::string>();
    s.width = j.at("width").get<double>();
    s.height = j.at("height").get<double>();
    s.color_scale = j.at("color_scale");
    s.payload = j.at("payload");
    return s;
}

std::vector<std::string> catalog_names() {
    std::vector<std::string> names;
    for (const auto& f : kFeatureCatalog) names.emplace_back(f.name);
    return names;
}

static json diverging_scale_json(const json& anchor) {
    return {{"type", "diverging"},
            {"low", svg::kBlue.hex()},
            {"mid", svg::kPurple.hex()},
            {"high", svg::kRed.hex()},
            {"interpolation", "linear-rgb"},
            {"anchor", anchor}};
}

PlotSpec beeswarm_spec(std::span<const ShapExplanation> explanations, const Mat& feature_values,
                       const GlobalImportance& importance, std::span<const std::string> names) {
    if (explanations.empty()) throw InputError("beeswarm plot needs at least one explanation");
    if (feature_values.rows() != explanations.size()) throw InputError("beeswarm: one feature row per explanation");
    const std::size_t d = importance.mean_abs.size();
    if (names.size() != d || feature_values.cols() != d) throw InputError("beeswarm: feature count mismatch");
    PlotSpec s;
    s.kind = PlotKind::beeswarm;
    s.title = "SHAP values per feature";
    s.x_label = "SHAP value (impact on predicted probability)";
    s.y_label = "";
    s.width = kLeft + kPlotWidth + kRight;
    s.height = rows_height(d);
    json rows = json::array();
    for (std::size_t j : importance.ranking) {
        const Vec col = feature_values.column(j);
        for (double v : col) require_finite(v, "feature value");
        json points = json::array();
        for (std::size_t i = 0; i < explanations.size(); ++i) {
            const double phi = explanations[i].phi.at(j);
            require_finite(phi, "SHAP value");
            points.push_back({{"sample", i}, {"phi", phi}, {"value", col[i]}});
        }
        rows.push_back({{"feature", names[j]}, {"index", j}, {"anchor", anchor_of(col)}, {"points", points}});
    }
    s.color_scale = diverging_scale_json("per-feature (min, median, max) of feature value");
    s.payload = {{"n_samples", explanations.size()}, {"rows", rows}};
    return s;
}

PlotSpec bar_spec(const GlobalImportance& importance, std::span<const std::string> names) {
    if (names.size() != importance.mean_abs.size()) throw InputError("bar plot: feature count mismatch");
    PlotSpec s;
    s.kind = PlotKind::bar;
    s.title = "Global feature importance";
    s.x_label = "mean(|SHAP value|)";
    s.width = kLeft + kPlotWidth + kRight + 40.0;
    s.height = rows_height(names.size());
    json bars = json::array();
    for (std::size_t j : importance.ranking) {
        require_finite(importance.mean_abs[j], "importance");
        bars.push_back({{"feature", names[j]}, {"value", importance.mean_abs[j]}});
    }
    s.payload = {{"bars", bars}};
    return s;
}

PlotSpec decision_spec(std::span<const Vec> paths, std::span<const std::size_t> ranking, double base,
                       std::span<const std::string> names) {
    if (names.size() != ranking.size()) throw InputError("decision plot: feature count mismatch");
    require_finite(base, "base value");
    PlotSpec s;
    s.kind = PlotKind::decision;
    s.title = "Decision plot";
    s.x_label = "Model output value";
    s.width = kLeft + kPlotWidth + kRight;
    s.height = rows_height(ranking.size());
    json rows = json::array();
    for (auto it = ranking.rbegin(); it != ranking.rend(); ++it) rows.push_back(names[*it]);
    json jp = json::array();
    double lo = base, hi = base;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (paths[i].size() != ranking.size() + 1) throw InputError("decision plot: path length mismatch");
        for (double v : paths[i]) require_finite(v, "decision path value");
        lo = std::min(lo, paths[i].back());
        hi = std::max(hi, paths[i].back());
        jp.push_back({{"sample", i}, {"values", paths[i]}});
    }
    s.color_scale = diverging_scale_json(json::array({lo, base, hi}));
    s.payload = {{"base", base}, {"rows_bottom_to_top", rows}, {"paths", jp}};
    return s;
}

PlotSpec dependence_spec(const DependenceData& data) {
    PlotSpec s;
    s.kind = PlotKind::dependence;
    s.title = fmt::format("Dependence plot: {} coloured by {}", data.feature_name, data.correlate_name);
    s.x_label = fmt::format("{} (normalized)", data.feature_name);
    s.y_label = fmt::format("SHAP value for {}", data.feature_name);
    s.width = kLeft + kPlotWidth + kColorBarRight;
    s.height = kTop + kScatterHeight + kBottom;
    json points = json::array();
    Vec colour;
    for (const auto& p : data.points) {
        require_finite(p.value, "feature value");
        require_finite(p.shap, "SHAP value");
        require_finite(p.correlate, "correlate value");
        points.push_back({{"x", p.value}, {"y", p.shap}, {"c", p.correlate}});
        colour.push_back(p.correlate);
    }
    const json anchor = colour.empty() ? json::array({0.0, 0.0, 0.0}) : anchor_of(colour);
    s.color_scale = diverging_scale_json(anchor);
    s.payload = {{"feature", data.feature_name}, {"correlate", data.correlate_name}, {"anchor", anchor},
                 {"points", points}};
    return s;
}

PlotSpec lime_spec(const LimeExplanation& explanation, std::string_view sample_id) {
    PlotSpec s;
    s.kind = PlotKind::lime_local;
    s.title = sample_id.empty() ? std::string("Local explanation") : fmt::format("Local explanation: sample {}", sample_id);
    s.x_label = "LIME weight (negative class <- | -> positive class)";
    s.width = kLimeLeft + kPlotWidth + kRight;
    s.height = rows_height(std::max<std::size_t>(1, explanation.entries.size()));
    json entries = json::array();
    for (const auto& e : explanation.entries) {
        require_finite(e.weight, "LIME weight");
        entries.push_back({{"feature", e.feature_name}, {"rule", e.rule}, {"weight", e.weight}});
    }
    s.color_scale = {{"type", "binary"}, {"positive", svg::kRed.hex()}, {"negative", svg::kBlue.hex()}};
    s.payload = {{"sample_id", std::string(sample_id)},
                 {"intercept", explanation.intercept},
                 {"fidelity", explanation.fidelity},
                 {"entries", entries}};
    return s;
}

std::string render_svg(const PlotSpec& spec) {
    try {
        switch (spec.kind) {
            case PlotKind::beeswarm: return render_beeswarm_svg(spec);
            case PlotKind::bar: return render_bar_svg(spec);
            case PlotKind::decision: return render_decision_svg(spec);
            case PlotKind::dependence: return render_dependence_svg(spec);
            case PlotKind::lime_local: return render_lime_svg(spec);
        }
    } catch (const json::exception& e) {
        throw InputError(fmt::format("plot payload does not match kind '{}': {}", plot_kind_name(spec.kind), e.what()));
    }
    throw InputError("unknown plot kind");
}

std::string render_beeswarm(std::span<const ShapExplanation> explanations, const Mat& feature_values,
                            const GlobalImportance& importance, std::span<const std::string> names) {
    return render_svg(beeswarm_spec(explanations, feature_values, importance, names));
}

std::string render_bar(const GlobalImportance& importance, std::span<const std::string> names) {
    return render_svg(bar_spec(importance, names));
}

std::string render_decision(std::span<const Vec> paths, std::span<const std::size_t> ranking, double base,
                            std::span<const std::string> names) {
    return render_svg(decision_spec(paths, ranking, base, names));
}

std::string render_dependence(const DependenceData& data) { return render_svg(dependence_spec(data)); }

std::string render_lime(const LimeExplanation& explanation) { return render_svg(lime_spec(explanation)); }

std::vector<std::filesystem::path> write_plot(const std::filesystem::path& dir, std::string_view name,
                                              const PlotSpec& spec) {
    const auto svg_path = dir / (std::string(name) + ".svg");
    const auto json_path = dir / (std::string(name) + ".json");
    {
        std::ofstream out(svg_path, std::ios::binary);
        if (!out) throw InputError(fmt::format("cannot write '{}'", svg_path.string()));
        out << render_svg(spec);
    }
    {
        std::ofstream out(json_path, std::ios::binary);
        if (!out) throw InputError(fmt::format("cannot write '{}'", json_path.string()));
        out << plotspec_to_json(spec).dump(1) << '\n';
    }
    return {svg_path, json_path};
}

}  // namespace sxai
