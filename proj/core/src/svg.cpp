#include "sxai/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

namespace sxai::svg {

std::string Rgb::hex() const { return fmt::format("#{:02x}{:02x}{:02x}", r, g, b); }

Rgb lerp(Rgb a, Rgb b, double t) {
    t = std::clamp(t, 0.0, 1.0);
    auto mixc = [t](std::uint8_t x, std::uint8_t y) {
        return static_cast<std::uint8_t>(std::lround(x + (static_cast<double>(y) - x) * t));
    };
    return {mixc(a.r, b.r), mixc(a.g, b.g), mixc(a.b, b.b)};
}

Rgb DivergingScale::color(double v) const {
    if (v <= mid) {
        if (!(mid > low)) return v < mid ? kBlue : kPurple;
        return lerp(kBlue, kPurple, (v - low) / (mid - low));
    }
    if (!(high > mid)) return kRed;
    return lerp(kPurple, kRed, (v - mid) / (high - mid));
}

std::pair<double, double> nice_range(double lo, double hi, double pad) {
    if (!(hi > lo)) {
        const double c = lo;
        const double half = std::abs(c) > 0.0 ? std::abs(c) * 0.5 : 1.0;
        return {c - half, c + half};
    }
    const double span = hi - lo;
    return {lo - pad * span, hi + pad * span};
}

std::string escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    std::string s = fmt::format("{:.3f}", v);
    if (s == "-0.000") s = "0.000";
    return s;
}

std::string exact(double v) {
    if (v == 0.0) return "0";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

namespace {

std::string render_attrs(const Attrs& attrs) {
    std::string s;
    for (const auto& [k, v] : attrs) s += fmt::format(" {}=\"{}\"", k, escape(v));
    return s;
}

}  // namespace

Document::Document(double width, double height) {
    out_ = fmt::format(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"Helvetica, Arial, sans-serif\" font-size=\"12\">\n",
        num(width), num(height));
    out_ += fmt::format("  <rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n", num(width),
                        num(height));
}

void Document::open_group(const Attrs& attrs) {
    out_ += std::string(2 * depth_, ' ') + "<g" + render_attrs(attrs) + ">\n";
    ++depth_;
}

void Document::close_group() {
    --depth_;
    out_ += std::string(2 * depth_, ' ') + "</g>\n";
}

void Document::element(std::string_view tag, const Attrs& attrs) {
    out_ += std::string(2 * depth_, ' ') + "<" + std::string(tag) + render_attrs(attrs) + "/>\n";
}

void Document::text(double x, double y, std::string_view content, const Attrs& extra) {
    Attrs attrs{{"x", num(x)}, {"y", num(y)}};
    attrs.insert(attrs.end(), extra.begin(), extra.end());
    out_ += std::string(2 * depth_, ' ') + "<text" + render_attrs(attrs) + ">" + escape(content) + "</text>\n";
}

void Document::raw(std::string_view markup) {
    out_ += std::string(2 * depth_, ' ');
    out_ += markup;
    out_ += '\n';
}

std::string Document::finish() {
    while (depth_ > 1) close_group();
    out_ += "</svg>\n";
    return std::move(out_);
}

}  // namespace sxai::svg
