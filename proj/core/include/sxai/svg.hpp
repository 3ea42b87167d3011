#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sxai::svg {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    std::string hex() const;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kBlue{0x1f, 0x77, 0xe0};
inline constexpr Rgb kPurple{0x8a, 0x2b, 0xe2};
inline constexpr Rgb kRed{0xe0, 0x1f, 0x5f};

Rgb lerp(Rgb a, Rgb b, double t);

// Blue -> purple -> red, anchored at (low, mid, high), linear in RGB.
struct DivergingScale {
    double low = 0.0;
    double mid = 0.5;
    double high = 1.0;
    Rgb color(double value) const;
};

// Affine data -> pixel map.
struct Axis {
    double d0 = 0.0, d1 = 1.0;  // data range
    double p0 = 0.0, p1 = 1.0;  // pixel range
    double to_px(double v) const { return p0 + (v - d0) / (d1 - d0) * (p1 - p0); }
    double to_data(double px) const { return d0 + (px - p0) / (p1 - p0) * (d1 - d0); }
};

// Expands a degenerate range and pads a valid one by `pad` of its span.
std::pair<double, double> nice_range(double lo, double hi, double pad = 0.05);

std::string escape(std::string_view text);
std::string num(double v);   // fixed, 3 decimals, no negative zero
std::string exact(double v); // shortest round-trip representation

using Attrs = std::vector<std::pair<std::string, std::string>>;

// Minimal deterministic SVG writer.
class Document {
public:
    Document(double width, double height);

    void open_group(const Attrs& attrs);
    void close_group();
    void element(std::string_view tag, const Attrs& attrs);
    void text(double x, double y, std::string_view content, const Attrs& extra = {});
    void raw(std::string_view markup);

    std::string finish();

private:
    std::string out_;
    int depth_ = 1;
};

}  // namespace sxai::svg
