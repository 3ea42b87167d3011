#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace sxai {

inline constexpr std::size_t kNumFeatures = 12;

struct FeatureInfo {
    std::string_view name;
    std::string_view description;
    std::string_view units;
};

// SHARP magnetic-field parameters in canonical order. Every feature-indexed
// array in the library (attributions, matrices, plot rows) uses this order.
inline constexpr std::array<FeatureInfo, kNumFeatures> kFeatureCatalog{{
    {"TOTUSJZ", "Total unsigned vertical current", "A"},
    {"USFLUX", "Total unsigned flux", "Mx"},
    {"TOTPOT", "Total magnetic free energy density", "erg/cm^3"},
    {"SAVNCPP", "Sum of the net current per polarity", "A"},
    {"ABSNJZH", "Absolute value of net current helicity", "G^2/m"},
    {"MEANPOT", "Mean magnetic free energy", "erg/cm^3"},
    {"MEANSHR", "Mean shear angle", "deg"},
    {"SHRGT45", "Area fraction with shear >= 45 deg", "%"},
    {"MEANJZH", "Mean current helicity", "G^2/m"},
    {"MEANGAM", "Mean angle of field from radial", "deg"},
    {"MEANALP", "Mean characteristic twist parameter", "1/Mm"},
    {"MEANGBZ", "Mean gradient of vertical field", "G/Mm"},
}};

constexpr std::string_view feature_name(std::size_t i) { return kFeatureCatalog.at(i).name; }

constexpr std::optional<std::size_t> feature_index(std::string_view name) {
    for (std::size_t i = 0; i < kNumFeatures; ++i) {
        if (kFeatureCatalog[i].name == name) return i;
    }
    return std::nullopt;
}

}  // namespace sxai
