#pragma once

#include "sxai/data.hpp"
#include "sxai/numerics.hpp"
#include "sxai/shap.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sxai {

// Pairwise Pearson coefficients in catalog order.
struct CorrMatrix {
    Mat values;                           // d x d
    std::vector<std::vector<bool>> constant;  // cell involves a zero-variance feature
    std::vector<std::string> names;

    std::size_t size() const noexcept { return values.rows(); }
};

// Pearson over raw feature columns.
CorrMatrix correlation_matrix(const Mat& feature_rows, std::vector<std::string> names);
CorrMatrix correlation_matrix(const std::vector<Sample>& samples);

struct Correlate {
    std::size_t feature = 0;
    std::string name;
    double value = 0.0;
    bool no_positive = false;  // every off-diagonal entry was <= 0
};

// Argmax of the row excluding the diagonal; ties go to the earlier feature.
Correlate strongest_correlate(std::size_t feature, const CorrMatrix& matrix);
Correlate strongest_correlate(std::string_view feature, const CorrMatrix& matrix);

struct DependencePoint {
    double value = 0.0;      // normalized feature value at the final step
    double shap = 0.0;       // the feature's attribution
    double correlate = 0.0;  // normalized correlate value at the final step
};

struct DependenceData {
    std::size_t feature = 0;
    std::size_t correlate = 0;
    std::string feature_name;
    std::string correlate_name;
    std::vector<DependencePoint> points;
};

// Windows are the normalized model inputs aligned one-to-one with explanations.
DependenceData dependence_data(std::size_t feature, std::span<const ShapExplanation> explanations,
                               std::span<const Mat> windows, const CorrMatrix& matrix);

}  // namespace sxai
