#include "sxai/analysis.hpp"

#include "sxai/error.hpp"

#include <fmt/format.h>

namespace sxai {

CorrMatrix correlation_matrix(const Mat& rows, std::vector<std::string> names) {
    if (rows.rows() < 2) throw InputError("correlation matrix needs at least 2 samples");
    const std::size_t d = rows.cols();
    if (names.size() != d) throw std::invalid_argument("correlation_matrix: one name per column required");
    CorrMatrix m;
    m.values = Mat(d, d);
    m.constant.assign(d, std::vector<bool>(d, false));
    m.names = std::move(names);
    std::vector<Vec> cols(d);
    for (std::size_t j = 0; j < d; ++j) cols[j] = rows.column(j);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a; b < d; ++b) {
            const Correlation r = a == b ? pearson(cols[a], cols[a]) : pearson(cols[a], cols[b]);
            m.values(a, b) = m.values(b, a) = r.value;
            m.constant[a][b] = m.constant[b][a] = r.constant_input;
        }
    }
    return m;
}

CorrMatrix correlation_matrix(const std::vector<Sample>& samples) {
    std::vector<std::string> names;
    for (const auto& f : kFeatureCatalog) names.emplace_back(f.name);
    return correlation_matrix(feature_matrix(samples), std::move(names));
}

Correlate strongest_correlate(std::size_t feature, const CorrMatrix& matrix) {
    const std::size_t d = matrix.size();
    if (feature >= d) throw InputError(fmt::format("feature index {} out of range", feature));
    if (d < 2) throw InputError("strongest correlate needs at least 2 features");
    Correlate best;
    bool found = false;
    for (std::size_t j = 0; j < d; ++j) {
        if (j == feature) continue;
        const double v = matrix.values(feature, j);
        if (!found || v > best.value) {
            best.feature = j;
            best.value = v;
            found = true;
        }
    }
    best.name = matrix.names[best.feature];
    best.no_positive = !(best.value > 0.0);
    return best;
}

Correlate strongest_correlate(std::string_view feature, const CorrMatrix& matrix) {
    for (std::size_t i = 0; i < matrix.names.size(); ++i) {
        if (matrix.names[i] == feature) return strongest_correlate(i, matrix);
    }
    throw InputError(fmt::format("unknown feature '{}'", feature));
}

DependenceData dependence_data(std::size_t feature, std::span<const ShapExplanation> explanations,
                               std::span<const Mat> windows, const CorrMatrix& matrix) {
    if (explanations.size() != windows.size()) {
        throw InputError(fmt::format("dependence data: {} explanations but {} samples", explanations.size(),
                                     windows.size()));
    }
    const Correlate partner = strongest_correlate(feature, matrix);
    DependenceData out;
    out.feature = feature;
    out.correlate = partner.feature;
    out.feature_name = matrix.names[feature];
    out.correlate_name = partner.name;
    out.points.reserve(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const Mat& w = windows[i];
        if (w.rows() == 0 || w.cols() != matrix.size()) throw InputError("dependence data: window shape mismatch");
        if (explanations[i].phi.size() != matrix.size()) throw InputError("dependence data: explanation width mismatch");
        const std::size_t last = w.rows() - 1;
        out.points.push_back({w(last, feature), explanations[i].phi[feature], w(last, partner.feature)});
    }
    return out;
}

}  // namespace sxai
