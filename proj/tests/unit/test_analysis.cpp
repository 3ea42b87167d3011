#include "sxai/analysis.hpp"
#include "sxai/data.hpp"
#include "sxai/error.hpp"

#include <cmath>

#include <gtest/gtest.h>

using namespace sxai;

namespace {

CorrMatrix from_rows(std::size_t d, std::vector<double> values) {
    CorrMatrix m;
    m.values = Mat(d, d, std::move(values));
    m.constant.assign(d, std::vector<bool>(d, false));
    for (std::size_t i = 0; i < d; ++i) m.names.push_back("f" + std::to_string(i));
    return m;
}

}  // namespace

TEST(CorrelationMatrix, LinearRelationIsOne) {
    Mat rows(5, 3);
    for (std::size_t i = 0; i < 5; ++i) {
        rows(i, 0) = static_cast<double>(i * i);
        rows(i, 1) = 2.0 * rows(i, 0);
        rows(i, 2) = std::sin(static_cast<double>(i));
    }
    const auto m = correlation_matrix(rows, {"A", "B", "C"});
    EXPECT_NEAR(m.values(0, 1), 1.0, 1e-15);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(m.values(i, i), 1.0);
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(m.values(i, j), m.values(j, i));
    }
}

TEST(CorrelationMatrix, ConstantColumnFlagged) {
    Mat rows(4, 2, {1, 7, 2, 7, 3, 7, 4, 7});
    const auto m = correlation_matrix(rows, {"A", "B"});
    EXPECT_EQ(m.values(0, 1), 0.0);
    EXPECT_TRUE(m.constant[0][1]);
    EXPECT_TRUE(m.constant[1][1]);
    EXPECT_FALSE(m.constant[0][0]);
}

TEST(CorrelationMatrix, PlantedPairRecovered) {
    SynthConfig cfg;
    cfg.n_ars = 100;
    cfg.samples_per_ar = 50;
    const auto m = correlation_matrix(synth_generate(cfg));
    EXPECT_GE(m.values(2, 3), 0.90);
    EXPECT_LE(m.values(2, 3), 1.00);
    EXPECT_EQ(strongest_correlate("TOTPOT", m).name, "SAVNCPP");
}

TEST(StrongestCorrelate, ArgmaxTiesAndFlag) {
    const auto m = from_rows(4, {1, 0.2, 0.9, -0.5, 0.2, 1, 0.8, 0.8, 0.9, 0.8, 1, 0, -0.5, 0.8, 0, 1});
    EXPECT_EQ(strongest_correlate(0, m).feature, 2u);
    EXPECT_EQ(strongest_correlate(1, m).feature, 2u);  // 0.8 tie between 2 and 3
    const auto neg = from_rows(3, {1, -0.4, -0.2, -0.4, 1, 0.5, -0.2, 0.5, 1});
    const auto c = strongest_correlate(0, neg);
    EXPECT_EQ(c.feature, 2u);
    EXPECT_TRUE(c.no_positive);
    EXPECT_THROW(strongest_correlate("NOPE", neg), InputError);
}

TEST(DependenceData, MarshalsFinalStep) {
    const auto m = from_rows(3, {1, 0.1, 0.7, 0.1, 1, 0.2, 0.7, 0.2, 1});
    std::vector<ShapExplanation> ex(3);
    std::vector<Mat> windows;
    for (int i = 0; i < 3; ++i) {
        ex[i].phi = {0.1 * i, 0.0, -0.2};
        Mat w(2, 3, -9.0);
        w(1, 0) = i;
        w(1, 2) = 10.0 + i;
        windows.push_back(w);
    }
    const auto d = dependence_data(0, ex, windows, m);
    EXPECT_EQ(d.correlate, 2u);
    ASSERT_EQ(d.points.size(), 3u);
    for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(d.points[i].value, i);
        EXPECT_EQ(d.points[i].shap, 0.1 * i);
        EXPECT_EQ(d.points[i].correlate, 10.0 + i);
    }
    const auto dummy = dependence_data(1, ex, windows, m);
    for (const auto& p : dummy.points) EXPECT_EQ(p.shap, 0.0);
    windows.pop_back();
    EXPECT_THROW(dependence_data(0, ex, windows, m), InputError);
}
