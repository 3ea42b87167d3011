#include "sxai/data.hpp"
#include "sxai/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

using namespace sxai;

namespace {

const std::string kFixtures = SXAI_FIXTURES;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// `n` hourly samples of one AR with feature 0 = index.
std::vector<Sample> ar(const std::string& id, std::size_t n, int start_hour = 0) {
    std::vector<Sample> out;
    for (std::size_t i = 0; i < n; ++i) {
        Sample s;
        s.ar_id = id;
        s.timestamp = parse_timestamp("2015-03-01T00:00:00Z") + std::chrono::hours(start_hour + static_cast<int>(i));
        s.features.fill(static_cast<double>(i));
        s.label = i % 2 ? Label::P : Label::N;
        out.push_back(s);
    }
    return out;
}

std::vector<Sample> concat(std::vector<std::vector<Sample>> parts) {
    std::vector<Sample> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

template <typename Fn>
std::string error_of(Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Csv, LoadsThreeRowFixtureInOrder) {
    const auto samples = load_csv(kFixtures + "/three_rows.csv");
    ASSERT_EQ(samples.size(), 3u);
    EXPECT_TRUE(std::is_sorted(samples.begin(), samples.end(),
                               [](const Sample& a, const Sample& b) { return a.timestamp < b.timestamp; }));
    EXPECT_EQ(samples[0].label, Label::N);
    EXPECT_EQ(samples[2].features[2], 1.75e23);
}

TEST(Csv, RoundTripIsFieldIdentical) {
    const auto samples = load_csv(kFixtures + "/three_rows.csv");
    std::ostringstream out;
    write_csv(out, samples);
    EXPECT_EQ(out.str(), slurp(kFixtures + "/three_rows.csv"));
}

TEST(Csv, AcceptsAnyColumnOrderAndExtraColumns) {
    const auto a = load_csv(kFixtures + "/reordered.csv");
    const auto b = load_csv(kFixtures + "/three_rows.csv");
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].timestamp, b[i].timestamp);
        EXPECT_EQ(a[i].features, b[i].features);
        EXPECT_EQ(a[i].label, b[i].label);
    }
}

TEST(Csv, MissingColumnIsNamed) {
    const auto msg = error_of([] { load_csv(kFixtures + "/missing_meanalp.csv"); });
    EXPECT_NE(msg.find("MEANALP"), std::string::npos) << msg;
    EXPECT_THROW(load_csv(kFixtures + "/missing_meanalp.csv"), SchemaError);
}

TEST(Csv, BadLabelCitesAllowedSet) {
    try {
        load_csv(kFixtures + "/bad_label.csv");
        FAIL() << "expected a schema error";
    } catch (const SchemaError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("{P, N}"), std::string::npos) << msg;
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(Csv, NonNumericCellReportsLine) {
    try {
        load_csv(kFixtures + "/bad_number.csv");
        FAIL() << "expected a schema error";
    } catch (const SchemaError& e) {
        EXPECT_EQ(e.line(), 4u);
        EXPECT_NE(std::string(e.what()).find(":4:"), std::string::npos);
    }
}

TEST(Csv, DuplicateSampleRejected) {
    EXPECT_THROW(load_csv(kFixtures + "/duplicate.csv"), SchemaError);
}

TEST(Csv, MissingFileNamesPath) {
    const auto msg = error_of([] { load_csv("/nonexistent/data.csv"); });
    EXPECT_NE(msg.find("/nonexistent/data.csv"), std::string::npos);
}

TEST(Timestamp, ParseFormatRoundTrip) {
    const auto ts = parse_timestamp("2012-03-07T23:59:01Z");
    EXPECT_EQ(format_timestamp(ts), "2012-03-07T23:59:01Z");
    EXPECT_EQ(parse_timestamp("2012-03-07 23:59:01"), ts);
    EXPECT_THROW(parse_timestamp("2012-02-30T00:00:00Z"), InputError);
}

TEST(Windowize, FiveSamplesWindowThree) {
    const auto set = windowize(ar("A", 5), 3);
    ASSERT_EQ(set.size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(set.sequences[k].window(2, 0), static_cast<double>(k + 2));
    EXPECT_EQ(set.dropped_samples, 2u);
}

TEST(Windowize, WindowOneIsTheSample) {
    const auto samples = ar("A", 4);
    const auto set = windowize(samples, 1);
    ASSERT_EQ(set.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(set.sequences[i].window.rows(), 1u);
        EXPECT_EQ(set.sequences[i].label, samples[i].label);
    }
}

TEST(Windowize, NeverSpansArs) {
    const auto set = windowize(concat({ar("A", 4), ar("B", 2, 100)}), 3);
    ASSERT_EQ(set.size(), 2u);
    for (const auto& s : set.sequences) EXPECT_EQ(s.ar_id, "A");
    EXPECT_EQ(set.dropped_samples, 4u);
}

TEST(Split, CountsDisjointDeterministic) {
    std::vector<std::vector<Sample>> parts;
    for (int a = 0; a < 10; ++a) parts.push_back(ar("AR" + std::to_string(a), 5, a * 10));
    const auto samples = concat(parts);
    const auto s = split(samples, 0.8, 42);
    EXPECT_EQ(s.train_ars.size(), 8u);
    EXPECT_EQ(s.test_ars.size(), 2u);
    for (const auto& id : s.test_ars)
        EXPECT_EQ(std::count(s.train_ars.begin(), s.train_ars.end(), id), 0);
    const auto again = split(samples, 0.8, 42);
    EXPECT_EQ(again.train_ars, s.train_ars);
    EXPECT_EQ(s.train.size() + s.test.size(), samples.size());
}

TEST(Split, HalfOfFourArs) {
    const auto samples = concat({ar("A", 3), ar("B", 3), ar("C", 3), ar("D", 3)});
    const auto s = split(samples, 0.5, 7);
    EXPECT_EQ(s.train_ars.size(), 2u);
    EXPECT_EQ(s.test_ars.size(), 2u);
}

TEST(Split, NeedsTwoArs) {
    EXPECT_THROW(split(ar("A", 10), 0.8, 42), InputError);
}

TEST(Normalization, TrainColumnsStandardized) {
    SynthConfig cfg;
    cfg.n_ars = 10;
    cfg.samples_per_ar = 20;
    const auto samples = synth_generate(cfg);
    const auto s = split(samples, 0.8, 42);
    const auto stats = fit_norm(s.train);
    const Mat z = feature_matrix(normalize(s.train, stats));
    const auto check = zscore_fit(z);
    for (std::size_t j = 0; j < kNumFeatures; ++j) {
        EXPECT_NEAR(check.mean[j], 0.0, 1e-10);
        EXPECT_NEAR(check.stddev[j], 1.0, 1e-10);
    }
    EXPECT_TRUE(feature_matrix(normalize(s.test, stats)).all_finite());
}

TEST(Synth, DeterministicAndWellFormed) {
    SynthConfig cfg;
    cfg.n_ars = 5;
    cfg.samples_per_ar = 12;
    std::ostringstream a, b;
    write_csv(a, synth_generate(cfg));
    write_csv(b, synth_generate(cfg));
    EXPECT_EQ(a.str(), b.str());
    const auto set = windowize(synth_generate(cfg), 4);
    for (const auto& s : set.sequences) EXPECT_TRUE(s.window.all_finite());
}

TEST(Synth, PlantedCorrelationAndBalance) {
    SynthConfig cfg;
    cfg.n_ars = 100;
    cfg.samples_per_ar = 50;
    const auto samples = synth_generate(cfg);
    const Mat m = feature_matrix(samples);
    const double r = pearson(m.column(2), m.column(3)).value;
    EXPECT_GE(r, 0.90);
    EXPECT_LE(r, 1.00);
    const auto pos = std::count_if(samples.begin(), samples.end(), [](const Sample& s) { return s.label == Label::P; });
    const double balance = static_cast<double>(pos) / static_cast<double>(samples.size());
    EXPECT_GE(balance, 0.3);
    EXPECT_LE(balance, 0.7);

    cfg.plant = make_plant("TOTPOT", "SAVNCPP", 0.0);
    const Mat m0 = feature_matrix(synth_generate(cfg));
    EXPECT_LT(std::abs(pearson(m0.column(2), m0.column(3)).value), 0.05);
}

TEST(Synth, ThresholdOnPlantedFeatureRecoversLabels) {
    SynthConfig cfg;
    cfg.n_ars = 40;
    cfg.samples_per_ar = 30;
    const auto samples = synth_generate(cfg);
    std::vector<double> cuts;
    for (const auto& s : samples) cuts.push_back(s.features[2]);
    double best = 0.0;
    for (double c : cuts) {
        std::size_t hits = 0;
        for (const auto& s : samples) hits += (s.features[2] > c) == (s.label == Label::P);
        best = std::max(best, static_cast<double>(hits) / static_cast<double>(samples.size()));
    }
    EXPECT_GE(best, 0.8);
}

TEST(Synth, InvalidPlantRejected) {
    EXPECT_THROW(make_plant("TOTPOT", "SAVNCPP", 1.5), InputError);
    EXPECT_THROW(make_plant("NOPE", "SAVNCPP", 0.5), InputError);
    EXPECT_THROW(make_plant("TOTPOT", "TOTPOT", 0.5), InputError);
    EXPECT_THROW(make_plant("TOTPOT", "SAVNCPP", 0.5, 0.05), InputError);
}
