#pragma once

#include "sxai/catalog.hpp"
#include "sxai/numerics.hpp"

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace sxai {

using Timestamp = std::chrono::sys_seconds;

enum class Label : std::uint8_t { N = 0, P = 1 };

constexpr char label_char(Label l) { return l == Label::P ? 'P' : 'N'; }

struct Sample {
    std::string ar_id;
    Timestamp timestamp{};
    std::array<double, kNumFeatures> features{};
    Label label = Label::N;
};

// One model input: T consecutive samples of a single active region.
struct Sequence {
    Mat window;  // T x kNumFeatures
    Label label = Label::N;
    std::string ar_id;
    Timestamp end{};
};

struct SequenceSet {
    std::vector<Sequence> sequences;
    std::size_t window_length = 0;
    std::size_t dropped_samples = 0;  // samples with fewer than T-1 predecessors

    std::size_t size() const noexcept { return sequences.size(); }
    bool empty() const noexcept { return sequences.empty(); }
};

// Per-feature normalization fitted on the training split.
using NormStats = ColumnStats;

Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

// Reads the documented CSV schema. Columns may appear in any order; extra
// columns are ignored. Result is sorted by (ar_id, timestamp).
std::vector<Sample> load_csv(const std::filesystem::path& path);
std::vector<Sample> parse_csv(std::istream& in, std::string_view source = "<stream>");

// Writes header ar_id,timestamp,<12 features in catalog order>,label.
void write_csv(std::ostream& out, const std::vector<Sample>& samples);
void write_csv(const std::filesystem::path& path, const std::vector<Sample>& samples);

Mat feature_matrix(const std::vector<Sample>& samples);

NormStats fit_norm(const std::vector<Sample>& train);
std::vector<Sample> normalize(std::vector<Sample> samples, const NormStats& stats);

// One window per sample with at least T-1 predecessors in the same AR.
SequenceSet windowize(std::vector<Sample> samples, std::size_t window_length);

struct Split {
    std::vector<Sample> train;
    std::vector<Sample> test;
    std::vector<std::string> train_ars;
    std::vector<std::string> test_ars;
};

// Active-region-level split; no AR appears on both sides.
Split split(const std::vector<Sample>& samples, double train_fraction, std::uint64_t seed);

struct PlantSpec {
    std::size_t dominant = 2;   // TOTPOT
    std::size_t correlate = 3;  // SAVNCPP
    double rho = 0.95;
    double label_noise = 0.01;
};

PlantSpec make_plant(std::string_view dominant, std::string_view correlate, double rho,
                     double label_noise = 0.01);

struct SynthConfig {
    std::size_t n_ars = 100;
    std::size_t samples_per_ar = 34;
    std::uint64_t seed = 42;
    PlantSpec plant{};
};

// Synthetic SHARP-like data: each feature follows a smooth per-AR latent
// process mapped to a physical scale. The dominant latent switches between an
// active and a quiet regime. A sample is P iff the trailing 3-step mean of the
// dominant latent is positive (the logistic of it exceeds 0.5), before label
// noise. The correlate is rho * dominant latent plus its own independent AR(1) noise.
std::vector<Sample> synth_generate(const SynthConfig& config);

nlohmann::json synth_manifest(const SynthConfig& config, const std::vector<Sample>& samples);

}  // namespace sxai
