#pragma once

#include "sxai/model.hpp"
#include "sxai/numerics.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sxai {

inline constexpr std::size_t kQuartileBins = 4;

struct BinStats {
    std::size_t count = 0;
    double frequency = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

// Quartile discretizer. Bin 0: x <= q25, 1: q25 < x <= q50, 2: q50 < x <= q75, 3: x > q75.
struct Discretizer {
    std::vector<std::array<double, 3>> cuts;
    std::vector<std::array<BinStats, kQuartileBins>> bins;
    std::vector<std::array<bool, kQuartileBins>> collapsed;  // bin received no training rows
    Vec train_mean;
    Vec train_std;  // population; 1 for constant features

    std::size_t num_features() const noexcept { return cuts.size(); }
    std::size_t bin_of(std::size_t feature, double value) const;
};

// Fits on training rows (n x d, n >= 4).
Discretizer discretizer_fit(const Mat& train_rows);

struct Perturbation {
    Mat interpretable;  // n x d
    Mat raw;            // n x d
};

// Discretized sampling. Row 0 is the sample itself (all-ones interpretable row).
Perturbation perturb(std::span<const double> sample, const Discretizer& disc, std::size_t n, std::uint64_t seed);

// Raw sampling: rows drawn from N(train_mean, train_std); interpretable rows
// are the standardized raw values. Row 0 is the sample itself.
Perturbation perturb_raw(std::span<const double> sample, const Discretizer& disc, std::size_t n,
                         std::uint64_t seed);

double default_kernel_width(std::size_t d);

// exp(-D^2 / width^2), D = Euclidean distance of each row from the all-ones row.
Vec proximity(const Mat& interpretable, double width);
// Same kernel with an explicit reference row.
Vec proximity(const Mat& rows, std::span<const double> reference, double width);

// "f <= a", "a < f <= b" or "f > a" for the bin the value falls in, two decimals.
std::string rule_text(std::string_view feature, double value, const std::array<double, 3>& cuts);

enum class SamplingMode { discretized, raw };

struct LimeOptions {
    std::size_t n = 5000;
    std::size_t k = 12;
    double width = 0.0;  // <= 0 selects default_kernel_width(d)
    double lambda = 1.0;
    std::uint64_t seed = 42;
    SamplingMode mode = SamplingMode::discretized;
};

struct LimeEntry {
    std::size_t feature = 0;
    std::string feature_name;
    std::string rule;
    double weight = 0.0;
};

struct LimeExplanation {
    std::vector<LimeEntry> entries;  // ranked by |weight| descending
    Vec coefficients;                // per feature, 0 for dropped columns
    double intercept = 0.0;
    double local_pred = 0.0;         // surrogate at the self row
    double model_pred = 0.0;         // model at the self row
    double fidelity = 0.0;           // weighted R^2 on the perturbations
    std::vector<std::size_t> dropped_features;
    std::vector<std::string> flags;
};

// Maps a perturbed feature row to a model input window.
using WindowBuilder = std::function<Mat(std::span<const double>)>;

// Replaces the final time step of `window`; earlier steps stay fixed.
WindowBuilder final_step_builder(Mat window);

LimeExplanation explain_local(const Model& model, const WindowBuilder& builder, std::span<const double> sample,
                              const Discretizer& disc, const LimeOptions& options = {});

// Explains the final step of a window using final_step_builder.
LimeExplanation explain_local(const Model& model, const Mat& window, const Discretizer& disc,
                              const LimeOptions& options = {});

}  // namespace sxai
