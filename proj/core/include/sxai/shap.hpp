#pragma once

#include "sxai/model.hpp"
#include "sxai/numerics.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace sxai {

// Reference windows used to impute absent features and anchor gradient paths.
using Background = std::vector<Mat>;

// k windows drawn uniformly without replacement (all of them when k >= size).
Background sample_background(const SequenceSet& train, std::size_t k, std::uint64_t seed);

enum class ShapMethod { exact, kernel, gradient };

std::string_view method_name(ShapMethod m);
std::optional<ShapMethod> parse_method(std::string_view name);

struct ShapExplanation {
    Vec phi;           // one attribution per feature, probability units
    double base = 0.0; // expected model output over the background
    double fx = 0.0;   // model output on the explained window
    ShapMethod method = ShapMethod::exact;
};

// Bit j of the mask set <=> feature j is taken from the sample.
using Coalition = std::uint64_t;

Coalition coalition_of(std::span<const std::size_t> features);

// Sample columns for features in the coalition (all time steps), background otherwise.
Mat mix(const Mat& sample, const Mat& background, Coalition coalition);

// Mean model output over the background of mix(sample, b, coalition).
double coalition_value(const Model& model, const Mat& sample, const Background& background, Coalition coalition);

inline constexpr std::size_t kExactFeatureGuard = 20;

// Shapley values by enumerating all 2^d coalitions.
ShapExplanation exact_shapley(const Model& model, const Mat& sample, const Background& background);

struct KernelOptions {
    // Coalitions to evaluate (excluding empty and full). At least d + 2.
    // Values >= 2^d - 2 switch to full enumeration with exact kernel weights.
    std::size_t n_coalitions = 2048;
    std::uint64_t seed = 42;
};

// Shapley kernel weight pi(z) = (d-1) / (C(d,|z|) |z| (d-|z|)).
double shapley_kernel_weight(std::size_t d, std::size_t size);

// Weighted-regression estimate with efficiency enforced by eliminating the
// last coefficient.
ShapExplanation kernel_shap(const Model& model, const Mat& sample, const Background& background,
                            const KernelOptions& options = {});

struct GradientOptions {
    std::size_t n_steps = 5;  // stratified interpolation points per background window
    std::uint64_t seed = 42;
};

// Expected gradients: mean over (b, alpha) of (x - b) * grad f(b + alpha (x - b)),
// summed over time steps per feature.
ShapExplanation gradient_shap(const Model& model, const Mat& sample, const Background& background,
                              const GradientOptions& options = {});

// Mean model output over the given windows.
double base_value(const Model& model, std::span<const Mat> windows);
double base_value(const Model& model, const SequenceSet& windows);

struct ExplainOptions {
    ShapMethod method = ShapMethod::gradient;
    std::size_t n_coalitions = 2048;
    std::size_t n_steps = 5;
    std::uint64_t seed = 42;
    std::size_t threads = 1;
};

// Explains every window. Sample i uses sub-seed derive_seed(seed, i), so the
// result does not depend on the thread count.
std::vector<ShapExplanation> explain_all(const Model& model, std::span<const Mat> windows,
                                         const Background& background, const ExplainOptions& options);

struct GlobalImportance {
    Vec mean_abs;                      // per feature, catalog order
    std::vector<std::size_t> ranking;  // most important first; ties in catalog order
};

GlobalImportance global_importance(std::span<const ShapExplanation> explanations);

// Per sample: base, then running sums adding phi from least to most important.
std::vector<Vec> decision_path(std::span<const ShapExplanation> explanations,
                               std::span<const std::size_t> ranking, double base);

}  // namespace sxai
