#pragma once

#include "sxai/data.hpp"
#include "sxai/numerics.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace sxai {

// Black-box scalar classifier over T x d windows. Implementations must be
// safe to call concurrently from several threads.
class Model {
public:
    virtual ~Model() = default;
    virtual std::size_t input_dim() const = 0;
    // Probability of the positive class.
    virtual double predict(const Mat& window) const = 0;
    // d predict / d window, same shape as window.
    virtual Mat input_gradient(const Mat& window) const = 0;
};

// f(x) = bias + sum_t weights . x_t. With T = 1 this is an ordinary linear model.
class LinearModel final : public Model {
public:
    LinearModel(Vec weights, double bias = 0.0);

    std::size_t input_dim() const override { return weights_.size(); }
    double predict(const Mat& window) const override;
    Mat input_gradient(const Mat& window) const override;

    const Vec& weights() const noexcept { return weights_; }
    double bias() const noexcept { return bias_; }

private:
    Vec weights_;
    double bias_;
};

struct LstmParams {
    std::size_t input_dim = 0;
    std::size_t hidden = 0;

    // Gates: input, forget, output, candidate.
    Mat W_i, W_f, W_o, W_g;  // hidden x input_dim
    Mat U_i, U_f, U_o, U_g;  // hidden x hidden
    Vec b_i, b_f, b_o, b_g;  // hidden

    // Additive attention: e_t = v . tanh(W_a h_t + b_a).
    Mat W_a;  // hidden x hidden
    Vec b_a;  // hidden
    Vec v;    // hidden

    Vec w_out;  // hidden
    double b_out = 0.0;

    static LstmParams zeros(std::size_t input_dim, std::size_t hidden);
    // Uniform(-1/sqrt(H), 1/sqrt(H)) everywhere, forget-gate bias set to +1.
    static LstmParams init(std::size_t input_dim, std::size_t hidden, std::uint64_t seed);

    // Named views of every parameter array, in a fixed order.
    std::vector<std::pair<std::string_view, std::span<double>>> blocks();
    std::vector<std::pair<std::string_view, std::span<const double>>> blocks() const;

    bool all_finite() const;
    friend bool operator==(const LstmParams&, const LstmParams&) = default;
};

struct Prediction {
    double probability = 0.5;
    Vec attention;  // one weight per time step, sums to 1
};

// Activations kept from a forward pass for reverse-mode differentiation.
struct ForwardCache {
    std::size_t steps = 0;
    Mat x;                          // T x d
    Mat gate_i, gate_f, gate_o, gate_g, cell, cell_tanh, hidden;  // T x H
    Mat attn_hidden;                // T x H, tanh(W_a h_t + b_a)
    Vec scores;                     // T
    Vec attention;                  // T
    Vec context;                    // H
    double logit = 0.0;
    double probability = 0.5;
};

class LstmModel final : public Model {
public:
    explicit LstmModel(LstmParams params);

    std::size_t input_dim() const override { return params_.input_dim; }
    double predict(const Mat& window) const override;
    Mat input_gradient(const Mat& window) const override;

    Prediction forward(const Mat& window) const;
    ForwardCache forward_cached(const Mat& window) const;

    const LstmParams& params() const noexcept { return params_; }

private:
    LstmParams params_;
};

// Forward pass. Throws OverflowError naming the step on a non-finite activation.
ForwardCache lstm_forward(const LstmParams& params, const Mat& window);

// Reverse pass from d(loss)/d(logit). Either output may be null.
// Parameter gradients are accumulated into *param_grads (not reset).
void lstm_backward(const LstmParams& params, const ForwardCache& cache, double d_logit,
                   LstmParams* param_grads, Mat* input_grads);

struct TrainConfig {
    std::size_t hidden = 32;
    std::size_t epochs = 30;
    std::size_t batch = 32;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t seed = 42;
};

struct TrainResult {
    LstmParams params;
    Vec loss_history;  // class-weighted mean BCE per epoch
    double pos_weight = 1.0;
    double neg_weight = 1.0;
};

// Adam on class-balanced binary cross-entropy. Deterministic for a fixed seed.
TrainResult train(const SequenceSet& train_set, const TrainConfig& config);

// Class-weighted mean BCE of the model over a set, with the given class weights.
double weighted_bce(const LstmModel& model, const SequenceSet& set, double pos_weight, double neg_weight);

struct ConfusionCounts {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::size_t total() const noexcept { return tp + fp + tn + fn; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct SkillScore {
    double tss = 0.0;
    double sensitivity = 0.0;     // TP / (TP + FN)
    double false_alarm = 0.0;     // FP / (FP + TN)
    bool degenerate = false;      // a class was absent; its term contributed 0
};

// TSS = TP/(TP+FN) - FP/(FP+TN).
SkillScore true_skill_statistic(const ConfusionCounts& counts);

struct Evaluation {
    ConfusionCounts counts;
    SkillScore skill;
};

Evaluation evaluate(const Model& model, const SequenceSet& test, double threshold = 0.5);

}  // namespace sxai
