#pragma once

#include "sxai/model.hpp"
#include "sxai/numerics.hpp"

#include <cmath>

namespace sxai::testing {

inline Mat random_window(Rng& rng, std::size_t T, std::size_t d, double scale = 1.0) {
    Mat w(T, d);
    for (double& v : w.flat()) v = scale * rng.normal();
    return w;
}

// Every parameter drawn from N(0, scale^2).
inline LstmParams random_params(Rng& rng, std::size_t d, std::size_t H, double scale = 0.5) {
    LstmParams p = LstmParams::zeros(d, H);
    for (auto& [name, block] : p.blocks())
        for (double& v : block) v = scale * rng.normal();
    p.b_out = scale * rng.normal();
    return p;
}

inline std::vector<Mat> random_background(Rng& rng, std::size_t k, std::size_t T, std::size_t d) {
    std::vector<Mat> out;
    for (std::size_t i = 0; i < k; ++i) out.push_back(random_window(rng, T, d));
    return out;
}

// Nonlinear single-step model used by explainer tests: f(x) = sigmoid(a.x + sum_ij B_ij x_i x_j).
class QuadraticModel final : public Model {
public:
    QuadraticModel(Vec a, Mat B) : a_(std::move(a)), B_(std::move(B)) {}
    std::size_t input_dim() const override { return a_.size(); }
    double predict(const Mat& w) const override { return 1.0 / (1.0 + std::exp(-logit(w))); }
    Mat input_gradient(const Mat& w) const override {
        Mat g(w.rows(), w.cols());
        const double p = predict(w);
        const std::size_t t = w.rows() - 1;
        for (std::size_t i = 0; i < a_.size(); ++i) {
            double d = a_[i];
            for (std::size_t j = 0; j < a_.size(); ++j) d += (B_(i, j) + B_(j, i)) * w(t, j);
            g(t, i) = p * (1 - p) * d;
        }
        return g;
    }

private:
    double logit(const Mat& w) const {
        const std::size_t t = w.rows() - 1;
        double z = 0;
        for (std::size_t i = 0; i < a_.size(); ++i) {
            z += a_[i] * w(t, i);
            for (std::size_t j = 0; j < a_.size(); ++j) z += B_(i, j) * w(t, i) * w(t, j);
        }
        return z;
    }
    Vec a_;
    Mat B_;
};

inline QuadraticModel random_quadratic(Rng& rng, std::size_t d) {
    Vec a(d);
    Mat B(d, d);
    for (double& v : a) v = rng.normal();
    for (double& v : B.flat()) v = 0.3 * rng.normal();
    return QuadraticModel(a, B);
}

}  // namespace sxai::testing
