#include "sxai/model.hpp"

#include "sxai/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace sxai {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

void check_window(const Mat& window, std::size_t input_dim) {
    if (window.rows() == 0) throw std::invalid_argument("model input must have at least one time step");
    if (window.cols() != input_dim) {
        throw std::invalid_argument(fmt::format("model expects {} features per step, got {}", input_dim,
                                                window.cols()));
    }
}

// out += M * x   (M: rows x cols)
void gemv_add(const Mat& M, const double* x, double* out) {
    const std::size_t cols = M.cols();
    for (std::size_t r = 0; r < M.rows(); ++r) {
        const double* m = M.row(r).data();
        double s = 0.0;
        for (std::size_t c = 0; c < cols; ++c) s += m[c] * x[c];
        out[r] += s;
    }
}

// out += M^T * y
void gemv_t_add(const Mat& M, const double* y, double* out) {
    const std::size_t cols = M.cols();
    for (std::size_t r = 0; r < M.rows(); ++r) {
        const double yr = y[r];
        if (yr == 0.0) continue;
        const double* m = M.row(r).data();
        for (std::size_t c = 0; c < cols; ++c) out[c] += m[c] * yr;
    }
}

// G += y x^T
void outer_add(Mat& G, const double* y, const double* x) {
    const std::size_t cols = G.cols();
    for (std::size_t r = 0; r < G.rows(); ++r) {
        const double yr = y[r];
        if (yr == 0.0) continue;
        double* g = G.row(r).data();
        for (std::size_t c = 0; c < cols; ++c) g[c] += yr * x[c];
    }
}

bool finite_span(std::span<const double> s) {
    return std::all_of(s.begin(), s.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

LinearModel::LinearModel(Vec weights, double bias) : weights_(std::move(weights)), bias_(bias) {
    if (weights_.empty()) throw std::invalid_argument("LinearModel: empty weight vector");
}

double LinearModel::predict(const Mat& window) const {
    check_window(window, weights_.size());
    double s = bias_;
    for (std::size_t t = 0; t < window.rows(); ++t)
        for (std::size_t j = 0; j < weights_.size(); ++j) s += weights_[j] * window(t, j);
    return s;
}

Mat LinearModel::input_gradient(const Mat& window) const {
    check_window(window, weights_.size());
    Mat g(window.rows(), window.cols());
    for (std::size_t t = 0; t < window.rows(); ++t) std::copy(weights_.begin(), weights_.end(), g.row(t).begin());
    return g;
}

LstmParams LstmParams::zeros(std::size_t input_dim, std::size_t hidden) {
    if (input_dim == 0 || hidden == 0) throw std::invalid_argument("LstmParams: dimensions must be positive");
    LstmParams p;
    p.input_dim = input_dim;
    p.hidden = hidden;
    for (Mat* m : {&p.W_i, &p.W_f, &p.W_o, &p.W_g}) *m = Mat(hidden, input_dim);
    for (Mat* m : {&p.U_i, &p.U_f, &p.U_o, &p.U_g, &p.W_a}) *m = Mat(hidden, hidden);
    for (Vec* v : {&p.b_i, &p.b_f, &p.b_o, &p.b_g, &p.b_a, &p.v, &p.w_out}) v->assign(hidden, 0.0);
    p.b_out = 0.0;
    return p;
}

LstmParams LstmParams::init(std::size_t input_dim, std::size_t hidden, std::uint64_t seed) {
    LstmParams p = zeros(input_dim, hidden);
    Rng rng(seed);
    const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
    for (auto& [name, block] : p.blocks())
        for (double& x : block) x = rng.uniform(-bound, bound);
    std::fill(p.b_f.begin(), p.b_f.end(), 1.0);
    return p;
}

std::vector<std::pair<std::string_view, std::span<double>>> LstmParams::blocks() {
    return {
        {"W_i", W_i.flat()}, {"W_f", W_f.flat()}, {"W_o", W_o.flat()}, {"W_g", W_g.flat()},
        {"U_i", U_i.flat()}, {"U_f", U_f.flat()}, {"U_o", U_o.flat()}, {"U_g", U_g.flat()},
        {"b_i", b_i},        {"b_f", b_f},        {"b_o", b_o},        {"b_g", b_g},
        {"W_a", W_a.flat()}, {"b_a", b_a},        {"v", v},            {"w_out", w_out},
        {"b_out", std::span<double>(&b_out, 1)},
    };
}

std::vector<std::pair<std::string_view, std::span<const double>>> LstmParams::blocks() const {
    auto mutable_blocks = const_cast<LstmParams*>(this)->blocks();
    std::vector<std::pair<std::string_view, std::span<const double>>> out;
    out.reserve(mutable_blocks.size());
    for (auto& [name, span] : mutable_blocks) out.emplace_back(name, span);
    return out;
}

bool LstmParams::all_finite() const {
    for (const auto& [name, block] : blocks())
        if (!finite_span(block)) return false;
    return true;
}

ForwardCache lstm_forward(const LstmParams& p, const Mat& window) {
    check_window(window, p.input_dim);
    const std::size_t T = window.rows();
    const std::size_t H = p.hidden;
    ForwardCache c;
    c.steps = T;
    c.x = window;
    for (Mat* m : {&c.gate_i, &c.gate_f, &c.gate_o, &c.gate_g, &c.cell, &c.cell_tanh, &c.hidden, &c.attn_hidden})
        *m = Mat(T, H);
    c.scores.assign(T, 0.0);

    Vec zi(H), zf(H), zo(H), zg(H);
    const Vec zero_h(H, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        const double* x = window.row(t).data();
        if (!finite_span(window.row(t))) throw OverflowError(fmt::format("non-finite input at step {}", t), t);
        const double* h_prev = t == 0 ? zero_h.data() : c.hidden.row(t - 1).data();
        const double* c_prev = t == 0 ? zero_h.data() : c.cell.row(t - 1).data();
        zi = p.b_i;
        zf = p.b_f;
        zo = p.b_o;
        zg = p.b_g;
        gemv_add(p.W_i, x, zi.data());
        gemv_add(p.W_f, x, zf.data());
        gemv_add(p.W_o, x, zo.data());
        gemv_add(p.W_g, x, zg.data());
        gemv_add(p.U_i, h_prev, zi.data());
        gemv_add(p.U_f, h_prev, zf.data());
        gemv_add(p.U_o, h_prev, zo.data());
        gemv_add(p.U_g, h_prev, zg.data());
        for (std::size_t k = 0; k < H; ++k) {
            if (!std::isfinite(zi[k]) || !std::isfinite(zf[k]) || !std::isfinite(zo[k]) || !std::isfinite(zg[k])) {
                throw OverflowError(fmt::format("non-finite LSTM gate pre-activation at step {}", t), t);
            }
            const double ig = sigmoid(zi[k]);
            const double fg = sigmoid(zf[k]);
            const double og = sigmoid(zo[k]);
            const double gg = std::tanh(zg[k]);
            const double cell = fg * c_prev[k] + ig * gg;
            const double ct = std::tanh(cell);
            c.gate_i(t, k) = ig;
            c.gate_f(t, k) = fg;
            c.gate_o(t, k) = og;
            c.gate_g(t, k) = gg;
            c.cell(t, k) = cell;
            c.cell_tanh(t, k) = ct;
            c.hidden(t, k) = og * ct;
        }
        // attention projection for this step
        Vec a = p.b_a;
        gemv_add(p.W_a, c.hidden.row(t).data(), a.data());
        double e = 0.0;
        for (std::size_t k = 0; k < H; ++k) {
            const double u = std::tanh(a[k]);
            c.attn_hidden(t, k) = u;
            e += p.v[k] * u;
        }
        if (!std::isfinite(e)) throw OverflowError(fmt::format("non-finite attention score at step {}", t), t);
        c.scores[t] = e;
    }

    const double emax = *std::max_element(c.scores.begin(), c.scores.end());
    c.attention.assign(T, 0.0);
    double z = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        c.attention[t] = std::exp(c.scores[t] - emax);
        z += c.attention[t];
    }
    for (double& a : c.attention) a /= z;

    c.context.assign(H, 0.0);
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t k = 0; k < H; ++k) c.context[k] += c.attention[t] * c.hidden(t, k);

    double logit = p.b_out;
    for (std::size_t k = 0; k < H; ++k) logit += p.w_out[k] * c.context[k];
    if (!std::isfinite(logit)) throw OverflowError(fmt::format("non-finite output logit at step {}", T - 1), T - 1);
    c.logit = logit;
    c.probability = sigmoid(logit);
    return c;
}

void lstm_backward(const LstmParams& p, const ForwardCache& c, double d_logit, LstmParams* g, Mat* dx) {
    const std::size_t T = c.steps;
    const std::size_t H = p.hidden;
    const std::size_t D = p.input_dim;
    if (dx) *dx = Mat(T, D);

    // output layer
    Vec d_ctx(H);
    for (std::size_t k = 0; k < H; ++k) d_ctx[k] = d_logit * p.w_out[k];
    if (g) {
        for (std::size_t k = 0; k < H; ++k) g->w_out[k] += d_logit * c.context[k];
        g->b_out += d_logit;
    }

    // context = sum_t alpha_t h_t
    Mat dh(T, H);
    Vec d_alpha(T, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        double s = 0.0;
        for (std::size_t k = 0; k < H; ++k) {
            dh(t, k) = c.attention[t] * d_ctx[k];
            s += d_ctx[k] * c.hidden(t, k);
        }
        d_alpha[t] = s;
    }
    // softmax
    double mean_d = 0.0;
    for (std::size_t t = 0; t < T; ++t) mean_d += c.attention[t] * d_alpha[t];
    Vec da(H);
    for (std::size_t t = 0; t < T; ++t) {
        const double de = c.attention[t] * (d_alpha[t] - mean_d);
        if (de == 0.0) continue;
        for (std::size_t k = 0; k < H; ++k) {
            const double u = c.attn_hidden(t, k);
            da[k] = de * p.v[k] * (1.0 - u * u);
            if (g) g->v[k] += de * u;
        }
        if (g) {
            outer_add(g->W_a, da.data(), c.hidden.row(t).data());
            for (std::size_t k = 0; k < H; ++k) g->b_a[k] += da[k];
        }
        gemv_t_add(p.W_a, da.data(), dh.row(t).data());
    }

    // backpropagation through time
    Vec dh_next(H, 0.0), dc_next(H, 0.0);
    Vec dzi(H), dzf(H), dzo(H), dzg(H);
    const Vec zero_h(H, 0.0);
    for (std::size_t t = T; t-- > 0;) {
        const double* c_prev = t == 0 ? zero_h.data() : c.cell.row(t - 1).data();
        for (std::size_t k = 0; k < H; ++k) {
            const double dht = dh(t, k) + dh_next[k];
            const double ig = c.gate_i(t, k), fg = c.gate_f(t, k), og = c.gate_o(t, k), gg = c.gate_g(t, k);
            const double ct = c.cell_tanh(t, k);
            const double dct = dc_next[k] + dht * og * (1.0 - ct * ct);
            dzo[k] = dht * ct * og * (1.0 - og);
            dzi[k] = dct * gg * ig * (1.0 - ig);
            dzf[k] = dct * c_prev[k] * fg * (1.0 - fg);
            dzg[k] = dct * ig * (1.0 - gg * gg);
            dc_next[k] = dct * fg;
        }
        for (std::size_t k = 0; k < H; ++k) {
            if (!std::isfinite(dzi[k] + dzf[k] + dzo[k] + dzg[k] + dc_next[k])) {
                throw OverflowError(fmt::format("non-finite gradient at step {}", t), t);
            }
        }
        const double* x = c.x.row(t).data();
        if (g) {
            outer_add(g->W_i, dzi.data(), x);
            outer_add(g->W_f, dzf.data(), x);
            outer_add(g->W_o, dzo.data(), x);
            outer_add(g->W_g, dzg.data(), x);
            if (t > 0) {
                const double* h_prev = c.hidden.row(t - 1).data();
                outer_add(g->U_i, dzi.data(), h_prev);
                outer_add(g->U_f, dzf.data(), h_prev);
                outer_add(g->U_o, dzo.data(), h_prev);
                outer_add(g->U_g, dzg.data(), h_prev);
            }
            for (std::size_t k = 0; k < H; ++k) {
                g->b_i[k] += dzi[k];
                g->b_f[k] += dzf[k];
                g->b_o[k] += dzo[k];
                g->b_g[k] += dzg[k];
            }
        }
        if (dx) {
            double* out = dx->row(t).data();
            gemv_t_add(p.W_i, dzi.data(), out);
            gemv_t_add(p.W_f, dzf.data(), out);
            gemv_t_add(p.W_o, dzo.data(), out);
            gemv_t_add(p.W_g, dzg.data(), out);
        }
        std::fill(dh_next.begin(), dh_next.end(), 0.0);
        if (t > 0) {
            gemv_t_add(p.U_i, dzi.data(), dh_next.data());
            gemv_t_add(p.U_f, dzf.data(), dh_next.data());
            gemv_t_add(p.U_o, dzo.data(), dh_next.data());
            gemv_t_add(p.U_g, dzg.data(), dh_next.data());
        }
    }
}

LstmModel::LstmModel(LstmParams params) : params_(std::move(params)) {
    if (params_.input_dim == 0 || params_.hidden == 0) throw std::invalid_argument("LstmModel: empty parameters");
    if (!params_.all_finite()) throw std::invalid_argument("LstmModel: non-finite parameters");
}

double LstmModel::predict(const Mat& window) const { return lstm_forward(params_, window).probability; }

Prediction LstmModel::forward(const Mat& window) const {
    ForwardCache c = lstm_forward(params_, window);
    return {c.probability, std::move(c.attention)};
}

ForwardCache LstmModel::forward_cached(const Mat& window) const { return lstm_forward(params_, window); }

Mat LstmModel::input_gradient(const Mat& window) const {
    const ForwardCache c = lstm_forward(params_, window);
    Mat dx;
    lstm_backward(params_, c, c.probability * (1.0 - c.probability), nullptr, &dx);
    return dx;
}

}  // namespace sxai
