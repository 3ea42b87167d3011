#include "sxai/model.hpp"

#include "sxai/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sxai {

namespace {

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

// -[y log p + (1-y) log(1-p)] written in terms of the logit.
double bce_from_logit(double logit, double y) { return softplus(logit) - y * logit; }

struct ClassWeights {
    double pos = 1.0;
    double neg = 1.0;
};

ClassWeights balance(const SequenceSet& set) {
    std::size_t pos = 0;
    for (const auto& s : set.sequences) pos += s.label == Label::P;
    const std::size_t neg = set.size() - pos;
    if (pos == 0 || neg == 0) throw InputError("training set must contain both P and N windows");
    const double n = static_cast<double>(set.size());
    return {n / (2.0 * static_cast<double>(pos)), n / (2.0 * static_cast<double>(neg))};
}

class Adam {
public:
    Adam(const LstmParams& shape, const TrainConfig& cfg) : cfg_(cfg) {
        std::size_t total = 0;
        for (const auto& [name, block] : shape.blocks()) total += block.size();
        m_.assign(total, 0.0);
        v_.assign(total, 0.0);
    }

    void step(LstmParams& params, const LstmParams& grads) {
        ++t_;
        const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
        auto pb = params.blocks();
        auto gb = grads.blocks();
        std::size_t off = 0;
        for (std::size_t b = 0; b < pb.size(); ++b) {
            auto p = pb[b].second;
            auto g = gb[b].second;
            for (std::size_t i = 0; i < p.size(); ++i, ++off) {
                m_[off] = cfg_.beta1 * m_[off] + (1.0 - cfg_.beta1) * g[i];
                v_[off] = cfg_.beta2 * v_[off] + (1.0 - cfg_.beta2) * g[i] * g[i];
                const double mhat = m_[off] / c1;
                const double vhat = v_[off] / c2;
                p[i] -= cfg_.learning_rate * mhat / (std::sqrt(vhat) + cfg_.epsilon);
            }
        }
    }

private:
    TrainConfig cfg_;
    std::vector<double> m_, v_;
    std::uint64_t t_ = 0;
};

void zero(LstmParams& g) {
    for (auto& [name, block] : g.blocks()) std::fill(block.begin(), block.end(), 0.0);
}

}  // namespace

TrainResult train(const SequenceSet& train_set, const TrainConfig& config) {
    if (train_set.empty()) throw InputError("training set is empty");
    if (config.hidden == 0 || config.batch == 0) throw InputError("hidden size and batch size must be positive");
    if (!(config.learning_rate > 0.0)) throw InputError("learning rate must be positive");
    const ClassWeights cw = balance(train_set);
    const std::size_t d = train_set.sequences.front().window.cols();

    TrainResult out;
    out.params = LstmParams::init(d, config.hidden, derive_seed(config.seed, 0));
    out.pos_weight = cw.pos;
    out.neg_weight = cw.neg;
    if (config.epochs == 0) return out;

    Rng order_rng(derive_seed(config.seed, 1));
    Adam adam(out.params, config);
    LstmParams grads = LstmParams::zeros(d, config.hidden);
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        order_rng.shuffle(order);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch) {
            const std::size_t stop = std::min(order.size(), start + config.batch);
            const double inv_batch = 1.0 / static_cast<double>(stop - start);
            zero(grads);
            for (std::size_t k = start; k < stop; ++k) {
                const Sequence& s = train_set.sequences[order[k]];
                const double y = s.label == Label::P ? 1.0 : 0.0;
                const double w = s.label == Label::P ? cw.pos : cw.neg;
                const ForwardCache cache = lstm_forward(out.params, s.window);
                epoch_loss += w * bce_from_logit(cache.logit, y);
                lstm_backward(out.params, cache, w * (cache.probability - y) * inv_batch, &grads, nullptr);
            }
            adam.step(out.params, grads);
        }
        out.loss_history.push_back(epoch_loss / static_cast<double>(order.size()));
        if (!out.params.all_finite()) throw NumericError("training diverged: non-finite parameters");
    }
    return out;
}

double weighted_bce(const LstmModel& model, const SequenceSet& set, double pos_weight, double neg_weight) {
    if (set.empty()) return 0.0;
    double total = 0.0;
    for (const auto& s : set.sequences) {
        const double y = s.label == Label::P ? 1.0 : 0.0;
        const double w = s.label == Label::P ? pos_weight : neg_weight;
        total += w * bce_from_logit(lstm_forward(model.params(), s.window).logit, y);
    }
    return total / static_cast<double>(set.size());
}

SkillScore true_skill_statistic(const ConfusionCounts& c) {
    SkillScore s;
    const std::size_t pos = c.tp + c.fn;
    const std::size_t neg = c.fp + c.tn;
    if (pos > 0) s.sensitivity = static_cast<double>(c.tp) / static_cast<double>(pos);
    if (neg > 0) s.false_alarm = static_cast<double>(c.fp) / static_cast<double>(neg);
    s.degenerate = pos == 0 || neg == 0;
    s.tss = s.sensitivity - s.false_alarm;
    return s;
}

Evaluation evaluate(const Model& model, const SequenceSet& test, double threshold) {
    if (test.empty()) throw InputError("evaluation set is empty");
    Evaluation e;
    for (const auto& s : test.sequences) {
        const bool predicted = model.predict(s.window) >= threshold;
        const bool actual = s.label == Label::P;
        if (predicted && actual) ++e.counts.tp;
        else if (predicted) ++e.counts.fp;
        else if (actual) ++e.counts.fn;
        else ++e.counts.tn;
    }
    e.skill = true_skill_statistic(e.counts);
    return e;
}

}  // namespace sxai
