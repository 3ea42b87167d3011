#include "sxai/shap.hpp"

#include "sxai/error.hpp"
#include "sxai/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace sxai {

namespace {

void check_inputs(const Model& model, const Mat& sample, const Background& background) {
    if (background.empty()) throw InputError("background set must contain at least one window");
    if (sample.cols() != model.input_dim()) {
        throw InputError(fmt::format("sample has {} features, model expects {}", sample.cols(), model.input_dim()));
    }
    for (const auto& b : background) {
        if (b.rows() != sample.rows() || b.cols() != sample.cols()) {
            throw InputError("background window shape does not match the explained sample");
        }
    }
}

double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(r);
}

Coalition full_mask(std::size_t d) { return d >= 64 ? ~Coalition{0} : (Coalition{1} << d) - 1; }

}  // namespace

Background sample_background(const SequenceSet& train, std::size_t k, std::uint64_t seed) {
    if (train.empty()) throw InputError("cannot draw a background from an empty training set");
    if (k == 0) throw InputError("background size must be at least 1");
    std::vector<std::size_t> idx(train.size());
    std::iota(idx.begin(), idx.end(), 0);
    Background out;
    if (k >= idx.size()) {
        for (const auto& s : train.sequences) out.push_back(s.window);
        return out;
    }
    Rng rng(seed);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.below(idx.size() - i);
        std::swap(idx[i], idx[j]);
    }
    std::sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
    for (std::size_t i = 0; i < k; ++i) out.push_back(train.sequences[idx[i]].window);
    return out;
}

std::string_view method_name(ShapMethod m) {
    switch (m) {
        case ShapMethod::exact: return "exact";
        case ShapMethod::kernel: return "kernel";
        case ShapMethod::gradient: return "gradient";
    }
    return "unknown";
}

std::optional<ShapMethod> parse_method(std::string_view name) {
    if (name == "exact") return ShapMethod::exact;
    if (name == "kernel") return ShapMethod::kernel;
    if (name == "gradient") return ShapMethod::gradient;
    return std::nullopt;
}

Coalition coalition_of(std::span<const std::size_t> features) {
    Coalition m = 0;
    for (std::size_t f : features) {
        if (f >= 64) throw std::invalid_argument("coalition_of: feature index out of range");
        m |= Coalition{1} << f;
    }
    return m;
}

Mat mix(const Mat& sample, const Mat& background, Coalition coalition) {
    Mat out = background;
    for (std::size_t j = 0; j < sample.cols(); ++j) {
        if (!((coalition >> j) & 1U)) continue;
        for (std::size_t t = 0; t < sample.rows(); ++t) out(t, j) = sample(t, j);
    }
    return out;
}

double coalition_value(const Model& model, const Mat& sample, const Background& background, Coalition coalition) {
    check_inputs(model, sample, background);
    const Coalition full = full_mask(sample.cols());
    if ((coalition & full) == full) return model.predict(sample);
    double total = 0.0;
    for (const auto& b : background) total += model.predict(mix(sample, b, coalition));
    return total / static_cast<double>(background.size());
}

ShapExplanation exact_shapley(const Model& model, const Mat& sample, const Background& background) {
    check_inputs(model, sample, background);
    const std::size_t d = sample.cols();
    if (d > kExactFeatureGuard) {
        throw InputError(fmt::format("exact Shapley enumeration is limited to {} features (got {}); use kernel_shap",
                                     kExactFeatureGuard, d));
    }
    const std::size_t n_masks = std::size_t{1} << d;
    Vec value(n_masks);
    for (std::size_t m = 0; m < n_masks; ++m) value[m] = coalition_value(model, sample, background, m);

    // weight(s) = s! (d-1-s)! / d! = 1 / (d * C(d-1, s))
    Vec weight(d);
    for (std::size_t s = 0; s < d; ++s) weight[s] = 1.0 / (static_cast<double>(d) * binomial(d - 1, s));

    ShapExplanation e;
    e.method = ShapMethod::exact;
    e.phi.assign(d, 0.0);
    e.base = value[0];
    e.fx = value[n_masks - 1];
    for (std::size_t i = 0; i < d; ++i) {
        const std::size_t bit = std::size_t{1} << i;
        double phi = 0.0;
        for (std::size_t m = 0; m < n_masks; ++m) {
            if (m & bit) continue;
            const auto s = static_cast<std::size_t>(std::popcount(m));
            phi += weight[s] * (value[m | bit] - value[m]);
        }
        e.phi[i] = phi;
    }
    return e;
}

double shapley_kernel_weight(std::size_t d, std::size_t size) {
    if (size == 0 || size >= d) throw std::invalid_argument("shapley_kernel_weight: size must lie in [1, d-1]");
    return static_cast<double>(d - 1) /
           (binomial(d, size) * static_cast<double>(size) * static_cast<double>(d - size));
}

ShapExplanation kernel_shap(const Model& model, const Mat& sample, const Background& background,
                            const KernelOptions& options) {
    check_inputs(model, sample, background);
    const std::size_t d = sample.cols();
    if (d >= 63) throw InputError("kernel_shap supports at most 62 features");
    if (options.n_coalitions < d + 2) {
        throw InputError(fmt::format("kernel_shap needs n_coalitions >= d + 2 = {}", d + 2));
    }
    ShapExplanation e;
    e.method = ShapMethod::kernel;
    e.base = coalition_value(model, sample, background, 0);
    e.fx = model.predict(sample);
    const double gap = e.fx - e.base;
    if (d == 1) {
        e.phi = {gap};
        return e;
    }

    std::vector<Coalition> masks;
    Vec weights;
    const Coalition full = full_mask(d);
    const bool enumerate = d <= 30 && options.n_coalitions >= (std::size_t{1} << d) - 2;
    if (enumerate) {
        for (Coalition m = 1; m < full; ++m) {
            masks.push_back(m);
            weights.push_back(shapley_kernel_weight(d, static_cast<std::size_t>(std::popcount(m))));
        }
    } else {
        // Sizes drawn with probability proportional to their total kernel mass,
        // so each sampled coalition carries unit weight. Complements are paired.
        Vec size_mass(d - 1);
        for (std::size_t s = 1; s < d; ++s)
            size_mass[s - 1] = 1.0 / (static_cast<double>(s) * static_cast<double>(d - s));
        Rng rng(options.seed);
        std::vector<std::size_t> idx(d);
        while (masks.size() < options.n_coalitions) {
            const std::size_t s = 1 + rng.categorical(size_mass);
            std::iota(idx.begin(), idx.end(), 0);
            Coalition m = 0;
            for (std::size_t k = 0; k < s; ++k) {
                const std::size_t j = k + rng.below(d - k);
                std::swap(idx[k], idx[j]);
                m |= Coalition{1} << idx[k];
            }
            masks.push_back(m);
            weights.push_back(1.0);
            if (masks.size() < options.n_coalitions) {
                masks.push_back(full & ~m);
                weights.push_back(1.0);
            }
        }
    }

    std::map<Coalition, double> cache;
    auto value_of = [&](Coalition m) {
        auto it = cache.find(m);
        if (it != cache.end()) return it->second;
        const double v = coalition_value(model, sample, background, m);
        cache.emplace(m, v);
        return v;
    };

    // y_z - base - z_last * gap = sum_{i<last} phi_i (z_i - z_last)
    const std::size_t last = d - 1;
    Mat X(masks.size(), last);
    Vec y(masks.size());
    for (std::size_t r = 0; r < masks.size(); ++r) {
        const Coalition m = masks[r];
        const double z_last = static_cast<double>((m >> last) & 1U);
        for (std::size_t i = 0; i < last; ++i) X(r, i) = static_cast<double>((m >> i) & 1U) - z_last;
        y[r] = value_of(m) - e.base - z_last * gap;
    }
    Vec beta;
    try {
        beta = weighted_least_squares(X, y, weights);
    } catch (const SingularSystemError& err) {
        throw SingularSystemError(fmt::format("kernel_shap regression is singular ({}); increase n_coalitions",
                                              err.what()));
    } catch (const std::invalid_argument& err) {
        throw SingularSystemError(fmt::format("kernel_shap regression is underdetermined ({}); increase n_coalitions",
                                              err.what()));
    }
    e.phi.assign(d, 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < last; ++i) {
        e.phi[i] = beta[i];
        sum += beta[i];
    }
    e.phi[last] = gap - sum;
    return e;
}

ShapExplanation gradient_shap(const Model& model, const Mat& sample, const Background& background,
                              const GradientOptions& options) {
    check_inputs(model, sample, background);
    if (options.n_steps == 0) throw InputError("gradient_shap needs n_steps >= 1");
    const std::size_t T = sample.rows();
    const std::size_t d = sample.cols();
    Rng rng(options.seed);
    Mat acc(T, d);
    Mat point(T, d);
    double base = 0.0;
    for (const auto& b : background) {
        base += model.predict(b);
        for (std::size_t k = 0; k < options.n_steps; ++k) {
            const double alpha =
                (static_cast<double>(k) + rng.uniform()) / static_cast<double>(options.n_steps);
            for (std::size_t t = 0; t < T; ++t)
                for (std::size_t j = 0; j < d; ++j) point(t, j) = b(t, j) + alpha * (sample(t, j) - b(t, j));
            const Mat g = model.input_gradient(point);
            for (std::size_t t = 0; t < T; ++t)
                for (std::size_t j = 0; j < d; ++j) acc(t, j) += (sample(t, j) - b(t, j)) * g(t, j);
        }
    }
    const double draws = static_cast<double>(background.size() * options.n_steps);
    ShapExplanation e;
    e.method = ShapMethod::gradient;
    e.base = base / static_cast<double>(background.size());
    e.fx = model.predict(sample);
    e.phi.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t t = 0; t < T; ++t) s += acc(t, j);
        e.phi[j] = s / draws;
    }
    return e;
}

double base_value(const Model& model, std::span<const Mat> windows) {
    if (windows.empty()) throw InputError("base value needs a non-empty training set");
    double total = 0.0;
    for (const auto& w : windows) total += model.predict(w);
    return total / static_cast<double>(windows.size());
}

double base_value(const Model& model, const SequenceSet& windows) {
    if (windows.empty()) throw InputError("base value needs a non-empty training set");
    double total = 0.0;
    for (const auto& s : windows.sequences) total += model.predict(s.window);
    return total / static_cast<double>(windows.size());
}

std::vector<ShapExplanation> explain_all(const Model& model, std::span<const Mat> windows,
                                         const Background& background, const ExplainOptions& options) {
    std::vector<ShapExplanation> out(windows.size());
    parallel_for(windows.size(), options.threads, [&](std::size_t i) {
        const std::uint64_t seed = derive_seed(options.seed, i);
        switch (options.method) {
            case ShapMethod::exact: out[i] = exact_shapley(model, windows[i], background); break;
            case ShapMethod::kernel:
                out[i] = kernel_shap(model, windows[i], background, {options.n_coalitions, seed});
                break;
            case ShapMethod::gradient:
                out[i] = gradient_shap(model, windows[i], background, {options.n_steps, seed});
                break;
        }
    });
    return out;
}

GlobalImportance global_importance(std::span<const ShapExplanation> explanations) {
    if (explanations.empty()) throw InputError("global importance needs at least one explanation");
    const std::size_t d = explanations.front().phi.size();
    const ShapMethod method = explanations.front().method;
    GlobalImportance g;
    g.mean_abs.assign(d, 0.0);
    for (const auto& e : explanations) {
        if (e.method != method) throw InputError("global importance over explanations from mixed methods");
        if (e.phi.size() != d) throw InputError("explanations disagree on the number of features");
        for (std::size_t j = 0; j < d; ++j) g.mean_abs[j] += std::abs(e.phi[j]);
    }
    for (double& v : g.mean_abs) v /= static_cast<double>(explanations.size());
    g.ranking.resize(d);
    std::iota(g.ranking.begin(), g.ranking.end(), 0);
    std::stable_sort(g.ranking.begin(), g.ranking.end(),
                     [&](std::size_t a, std::size_t b) { return g.mean_abs[a] > g.mean_abs[b]; });
    return g;
}

std::vector<Vec> decision_path(std::span<const ShapExplanation> explanations, std::span<const std::size_t> ranking,
                               double base) {
    std::vector<Vec> paths;
    paths.reserve(explanations.size());
    for (const auto& e : explanations) {
        if (ranking.size() != e.phi.size()) throw InputError("decision path ranking must cover every feature");
        Vec path;
        path.reserve(ranking.size() + 1);
        double running = base;
        path.push_back(running);
        for (auto it = ranking.rbegin(); it != ranking.rend(); ++it) {
            running += e.phi.at(*it);
            path.push_back(running);
        }
        paths.push_back(std::move(path));
    }
    return paths;
}

}  // namespace sxai
