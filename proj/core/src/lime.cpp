#include "sxai/lime.hpp"

#include "sxai/catalog.hpp"
#include "sxai/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>
#include <fmt/format.h>

namespace sxai {

namespace {

constexpr std::array<double, 3> kQuartileProbs{0.25, 0.5, 0.75};

std::string name_of(std::size_t feature, std::size_t d) {
    if (d == kNumFeatures) return std::string(feature_name(feature));
    return fmt::format("x{}", feature);
}

std::string two_decimals(double v) {
    std::string s = fmt::format("{:.2f}", v);
    if (s == "-0.00") s = "0.00";
    return s;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) { return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p); }

// Truncated normal on [lo, hi] by inverse CDF.
double truncated_normal(Rng& rng, double mean, double sd, double lo, double hi) {
    const double u = rng.uniform();
    if (!(sd > 0.0) || !(hi > lo)) return std::clamp(mean, lo, hi);
    const double a = normal_cdf((lo - mean) / sd);
    const double b = normal_cdf((hi - mean) / sd);
    if (!(b - a > 1e-12)) return lo + u * (hi - lo);
    const double p = std::clamp(a + u * (b - a), 1e-300, 1.0 - 1e-16);
    return std::clamp(mean + sd * normal_quantile(p), lo, hi);
}

}  // namespace

std::size_t Discretizer::bin_of(std::size_t feature, double value) const {
    const auto& c = cuts.at(feature);
    if (value <= c[0]) return 0;
    if (value <= c[1]) return 1;
    if (value <= c[2]) return 2;
    return 3;
}

Discretizer discretizer_fit(const Mat& train_rows) {
    if (train_rows.rows() < 4) throw InputError("discretizer needs at least 4 training rows");
    const std::size_t d = train_rows.cols();
    const auto n = static_cast<double>(train_rows.rows());
    Discretizer disc;
    const ColumnStats stats = zscore_fit(train_rows);
    disc.train_mean = stats.mean;
    disc.train_std = stats.stddev;
    for (std::size_t j = 0; j < d; ++j) {
        const Vec col = train_rows.column(j);
        const Vec q = quantiles(col, kQuartileProbs);
        disc.cuts.push_back({q[0], q[1], q[2]});

        std::array<std::vector<double>, kQuartileBins> members;
        for (double v : col) members[disc.bin_of(j, v)].push_back(v);
        std::array<BinStats, kQuartileBins> bins{};
        std::array<bool, kQuartileBins> collapsed{};
        for (std::size_t b = 0; b < kQuartileBins; ++b) {
            const auto& m = members[b];
            collapsed[b] = m.empty();
            if (m.empty()) continue;
            BinStats& s = bins[b];
            s.count = m.size();
            s.frequency = static_cast<double>(m.size()) / n;
            s.mean = std::accumulate(m.begin(), m.end(), 0.0) / static_cast<double>(m.size());
            double ss = 0.0;
            for (double v : m) ss += (v - s.mean) * (v - s.mean);
            s.stddev = std::sqrt(ss / static_cast<double>(m.size()));
            s.min = *std::min_element(m.begin(), m.end());
            s.max = *std::max_element(m.begin(), m.end());
        }
        disc.bins.push_back(bins);
        disc.collapsed.push_back(collapsed);
    }
    return disc;
}

Perturbation perturb(std::span<const double> sample, const Discretizer& disc, std::size_t n, std::uint64_t seed) {
    const std::size_t d = disc.num_features();
    if (sample.size() != d) throw InputError("perturb: sample width does not match the discretizer");
    if (n == 0) throw InputError("perturb: n must be at least 1");
    Perturbation p{Mat(n, d), Mat(n, d)};
    std::vector<std::size_t> own_bin(d);
    for (std::size_t j = 0; j < d; ++j) {
        own_bin[j] = disc.bin_of(j, sample[j]);
        p.interpretable(0, j) = 1.0;
        p.raw(0, j) = sample[j];
    }
    Rng rng(seed);
    std::array<double, kQuartileBins> freq{};
    for (std::size_t r = 1; r < n; ++r) {
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t b = 0; b < kQuartileBins; ++b) freq[b] = disc.bins[j][b].frequency;
            const std::size_t bin = rng.categorical(freq);
            const BinStats& s = disc.bins[j][bin];
            p.raw(r, j) = truncated_normal(rng, s.mean, s.stddev, s.min, s.max);
            p.interpretable(r, j) = bin == own_bin[j] ? 1.0 : 0.0;
        }
    }
    return p;
}

Perturbation perturb_raw(std::span<const double> sample, const Discretizer& disc, std::size_t n,
                         std::uint64_t seed) {
    const std::size_t d = disc.num_features();
    if (sample.size() != d) throw InputError("perturb_raw: sample width does not match the discretizer");
    if (n == 0) throw InputError("perturb_raw: n must be at least 1");
    Perturbation p{Mat(n, d), Mat(n, d)};
    for (std::size_t j = 0; j < d; ++j) {
        p.raw(0, j) = sample[j];
        p.interpretable(0, j) = (sample[j] - disc.train_mean[j]) / disc.train_std[j];
    }
    Rng rng(seed);
    for (std::size_t r = 1; r < n; ++r) {
        for (std::size_t j = 0; j < d; ++j) {
            const double z = rng.normal();
            p.interpretable(r, j) = z;
            p.raw(r, j) = disc.train_mean[j] + z * disc.train_std[j];
        }
    }
    return p;
}

double default_kernel_width(std::size_t d) { return 0.75 * std::sqrt(static_cast<double>(d)); }

Vec proximity(const Mat& rows, std::span<const double> reference, double width) {
    if (!(width > 0.0)) throw InputError("kernel width must be positive");
    if (reference.size() != rows.cols()) throw std::invalid_argument("proximity: reference width mismatch");
    Vec w(rows.rows());
    const double w2 = width * width;
    for (std::size_t r = 0; r < rows.rows(); ++r) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < rows.cols(); ++j) {
            const double diff = rows(r, j) - reference[j];
            d2 += diff * diff;
        }
        w[r] = std::exp(-d2 / w2);
    }
    return w;
}

Vec proximity(const Mat& interpretable, double width) {
    const Vec ones(interpretable.cols(), 1.0);
    return proximity(interpretable, ones, width);
}

std::string rule_text(std::string_view feature, double value, const std::array<double, 3>& cuts) {
    if (value <= cuts[0]) return fmt::format("{} <= {}", feature, two_decimals(cuts[0]));
    if (value <= cuts[1]) return fmt::format("{} < {} <= {}", two_decimals(cuts[0]), feature, two_decimals(cuts[1]));
    if (value <= cuts[2]) return fmt::format("{} < {} <= {}", two_decimals(cuts[1]), feature, two_decimals(cuts[2]));
    return fmt::format("{} > {}", feature, two_decimals(cuts[2]));
}

WindowBuilder final_step_builder(Mat window) {
    if (window.rows() == 0) throw InputError("final_step_builder: empty window");
    return [window = std::move(window)](std::span<const double> row) {
        Mat w = window;
        if (row.size() != w.cols()) throw std::invalid_argument("final_step_builder: row width mismatch");
        std::copy(row.begin(), row.end(), w.row(w.rows() - 1).begin());
        return w;
    };
}

LimeExplanation explain_local(const Model& model, const WindowBuilder& builder, std::span<const double> sample,
                              const Discretizer& disc, const LimeOptions& options) {
    const std::size_t d = disc.num_features();
    if (options.n < 2) throw InputError("LIME needs at least 2 perturbation rows");
    if (!(options.lambda >= 0.0)) throw InputError("LIME ridge lambda must be >= 0");
    const double width = options.width > 0.0 ? options.width : default_kernel_width(d);

    const Perturbation pert = options.mode == SamplingMode::discretized
                                  ? perturb(sample, disc, options.n, options.seed)
                                  : perturb_raw(sample, disc, options.n, options.seed);
    const Vec weights = proximity(pert.interpretable, pert.interpretable.row(0), width);

    const std::size_t n = options.n;
    Vec y(n);
    for (std::size_t r = 0; r < n; ++r) y[r] = model.predict(builder(pert.raw.row(r)));

    LimeExplanation out;
    out.model_pred = y[0];
    out.coefficients.assign(d, 0.0);

    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < d; ++j) {
        bool constant = true;
        for (std::size_t r = 1; r < n && constant; ++r) constant = pert.interpretable(r, j) == pert.interpretable(0, j);
        if (constant) {
            out.dropped_features.push_back(j);
            out.flags.push_back(fmt::format("dropped constant column {}", name_of(j, d)));
        } else {
            kept.push_back(j);
        }
    }

    const double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
    double y_mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) y_mean += weights[r] * y[r];
    y_mean /= wsum;
    double ss_tot = 0.0;
    for (std::size_t r = 0; r < n; ++r) ss_tot += weights[r] * (y[r] - y_mean) * (y[r] - y_mean);
    const bool constant_response = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
    if (constant_response) out.flags.push_back("degenerate: constant response");

    // Weighted ridge with an unpenalized intercept: centre by weighted means.
    Vec x_mean(kept.size(), 0.0);
    for (std::size_t c = 0; c < kept.size(); ++c) {
        for (std::size_t r = 0; r < n; ++r) x_mean[c] += weights[r] * pert.interpretable(r, kept[c]);
        x_mean[c] /= wsum;
    }
    Vec beta;
    if (!kept.empty() && !constant_response) {
        Mat X(n, kept.size());
        Vec yc(n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < kept.size(); ++c) X(r, c) = pert.interpretable(r, kept[c]) - x_mean[c];
            yc[r] = y[r] - y_mean;
        }
        beta = ridge_regression(X, yc, weights, options.lambda);
    } else {
        beta.assign(kept.size(), 0.0);
    }
    out.intercept = y_mean;
    for (std::size_t c = 0; c < kept.size(); ++c) {
        out.coefficients[kept[c]] = beta[c];
        out.intercept -= x_mean[c] * beta[c];
    }

    out.local_pred = out.intercept;
    for (std::size_t j = 0; j < d; ++j) out.local_pred += out.coefficients[j] * pert.interpretable(0, j);

    double ss_res = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double pred = out.intercept;
        for (std::size_t j = 0; j < d; ++j) pred += out.coefficients[j] * pert.interpretable(r, j);
        ss_res += weights[r] * (y[r] - pred) * (y[r] - pred);
    }
    out.fidelity = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;

    std::vector<std::size_t> order = kept;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(out.coefficients[a]) > std::abs(out.coefficients[b]);
    });
    if (order.size() > options.k) order.resize(options.k);
    for (std::size_t j : order) {
        const std::string name = name_of(j, d);
        out.entries.push_back({j, name, rule_text(name, sample[j], disc.cuts[j]), out.coefficients[j]});
    }
    return out;
}

LimeExplanation explain_local(const Model& model, const Mat& window, const Discretizer& disc,
                              const LimeOptions& options) {
    if (window.rows() == 0) throw InputError("explain_local: empty window");
    const auto last = window.row(window.rows() - 1);
    const Vec sample(last.begin(), last.end());
    return explain_local(model, final_step_builder(window), sample, disc, options);
}

}  // namespace sxai
