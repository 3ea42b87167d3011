#include "sxai/numerics.hpp"

#include "sxai/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sxai {

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw std::invalid_argument("Mat: data length does not match rows*cols");
    }
}

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vec Mat::column(std::size_t c) const {
    Vec out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

bool Mat::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

namespace {

void check_shapes(const Mat& X, std::span<const double> y, std::span<const double> w) {
    if (y.size() != X.rows() || w.size() != X.rows()) {
        throw std::invalid_argument("regression: X, y and w disagree on the number of rows");
    }
    if (!X.all_finite()) throw std::invalid_argument("regression: non-finite entry in X");
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!std::isfinite(y[i]) || !std::isfinite(w[i])) {
            throw std::invalid_argument("regression: non-finite entry in y or w");
        }
        if (w[i] < 0.0) throw std::invalid_argument("regression: negative weight");
    }
}

// A = X^T W X + lambda I, b = X^T W y
void normal_equations(const Mat& X, std::span<const double> y, std::span<const double> w,
                      double lambda, Mat& A, Vec& b) {
    const std::size_t n = X.rows();
    const std::size_t p = X.cols();
    A = Mat(p, p);
    b.assign(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double wi = w[i];
        if (wi == 0.0) continue;
        auto xi = X.row(i);
        for (std::size_t a = 0; a < p; ++a) {
            const double wxa = wi * xi[a];
            if (wxa == 0.0) continue;
            b[a] += wxa * y[i];
            for (std::size_t c = a; c < p; ++c) A(a, c) += wxa * xi[c];
        }
    }
    for (std::size_t a = 0; a < p; ++a) {
        A(a, a) += lambda;
        for (std::size_t c = 0; c < a; ++c) A(a, c) = A(c, a);
    }
}

// In-place Cholesky A = L L^T (lower triangle). Relative pivot threshold 1e-12.
void cholesky(Mat& A) {
    const std::size_t p = A.rows();
    double scale = 0.0;
    for (std::size_t i = 0; i < p; ++i) scale = std::max(scale, std::abs(A(i, i)));
    if (scale == 0.0) throw SingularSystemError("singular system: zero weighted normal matrix");
    for (std::size_t j = 0; j < p; ++j) {
        double d = A(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= A(j, k) * A(j, k);
        if (!(d > 1e-12 * scale)) {
            throw SingularSystemError("singular system: relative pivot below 1e-12 at column " +
                                      std::to_string(j));
        }
        const double ljj = std::sqrt(d);
        A(j, j) = ljj;
        for (std::size_t i = j + 1; i < p; ++i) {
            double s = A(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= A(i, k) * A(j, k);
            A(i, j) = s / ljj;
        }
    }
}

Vec cholesky_solve(const Mat& L, const Vec& b) {
    const std::size_t p = L.rows();
    Vec z(b);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t k = 0; k < i; ++k) z[i] -= L(i, k) * z[k];
        z[i] /= L(i, i);
    }
    for (std::size_t i = p; i-- > 0;) {
        for (std::size_t k = i + 1; k < p; ++k) z[i] -= L(k, i) * z[k];
        z[i] /= L(i, i);
    }
    return z;
}

Vec solve_spd(const Mat& A, const Vec& b) {
    Mat L = A;
    cholesky(L);
    Vec x = cholesky_solve(L, b);
    // Two rounds of iterative refinement on the normal equations.
    const std::size_t p = A.rows();
    for (int round = 0; round < 2; ++round) {
        Vec r(b);
        for (std::size_t i = 0; i < p; ++i) {
            long double s = b[i];
            for (std::size_t k = 0; k < p; ++k) s -= static_cast<long double>(A(i, k)) * x[k];
            r[i] = static_cast<double>(s);
        }
        Vec dx = cholesky_solve(L, r);
        for (std::size_t i = 0; i < p; ++i) x[i] += dx[i];
    }
    return x;
}

}  // namespace

Vec weighted_least_squares(const Mat& X, std::span<const double> y, std::span<const double> w) {
    check_shapes(X, y, w);
    if (X.rows() < X.cols()) {
        throw std::invalid_argument("weighted_least_squares: fewer rows than columns");
    }
    Mat A;
    Vec b;
    normal_equations(X, y, w, 0.0, A, b);
    return solve_spd(A, b);
}

Vec ridge_regression(const Mat& X, std::span<const double> y, std::span<const double> w,
                     double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("ridge_regression: lambda must be finite and >= 0");
    }
    if (lambda == 0.0) return weighted_least_squares(X, y, w);
    check_shapes(X, y, w);
    Mat A;
    Vec b;
    normal_equations(X, y, w, lambda, A, b);
    return solve_spd(A, b);
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    if (x.size() < 2) throw std::invalid_argument("pearson: need at least two observations");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return {0.0, true};
    const double r = sxy / std::sqrt(sxx * syy);
    return {std::clamp(r, -1.0, 1.0), false};
}

namespace {

Vec average_ranks(std::span<const double> x) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    Vec ranks(x.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j);
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

Correlation spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
    Vec rx = average_ranks(x);
    Vec ry = average_ranks(y);
    return pearson(rx, ry);
}

ColumnStats zscore_fit(const Mat& columns) {
    if (columns.rows() == 0) throw std::invalid_argument("zscore_fit: no rows");
    const std::size_t p = columns.cols();
    const double n = static_cast<double>(columns.rows());
    ColumnStats s;
    s.mean.assign(p, 0.0);
    s.stddev.assign(p, 0.0);
    s.constant.assign(p, false);
    for (std::size_t r = 0; r < columns.rows(); ++r)
        for (std::size_t c = 0; c < p; ++c) s.mean[c] += columns(r, c);
    for (auto& m : s.mean) m /= n;
    for (std::size_t r = 0; r < columns.rows(); ++r)
        for (std::size_t c = 0; c < p; ++c) {
            const double d = columns(r, c) - s.mean[c];
            s.stddev[c] += d * d;
        }
    for (std::size_t c = 0; c < p; ++c) {
        s.stddev[c] = std::sqrt(s.stddev[c] / n);
        // Tiny relative spread is rounding noise from the mean, not signal.
        if (!(s.stddev[c] > 1e-14 * std::max(1.0, std::abs(s.mean[c])))) {
            s.stddev[c] = 1.0;
            s.constant[c] = true;
        }
    }
    return s;
}

Vec zscore_apply(std::span<const double> sample, const ColumnStats& stats) {
    if (sample.size() != stats.mean.size()) throw std::invalid_argument("zscore_apply: width mismatch");
    Vec out(sample.size());
    for (std::size_t c = 0; c < sample.size(); ++c) {
        out[c] = stats.constant[c] ? 0.0 : (sample[c] - stats.mean[c]) / stats.stddev[c];
    }
    return out;
}

Mat zscore_apply(const Mat& rows, const ColumnStats& stats) {
    Mat out(rows.rows(), rows.cols());
    for (std::size_t r = 0; r < rows.rows(); ++r) {
        Vec z = zscore_apply(rows.row(r), stats);
        std::copy(z.begin(), z.end(), out.row(r).begin());
    }
    return out;
}

Vec quantiles(std::span<const double> x, std::span<const double> probs) {
    if (x.empty()) throw std::invalid_argument("quantiles: empty input");
    Vec sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    Vec out;
    out.reserve(probs.size());
    const double last = static_cast<double>(sorted.size() - 1);
    double prev = -1.0;
    for (double p : probs) {
        if (!(p > 0.0 && p < 1.0) || !(p > prev)) {
            throw std::invalid_argument("quantiles: probabilities must be strictly increasing in (0,1)");
        }
        prev = p;
        const double h = last * p;
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        const double frac = h - static_cast<double>(lo);
        out.push_back(sorted[lo] + frac * (sorted[hi] - sorted[lo]));
    }
    return out;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::size_t Rng::below(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    const std::uint64_t bound = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
        v = engine_();
    } while (v >= limit);
    return static_cast<std::size_t>(v % bound);
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

std::size_t Rng::categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw std::invalid_argument("Rng::categorical: weights sum to zero");
    double u = uniform() * total;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        last_positive = i;
        if (u < weights[i]) return i;
        u -= weights[i];
    }
    return last_positive;
}

}  // namespace sxai
