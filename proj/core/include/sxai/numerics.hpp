#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace sxai {

using Vec = std::vector<double>;

// Dense row-major matrix.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Mat(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Mat identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }
    Vec column(std::size_t c) const;

    std::span<double> flat() noexcept { return data_; }
    std::span<const double> flat() const noexcept { return data_; }

    bool all_finite() const noexcept;

    friend bool operator==(const Mat&, const Mat&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// argmin_b sum_i w_i (y_i - X_i b)^2 via normal equations and Cholesky.
// Throws SingularSystemError when a relative pivot drops below 1e-12.
Vec weighted_least_squares(const Mat& X, std::span<const double> y, std::span<const double> w);

// argmin_b sum_i w_i (y_i - X_i b)^2 + lambda |b|^2.
Vec ridge_regression(const Mat& X, std::span<const double> y, std::span<const double> w,
                     double lambda);

struct Correlation {
    double value = 0.0;
    bool constant_input = false;  // one side had zero variance; value is 0
};

// Pearson product-moment correlation with population moments.
Correlation pearson(std::span<const double> x, std::span<const double> y);

// Pearson on average ranks.
Correlation spearman(std::span<const double> x, std::span<const double> y);

struct ColumnStats {
    Vec mean;
    Vec stddev;               // population; 1 for constant columns
    std::vector<bool> constant;
};

ColumnStats zscore_fit(const Mat& columns);
Vec zscore_apply(std::span<const double> sample, const ColumnStats& stats);
Mat zscore_apply(const Mat& rows, const ColumnStats& stats);

// Linear-interpolation quantiles (h = (n-1)p on the sorted data).
Vec quantiles(std::span<const double> x, std::span<const double> probs);

// splitmix64 mix of a base seed and an index, for per-item sub-seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

// Seeded generator. Distributions are implemented here rather than via
// <random> distributions so that draws are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    double uniform();                        // [0, 1)
    double uniform(double lo, double hi);    // [lo, hi)
    std::size_t below(std::size_t n);        // [0, n)
    double normal();                         // N(0, 1)
    std::size_t categorical(std::span<const double> weights);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace sxai
