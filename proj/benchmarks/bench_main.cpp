#include "sxai/model.hpp"
#include "sxai/shap.hpp"

#include <benchmark/benchmark.h>

using namespace sxai;

namespace {

Mat window(Rng& rng, std::size_t T, std::size_t d) {
    Mat w(T, d);
    for (double& v : w.flat()) v = rng.normal();
    return w;
}

LstmModel model(std::size_t d, std::size_t H) { return LstmModel(LstmParams::init(d, H, 7)); }

Background background(Rng& rng, std::size_t k, std::size_t T, std::size_t d) {
    Background bg;
    for (std::size_t i = 0; i < k; ++i) bg.push_back(window(rng, T, d));
    return bg;
}

void BM_Forward(benchmark::State& state) {
    Rng rng(1);
    const auto m = model(12, static_cast<std::size_t>(state.range(0)));
    const Mat x = window(rng, 10, 12);
    for (auto _ : state) benchmark::DoNotOptimize(m.predict(x));
}
BENCHMARK(BM_Forward)->Arg(8)->Arg(32)->Arg(64);

void BM_InputGradient(benchmark::State& state) {
    Rng rng(2);
    const auto m = model(12, static_cast<std::size_t>(state.range(0)));
    const Mat x = window(rng, 10, 12);
    for (auto _ : state) benchmark::DoNotOptimize(m.input_gradient(x));
}
BENCHMARK(BM_InputGradient)->Arg(8)->Arg(32);

void BM_ExactShapley(benchmark::State& state) {
    Rng rng(3);
    const auto d = static_cast<std::size_t>(state.range(0));
    const auto m = model(d, 16);
    const auto bg = background(rng, 10, 10, d);
    const Mat x = window(rng, 10, d);
    for (auto _ : state) benchmark::DoNotOptimize(exact_shapley(m, x, bg));
}
BENCHMARK(BM_ExactShapley)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_KernelShap(benchmark::State& state) {
    Rng rng(4);
    const auto m = model(12, 16);
    const auto bg = background(rng, 10, 10, 12);
    const Mat x = window(rng, 10, 12);
    KernelOptions o;
    o.n_coalitions = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(kernel_shap(m, x, bg, o));
}
BENCHMARK(BM_KernelShap)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_GradientShap(benchmark::State& state) {
    Rng rng(5);
    const auto m = model(12, 32);
    const auto bg = background(rng, 100, 10, 12);
    const Mat x = window(rng, 10, 12);
    for (auto _ : state) benchmark::DoNotOptimize(gradient_shap(m, x, bg));
}
BENCHMARK(BM_GradientShap)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
