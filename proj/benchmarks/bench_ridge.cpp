#include <benchmark/benchmark.h>

#include "brixkit/ridge.hpp"

using namespace brixkit;

namespace {

DataMatrix random_matrix(std::size_t n, std::size_t d, std::uint64_t seed) {
    DataMatrix x(n, d);
    std::uint64_t state = seed;
    for (double& v : x.data) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        v = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
    }
    return x;
}

std::vector<double> random_target(std::size_t n, std::uint64_t seed) {
    std::vector<double> y(n);
    std::uint64_t state = seed;
    for (double& v : y) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        v = 9.0 + 17.0 * static_cast<double>(state >> 11) * 0x1.0p-53;
    }
    return y;
}

} // namespace

// Typical fold shapes of the sweep: n around 2x the fold train size, d up to
// 3*16*32. d > n exercises the dual path.
static void BM_RidgeFit(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::size_t d = static_cast<std::size_t>(state.range(1));
    const DataMatrix x = random_matrix(n, d, 7);
    const std::vector<double> y = random_target(n, 9);
    for (auto _ : state) {
        RidgeModel model = ridge_fit(x, y, 9.0);
        benchmark::DoNotOptimize(model.weights.data());
    }
}
BENCHMARK(BM_RidgeFit)
    ->Args({80, 96})
    ->Args({80, 384})
    ->Args({80, 1536})
    ->Args({178, 384})
    ->Args({500, 96})
    ->ArgNames({"n", "d"});

static void BM_RidgePredict(benchmark::State& state) {
    const std::size_t n = 100, d = 384;
    const DataMatrix x = random_matrix(n, d, 7);
    const RidgeModel model = ridge_fit(x, random_target(n, 9), 9.0);
    for (auto _ : state) {
        auto pred = ridge_predict(model, x);
        benchmark::DoNotOptimize(pred.data());
    }
}
BENCHMARK(BM_RidgePredict);

BENCHMARK_MAIN();
