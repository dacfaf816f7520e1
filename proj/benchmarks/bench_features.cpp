#include <benchmark/benchmark.h>

#include "brixkit/features.hpp"

using namespace brixkit;

namespace {

RasterImage test_image(int w, int h) {
    RasterImage img(w, h);
    std::uint64_t state = 11;
    for (auto& byte : img.data) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        byte = static_cast<std::uint8_t>(state >> 56);
    }
    return img;
}

} // namespace

static void BM_ExtractFeatures(benchmark::State& state) {
    const Resolution res = static_cast<Resolution>(state.range(0));
    const ColorSpace space = static_cast<ColorSpace>(state.range(1));
    const RasterImage img = test_image(resolution_width(res), resolution_height(res));
    const FeatureConfig config{16, 8, CrossMode::None, space, res};
    for (auto _ : state) {
        auto fv = extract_features(img, config);
        benchmark::DoNotOptimize(fv.values.data());
    }
}
BENCHMARK(BM_ExtractFeatures)
    ->ArgsProduct({{0, 1, 2}, {0, 1, 2}}) // resolution x color space
    ->ArgNames({"res", "space"});

static void BM_ExtractCrossModes(benchmark::State& state) {
    const CrossMode mode = static_cast<CrossMode>(state.range(0));
    const RasterImage img = test_image(320, 240);
    const FeatureConfig config{16, 8, mode, ColorSpace::Hsv, Resolution::Low};
    for (auto _ : state) {
        auto fv = extract_features(img, config);
        benchmark::DoNotOptimize(fv.values.data());
    }
}
BENCHMARK(BM_ExtractCrossModes)->Arg(0)->Arg(1)->Arg(2)->ArgName("cross");

static void BM_Resize(benchmark::State& state) {
    const RasterImage img = test_image(1280, 720);
    const int w = static_cast<int>(state.range(0));
    const int h = static_cast<int>(state.range(1));
    for (auto _ : state) {
        auto out = resize(img, w, h);
        benchmark::DoNotOptimize(out.data.data());
    }
}
BENCHMARK(BM_Resize)->Args({640, 480})->Args({320, 240});
