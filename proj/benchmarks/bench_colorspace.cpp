#include <benchmark/benchmark.h>

#include "brixkit/colorspace.hpp"

using namespace brixkit;

static void BM_ConvertImage(benchmark::State& state) {
    const ColorSpace space = static_cast<ColorSpace>(state.range(0));
    RasterImage img(640, 480);
    std::uint64_t s = 3;
    for (auto& byte : img.data) {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        byte = static_cast<std::uint8_t>(s >> 56);
    }
    for (auto _ : state) {
        FloatImage out = convert_image(img, space);
        benchmark::DoNotOptimize(out.data.data());
    }
    state.SetItemsProcessed(state.iterations() * img.pixel_count());
}
BENCHMARK(BM_ConvertImage)->Arg(0)->Arg(1)->Arg(2)->ArgName("space");

static void BM_RgbToLabPixel(benchmark::State& state) {
    double v = 0.0;
    for (auto _ : state) {
        v += 1.0 / 512;
        if (v > 1.0) v = 0.0;
        auto lab = rgb_to_lab({v, 1.0 - v, 0.5 * v});
        benchmark::DoNotOptimize(lab);
    }
}
BENCHMARK(BM_RgbToLabPixel);

static void BM_RgbToHsvPixel(benchmark::State& state) {
    double v = 0.0;
    for (auto _ : state) {
        v += 1.0 / 512;
        if (v > 1.0) v = 0.0;
        auto hsv = rgb_to_hsv({v, 1.0 - v, 0.5 * v});
        benchmark::DoNotOptimize(hsv);
    }
}
BENCHMARK(BM_RgbToHsvPixel);
