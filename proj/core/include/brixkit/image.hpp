#pragma once

#include <cstdint>
#include <vector>

#include "brixkit/errors.hpp"

namespace brixkit {

/// Decoded 8-bit, 3-channel image. Row-major, channels interleaved (RGB),
/// sRGB interpretation. Immutable by convention once built.
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // width * height * 3

    static constexpr int channels = 3;

    RasterImage() = default;
    RasterImage(int w, int h)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h * channels, 0) {
        if (w < 1 || h < 1)
            throw Error(ErrorCode::InvalidInput, "image dimensions must be >= 1x1");
    }

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    std::uint8_t* pixel(int x, int y) {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * channels;
    }
    const std::uint8_t* pixel(int x, int y) const {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * channels;
    }

    bool operator==(const RasterImage&) const = default;
};

/// Converted 3-channel image, double per channel, same layout as RasterImage.
struct FloatImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    static constexpr int channels = 3;

    FloatImage() = default;
    FloatImage(int w, int h)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h * channels, 0.0) {}

    double* pixel(int x, int y) {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * channels;
    }
    const double* pixel(int x, int y) const {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * channels;
    }
};

} // namespace brixkit
