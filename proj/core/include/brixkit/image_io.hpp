#pragma once

#include <filesystem>

#include "brixkit/image.hpp"

namespace brixkit {

/// Decode a PNG or JPEG file into an 8-bit RGB image. Grayscale, palette and
/// alpha inputs are expanded/flattened to plain RGB. The format is sniffed
/// from the file magic, not the extension.
RasterImage load_image(const std::filesystem::path& path);

/// Write an image as RGB8 PNG (lossless).
void save_png(const RasterImage& image, const std::filesystem::path& path);

/// Write an image as baseline JPEG at the given quality (1..100).
void save_jpeg(const RasterImage& image, const std::filesystem::path& path, int quality = 95);

} // namespace brixkit
