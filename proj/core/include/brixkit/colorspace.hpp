#pragma once

#include <array>
#include <string>

#include "brixkit/image.hpp"

namespace brixkit {

/// Color coordinates a feature vector can be computed in.
enum class ColorSpace { Rgb, Hsv, Lab };

const char* to_string(ColorSpace space);
ColorSpace color_space_from_string(const std::string& name);

using Pixel = std::array<double, 3>;

/// Hexcone HSV from sRGB channels in [0,1]. Hue is stored as degrees/360 in
/// [0,1), saturation and value in [0,1]. Achromatic inputs get H=0, S=0.
Pixel rgb_to_hsv(const Pixel& rgb);

/// Test/debug inverse of rgb_to_hsv.
Pixel hsv_to_rgb(const Pixel& hsv);

/// CIE-Lab from sRGB channels in [0,1]: IEC 61966-2-1 inverse companding,
/// D65/2° white, standard cube-root segment. Returns (L in [0,100], a, b).
Pixel rgb_to_lab(const Pixel& rgb);

/// Lab rescaled onto [0,1] per channel for feature use:
/// (L/100, (a+128)/255, (b+128)/255), clamped.
Pixel rgb_to_lab_scaled(const Pixel& rgb);

/// Per-pixel conversion of an 8-bit image into the requested space.
/// Rgb passes through as value/255; Hsv and Lab (rescaled) are applied
/// pixel-wise. All output channels live in [0,1].
FloatImage convert_image(const RasterImage& image, ColorSpace space);

/// Single-pixel version of convert_image on raw 8-bit channel values.
Pixel convert_pixel_u8(std::uint8_t r, std::uint8_t g, std::uint8_t b, ColorSpace space);

} // namespace brixkit
