#include "brixkit/colorspace.hpp"

#include <algorithm>
#include <cmath>

namespace brixkit {

namespace {

// sRGB primaries, D65 white, 2° observer.
constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};
constexpr double kWhiteX = 0.95047;
constexpr double kWhiteY = 1.0;
constexpr double kWhiteZ = 1.08883;

constexpr double kLabEpsilon = 216.0 / 24389.0; // (6/29)^3
constexpr double kLabKappa = 24389.0 / 27.0;    // (29/3)^3

inline double srgb_decompand(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline double lab_f(double t) {
    return t > kLabEpsilon ? std::cbrt(t) : (kLabKappa * t + 16.0) / 116.0;
}

inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

} // namespace

const char* to_string(ColorSpace space) {
    switch (space) {
        case ColorSpace::Rgb: return "rgb";
        case ColorSpace::Hsv: return "hsv";
        case ColorSpace::Lab: return "lab";
    }
    return "rgb";
}

ColorSpace color_space_from_string(const std::string& name) {
    if (name == "rgb") return ColorSpace::Rgb;
    if (name == "hsv") return ColorSpace::Hsv;
    if (name == "lab") return ColorSpace::Lab;
    throw Error(ErrorCode::InvalidInput, "unknown color space '" + name + "'");
}

Pixel rgb_to_hsv(const Pixel& rgb) {
    const double r = rgb[0], g = rgb[1], b = rgb[2];
    const double maxc = std::max({r, g, b});
    const double minc = std::min({r, g, b});
    const double delta = maxc - minc;

    const double v = maxc;
    const double s = maxc > 0.0 ? delta / maxc : 0.0;
    if (delta == 0.0) return {0.0, s, v};

    double h6;
    if (maxc == r)
        h6 = (g - b) / delta;
    else if (maxc == g)
        h6 = (b - r) / delta + 2.0;
    else
        h6 = (r - g) / delta + 4.0;
    double h = h6 / 6.0;
    if (h < 0.0) h += 1.0;
    if (h >= 1.0) h -= 1.0;
    return {h, s, v};
}

Pixel hsv_to_rgb(const Pixel& hsv) {
    const double h = hsv[0], s = hsv[1], v = hsv[2];
    if (s == 0.0) return {v, v, v};
    const double h6 = h * 6.0;
    const int sector = std::min(5, static_cast<int>(h6));
    const double f = h6 - sector;
    const double p = v * (1.0 - s);
    const double q = v * (1.0 - s * f);
    const double t = v * (1.0 - s * (1.0 - f));
    switch (sector) {
        case 0: return {v, t, p};
        case 1: return {q, v, p};
        case 2: return {p, v, t};
        case 3: return {p, q, v};
        case 4: return {t, p, v};
        default: return {v, p, q};
    }
}

Pixel rgb_to_lab(const Pixel& rgb) {
    const double rl = srgb_decompand(rgb[0]);
    const double gl = srgb_decompand(rgb[1]);
    const double bl = srgb_decompand(rgb[2]);

    const double x = kRgbToXyz[0][0] * rl + kRgbToXyz[0][1] * gl + kRgbToXyz[0][2] * bl;
    const double y = kRgbToXyz[1][0] * rl + kRgbToXyz[1][1] * gl + kRgbToXyz[1][2] * bl;
    const double z = kRgbToXyz[2][0] * rl + kRgbToXyz[2][1] * gl + kRgbToXyz[2][2] * bl;

    const double fx = lab_f(x / kWhiteX);
    const double fy = lab_f(y / kWhiteY);
    const double fz = lab_f(z / kWhiteZ);

    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

Pixel rgb_to_lab_scaled(const Pixel& rgb) {
    const Pixel lab = rgb_to_lab(rgb);
    return {clamp01(lab[0] / 100.0), clamp01((lab[1] + 128.0) / 255.0),
            clamp01((lab[2] + 128.0) / 255.0)};
}

Pixel convert_pixel_u8(std::uint8_t r, std::uint8_t g, std::uint8_t b, ColorSpace space) {
    const Pixel rgb = {r / 255.0, g / 255.0, b / 255.0};
    switch (space) {
        case ColorSpace::Rgb: return rgb;
        case ColorSpace::Hsv: return rgb_to_hsv(rgb);
        case ColorSpace::Lab: return rgb_to_lab_scaled(rgb);
    }
    return rgb;
}

FloatImage convert_image(const RasterImage& image, ColorSpace space) {
    FloatImage out(image.width, image.height);
    const std::uint8_t* src = image.data.data();
    double* dst = out.data.data();
    const std::size_t n = image.pixel_count();
    for (std::size_t i = 0; i < n; ++i, src += 3, dst += 3) {
        const Pixel p = convert_pixel_u8(src[0], src[1], src[2], space);
        dst[0] = p[0];
        dst[1] = p[1];
        dst[2] = p[2];
    }
    return out;
}

} // namespace brixkit
