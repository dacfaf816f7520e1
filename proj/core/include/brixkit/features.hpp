#pragma once

#include <string>
#include <vector>

#include "brixkit/colorspace.hpp"
#include "brixkit/image.hpp"

namespace brixkit {

/// Which grid cells to keep: none keeps all, fat drops corner regions,
/// thin additionally drops lower regions.
enum class CrossMode { None, Fat, Thin };

const char* to_string(CrossMode mode);
CrossMode cross_mode_from_string(const std::string& name);

/// Working resolution the input is stretched to before feature extraction.
enum class Resolution { Low, Med, High }; // 320x240, 640x480, 1280x720

const char* to_string(Resolution res);
Resolution resolution_from_string(const std::string& name);
int resolution_width(Resolution res);
int resolution_height(Resolution res);

/// Full recipe for turning an image into a feature vector.
struct FeatureConfig {
    int n_bin_x = 16;
    int n_bin_y = 8;
    CrossMode cross = CrossMode::None;
    ColorSpace space = ColorSpace::Rgb;
    Resolution resolution = Resolution::Low;

    void validate() const; // throws InvalidConfig / InvalidGrid

    bool operator==(const FeatureConfig&) const = default;
};

struct FeatureVector {
    std::vector<double> values;
    FeatureConfig config;
};

/// Inclusive bin-index bounds of the kept region.
struct CrossLimits {
    int x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    bool operator==(const CrossLimits&) const = default;

    bool contains(int bx, int by) const {
        return bx >= x0 && bx <= x1 && by >= y0 && by <= y1;
    }
    int kept_cells() const { return (x1 - x0 + 1) * (y1 - y0 + 1); }
};

/// Kept bin-index ranges for an n_bin_x by n_bin_y grid:
///   none: [0, nx-1, 0, ny-1]
///   fat:  [nx/4, 3nx/4, ny/4, 3ny/4]
///   thin: [nx/4, 3nx/4, ny/4, ny/2]
/// (integer floor division, bounds inclusive on both ends).
/// Fat/thin require nx, ny >= 4 so the floors select a proper interior.
CrossLimits cross_limits(int n_bin_x, int n_bin_y, CrossMode mode);

/// Pixel rectangle of one grid cell.
struct CellRect {
    int x = 0, y = 0, width = 0, height = 0;
    bool operator==(const CellRect&) const = default;
};

/// Balanced floor partition: cell (i,j) spans columns
/// [i*W/nx, (i+1)*W/nx) and rows [j*H/ny, (j+1)*H/ny). Cells tile the
/// image exactly. Returned row-major: j outer, i inner.
std::vector<CellRect> grid_partition(int width, int height, int n_bin_x, int n_bin_y);

/// Arithmetic per-channel mean over each cell, double precision.
std::vector<Pixel> cell_means(const FloatImage& image, const std::vector<CellRect>& cells);

/// Deterministic resize. Downscale (both axes) is a fractional-coverage box
/// average on the raw 8-bit values, rounded half-up; anything else falls back
/// to nearest-neighbor. Identity targets return the input unchanged.
RasterImage resize(const RasterImage& image, int target_width, int target_height);

/// Mirror around the vertical axis.
RasterImage flip_horizontal(const RasterImage& image);

/// Feature length implied by a config: 3 x kept cells.
int feature_length(const FeatureConfig& config);

/// resize -> convert -> grid -> cross selection -> cell means, concatenated
/// row-major (y outer, x inner) with channels innermost.
FeatureVector extract_features(const RasterImage& image, const FeatureConfig& config);

} // namespace brixkit
