#include "brixkit/features.hpp"

#include <cmath>

namespace brixkit {

const char* to_string(CrossMode mode) {
    switch (mode) {
        case CrossMode::None: return "none";
        case CrossMode::Fat: return "fat";
        case CrossMode::Thin: return "thin";
    }
    return "none";
}

CrossMode cross_mode_from_string(const std::string& name) {
    if (name == "none") return CrossMode::None;
    if (name == "fat") return CrossMode::Fat;
    if (name == "thin") return CrossMode::Thin;
    throw Error(ErrorCode::InvalidInput, "unknown cross mode '" + name + "'");
}

const char* to_string(Resolution res) {
    switch (res) {
        case Resolution::Low: return "low";
        case Resolution::Med: return "med";
        case Resolution::High: return "high";
    }
    return "low";
}

Resolution resolution_from_string(const std::string& name) {
    if (name == "low") return Resolution::Low;
    if (name == "med") return Resolution::Med;
    if (name == "high") return Resolution::High;
    throw Error(ErrorCode::InvalidInput, "unknown resolution '" + name + "'");
}

int resolution_width(Resolution res) {
    switch (res) {
        case Resolution::Low: return 320;
        case Resolution::Med: return 640;
        case Resolution::High: return 1280;
    }
    return 320;
}

int resolution_height(Resolution res) {
    switch (res) {
        case Resolution::Low: return 240;
        case Resolution::Med: return 480;
        case Resolution::High: return 720;
    }
    return 240;
}

void FeatureConfig::validate() const {
    if (n_bin_x < 1 || n_bin_y < 1)
        throw Error(ErrorCode::InvalidConfig, "grid divisions must be >= 1");
    if (cross != CrossMode::None && (n_bin_x < 4 || n_bin_y < 4))
        throw Error(ErrorCode::InvalidConfig,
                    "fat/thin cross selection needs n_bin_x >= 4 and n_bin_y >= 4");
}

CrossLimits cross_limits(int n_bin_x, int n_bin_y, CrossMode mode) {
    if (n_bin_x < 1 || n_bin_y < 1)
        throw Error(ErrorCode::InvalidGrid, "grid divisions must be >= 1");
    switch (mode) {
        case CrossMode::None:
            return {0, n_bin_x - 1, 0, n_bin_y - 1};
        case CrossMode::Fat:
            if (n_bin_x < 4 || n_bin_y < 4)
                throw Error(ErrorCode::InvalidGrid, "fat selection needs a grid of at least 4x4");
            return {n_bin_x / 4, 3 * n_bin_x / 4, n_bin_y / 4, 3 * n_bin_y / 4};
        case CrossMode::Thin:
            if (n_bin_x < 4 || n_bin_y < 4)
                throw Error(ErrorCode::InvalidGrid, "thin selection needs a grid of at least 4x4");
            return {n_bin_x / 4, 3 * n_bin_x / 4, n_bin_y / 4, n_bin_y / 2};
    }
    throw Error(ErrorCode::InvalidGrid, "unreachable cross mode");
}

std::vector<CellRect> grid_partition(int width, int height, int n_bin_x, int n_bin_y) {
    if (n_bin_x < 1 || n_bin_y < 1)
        throw Error(ErrorCode::InvalidGrid, "grid divisions must be >= 1");
    if (width < n_bin_x || height < n_bin_y)
        throw Error(ErrorCode::ImageTooSmall, "image " + std::to_string(width) + "x" +
                                                  std::to_string(height) + " cannot hold a " +
                                                  std::to_string(n_bin_x) + "x" +
                                                  std::to_string(n_bin_y) + " grid");
    std::vector<CellRect> cells;
    cells.reserve(static_cast<std::size_t>(n_bin_x) * n_bin_y);
    for (int j = 0; j < n_bin_y; ++j) {
        const int y0 = static_cast<int>(static_cast<std::int64_t>(j) * height / n_bin_y);
        const int y1 = static_cast<int>(static_cast<std::int64_t>(j + 1) * height / n_bin_y);
        for (int i = 0; i < n_bin_x; ++i) {
            const int x0 = static_cast<int>(static_cast<std::int64_t>(i) * width / n_bin_x);
            const int x1 = static_cast<int>(static_cast<std::int64_t>(i + 1) * width / n_bin_x);
            cells.push_back({x0, y0, x1 - x0, y1 - y0});
        }
    }
    return cells;
}

std::vector<Pixel> cell_means(const FloatImage& image, const std::vector<CellRect>& cells) {
    std::vector<Pixel> means;
    means.reserve(cells.size());
    for (const CellRect& cell : cells) {
        if (cell.x < 0 || cell.y < 0 || cell.width < 1 || cell.height < 1 ||
            cell.x + cell.width > image.width || cell.y + cell.height > image.height)
            throw Error(ErrorCode::InvalidInput, "cell rectangle outside image bounds");
        double sum[3] = {0.0, 0.0, 0.0};
        for (int y = cell.y; y < cell.y + cell.height; ++y) {
            const double* px = image.pixel(cell.x, y);
            for (int x = 0; x < cell.width; ++x, px += 3) {
                sum[0] += px[0];
                sum[1] += px[1];
                sum[2] += px[2];
            }
        }
        const double count = static_cast<double>(cell.width) * cell.height;
        means.push_back({sum[0] / count, sum[1] / count, sum[2] / count});
    }
    return means;
}

namespace {

// Fractional pixel coverage of one destination index along one axis.
struct AxisSpan {
    int begin = 0;                 // first source index
    std::vector<double> weights;   // coverage per source index from begin
};

std::vector<AxisSpan> box_spans(int src, int dst) {
    std::vector<AxisSpan> spans(dst);
    const double scale = static_cast<double>(src) / dst;
    for (int d = 0; d < dst; ++d) {
        const double lo = d * scale;
        const double hi = (d + 1) * scale;
        const int first = static_cast<int>(lo);
        const int last = std::min(src - 1, static_cast<int>(std::ceil(hi)) - 1);
        AxisSpan span;
        span.begin = first;
        span.weights.reserve(static_cast<std::size_t>(last - first) + 1);
        for (int s = first; s <= last; ++s) {
            const double cover = std::min<double>(s + 1, hi) - std::max<double>(s, lo);
            span.weights.push_back(cover);
        }
        spans[d] = std::move(span);
    }
    return spans;
}

RasterImage resize_box(const RasterImage& image, int tw, int th) {
    const std::vector<AxisSpan> xs = box_spans(image.width, tw);
    const std::vector<AxisSpan> ys = box_spans(image.height, th);
    const double area = (static_cast<double>(image.width) / tw) *
                        (static_cast<double>(image.height) / th);
    RasterImage out(tw, th);
    for (int dy = 0; dy < th; ++dy) {
        const AxisSpan& sy = ys[dy];
        for (int dx = 0; dx < tw; ++dx) {
            const AxisSpan& sx = xs[dx];
            double acc[3] = {0.0, 0.0, 0.0};
            for (std::size_t j = 0; j < sy.weights.size(); ++j) {
                const double wy = sy.weights[j];
                const std::uint8_t* row = image.pixel(sx.begin, sy.begin + static_cast<int>(j));
                for (std::size_t i = 0; i < sx.weights.size(); ++i) {
                    const double w = wy * sx.weights[i];
                    acc[0] += w * row[3 * i + 0];
                    acc[1] += w * row[3 * i + 1];
                    acc[2] += w * row[3 * i + 2];
                }
            }
            std::uint8_t* dst = out.pixel(dx, dy);
            for (int c = 0; c < 3; ++c) {
                const double v = std::floor(acc[c] / area + 0.5); // round half up
                dst[c] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
            }
        }
    }
    return out;
}

RasterImage resize_nearest(const RasterImage& image, int tw, int th) {
    RasterImage out(tw, th);
    for (int dy = 0; dy < th; ++dy) {
        const int sy = static_cast<int>(static_cast<std::int64_t>(dy) * image.height / th);
        for (int dx = 0; dx < tw; ++dx) {
            const int sx = static_cast<int>(static_cast<std::int64_t>(dx) * image.width / tw);
            const std::uint8_t* src = image.pixel(sx, sy);
            std::uint8_t* dst = out.pixel(dx, dy);
            dst[0] = src[0];
            dst[1] = src[1];
            dst[2] = src[2];
        }
    }
    return out;
}

} // namespace

RasterImage resize(const RasterImage& image, int target_width, int target_height) {
    if (target_width < 1 || target_height < 1)
        throw Error(ErrorCode::InvalidInput, "resize target must be >= 1x1");
    if (target_width == image.width && target_height == image.height) return image;
    if (target_width <= image.width && target_height <= image.height)
        return resize_box(image, target_width, target_height);
    return resize_nearest(image, target_width, target_height);
}

RasterImage flip_horizontal(const RasterImage& image) {
    RasterImage out(image.width, image.height);
    for (int y = 0; y < image.height; ++y) {
        const std::uint8_t* src = image.pixel(0, y);
        std::uint8_t* dst = out.pixel(0, y);
        for (int x = 0; x < image.width; ++x) {
            const int mx = image.width - 1 - x;
            dst[3 * x + 0] = src[3 * mx + 0];
            dst[3 * x + 1] = src[3 * mx + 1];
            dst[3 * x + 2] = src[3 * mx + 2];
        }
    }
    return out;
}

int feature_length(const FeatureConfig& config) {
    config.validate();
    return 3 * cross_limits(config.n_bin_x, config.n_bin_y, config.cross).kept_cells();
}

FeatureVector extract_features(const RasterImage& image, const FeatureConfig& config) {
    config.validate();
    const RasterImage scaled =
        resize(image, resolution_width(config.resolution), resolution_height(config.resolution));
    const FloatImage converted = convert_image(scaled, config.space);
    const std::vector<CellRect> cells =
        grid_partition(scaled.width, scaled.height, config.n_bin_x, config.n_bin_y);
    const CrossLimits limits = cross_limits(config.n_bin_x, config.n_bin_y, config.cross);

    std::vector<CellRect> kept;
    kept.reserve(static_cast<std::size_t>(limits.kept_cells()));
    for (int j = 0; j < config.n_bin_y; ++j)
        for (int i = 0; i < config.n_bin_x; ++i)
            if (limits.contains(i, j))
                kept.push_back(cells[static_cast<std::size_t>(j) * config.n_bin_x + i]);

    const std::vector<Pixel> means = cell_means(converted, kept);
    FeatureVector fv;
    fv.config = config;
    fv.values.reserve(means.size() * 3);
    for (const Pixel& m : means) {
        fv.values.push_back(m[0]);
        fv.values.push_back(m[1]);
        fv.values.push_back(m[2]);
    }
    return fv;
}

} // namespace brixkit
