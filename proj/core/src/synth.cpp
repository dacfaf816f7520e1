#include "brixkit/synth.hpp"

#include <algorithm>
#include <cmath>

#include "brixkit/features.hpp"
#include "brixkit/image_io.hpp"
#include "brixkit/rng.hpp"

namespace brixkit {

void SynthConfig::validate() const {
    if (width < 1 || height < 1 || n_bin_x < 1 || n_bin_y < 1)
        throw Error(ErrorCode::InvalidConfig, "image and grid dimensions must be >= 1");
    if (width < n_bin_x || height < n_bin_y)
        throw Error(ErrorCode::InvalidConfig, "image must hold at least one pixel per cell");
    if (weights.size() != static_cast<std::size_t>(3) * n_bin_x * n_bin_y)
        throw Error(ErrorCode::InvalidConfig,
                    "weights must have 3 * n_bin_x * n_bin_y entries, got " +
                        std::to_string(weights.size()));
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
        throw Error(ErrorCode::InvalidConfig, "noise sigma must be finite and >= 0");
    if (count < 0) throw Error(ErrorCode::InvalidConfig, "sample count must be >= 0");
    if (cell_lo < 0 || cell_hi > 255 || cell_lo > cell_hi)
        throw Error(ErrorCode::InvalidConfig, "cell value range must satisfy 0 <= lo <= hi <= 255");
}

SynthDataset synth_generate(const SynthConfig& config, std::uint64_t seed) {
    config.validate();
    Rng rng(seed);
    const std::vector<CellRect> cells =
        grid_partition(config.width, config.height, config.n_bin_x, config.n_bin_y);
    const std::uint64_t span = static_cast<std::uint64_t>(config.cell_hi - config.cell_lo) + 1;

    SynthDataset out;
    out.images.reserve(static_cast<std::size_t>(config.count));
    out.labels.reserve(static_cast<std::size_t>(config.count));

    for (int s = 0; s < config.count; ++s) {
        RasterImage image(config.width, config.height);
        double label = config.bias;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            std::uint8_t value[3];
            for (int ch = 0; ch < 3; ++ch) {
                value[ch] = static_cast<std::uint8_t>(config.cell_lo + rng.uniform_below(span));
                label += config.weights[3 * c + ch] * (value[ch] / 255.0);
            }
            const CellRect& rect = cells[c];
            for (int y = rect.y; y < rect.y + rect.height; ++y) {
                std::uint8_t* px = image.pixel(rect.x, y);
                for (int x = 0; x < rect.width; ++x, px += 3) {
                    px[0] = value[0];
                    px[1] = value[1];
                    px[2] = value[2];
                }
            }
        }
        if (config.noise_sigma > 0.0) label += rng.normal(0.0, config.noise_sigma);
        out.images.push_back(std::move(image));
        out.labels.push_back(std::clamp(label, kBrixMin, kBrixMax));
    }
    return out;
}

std::vector<double> synth_random_weights(int n_bin_x, int n_bin_y, std::uint64_t seed,
                                         double label_spread) {
    if (n_bin_x < 1 || n_bin_y < 1)
        throw Error(ErrorCode::InvalidConfig, "grid dimensions must be >= 1");
    if (!(label_spread >= 0.0))
        throw Error(ErrorCode::InvalidConfig, "label spread must be >= 0");

    const std::size_t d = static_cast<std::size_t>(3) * n_bin_x * n_bin_y;
    Rng rng(seed);
    std::vector<double> w(d);

    // Mirror-symmetric in the horizontal bin index, so a flipped image obeys
    // the same planted relation and flip augmentation stays exactly linear.
    for (int j = 0; j < n_bin_y; ++j)
        for (int i = 0; i <= (n_bin_x - 1) / 2; ++i)
            for (int ch = 0; ch < 3; ++ch) {
                const double v = rng.uniform(-1.0, 1.0);
                const std::size_t cell = static_cast<std::size_t>(j) * n_bin_x + i;
                const std::size_t twin =
                    static_cast<std::size_t>(j) * n_bin_x + (n_bin_x - 1 - i);
                w[cell * 3 + ch] = v;
                w[twin * 3 + ch] = v;
            }

    // Center so the mid-gray feature level contributes nothing, then scale so
    // the worst-case label deviation over the default cell range is exactly
    // label_spread. Keeps noise-free labels clear of the clamp bounds.
    double mean = 0.0;
    for (double v : w) mean += v;
    mean /= static_cast<double>(d);
    double abs_sum = 0.0;
    for (double& v : w) {
        v -= mean;
        abs_sum += std::abs(v);
    }
    const SynthConfig defaults;
    const double half_range = (defaults.cell_hi - defaults.cell_lo) / (2.0 * 255.0);
    const double scale = abs_sum > 0.0 ? label_spread / (abs_sum * half_range) : 0.0;
    for (double& v : w) v *= scale;
    return w;
}

namespace {

int color_class_for(double brix) {
    // Deterministic inverse bucketing: high brix -> best class (1).
    const int bucket = std::min(5, static_cast<int>((brix - kBrixMin) / ((kBrixMax - kBrixMin) / 6.0)));
    return 6 - bucket;
}

RasterImage apply_channel_affine(const RasterImage& image, const double gain[3],
                                 const double offset[3]) {
    RasterImage out(image.width, image.height);
    for (std::size_t i = 0; i < image.data.size(); i += 3)
        for (int c = 0; c < 3; ++c) {
            const double v = std::floor(gain[c] * image.data[i + c] + offset[c] + 0.5);
            out.data[i + c] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
        }
    return out;
}

} // namespace

std::vector<SampleRecord> write_synth_dataset(const SynthConfig& config, std::uint64_t seed,
                                              const std::filesystem::path& out_dir,
                                              const SynthWriteOptions& options) {
    if (options.atomic_splits.empty())
        throw Error(ErrorCode::InvalidConfig, "at least one atomic split letter is required");
    const SynthDataset data = synth_generate(config, seed);

    std::filesystem::create_directories(out_dir / "images");

    // One white-balance-like calibration per dataset, drawn from its own stream.
    Rng wb_rng(seed ^ 0x57424457ULL);
    double gain[3], offset[3];
    for (int c = 0; c < 3; ++c) {
        gain[c] = wb_rng.uniform(0.92, 1.05);
        offset[c] = wb_rng.uniform(-6.0, 6.0);
    }

    std::vector<SampleRecord> records;
    for (int i = 0; i < config.count; ++i) {
        char id[16];
        std::snprintf(id, sizeof id, "s%04d", i + 1);

        SampleRecord row;
        row.sample_id = id;
        row.image_path = std::string("images/") + id + ".png";
        row.atomic_split = options.atomic_splits[i % options.atomic_splits.size()];
        row.year = options.year;
        row.device = options.device;
        row.image_format = "jpg";
        row.brix_mean = data.labels[static_cast<std::size_t>(i)];
        row.color_class = color_class_for(row.brix_mean);
        row.gray_card = false;

        save_png(data.images[static_cast<std::size_t>(i)], out_dir / row.image_path);
        records.push_back(row);

        if (options.with_wb) {
            SampleRecord wb = row;
            wb.image_path = std::string("images/") + id + "_wb.png";
            wb.image_format = "raw_wb";
            wb.gray_card = true;
            save_png(apply_channel_affine(data.images[static_cast<std::size_t>(i)], gain, offset),
                     out_dir / wb.image_path);
            records.push_back(wb);
        }
    }

    save_manifest(records, out_dir / "manifest.csv");
    return records;
}

} // namespace brixkit
