#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "brixkit/dataset.hpp"
#include "brixkit/image.hpp"

namespace brixkit {

/// Recipe for a planted-model dataset: images are piecewise-constant on an
/// n_bin_x by n_bin_y grid and the label is an exact linear function of the
/// flattened per-cell channel means (value/255), plus optional gaussian noise.
struct SynthConfig {
    int width = 320;
    int height = 240;
    int n_bin_x = 4;
    int n_bin_y = 8;
    std::vector<double> weights; // 3 * n_bin_x * n_bin_y, row-major cells, channels innermost
    double bias = 16.0;
    double noise_sigma = 0.0;
    int count = 50;
    // Cell channel values are drawn uniformly from [cell_lo, cell_hi].
    int cell_lo = 20;
    int cell_hi = 235;

    void validate() const; // throws InvalidConfig
};

struct SynthDataset {
    std::vector<RasterImage> images;
    std::vector<double> labels; // clamped to the refractometer range
};

/// Deterministic: the same config and seed always produce byte-identical
/// images and labels.
SynthDataset synth_generate(const SynthConfig& config, std::uint64_t seed);

/// Planted weights drawn from the seed: mirror-symmetric in the horizontal
/// bin index (flipped images obey the same relation) and scaled so labels
/// stay well inside the refractometer range (no clamping without noise).
std::vector<double> synth_random_weights(int n_bin_x, int n_bin_y, std::uint64_t seed,
                                         double label_spread = 4.0);

struct SynthWriteOptions {
    bool with_wb = false;        // also emit a white-balance-like variant per sample
    std::string atomic_splits = "CD"; // assigned round-robin
    std::string device = "motog8";
    int year = 2021;
};

/// Materialize a synthetic dataset as PNGs plus a manifest.csv under out_dir.
/// When with_wb is set, each sample gets a second, channel-affine "wb" image
/// and a raw_wb manifest row with the same label, so every split family and
/// both sweep dataset variants are usable. Returns the manifest rows.
std::vector<SampleRecord> write_synth_dataset(const SynthConfig& config, std::uint64_t seed,
                                              const std::filesystem::path& out_dir,
                                              const SynthWriteOptions& options = {});

} // namespace brixkit
