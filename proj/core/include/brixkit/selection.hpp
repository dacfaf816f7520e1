#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "brixkit/dataset.hpp"
#include "brixkit/features.hpp"
#include "brixkit/ridge.hpp"

namespace brixkit {

/// Cross-validation fold count of the experimental protocol.
constexpr std::size_t kCvFolds = 5;

/// Seed used by every command when none is given; documented in the README.
constexpr std::uint64_t kDefaultSeed = 1729;

/// Which image variant of a sample a configuration trains on: the camera's
/// standard output (jpg rows) or the white-balanced development (raw_wb rows).
enum class DatasetVariant { Std, Wb };

const char* to_string(DatasetVariant variant);
DatasetVariant variant_from_string(const std::string& name);

/// One point of the hyperparameter grid.
struct SweepConfig {
    int n_bin_x = 16;
    int n_bin_y = 8;
    CrossMode cross = CrossMode::None;
    ColorSpace space = ColorSpace::Hsv;
    Resolution resolution = Resolution::Low;
    DatasetVariant variant = DatasetVariant::Std;
    double lambda = 9.0;

    FeatureConfig feature_config() const {
        return {n_bin_x, n_bin_y, cross, space, resolution};
    }
    std::string describe() const;
    bool operator==(const SweepConfig&) const = default;
};

/// Cross-validated outcome of one configuration.
struct SweepRecord {
    SweepConfig config;
    std::vector<double> fold_maes;  // kCvFolds entries
    double val_mae = 0.0;           // mean of fold_maes
    double train_mae = 0.0;         // final model on its augmented train set
    std::optional<double> test_mae; // present when the split has a test set
    int feature_len = 0;
};

/// Axis values of the search space. The default-constructed grid is the full
/// one: 3*3*3*3*(3*2)*8 = 3888 configurations.
struct GridSpace {
    std::vector<int> n_bin_x = {4, 8, 16};
    std::vector<int> n_bin_y = {8, 16, 32};
    std::vector<CrossMode> cross = {CrossMode::None, CrossMode::Thin, CrossMode::Fat};
    std::vector<ColorSpace> spaces = {ColorSpace::Rgb, ColorSpace::Hsv, ColorSpace::Lab};
    std::vector<Resolution> resolutions = {Resolution::Low, Resolution::Med, Resolution::High};
    std::vector<DatasetVariant> variants = {DatasetVariant::Std, DatasetVariant::Wb};
    std::vector<double> lambdas = {0.33, 1, 3, 9, 27, 81, 243, 729};

    std::size_t size() const;
    /// Canonical enumeration: variant, resolution, space, nx, ny, cross,
    /// lambda, innermost last. Rank ties fall back to this ordering.
    std::vector<SweepConfig> enumerate() const;
    void validate() const;
};

/// Deterministic k-fold partition of 0..n-1: seeded Fisher-Yates shuffle,
/// then contiguous chunks whose sizes differ by at most one.
std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k,
                                                    std::uint64_t seed);

/// In-memory training sample for the augmentation op.
struct LabeledImage {
    std::string sample_id;
    RasterImage image;
    double brix = 0.0;
};

/// Originals followed by horizontally mirrored copies with identical labels.
/// Mirrored copies carry the parent id plus a ":hflip" suffix so augmentation
/// leakage is checkable by provenance.
std::vector<LabeledImage> augment_hflip(const std::vector<LabeledImage>& samples);
constexpr const char* kHflipSuffix = ":hflip";

// ---------------------------------------------------------------------------
// Feature sources
// ---------------------------------------------------------------------------

/// Supplies the feature vector of a (sample, orientation) pair for a config.
/// Implementations must be deterministic; grid_search calls them from worker
/// threads after precompute().
class FeatureSource {
public:
    virtual ~FeatureSource() = default;
    virtual std::vector<double> features(const SampleRecord& record, bool flipped,
                                         const FeatureConfig& config) = 0;
};

/// Decodes images on demand and runs the full extraction pipeline each call.
/// Single-threaded use only.
class DirectFeatureSource : public FeatureSource {
public:
    explicit DirectFeatureSource(std::filesystem::path image_root);
    ~DirectFeatureSource() override;
    std::vector<double> features(const SampleRecord& record, bool flipped,
                                 const FeatureConfig& config) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Precomputes fine-grid (16x32) per-cell channel sums for every sample at
/// every resolution and color space, then answers any Table-style grid by
/// aggregating cells. Requires n_bin_x | 16 and n_bin_y | 32. Read-only and
/// thread-safe after precompute().
class CachedFeatureSource : public FeatureSource {
public:
    explicit CachedFeatureSource(std::filesystem::path image_root);
    ~CachedFeatureSource() override;

    /// Decode and accumulate every (record, orientation) pair. Flipped
    /// variants are prepared only for records flagged as training rows.
    void precompute(const std::vector<const SampleRecord*>& train_rows,
                    const std::vector<const SampleRecord*>& test_rows, int jobs);

    std::vector<double> features(const SampleRecord& record, bool flipped,
                                 const FeatureConfig& config) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// ---------------------------------------------------------------------------
// Evaluation and search
// ---------------------------------------------------------------------------

/// 5-fold cross-validation of one configuration on a split. Horizontal-flip
/// augmentation is applied to the four training folds of each iteration,
/// never to the validation fold. A final model on the full augmented train
/// set supplies train_mae and, when the split has a test set, test_mae.
SweepRecord evaluate_config(const DatasetSplit& split, const SweepConfig& config,
                            std::uint64_t seed, FeatureSource& source);

/// Convenience overload decoding images relative to image_root.
SweepRecord evaluate_config(const DatasetSplit& split, const SweepConfig& config,
                            std::uint64_t seed, const std::filesystem::path& image_root);

/// The std/wb variant pair a sweep runs over. The two splits share the same
/// sample universe; a configuration picks its side by variant.
struct SweepDataset {
    DatasetSplit std_split;
    DatasetSplit wb_split;
    std::filesystem::path image_root;

    const DatasetSplit& by_variant(DatasetVariant variant) const {
        return variant == DatasetVariant::Std ? std_split : wb_split;
    }

    /// Accepts a family name (Sm, Ss, Ms) or one of its members (e.g. Sm_j).
    static SweepDataset from_family(const std::vector<SampleRecord>& records,
                                    const std::string& family,
                                    std::filesystem::path image_root);

    /// Moves a seeded holdout (chosen by sample id) from train to test in
    /// both variants. Only valid while the split has no test set.
    SweepDataset with_holdout(std::size_t test_count, std::uint64_t seed) const;
};

/// Called with (evaluated, total) after each configuration completes; may be
/// invoked from worker threads, one call at a time.
using SweepProgress = std::function<void(std::size_t, std::size_t)>;

/// Exhaustive evaluation of every grid point, ranked by val_mae ascending.
/// Ties prefer the simpler model: smaller feature_len, then larger lambda,
/// then canonical grid order. Workers never share mutable state, so the
/// ranking is byte-stable for a fixed seed regardless of jobs.
std::vector<SweepRecord> grid_search(const SweepDataset& dataset, const GridSpace& grid,
                                     std::uint64_t seed, int jobs = 1,
                                     const SweepProgress& progress = {});

/// Pearson correlation between each hyperparameter and val_mae over the best
/// top_fraction of records. Lambda enters as log(lambda), categorical axes as
/// one-hot columns, feature_len as a derived column. Zero-variance columns
/// report r = 0 with the degenerate flag set.
struct HyperparamCorrelation {
    std::string name;
    double r = 0.0;
    bool degenerate = false;
};

std::vector<HyperparamCorrelation> hyperparam_correlation(const std::vector<SweepRecord>& records,
                                                          double top_fraction);

// ---------------------------------------------------------------------------
// Sweep artifacts
// ---------------------------------------------------------------------------

/// One JSON document per record, newline-delimited, in the given order.
void write_sweep_jsonl(const std::vector<SweepRecord>& records,
                       const std::filesystem::path& path);

/// Ranked table: rank, test/val/train MAE, lambda, grid, cross, color space,
/// resolution, variant, feature_len.
void write_summary_csv(const std::vector<SweepRecord>& records,
                       const std::filesystem::path& path);

void write_correlations_json(const std::vector<HyperparamCorrelation>& correlations,
                             double top_fraction, std::size_t records_used,
                             const std::filesystem::path& path);

} // namespace brixkit
