#include "brixkit/selection.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "brixkit/format.hpp"
#include "brixkit/image_io.hpp"
#include "brixkit/metrics.hpp"
#include "brixkit/rng.hpp"

namespace brixkit {

namespace {

using nlohmann::ordered_json;

// Fine accumulation grid; every Table-style bin count divides it.
constexpr int kFineX = 16;
constexpr int kFineY = 32;

void run_parallel(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(count); // drain remaining work
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int spawned = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs), count));
    pool.reserve(static_cast<std::size_t>(spawned));
    for (int t = 0; t < spawned; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace

const char* to_string(DatasetVariant variant) {
    return variant == DatasetVariant::Std ? "std" : "wb";
}

DatasetVariant variant_from_string(const std::string& name) {
    if (name == "std") return DatasetVariant::Std;
    if (name == "wb") return DatasetVariant::Wb;
    throw Error(ErrorCode::InvalidInput, "unknown dataset variant '" + name + "'");
}

std::string SweepConfig::describe() const {
    return "nx=" + std::to_string(n_bin_x) + " ny=" + std::to_string(n_bin_y) +
           " cross=" + to_string(cross) + " space=" + to_string(space) +
           " res=" + to_string(resolution) + " variant=" + to_string(variant) +
           " lambda=" + format_double(lambda);
}

std::size_t GridSpace::size() const {
    return n_bin_x.size() * n_bin_y.size() * cross.size() * spaces.size() * resolutions.size() *
           variants.size() * lambdas.size();
}

void GridSpace::validate() const {
    if (n_bin_x.empty() || n_bin_y.empty() || cross.empty() || spaces.empty() ||
        resolutions.empty() || variants.empty() || lambdas.empty())
        throw Error(ErrorCode::InvalidConfig, "every grid axis needs at least one value");

    auto unique_count = [](const auto& values) {
        return std::set<typename std::decay_t<decltype(values)>::value_type>(values.begin(),
                                                                             values.end())
            .size();
    };
    if (unique_count(n_bin_x) != n_bin_x.size() || unique_count(n_bin_y) != n_bin_y.size() ||
        unique_count(cross) != cross.size() || unique_count(spaces) != spaces.size() ||
        unique_count(resolutions) != resolutions.size() ||
        unique_count(variants) != variants.size() || unique_count(lambdas) != lambdas.size())
        throw Error(ErrorCode::InvalidConfig, "grid axes must not repeat values");

    for (int nx : n_bin_x)
        if (nx < 1 || kFineX % nx != 0)
            throw Error(ErrorCode::InvalidConfig,
                        "n_bin_x values must divide " + std::to_string(kFineX));
    for (int ny : n_bin_y)
        if (ny < 1 || kFineY % ny != 0)
            throw Error(ErrorCode::InvalidConfig,
                        "n_bin_y values must divide " + std::to_string(kFineY));
    const bool has_cross_selection =
        std::find(cross.begin(), cross.end(), CrossMode::Fat) != cross.end() ||
        std::find(cross.begin(), cross.end(), CrossMode::Thin) != cross.end();
    if (has_cross_selection) {
        const int min_nx = *std::min_element(n_bin_x.begin(), n_bin_x.end());
        const int min_ny = *std::min_element(n_bin_y.begin(), n_bin_y.end());
        if (min_nx < 4 || min_ny < 4)
            throw Error(ErrorCode::InvalidConfig,
                        "fat/thin selection needs every grid dimension >= 4");
    }
    for (double l : lambdas)
        if (!(l >= 0.0) || !std::isfinite(l))
            throw Error(ErrorCode::InvalidConfig, "lambda values must be finite and >= 0");
}

std::vector<SweepConfig> GridSpace::enumerate() const {
    validate();
    std::vector<SweepConfig> configs;
    configs.reserve(size());
    for (DatasetVariant variant : variants)
        for (Resolution resolution : resolutions)
            for (ColorSpace space : spaces)
                for (int nx : n_bin_x)
                    for (int ny : n_bin_y)
                        for (CrossMode cm : cross)
                            for (double lambda : lambdas)
                                configs.push_back(
                                    {nx, ny, cm, space, resolution, variant, lambda});
    return configs;
}

std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k,
                                                    std::uint64_t seed) {
    if (k < 2) throw Error(ErrorCode::InvalidInput, "need at least 2 folds");
    if (n < k)
        throw Error(ErrorCode::TooFewSamples,
                    std::to_string(n) + " samples cannot fill " + std::to_string(k) + " folds");
    const std::vector<std::size_t> order = Rng(seed).permutation(n);
    std::vector<std::vector<std::size_t>> folds(k);
    const std::size_t base = n / k, extra = n % k;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t len = base + (f < extra ? 1 : 0);
        folds[f].assign(order.begin() + pos, order.begin() + pos + len);
        pos += len;
    }
    return folds;
}

std::vector<LabeledImage> augment_hflip(const std::vector<LabeledImage>& samples) {
    std::vector<LabeledImage> out;
    out.reserve(samples.size() * 2);
    out.insert(out.end(), samples.begin(), samples.end());
    for (const LabeledImage& s : samples)
        out.push_back({s.sample_id + kHflipSuffix, flip_horizontal(s.image), s.brix});
    return out;
}

// ---------------------------------------------------------------------------
// DirectFeatureSource
// ---------------------------------------------------------------------------

struct DirectFeatureSource::Impl {
    std::filesystem::path root;
    std::unordered_map<std::string, RasterImage> decoded;

    const RasterImage& image_for(const std::string& rel_path) {
        auto it = decoded.find(rel_path);
        if (it == decoded.end())
            it = decoded.emplace(rel_path, load_image(root / rel_path)).first;
        return it->second;
    }
};

DirectFeatureSource::DirectFeatureSource(std::filesystem::path image_root)
    : impl_(std::make_unique<Impl>()) {
    impl_->root = std::move(image_root);
}

DirectFeatureSource::~DirectFeatureSource() = default;

std::vector<double> DirectFeatureSource::features(const SampleRecord& record, bool flipped,
                                                  const FeatureConfig& config) {
    const RasterImage& base = impl_->image_for(record.image_path);
    if (flipped) return extract_features(flip_horizontal(base), config).values;
    return extract_features(base, config).values;
}

// ---------------------------------------------------------------------------
// CachedFeatureSource
// ---------------------------------------------------------------------------

namespace {

struct FineSums {
    // Per color space: kFineX*kFineY cells x 3 channels of pixel sums.
    std::array<std::vector<double>, 3> sums;
    bool ready = false;
};

std::string cache_key(const std::string& path, bool flipped, Resolution res) {
    return path + (flipped ? "|f|" : "|o|") + to_string(res);
}

// Pixel count of every fine cell at one working resolution.
std::vector<double> fine_counts(Resolution res) {
    const std::vector<CellRect> cells =
        grid_partition(resolution_width(res), resolution_height(res), kFineX, kFineY);
    std::vector<double> counts(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i)
        counts[i] = static_cast<double>(cells[i].width) * cells[i].height;
    return counts;
}

void accumulate_fine(const RasterImage& scaled, FineSums& entry) {
    const std::vector<CellRect> cells =
        grid_partition(scaled.width, scaled.height, kFineX, kFineY);
    for (int s = 0; s < 3; ++s)
        entry.sums[static_cast<std::size_t>(s)].assign(cells.size() * 3, 0.0);

    for (std::size_t c = 0; c < cells.size(); ++c) {
        const CellRect& rect = cells[c];
        double acc[3][3] = {};
        for (int y = rect.y; y < rect.y + rect.height; ++y) {
            const std::uint8_t* px = scaled.pixel(rect.x, y);
            for (int x = 0; x < rect.width; ++x, px += 3) {
                for (int s = 0; s < 3; ++s) {
                    const Pixel v = convert_pixel_u8(px[0], px[1], px[2],
                                                     static_cast<ColorSpace>(s));
                    acc[s][0] += v[0];
                    acc[s][1] += v[1];
                    acc[s][2] += v[2];
                }
            }
        }
        for (int s = 0; s < 3; ++s)
            for (int ch = 0; ch < 3; ++ch)
                entry.sums[static_cast<std::size_t>(s)][c * 3 + ch] = acc[s][ch];
    }
}

} // namespace

struct CachedFeatureSource::Impl {
    std::filesystem::path root;
    std::unordered_map<std::string, FineSums> entries;
    std::array<std::vector<double>, 3> counts_by_res;

    Impl() {
        counts_by_res[0] = fine_counts(Resolution::Low);
        counts_by_res[1] = fine_counts(Resolution::Med);
        counts_by_res[2] = fine_counts(Resolution::High);
    }

    const std::vector<double>& counts(Resolution res) const {
        return counts_by_res[static_cast<std::size_t>(res)];
    }
};

CachedFeatureSource::CachedFeatureSource(std::filesystem::path image_root)
    : impl_(std::make_unique<Impl>()) {
    impl_->root = std::move(image_root);
}

CachedFeatureSource::~CachedFeatureSource() = default;

void CachedFeatureSource::precompute(const std::vector<const SampleRecord*>& train_rows,
                                     const std::vector<const SampleRecord*>& test_rows,
                                     int jobs) {
    // Orientations needed per image file: training rows also get a flip.
    std::unordered_map<std::string, bool> needs_flip;
    for (const SampleRecord* r : test_rows) needs_flip.emplace(r->image_path, false);
    for (const SampleRecord* r : train_rows) needs_flip[r->image_path] = true;

    std::vector<std::pair<std::string, bool>> paths(needs_flip.begin(), needs_flip.end());
    std::sort(paths.begin(), paths.end());

    // Insert all map nodes up front; workers then touch disjoint entries only.
    static constexpr Resolution kResolutions[] = {Resolution::Low, Resolution::Med,
                                                  Resolution::High};
    for (const auto& [path, flip] : paths)
        for (Resolution res : kResolutions) {
            impl_->entries.try_emplace(cache_key(path, false, res));
            if (flip) impl_->entries.try_emplace(cache_key(path, true, res));
        }

    run_parallel(paths.size(), jobs, [&](std::size_t i) {
        const auto& [path, flip] = paths[i];
        const RasterImage original = load_image(impl_->root / path);
        for (int orientation = 0; orientation < (flip ? 2 : 1); ++orientation) {
            const RasterImage base =
                orientation == 0 ? original : flip_horizontal(original);
            for (Resolution res : kResolutions) {
                const RasterImage scaled =
                    resize(base, resolution_width(res), resolution_height(res));
                FineSums& entry = impl_->entries.at(cache_key(path, orientation == 1, res));
                accumulate_fine(scaled, entry);
                entry.ready = true;
            }
        }
    });
}

std::vector<double> CachedFeatureSource::features(const SampleRecord& record, bool flipped,
                                                  const FeatureConfig& config) {
    config.validate();
    if (kFineX % config.n_bin_x != 0 || kFineY % config.n_bin_y != 0)
        throw Error(ErrorCode::InvalidConfig,
                    "cached features need n_bin_x | " + std::to_string(kFineX) +
                        " and n_bin_y | " + std::to_string(kFineY));

    const auto it = impl_->entries.find(cache_key(record.image_path, flipped, config.resolution));
    if (it == impl_->entries.end() || !it->second.ready)
        throw Error(ErrorCode::InvalidInput,
                    "image '" + record.image_path + "' was not precomputed");

    const std::vector<double>& sums = it->second.sums[static_cast<std::size_t>(config.space)];
    const std::vector<double>& counts = impl_->counts(config.resolution);
    const int fx = kFineX / config.n_bin_x;
    const int fy = kFineY / config.n_bin_y;
    const CrossLimits limits = cross_limits(config.n_bin_x, config.n_bin_y, config.cross);

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(limits.kept_cells()) * 3);
    for (int J = limits.y0; J <= limits.y1; ++J)
        for (int I = limits.x0; I <= limits.x1; ++I) {
            double acc[3] = {0.0, 0.0, 0.0};
            double cnt = 0.0;
            for (int j = J * fy; j < (J + 1) * fy; ++j)
                for (int i = I * fx; i < (I + 1) * fx; ++i) {
                    const std::size_t cell = static_cast<std::size_t>(j) * kFineX + i;
                    cnt += counts[cell];
                    acc[0] += sums[cell * 3 + 0];
                    acc[1] += sums[cell * 3 + 1];
                    acc[2] += sums[cell * 3 + 2];
                }
            out.push_back(acc[0] / cnt);
            out.push_back(acc[1] / cnt);
            out.push_back(acc[2] / cnt);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

void copy_row(DataMatrix& m, std::size_t row, const std::vector<double>& values) {
    std::copy(values.begin(), values.end(), m.data.begin() + row * m.cols);
}

SweepRecord evaluate_config_inner(const DatasetSplit& split, const SweepConfig& config,
                                  std::uint64_t seed, FeatureSource& source) {
    const FeatureConfig fc = config.feature_config();
    fc.validate();
    if (!(config.lambda >= 0.0) || !std::isfinite(config.lambda))
        throw Error(ErrorCode::InvalidInput, "lambda must be finite and >= 0");
    if (split.train.empty()) throw Error(ErrorCode::EmptyInput, "split has no training samples");

    const std::size_t n = split.train.size();
    const std::size_t d = static_cast<std::size_t>(feature_length(fc));
    const auto folds = kfold_indices(n, kCvFolds, seed);

    DataMatrix orig(n, d), mirrored(n, d);
    std::vector<double> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        const SampleRecord& rec = split.train[i];
        const std::vector<double> fo = source.features(rec, false, fc);
        const std::vector<double> ff = source.features(rec, true, fc);
        if (fo.size() != d || ff.size() != d)
            throw Error(ErrorCode::DimensionMismatch, "feature source returned a wrong length");
        copy_row(orig, i, fo);
        copy_row(mirrored, i, ff);
        labels[i] = rec.brix_mean;
    }

    SweepRecord record;
    record.config = config;
    record.feature_len = static_cast<int>(d);

    // Cross-validation: flips join only the training side of each iteration.
    for (std::size_t f = 0; f < kCvFolds; ++f) {
        std::vector<std::size_t> train_idx;
        train_idx.reserve(n - folds[f].size());
        for (std::size_t g = 0; g < kCvFolds; ++g)
            if (g != f) train_idx.insert(train_idx.end(), folds[g].begin(), folds[g].end());

        const std::size_t nt = train_idx.size();
        DataMatrix x_train(2 * nt, d);
        std::vector<double> y_train(2 * nt);
        for (std::size_t i = 0; i < nt; ++i) {
            std::copy_n(orig.data.begin() + train_idx[i] * d, d,
                        x_train.data.begin() + i * d);
            std::copy_n(mirrored.data.begin() + train_idx[i] * d, d,
                        x_train.data.begin() + (nt + i) * d);
            y_train[i] = labels[train_idx[i]];
            y_train[nt + i] = labels[train_idx[i]];
        }
        const RidgeModel model = ridge_fit(x_train, y_train, config.lambda);

        DataMatrix x_val(folds[f].size(), d);
        std::vector<double> y_val(folds[f].size());
        for (std::size_t i = 0; i < folds[f].size(); ++i) {
            std::copy_n(orig.data.begin() + folds[f][i] * d, d, x_val.data.begin() + i * d);
            y_val[i] = labels[folds[f][i]];
        }
        record.fold_maes.push_back(mae(ridge_predict(model, x_val), y_val));
    }
    double total = 0.0;
    for (double m : record.fold_maes) total += m;
    record.val_mae = total / static_cast<double>(record.fold_maes.size());

    // Final model on the full augmented training set.
    DataMatrix x_full(2 * n, d);
    std::vector<double> y_full(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        std::copy_n(orig.data.begin() + i * d, d, x_full.data.begin() + i * d);
        std::copy_n(mirrored.data.begin() + i * d, d, x_full.data.begin() + (n + i) * d);
        y_full[i] = labels[i];
        y_full[n + i] = labels[i];
    }
    const RidgeModel final_model = ridge_fit(x_full, y_full, config.lambda);
    record.train_mae = mae(ridge_predict(final_model, x_full), y_full);

    if (!split.test.empty()) {
        DataMatrix x_test(split.test.size(), d);
        std::vector<double> y_test(split.test.size());
        for (std::size_t i = 0; i < split.test.size(); ++i) {
            copy_row(x_test, i, source.features(split.test[i], false, fc));
            y_test[i] = split.test[i].brix_mean;
        }
        record.test_mae = mae(ridge_predict(final_model, x_test), y_test);
    }
    return record;
}

} // namespace

SweepRecord evaluate_config(const DatasetSplit& split, const SweepConfig& config,
                            std::uint64_t seed, FeatureSource& source) {
    try {
        return evaluate_config_inner(split, config, seed, source);
    } catch (const Error& e) {
        throw Error(e.code(), e.message() + " [" + config.describe() + "]");
    }
}

SweepRecord evaluate_config(const DatasetSplit& split, const SweepConfig& config,
                            std::uint64_t seed, const std::filesystem::path& image_root) {
    DirectFeatureSource source(image_root);
    return evaluate_config(split, config, seed, source);
}

// ---------------------------------------------------------------------------
// SweepDataset
// ---------------------------------------------------------------------------

SweepDataset SweepDataset::from_family(const std::vector<SampleRecord>& records,
                                       const std::string& family,
                                       std::filesystem::path image_root) {
    if (family == "Ss_a")
        throw Error(ErrorCode::UsageError,
                    "Ss_a has no std counterpart; sweep over the Ss family instead");
    std::string base = family.substr(0, family.find('_'));
    if (base != "Sm" && base != "Ss" && base != "Ms")
        throw Error(ErrorCode::UnknownSplitName,
                    "'" + family + "' does not name a split family (Sm, Ss, Ms)");
    SweepDataset dataset;
    dataset.std_split = build_split(records, base + "_j");
    dataset.wb_split = build_split(records, base + "_w");
    dataset.image_root = std::move(image_root);
    return dataset;
}

SweepDataset SweepDataset::with_holdout(std::size_t test_count, std::uint64_t seed) const {
    if (!std_split.test.empty() || !wb_split.test.empty())
        throw Error(ErrorCode::InvalidInput, "split already has a test set");
    if (test_count == 0) return *this;

    std::set<std::string> ids;
    for (const SampleRecord& r : std_split.train) ids.insert(r.sample_id);
    for (const SampleRecord& r : wb_split.train) ids.insert(r.sample_id);
    if (test_count >= ids.size())
        throw Error(ErrorCode::TooFewSamples, "holdout would leave no training samples");

    const std::vector<std::string> sorted_ids(ids.begin(), ids.end());
    const std::vector<std::size_t> order = Rng(seed).permutation(sorted_ids.size());
    std::unordered_set<std::string> holdout;
    for (std::size_t i = 0; i < test_count; ++i) holdout.insert(sorted_ids[order[i]]);

    SweepDataset out = *this;
    for (DatasetSplit* split : {&out.std_split, &out.wb_split}) {
        std::vector<SampleRecord> kept, moved;
        for (SampleRecord& r : split->train)
            (holdout.count(r.sample_id) ? moved : kept).push_back(std::move(r));
        split->train = std::move(kept);
        split->test = std::move(moved);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Grid search
// ---------------------------------------------------------------------------

std::vector<SweepRecord> grid_search(const SweepDataset& dataset, const GridSpace& grid,
                                     std::uint64_t seed, int jobs,
                                     const SweepProgress& progress) {
    grid.validate();
    const std::vector<SweepConfig> configs = grid.enumerate();

    std::vector<const SampleRecord*> train_rows, test_rows;
    for (DatasetVariant variant : grid.variants) {
        const DatasetSplit& split = dataset.by_variant(variant);
        if (split.train.empty())
            throw Error(ErrorCode::EmptyInput,
                        std::string("no training rows for the ") + to_string(variant) +
                            " variant of split " + split.name);
        for (const SampleRecord& r : split.train) train_rows.push_back(&r);
        for (const SampleRecord& r : split.test) test_rows.push_back(&r);
    }

    CachedFeatureSource source(dataset.image_root);
    source.precompute(train_rows, test_rows, jobs);

    std::vector<SweepRecord> records(configs.size());
    std::atomic<std::size_t> completed{0};
    std::mutex progress_mutex;
    run_parallel(configs.size(), jobs, [&](std::size_t i) {
        records[i] =
            evaluate_config(dataset.by_variant(configs[i].variant), configs[i], seed, source);
        if (progress) {
            const std::size_t done = completed.fetch_add(1) + 1;
            std::lock_guard lock(progress_mutex);
            progress(done, configs.size());
        }
    });

    // Rank: best validation error first; ties prefer the simpler model.
    std::vector<std::size_t> order(records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto sort_key = [](double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : v; };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const SweepRecord& ra = records[a];
        const SweepRecord& rb = records[b];
        if (sort_key(ra.val_mae) != sort_key(rb.val_mae))
            return sort_key(ra.val_mae) < sort_key(rb.val_mae);
        if (ra.feature_len != rb.feature_len) return ra.feature_len < rb.feature_len;
        if (ra.config.lambda != rb.config.lambda) return ra.config.lambda > rb.config.lambda;
        return a < b; // canonical grid order
    });

    std::vector<SweepRecord> ranked;
    ranked.reserve(records.size());
    for (std::size_t i : order) ranked.push_back(std::move(records[i]));
    return ranked;
}

// ---------------------------------------------------------------------------
// Hyperparameter correlation
// ---------------------------------------------------------------------------

std::vector<HyperparamCorrelation> hyperparam_correlation(const std::vector<SweepRecord>& records,
                                                          double top_fraction) {
    if (!(top_fraction > 0.0 && top_fraction <= 1.0))
        throw Error(ErrorCode::InvalidInput, "top fraction must lie in (0, 1]");

    std::vector<const SweepRecord*> sorted;
    sorted.reserve(records.size());
    for (const SweepRecord& r : records) sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const SweepRecord* a, const SweepRecord* b) {
                         return a->val_mae < b->val_mae;
                     });

    const std::size_t kept =
        static_cast<std::size_t>(std::floor(top_fraction * static_cast<double>(sorted.size())));
    if (kept < 3)
        throw Error(ErrorCode::TooFewRecords,
                    "top fraction keeps " + std::to_string(kept) + " records, need at least 3");
    sorted.resize(kept);

    std::vector<double> val_mae(kept);
    for (std::size_t i = 0; i < kept; ++i) val_mae[i] = sorted[i]->val_mae;

    struct Column {
        std::string name;
        std::function<double(const SweepRecord&)> value;
    };
    const std::vector<Column> columns = {
        {"n_bin_x", [](const SweepRecord& r) { return static_cast<double>(r.config.n_bin_x); }},
        {"n_bin_y", [](const SweepRecord& r) { return static_cast<double>(r.config.n_bin_y); }},
        {"log_lambda", [](const SweepRecord& r) { return std::log(r.config.lambda); }},
        {"feature_len", [](const SweepRecord& r) { return static_cast<double>(r.feature_len); }},
        {"cross=none", [](const SweepRecord& r) { return r.config.cross == CrossMode::None; }},
        {"cross=thin", [](const SweepRecord& r) { return r.config.cross == CrossMode::Thin; }},
        {"cross=fat", [](const SweepRecord& r) { return r.config.cross == CrossMode::Fat; }},
        {"space=rgb", [](const SweepRecord& r) { return r.config.space == ColorSpace::Rgb; }},
        {"space=hsv", [](const SweepRecord& r) { return r.config.space == ColorSpace::Hsv; }},
        {"space=lab", [](const SweepRecord& r) { return r.config.space == ColorSpace::Lab; }},
        {"resolution=low",
         [](const SweepRecord& r) { return r.config.resolution == Resolution::Low; }},
        {"resolution=med",
         [](const SweepRecord& r) { return r.config.resolution == Resolution::Med; }},
        {"resolution=high",
         [](const SweepRecord& r) { return r.config.resolution == Resolution::High; }},
        {"variant=std",
         [](const SweepRecord& r) { return r.config.variant == DatasetVariant::Std; }},
        {"variant=wb",
         [](const SweepRecord& r) { return r.config.variant == DatasetVariant::Wb; }},
    };

    std::vector<HyperparamCorrelation> out;
    out.reserve(columns.size());
    for (const Column& col : columns) {
        std::vector<double> values(kept);
        bool finite = true;
        for (std::size_t i = 0; i < kept; ++i) {
            values[i] = col.value(*sorted[i]);
            finite = finite && std::isfinite(values[i]);
        }
        HyperparamCorrelation c;
        c.name = col.name;
        if (!finite) {
            c.degenerate = true; // e.g. log(0) when a grid carries lambda = 0
            out.push_back(std::move(c));
            continue;
        }
        try {
            c.r = pearson(values, val_mae);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateVariance) throw;
            c.r = 0.0;
            c.degenerate = true;
        }
        out.push_back(std::move(c));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sweep artifacts
// ---------------------------------------------------------------------------

namespace {

ordered_json record_to_json(const SweepRecord& r) {
    ordered_json doc;
    doc["config"] = {
        {"n_bin_x", r.config.n_bin_x},   {"n_bin_y", r.config.n_bin_y},
        {"cross", to_string(r.config.cross)}, {"space", to_string(r.config.space)},
        {"resolution", to_string(r.config.resolution)},
        {"variant", to_string(r.config.variant)}, {"lambda", r.config.lambda},
    };
    doc["fold_maes"] = r.fold_maes;
    doc["val_mae"] = r.val_mae;
    doc["train_mae"] = r.train_mae;
    if (r.test_mae)
        doc["test_mae"] = *r.test_mae;
    else
        doc["test_mae"] = nullptr;
    doc["feature_len"] = r.feature_len;
    return doc;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    return out;
}

} // namespace

void write_sweep_jsonl(const std::vector<SweepRecord>& records,
                       const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    for (const SweepRecord& r : records) out << record_to_json(r).dump() << '\n';
    if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

void write_summary_csv(const std::vector<SweepRecord>& records,
                       const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "rank,test_mae,val_mae,train_mae,lambda,n_bin_x,n_bin_y,cross,color_space,"
           "resolution,variant,feature_len\n";
    std::size_t rank = 1;
    for (const SweepRecord& r : records) {
        out << rank++ << ',' << (r.test_mae ? format_double(*r.test_mae) : std::string()) << ','
            << format_double(r.val_mae) << ',' << format_double(r.train_mae) << ','
            << format_double(r.config.lambda) << ',' << r.config.n_bin_x << ','
            << r.config.n_bin_y << ',' << to_string(r.config.cross) << ','
            << to_string(r.config.space) << ',' << to_string(r.config.resolution) << ','
            << to_string(r.config.variant) << ',' << r.feature_len << '\n';
    }
    if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

void write_correlations_json(const std::vector<HyperparamCorrelation>& correlations,
                             double top_fraction, std::size_t records_used,
                             const std::filesystem::path& path) {
    ordered_json doc;
    doc["top_fraction"] = top_fraction;
    doc["records_used"] = records_used;
    doc["correlations"] = ordered_json::array();
    for (const HyperparamCorrelation& c : correlations)
        doc["correlations"].push_back(
            {{"name", c.name}, {"r", c.r}, {"degenerate", c.degenerate}});
    std::ofstream out = open_out(path);
    out << doc.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

} // namespace brixkit
