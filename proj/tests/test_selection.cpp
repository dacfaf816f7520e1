#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "brixkit/selection.hpp"
#include "brixkit/synth.hpp"

#include "helpers.hpp"

using namespace brixkit;
using testutil::TempDir;

namespace {

// Synthetic dataset on disk plus the loaded manifest, shared per test case.
struct SynthFixture {
    TempDir dir;
    std::vector<SampleRecord> records;

    explicit SynthFixture(int count, double sigma = 0.0, bool with_wb = false,
                          std::uint64_t seed = 42, int nx = 2, int ny = 2) {
        SynthConfig config;
        config.width = 64;
        config.height = 48;
        config.n_bin_x = nx;
        config.n_bin_y = ny;
        config.count = count;
        config.noise_sigma = sigma;
        config.weights = synth_random_weights(nx, ny, seed + 1);
        SynthWriteOptions options;
        options.with_wb = with_wb;
        records = write_synth_dataset(config, seed, dir.path(), options);
    }

    DatasetSplit split(const std::string& name = "Sm_j") const {
        return build_split(records, name);
    }
};

SweepConfig tiny_config(double lambda = 0.33) {
    SweepConfig config;
    config.n_bin_x = 4;
    config.n_bin_y = 8;
    config.cross = CrossMode::None;
    config.space = ColorSpace::Rgb;
    config.resolution = Resolution::Low;
    config.variant = DatasetVariant::Std;
    config.lambda = lambda;
    return config;
}

} // namespace

TEST_SUITE("selection") {

TEST_CASE("kfold indices") {
    SUBCASE("10 into 5 folds of 2, disjoint and covering") {
        const auto folds = kfold_indices(10, 5, 7);
        REQUIRE(folds.size() == 5);
        std::set<std::size_t> seen;
        for (const auto& fold : folds) {
            CHECK(fold.size() == 2);
            seen.insert(fold.begin(), fold.end());
        }
        CHECK(seen.size() == 10);
        CHECK(*seen.begin() == 0);
        CHECK(*seen.rbegin() == 9);
    }
    SUBCASE("7 into 5 folds has sizes 2,2,1,1,1") {
        const auto folds = kfold_indices(7, 5, 3);
        std::vector<std::size_t> sizes;
        for (const auto& fold : folds) sizes.push_back(fold.size());
        CHECK(sizes == std::vector<std::size_t>{2, 2, 1, 1, 1});
    }
    SUBCASE("same arguments give identical folds, different seeds differ") {
        CHECK(kfold_indices(20, 5, 11) == kfold_indices(20, 5, 11));
        CHECK(kfold_indices(20, 5, 11) != kfold_indices(20, 5, 12));
    }
    SUBCASE("too few samples") {
        CHECK_THROWS_AS(kfold_indices(4, 5, 1), Error);
        try {
            kfold_indices(4, 5, 1);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::TooFewSamples);
        }
    }
}

TEST_CASE("augment_hflip") {
    SUBCASE("doubles the sample count with hflip provenance") {
        std::vector<LabeledImage> samples;
        for (int i = 0; i < 89; ++i)
            samples.push_back({"s" + std::to_string(i), testutil::noise_image(8, 6, i), 15.0});
        const auto augmented = augment_hflip(samples);
        REQUIRE(augmented.size() == 178);
        for (int i = 0; i < 89; ++i) {
            CHECK(augmented[i].sample_id == samples[i].sample_id);
            CHECK(augmented[89 + i].sample_id == samples[i].sample_id + kHflipSuffix);
            CHECK(augmented[89 + i].brix == samples[i].brix);
            // flip of the stored flip equals the original image
            CHECK(flip_horizontal(augmented[89 + i].image) == samples[i].image);
        }
    }
    SUBCASE("empty input stays empty") { CHECK(augment_hflip({}).empty()); }
}

TEST_CASE("grid space") {
    SUBCASE("the full grid enumerates 3888 configurations") {
        const GridSpace grid;
        CHECK(grid.size() == 3888);
        const auto configs = grid.enumerate();
        CHECK(configs.size() == 3888);
        std::set<std::string> unique;
        for (const SweepConfig& c : configs) unique.insert(c.describe());
        CHECK(unique.size() == 3888);
    }
    SUBCASE("sub-grid counts are the product of axis sizes") {
        GridSpace grid;
        grid.n_bin_x = {4, 8};
        grid.spaces = {ColorSpace::Hsv};
        grid.variants = {DatasetVariant::Std};
        grid.lambdas = {1.0, 9.0, 81.0};
        CHECK(grid.size() == 2 * 3 * 3 * 1 * 3 * 1 * 3);
        CHECK(grid.enumerate().size() == grid.size());
    }
    SUBCASE("invalid axes are rejected") {
        GridSpace grid;
        grid.n_bin_x = {5};
        CHECK_THROWS_AS(grid.validate(), Error);
        grid = GridSpace{};
        grid.lambdas = {};
        CHECK_THROWS_AS(grid.validate(), Error);
        grid = GridSpace{};
        grid.lambdas = {1.0, 1.0};
        CHECK_THROWS_AS(grid.validate(), Error);
        grid = GridSpace{};
        grid.n_bin_x = {2}; // fat/thin in the default cross axis need >= 4
        CHECK_THROWS_AS(grid.validate(), Error);
    }
}

TEST_CASE("evaluate_config on planted data") {
    SUBCASE("noise-free planted labels are recovered almost exactly") {
        const SynthFixture fixture(150, 0.0, false, 5, 4, 8);
        const SweepRecord record = evaluate_config(fixture.split(), tiny_config(0.33), 17,
                                                   fixture.dir.path());
        CHECK(record.fold_maes.size() == kCvFolds);
        double mean = 0.0;
        for (double m : record.fold_maes) mean += m;
        CHECK(record.val_mae == doctest::Approx(mean / kCvFolds).epsilon(1e-12));
        CHECK(record.val_mae < 0.05);
        CHECK(record.feature_len == 96);
        CHECK(!record.test_mae.has_value()); // Simple split has no test half
    }
    SUBCASE("constant labels give zero error") {
        SynthConfig config;
        config.width = 64;
        config.height = 48;
        config.n_bin_x = 2;
        config.n_bin_y = 2;
        config.count = 20;
        config.weights.assign(12, 0.0);
        config.bias = 15.0;
        TempDir dir;
        const auto records = write_synth_dataset(config, 9, dir.path());
        const SweepRecord record = evaluate_config(build_split(records, "Sm_j"),
                                                   tiny_config(9.0), 3, dir.path());
        CHECK(record.val_mae == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(record.train_mae == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("test_mae appears when the split has a test half") {
        SynthConfig config;
        config.width = 64;
        config.height = 48;
        config.n_bin_x = 2;
        config.n_bin_y = 2;
        config.count = 30;
        config.weights = synth_random_weights(2, 2, 8);
        TempDir dir;
        SynthWriteOptions options;
        options.atomic_splits = "ACDFHI"; // populates the seasonal split
        const auto records = write_synth_dataset(config, 10, dir.path(), options);
        const DatasetSplit split = build_split(records, "Ss_j");
        REQUIRE(!split.test.empty());
        const SweepRecord record = evaluate_config(split, tiny_config(0.33), 3, dir.path());
        REQUIRE(record.test_mae.has_value());
        CHECK(*record.test_mae < 0.1); // exact linear task
    }
    SUBCASE("errors carry the offending configuration") {
        const SynthFixture fixture(10);
        SweepConfig config = tiny_config();
        config.lambda = -2.0;
        try {
            evaluate_config(fixture.split(), config, 1, fixture.dir.path());
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("lambda=-2") != std::string::npos);
        }
    }
}

TEST_CASE("cross-validation never leaks flipped copies into validation") {
    // Provenance check: for every fold, augmented train ids and val ids are
    // disjoint and no val id carries the hflip suffix.
    const std::size_t n = 23;
    const auto folds = kfold_indices(n, kCvFolds, 99);
    for (std::size_t f = 0; f < kCvFolds; ++f) {
        std::set<std::string> train_ids;
        for (std::size_t g = 0; g < kCvFolds; ++g) {
            if (g == f) continue;
            for (std::size_t idx : folds[g]) {
                train_ids.insert("s" + std::to_string(idx));
                train_ids.insert("s" + std::to_string(idx) + kHflipSuffix);
            }
        }
        for (std::size_t idx : folds[f]) {
            const std::string val_id = "s" + std::to_string(idx);
            CHECK(train_ids.count(val_id) == 0);
            CHECK(val_id.find(kHflipSuffix) == std::string::npos);
        }
    }
}

TEST_CASE("grid_search") {
    const SynthFixture fixture(15, 0.0, true, 21, 4, 8);
    const SweepDataset dataset =
        SweepDataset::from_family(fixture.records, "Sm", fixture.dir.path());

    SUBCASE("a single-point grid reproduces evaluate_config") {
        GridSpace grid;
        grid.n_bin_x = {4};
        grid.n_bin_y = {8};
        grid.cross = {CrossMode::None};
        grid.spaces = {ColorSpace::Rgb};
        grid.resolutions = {Resolution::Low};
        grid.variants = {DatasetVariant::Std};
        grid.lambdas = {0.33};
        const auto ranked = grid_search(dataset, grid, 13, 1);
        REQUIRE(ranked.size() == 1);

        const SweepRecord direct =
            evaluate_config(dataset.std_split, tiny_config(0.33), 13, fixture.dir.path());
        CHECK(ranked[0].config == direct.config);
        // Cached aggregation differs from the direct path only by summation order.
        CHECK(ranked[0].val_mae == doctest::Approx(direct.val_mae).epsilon(1e-9));
        CHECK(ranked[0].train_mae == doctest::Approx(direct.train_mae).epsilon(1e-9));
    }

    SUBCASE("smaller lambda ranks first on a noiseless linear task") {
        GridSpace grid;
        grid.n_bin_x = {4};
        grid.n_bin_y = {8};
        grid.cross = {CrossMode::None};
        grid.spaces = {ColorSpace::Rgb};
        grid.resolutions = {Resolution::Low};
        grid.variants = {DatasetVariant::Std};
        grid.lambdas = {0.33, 729.0};
        const auto ranked = grid_search(dataset, grid, 13, 1);
        REQUIRE(ranked.size() == 2);
        CHECK(ranked[0].config.lambda == 0.33);
        CHECK(ranked[0].val_mae <= ranked[1].val_mae);
    }

    SUBCASE("results are identical regardless of worker count") {
        GridSpace grid;
        grid.n_bin_x = {4};
        grid.n_bin_y = {8, 16};
        grid.cross = {CrossMode::None, CrossMode::Fat};
        grid.spaces = {ColorSpace::Rgb, ColorSpace::Hsv};
        grid.resolutions = {Resolution::Low};
        grid.variants = {DatasetVariant::Std, DatasetVariant::Wb};
        grid.lambdas = {0.33, 9.0};
        const auto a = grid_search(dataset, grid, 5, 1);
        const auto b = grid_search(dataset, grid, 5, 3);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].config == b[i].config);
            CHECK(a[i].val_mae == b[i].val_mae);
            CHECK(a[i].fold_maes == b[i].fold_maes);
        }

        TempDir out;
        write_sweep_jsonl(a, out.file("a.jsonl"));
        write_sweep_jsonl(b, out.file("b.jsonl"));
        CHECK(testutil::read_file(out.file("a.jsonl")) ==
              testutil::read_file(out.file("b.jsonl")));
    }

    SUBCASE("missing wb rows fail upfront when the grid wants them") {
        const SynthFixture no_wb(12, 0.0, false, 3, 4, 8);
        const SweepDataset flat =
            SweepDataset::from_family(no_wb.records, "Sm", no_wb.dir.path());
        GridSpace grid;
        grid.variants = {DatasetVariant::Std, DatasetVariant::Wb};
        CHECK_THROWS_AS(grid_search(flat, grid, 1, 1), Error);
    }
}

TEST_CASE("sweep dataset helpers") {
    const SynthFixture fixture(14, 0.0, true, 33, 4, 8);

    SUBCASE("family lookup accepts member names") {
        const auto a = SweepDataset::from_family(fixture.records, "Sm", fixture.dir.path());
        const auto b = SweepDataset::from_family(fixture.records, "Sm_w", fixture.dir.path());
        CHECK(a.std_split.train.size() == b.std_split.train.size());
        CHECK(a.wb_split.train.size() == 14);
        CHECK_THROWS_AS(SweepDataset::from_family(fixture.records, "Ss_a", fixture.dir.path()),
                        Error);
        CHECK_THROWS_AS(SweepDataset::from_family(fixture.records, "Zz", fixture.dir.path()),
                        Error);
    }

    SUBCASE("holdout moves the same sample ids in both variants") {
        const auto dataset = SweepDataset::from_family(fixture.records, "Sm", fixture.dir.path());
        const auto held = dataset.with_holdout(4, 7);
        CHECK(held.std_split.train.size() == 10);
        CHECK(held.std_split.test.size() == 4);
        CHECK(held.wb_split.test.size() == 4);
        std::set<std::string> std_ids, wb_ids;
        for (const auto& r : held.std_split.test) std_ids.insert(r.sample_id);
        for (const auto& r : held.wb_split.test) wb_ids.insert(r.sample_id);
        CHECK(std_ids == wb_ids);
        // deterministic in the seed
        const auto again = dataset.with_holdout(4, 7);
        std::set<std::string> again_ids;
        for (const auto& r : again.std_split.test) again_ids.insert(r.sample_id);
        CHECK(again_ids == std_ids);
        CHECK_THROWS_AS(dataset.with_holdout(14, 7), Error);
        CHECK_THROWS_AS(held.with_holdout(2, 7), Error); // already has a test set
    }
}

TEST_CASE("hyperparameter correlation") {
    auto record_with = [](double lambda, double val_mae, int feature_len) {
        SweepRecord r;
        r.config = tiny_config(lambda);
        r.val_mae = val_mae;
        r.feature_len = feature_len;
        return r;
    };

    SUBCASE("val_mae equal to log lambda correlates perfectly") {
        std::vector<SweepRecord> records;
        for (double lambda : {0.33, 1.0, 3.0, 9.0, 27.0, 81.0, 243.0, 729.0})
            records.push_back(record_with(lambda, std::log(lambda), 96));
        const auto report = hyperparam_correlation(records, 1.0);
        for (const auto& c : report) {
            if (c.name == "log_lambda") {
                CHECK(!c.degenerate);
                CHECK(c.r == doctest::Approx(1.0).epsilon(1e-12));
            }
            if (c.name == "n_bin_x") CHECK(c.degenerate); // constant column
        }
    }

    SUBCASE("constant val_mae flags every column as degenerate with r = 0") {
        std::vector<SweepRecord> records;
        for (double lambda : {0.33, 1.0, 3.0, 9.0}) records.push_back(record_with(lambda, 2.0, 96));
        const auto report = hyperparam_correlation(records, 1.0);
        for (const auto& c : report) {
            CHECK(c.r == 0.0);
            CHECK(c.degenerate);
        }
    }

    SUBCASE("error growing with feature length shows a positive correlation") {
        std::vector<SweepRecord> records;
        for (int len : {96, 192, 384, 768})
            records.push_back(record_with(9.0, 0.01 * len, len));
        const auto report = hyperparam_correlation(records, 1.0);
        for (const auto& c : report)
            if (c.name == "feature_len") {
                CHECK(!c.degenerate);
                CHECK(c.r > 0.99);
            }
    }

    SUBCASE("top fraction keeps the best records only") {
        std::vector<SweepRecord> records;
        for (int i = 0; i < 10; ++i)
            records.push_back(record_with(1.0, i < 5 ? 1.0 + i * 0.1 : 100.0, 96 + i));
        // With half the records kept, the 100.0 outliers never enter.
        const auto report = hyperparam_correlation(records, 0.5);
        CHECK(!report.empty());
        CHECK_THROWS_AS(hyperparam_correlation(records, 0.1), Error); // keeps 1 < 3
        CHECK_THROWS_AS(hyperparam_correlation(records, 1.5), Error);
    }
}

TEST_CASE("cached features agree with direct extraction on every grid shape") {
    // The sweep's fine-grid aggregation must reproduce the canonical
    // resize -> convert -> cell-mean pipeline up to summation order.
    const SynthFixture fixture(3, 0.5, false, 61, 4, 8);
    const DatasetSplit split = fixture.split();

    std::vector<const SampleRecord*> train_rows;
    for (const SampleRecord& r : split.train) train_rows.push_back(&r);
    CachedFeatureSource cached(fixture.dir.path());
    cached.precompute(train_rows, {}, 1);
    DirectFeatureSource direct(fixture.dir.path());

    for (int nx : {4, 8, 16})
        for (int ny : {8, 16, 32})
            for (CrossMode cm : {CrossMode::None, CrossMode::Thin, CrossMode::Fat})
                for (ColorSpace space : {ColorSpace::Rgb, ColorSpace::Hsv, ColorSpace::Lab})
                    for (bool flipped : {false, true}) {
                        const FeatureConfig fc{nx, ny, cm, space, Resolution::Low};
                        const auto a = cached.features(split.train[0], flipped, fc);
                        const auto b = direct.features(split.train[0], flipped, fc);
                        REQUIRE(a.size() == b.size());
                        for (std::size_t i = 0; i < a.size(); ++i)
                            CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
                    }
}

TEST_CASE("sweep artifact writers") {
    TempDir dir;
    std::vector<SweepRecord> records(2);
    records[0].config = tiny_config(9.0);
    records[0].fold_maes = {0.1, 0.2, 0.3, 0.4, 0.5};
    records[0].val_mae = 0.3;
    records[0].train_mae = 0.1;
    records[0].test_mae = 0.25;
    records[0].feature_len = 96;
    records[1].config = tiny_config(0.33);
    records[1].fold_maes = {1, 1, 1, 1, 1};
    records[1].val_mae = 1.0;
    records[1].train_mae = 0.9;
    records[1].feature_len = 96;

    write_sweep_jsonl(records, dir.file("sweep.jsonl"));
    const std::string jsonl = testutil::read_file(dir.file("sweep.jsonl"));
    CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == 2);
    CHECK(jsonl.find("\"val_mae\":0.3") != std::string::npos);
    CHECK(jsonl.find("\"test_mae\":null") != std::string::npos);

    write_summary_csv(records, dir.file("summary.csv"));
    const std::string csv = testutil::read_file(dir.file("summary.csv"));
    CHECK(csv.find("rank,test_mae,val_mae,train_mae,lambda,n_bin_x,n_bin_y,cross,color_space,"
                   "resolution,variant,feature_len") == 0);
    CHECK(csv.find("1,0.25,0.3,") != std::string::npos);
    CHECK(csv.find("2,,1,") != std::string::npos); // absent test_mae is an empty cell

    const std::vector<HyperparamCorrelation> correlations = {
        {"log_lambda", 0.9, false}, {"n_bin_x", 0.0, true}};
    write_correlations_json(correlations, 0.10, 2, dir.file("corr.json"));
    const std::string corr = testutil::read_file(dir.file("corr.json"));
    CHECK(corr.find("\"top_fraction\": 0.1") != std::string::npos);
    CHECK(corr.find("\"log_lambda\"") != std::string::npos);
    CHECK(corr.find("\"degenerate\": true") != std::string::npos);
}

} // TEST_SUITE
