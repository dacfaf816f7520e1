// brixkit — grape SSC (°Brix) estimation from RGB bunch images.
//
// Subcommands bind the library into reproducible batch runs: machine-readable
// JSON/CSV goes to stdout (or --out), human-readable notes go to stderr, and
// all randomness flows from --seed. Exit codes: 1 usage, 2 data, 3 i/o,
// 4 numerical.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "brixkit/dataset.hpp"
#include "brixkit/features.hpp"
#include "brixkit/format.hpp"
#include "brixkit/metrics.hpp"
#include "brixkit/model_io.hpp"
#include "brixkit/ridge.hpp"
#include "brixkit/selection.hpp"
#include "brixkit/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

void emit(const std::string& payload, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << payload;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw brixkit::Error(brixkit::ErrorCode::IoError, "cannot write '" + out_path + "'");
    out << payload;
    if (!out) throw brixkit::Error(brixkit::ErrorCode::IoError, "write failed for '" + out_path + "'");
}

void emit_json(const ordered_json& doc, const std::string& out_path) {
    emit(doc.dump(2) + "\n", out_path);
}

template <typename T>
std::vector<T> parse_list(const std::string& csv, T (*convert)(const std::string&)) {
    std::vector<T> values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) values.push_back(convert(item));
    if (values.empty())
        throw brixkit::Error(brixkit::ErrorCode::UsageError, "empty value list '" + csv + "'");
    return values;
}

int to_int(const std::string& s) { return std::stoi(s); }
double to_double(const std::string& s) { return std::stod(s); }

ordered_json harvest_to_json(const brixkit::HarvestReport& rep) {
    return ordered_json{{"threshold", rep.threshold},
                        {"tp", rep.tp},
                        {"fp", rep.fp},
                        {"fn", rep.fn},
                        {"tn", rep.tn},
                        {"precision", rep.precision},
                        {"recall", rep.recall},
                        {"f1", rep.f1},
                        {"fdr", rep.fdr},
                        {"fnr", rep.fnr},
                        {"degenerate_precision", rep.degenerate_precision},
                        {"degenerate_recall", rep.degenerate_recall}};
}

ordered_json stats_to_json(const brixkit::SplitStats& s) {
    return ordered_json{
        {"count", s.count}, {"mean", s.mean}, {"std", s.std_dev}, {"mad", s.mad}};
}

ordered_json record_config_json(const brixkit::SweepConfig& c) {
    return ordered_json{{"n_bin_x", c.n_bin_x},
                        {"n_bin_y", c.n_bin_y},
                        {"cross", brixkit::to_string(c.cross)},
                        {"space", brixkit::to_string(c.space)},
                        {"resolution", brixkit::to_string(c.resolution)},
                        {"variant", brixkit::to_string(c.variant)},
                        {"lambda", c.lambda}};
}

// Shared feature-recipe options: defaults first, then an optional JSON config
// file, then explicit flags.
struct FeatureOptions {
    std::string config_file;
    int nx = 16;
    int ny = 8;
    std::string cross = "none";
    std::string space = "hsv";
    std::string resolution = "low";
    CLI::Option* nx_opt = nullptr;
    CLI::Option* ny_opt = nullptr;
    CLI::Option* cross_opt = nullptr;
    CLI::Option* space_opt = nullptr;
    CLI::Option* res_opt = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_file, "JSON file with a feature_config object");
        nx_opt = cmd->add_option("--nx", nx, "horizontal grid divisions");
        ny_opt = cmd->add_option("--ny", ny, "vertical grid divisions");
        cross_opt = cmd->add_option("--cross", cross, "cell selection: none|fat|thin");
        space_opt = cmd->add_option("--space", space, "color space: rgb|hsv|lab");
        res_opt = cmd->add_option("--res,--resolution", resolution,
                                  "working resolution: low|med|high");
    }

    brixkit::FeatureConfig resolve() const {
        brixkit::FeatureConfig fc;
        fc.n_bin_x = nx;
        fc.n_bin_y = ny;
        fc.cross = brixkit::cross_mode_from_string(cross);
        fc.space = brixkit::color_space_from_string(space);
        fc.resolution = brixkit::resolution_from_string(resolution);
        if (!config_file.empty()) {
            std::ifstream in(config_file);
            if (!in)
                throw brixkit::Error(brixkit::ErrorCode::IoError,
                                     "cannot open config '" + config_file + "'");
            ordered_json doc;
            try {
                in >> doc;
            } catch (const nlohmann::json::exception& e) {
                throw brixkit::Error(brixkit::ErrorCode::MalformedRow,
                                     "config '" + config_file + "': " + e.what());
            }
            const ordered_json& fcj = doc.contains("feature_config") ? doc["feature_config"] : doc;
            if (fcj.contains("n_bin_x")) fc.n_bin_x = fcj["n_bin_x"].get<int>();
            if (fcj.contains("n_bin_y")) fc.n_bin_y = fcj["n_bin_y"].get<int>();
            if (fcj.contains("cross"))
                fc.cross = brixkit::cross_mode_from_string(fcj["cross"].get<std::string>());
            if (fcj.contains("space"))
                fc.space = brixkit::color_space_from_string(fcj["space"].get<std::string>());
            if (fcj.contains("resolution"))
                fc.resolution =
                    brixkit::resolution_from_string(fcj["resolution"].get<std::string>());
            // Explicit flags override the file.
            if (nx_opt->count()) fc.n_bin_x = nx;
            if (ny_opt->count()) fc.n_bin_y = ny;
            if (cross_opt->count()) fc.cross = brixkit::cross_mode_from_string(cross);
            if (space_opt->count()) fc.space = brixkit::color_space_from_string(space);
            if (res_opt->count()) fc.resolution = brixkit::resolution_from_string(resolution);
        }
        fc.validate();
        return fc;
    }
};

std::vector<brixkit::SampleRecord> load_records(const std::string& manifest) {
    return brixkit::load_manifest(manifest);
}

fs::path manifest_root(const std::string& manifest) {
    const fs::path parent = fs::path(manifest).parent_path();
    return parent.empty() ? fs::path(".") : parent;
}

// ---------------------------------------------------------------------------
// features
// ---------------------------------------------------------------------------

struct FeaturesArgs {
    std::string manifest;
    std::string out;
    FeatureOptions feature;
};

int run_features(const FeaturesArgs& args) {
    const auto records = load_records(args.manifest);
    const brixkit::FeatureConfig fc = args.feature.resolve();
    brixkit::DirectFeatureSource source(manifest_root(args.manifest));

    const int d = brixkit::feature_length(fc);
    std::ostringstream csv;
    csv << "sample_id";
    for (int i = 0; i < d; ++i) csv << ",f" << i;
    csv << '\n';
    for (const brixkit::SampleRecord& rec : records) {
        csv << rec.sample_id;
        for (double v : source.features(rec, false, fc)) csv << ',' << brixkit::format_double(v);
        csv << '\n';
    }
    emit(csv.str(), args.out);
    std::cerr << records.size() << " samples x " << d << " features\n";
    return 0;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainArgs {
    std::string manifest;
    std::string split;
    std::string out = "model.json";
    double lambda = 9.0;
    std::uint64_t seed = brixkit::kDefaultSeed;
    bool augment = true;
    FeatureOptions feature;
};

brixkit::DataMatrix features_of(const std::vector<brixkit::SampleRecord>& rows,
                                brixkit::FeatureSource& source, const brixkit::FeatureConfig& fc,
                                bool with_flips, std::vector<double>* labels) {
    const std::size_t n = rows.size();
    const std::size_t d = static_cast<std::size_t>(brixkit::feature_length(fc));
    brixkit::DataMatrix x(with_flips ? 2 * n : n, d);
    if (labels) labels->resize(x.rows);
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<double> f = source.features(rows[i], false, fc);
        std::copy(f.begin(), f.end(), x.data.begin() + i * d);
        if (labels) (*labels)[i] = rows[i].brix_mean;
        if (with_flips) {
            const std::vector<double> g = source.features(rows[i], true, fc);
            std::copy(g.begin(), g.end(), x.data.begin() + (n + i) * d);
            if (labels) (*labels)[n + i] = rows[i].brix_mean;
        }
    }
    return x;
}

int run_train(const TrainArgs& args) {
    const auto records = load_records(args.manifest);
    const brixkit::DatasetSplit split = brixkit::build_split(records, args.split);
    if (split.train.empty())
        throw brixkit::Error(brixkit::ErrorCode::EmptyInput,
                             "split " + args.split + " has no training samples in this manifest");
    const brixkit::FeatureConfig fc = args.feature.resolve();
    brixkit::DirectFeatureSource source(manifest_root(args.manifest));

    std::vector<double> y;
    const brixkit::DataMatrix x = features_of(split.train, source, fc, args.augment, &y);
    const brixkit::RidgeModel model = brixkit::ridge_fit(x, y, args.lambda);
    brixkit::save_model({model, fc}, args.out);

    ordered_json doc{{"model", args.out},
                     {"split", args.split},
                     {"n_train", x.rows},
                     {"augmented", args.augment},
                     {"feature_len", x.cols},
                     {"lambda", args.lambda},
                     {"train_mae", brixkit::mae(brixkit::ridge_predict(model, x), y)}};
    if (!split.test.empty()) {
        std::vector<double> y_test;
        const brixkit::DataMatrix x_test = features_of(split.test, source, fc, false, &y_test);
        doc["test_mae"] = brixkit::mae(brixkit::ridge_predict(model, x_test), y_test);
    }
    emit_json(doc, "");
    std::cerr << "model written to " << args.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------------

struct PredictArgs {
    std::string model;
    std::string manifest;
    std::string out;
    bool clamp = false;
};

int run_predict(const PredictArgs& args) {
    const brixkit::TrainedModel trained = brixkit::load_model(args.model);
    const auto records = load_records(args.manifest);
    brixkit::DirectFeatureSource source(manifest_root(args.manifest));

    ordered_json rows = ordered_json::array();
    for (const brixkit::SampleRecord& rec : records) {
        const std::vector<double> f = source.features(rec, false, trained.feature_config);
        double pred = brixkit::ridge_predict_one(trained.model, f);
        if (args.clamp) pred = std::clamp(pred, brixkit::kBrixMin, brixkit::kBrixMax);
        rows.push_back({{"sample_id", rec.sample_id},
                        {"image_path", rec.image_path},
                        {"brix_pred", pred}});
    }
    emit_json(rows, args.out);
    std::cerr << rows.size() << " predictions\n";
    return 0;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
    std::string model;
    std::string manifest;
    std::string split;
    std::string part = "test";
    double threshold = 17.0;
    std::string out;
};

int run_eval(const EvalArgs& args) {
    const brixkit::TrainedModel trained = brixkit::load_model(args.model);
    const auto records = load_records(args.manifest);

    std::vector<brixkit::SampleRecord> rows;
    if (args.split.empty()) {
        rows = records;
    } else {
        brixkit::DatasetSplit split = brixkit::build_split(records, args.split);
        if (args.part == "test")
            rows = std::move(split.test);
        else if (args.part == "train")
            rows = std::move(split.train);
        else if (args.part == "all") {
            rows = std::move(split.train);
            rows.insert(rows.end(), split.test.begin(), split.test.end());
        } else
            throw brixkit::Error(brixkit::ErrorCode::UsageError,
                                 "--part must be train, test or all");
        if (rows.empty())
            throw brixkit::Error(brixkit::ErrorCode::EmptyInput,
                                 "split " + args.split + " has no '" + args.part + "' samples");
    }

    brixkit::DirectFeatureSource source(manifest_root(args.manifest));
    std::vector<double> pred, truth;
    pred.reserve(rows.size());
    truth.reserve(rows.size());
    for (const brixkit::SampleRecord& rec : rows) {
        pred.push_back(brixkit::ridge_predict_one(
            trained.model, source.features(rec, false, trained.feature_config)));
        truth.push_back(rec.brix_mean);
    }

    const brixkit::HarvestReport harvest = brixkit::harvest_metrics(pred, truth, args.threshold);
    ordered_json doc{{"count", rows.size()},
                     {"mae", brixkit::mae(pred, truth)},
                     {"rmse", brixkit::rmse(pred, truth)},
                     {"harvest", harvest_to_json(harvest)}};
    emit_json(doc, args.out);
    std::cerr << "eval on " << rows.size() << " samples: mae=" << doc["mae"].get<double>()
              << " precision=" << harvest.precision << " recall=" << harvest.recall << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepArgs {
    std::string manifest;
    std::string split = "Sm";
    std::string grid = "full";
    std::string out_dir = "sweep_out";
    std::uint64_t seed = brixkit::kDefaultSeed;
    int jobs = 0;
    std::size_t holdout = 0;
    double top_fraction = 0.10;
    std::string nx_list, ny_list, cross_list, space_list, res_list, variant_list, lambda_list;
};

brixkit::GridSpace build_grid(const SweepArgs& args) {
    if (args.grid != "full")
        throw brixkit::Error(brixkit::ErrorCode::UsageError,
                             "--grid only supports 'full'; restrict axes with the list flags");
    brixkit::GridSpace grid; // full by default
    if (!args.nx_list.empty()) grid.n_bin_x = parse_list<int>(args.nx_list, to_int);
    if (!args.ny_list.empty()) grid.n_bin_y = parse_list<int>(args.ny_list, to_int);
    if (!args.cross_list.empty())
        grid.cross = parse_list<brixkit::CrossMode>(args.cross_list, [](const std::string& s) {
            return brixkit::cross_mode_from_string(s);
        });
    if (!args.space_list.empty())
        grid.spaces = parse_list<brixkit::ColorSpace>(args.space_list, [](const std::string& s) {
            return brixkit::color_space_from_string(s);
        });
    if (!args.res_list.empty())
        grid.resolutions =
            parse_list<brixkit::Resolution>(args.res_list, [](const std::string& s) {
                return brixkit::resolution_from_string(s);
            });
    if (!args.variant_list.empty())
        grid.variants =
            parse_list<brixkit::DatasetVariant>(args.variant_list, [](const std::string& s) {
                return brixkit::variant_from_string(s);
            });
    if (!args.lambda_list.empty()) grid.lambdas = parse_list<double>(args.lambda_list, to_double);
    return grid;
}

int run_sweep(const SweepArgs& args) {
    const auto records = load_records(args.manifest);
    brixkit::SweepDataset dataset =
        brixkit::SweepDataset::from_family(records, args.split, manifest_root(args.manifest));
    if (args.holdout > 0) dataset = dataset.with_holdout(args.holdout, args.seed);

    const brixkit::GridSpace grid = build_grid(args);
    const int jobs = args.jobs > 0
                         ? args.jobs
                         : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    std::cerr << "sweeping " << grid.size() << " configurations on split family " << args.split
              << " with " << jobs << " workers\n";
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t report_step = std::max<std::size_t>(1, grid.size() / 20);
    const auto progress = [&](std::size_t done, std::size_t total) {
        if (done % report_step == 0 || done == total)
            std::cerr << "  " << done << "/" << total << " configurations\r" << std::flush;
    };
    const std::vector<brixkit::SweepRecord> ranked =
        brixkit::grid_search(dataset, grid, args.seed, jobs, progress);
    std::cerr << "\n";
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    fs::create_directories(args.out_dir);
    const fs::path jsonl = fs::path(args.out_dir) / "sweep.jsonl";
    const fs::path summary = fs::path(args.out_dir) / "summary.csv";
    brixkit::write_sweep_jsonl(ranked, jsonl);
    brixkit::write_summary_csv(ranked, summary);

    // Wall time stays on stderr so the stdout payload is run-to-run identical.
    ordered_json doc{{"configs", ranked.size()},
                     {"seed", args.seed},
                     {"jobs", jobs},
                     {"sweep_jsonl", jsonl.string()},
                     {"summary_csv", summary.string()}};
    try {
        const auto correlations = brixkit::hyperparam_correlation(ranked, args.top_fraction);
        const fs::path corr = fs::path(args.out_dir) / "correlations.json";
        const std::size_t used = static_cast<std::size_t>(
            std::floor(args.top_fraction * static_cast<double>(ranked.size())));
        brixkit::write_correlations_json(correlations, args.top_fraction, used, corr);
        doc["correlations_json"] = corr.string();
    } catch (const brixkit::Error& e) {
        if (e.code() != brixkit::ErrorCode::TooFewRecords) throw;
        std::cerr << "skipping correlation report: " << e.message() << "\n";
    }
    if (!ranked.empty()) {
        const brixkit::SweepRecord& best = ranked.front();
        doc["best"] = {{"config", record_config_json(best.config)},
                       {"val_mae", best.val_mae},
                       {"train_mae", best.train_mae},
                       {"test_mae", best.test_mae ? ordered_json(*best.test_mae)
                                                  : ordered_json(nullptr)},
                       {"feature_len", best.feature_len}};
    }
    emit_json(doc, "");

    std::cerr << "top configurations by validation MAE:\n";
    for (std::size_t i = 0; i < std::min<std::size_t>(10, ranked.size()); ++i) {
        const brixkit::SweepRecord& r = ranked[i];
        std::cerr << "  " << i + 1 << ". val=" << brixkit::format_double(r.val_mae)
                  << (r.test_mae ? " test=" + brixkit::format_double(*r.test_mae) : "")
                  << "  " << r.config.describe() << "\n";
    }
    std::cerr << "finished in " << seconds << " s\n";
    return 0;
}

// ---------------------------------------------------------------------------
// stats
// ---------------------------------------------------------------------------

struct StatsArgs {
    std::string manifest;
    std::string split;
    std::string out;
};

int run_stats(const StatsArgs& args) {
    const auto records = load_records(args.manifest);
    ordered_json doc;
    if (args.split.empty()) {
        doc["all"] = stats_to_json(brixkit::split_stats(records));
    } else {
        const brixkit::DatasetSplit split = brixkit::build_split(records, args.split);
        doc["split"] = args.split;
        doc["train"] = split.train.empty() ? ordered_json(nullptr)
                                           : stats_to_json(brixkit::split_stats(split.train));
        doc["test"] = split.test.empty() ? ordered_json(nullptr)
                                         : stats_to_json(brixkit::split_stats(split.test));
    }
    emit_json(doc, args.out);
    if (args.split.empty())
        std::cerr << records.size() << " samples\n";
    else
        std::cerr << "split " << args.split << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// bch
// ---------------------------------------------------------------------------

struct BchArgs {
    double a_color = 0.0;
    double l_brix = 0.0;
    brixkit::BchParams params;
};

int run_bch(const BchArgs& args) {
    std::cout << brixkit::format_double(brixkit::bch_score(args.a_color, args.l_brix, args.params))
              << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// human
// ---------------------------------------------------------------------------

struct HumanArgs {
    std::string scores;
    double color_threshold = 6.0;
    double brix_threshold = 17.0;
    double level = 0.95;
    std::string out;
};

int run_human(const HumanArgs& args) {
    static const char* kHeader = "sample_id,mean_brix,color_score,lignification,berry_shape";
    std::ifstream in(args.scores);
    if (!in)
        throw brixkit::Error(brixkit::ErrorCode::IoError, "cannot open '" + args.scores + "'");
    std::string line;
    if (!std::getline(in, line))
        throw brixkit::Error(brixkit::ErrorCode::MalformedRow, "scores file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader)
        throw brixkit::Error(brixkit::ErrorCode::MalformedRow,
                             "scores file must start with header '" + std::string(kHeader) + "'");

    std::vector<double> brix, color, lignification, shape;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 5)
            throw brixkit::Error(brixkit::ErrorCode::MalformedRow,
                                 "line " + std::to_string(line_no) + ": expected 5 fields");
        auto score = [&](const std::string& s) {
            try {
                std::size_t pos = 0;
                const double v = std::stod(s, &pos);
                if (pos == s.size()) return v;
            } catch (const std::exception&) {
            }
            throw brixkit::Error(brixkit::ErrorCode::MalformedRow,
                                 "line " + std::to_string(line_no) + ": non-numeric score '" +
                                     s + "'");
        };
        brix.push_back(score(fields[1]));
        color.push_back(score(fields[2]));
        lignification.push_back(score(fields[3]));
        shape.push_back(score(fields[4]));
    }
    if (brix.empty())
        throw brixkit::Error(brixkit::ErrorCode::EmptyInput, "scores file has no rows");

    struct Column {
        const char* name;
        const std::vector<double>* values;
    };
    const Column cols[] = {{"mean_brix", &brix},
                           {"color_score", &color},
                           {"lignification", &lignification},
                           {"berry_shape", &shape}};

    ordered_json correlations = ordered_json::array();
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = a + 1; b < 4; ++b) {
            ordered_json pair{{"a", cols[a].name}, {"b", cols[b].name}, {"n", brix.size()}};
            try {
                const double r = brixkit::pearson(*cols[a].values, *cols[b].values);
                pair["r"] = r;
                if (std::abs(r) < 1.0 && brix.size() > 3) {
                    const brixkit::CorrelationReport rep =
                        brixkit::fisher_ci(r, brix.size(), args.level);
                    pair["p_value"] = rep.p_value;
                    pair["ci_low"] = rep.ci_low;
                    pair["ci_high"] = rep.ci_high;
                } else {
                    // |r| = 1 (or tiny n): the Fisher transform diverges.
                    pair["p_value"] = std::abs(r) < 1.0 ? ordered_json(nullptr) : ordered_json(0.0);
                    pair["ci_low"] = r;
                    pair["ci_high"] = r;
                }
            } catch (const brixkit::Error& e) {
                if (e.code() != brixkit::ErrorCode::DegenerateVariance) throw;
                pair["r"] = nullptr;
                pair["degenerate"] = true;
            }
            correlations.push_back(std::move(pair));
        }

    const brixkit::HarvestReport harvest =
        brixkit::harvest_metrics(color, args.color_threshold, brix, args.brix_threshold);

    ordered_json doc{{"n", brix.size()},
                     {"color_threshold", args.color_threshold},
                     {"brix_threshold", args.brix_threshold},
                     {"correlations", correlations},
                     {"harvest", harvest_to_json(harvest)}};
    emit_json(doc, args.out);
    std::cerr << brix.size() << " scored samples: harvest precision=" << harvest.precision
              << " recall=" << harvest.recall << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthArgs {
    std::string out_dir;
    int count = 50;
    int width = 320;
    int height = 240;
    int nx = 4;
    int ny = 8;
    double sigma = 0.0;
    double bias = 16.0;
    double spread = 4.0;
    std::uint64_t seed = brixkit::kDefaultSeed;
    bool with_wb = false;
    std::string splits = "CD";
    std::string device = "motog8";
    int year = 2021;
};

int run_synth(const SynthArgs& args) {
    brixkit::SynthConfig config;
    config.width = args.width;
    config.height = args.height;
    config.n_bin_x = args.nx;
    config.n_bin_y = args.ny;
    config.count = args.count;
    config.bias = args.bias;
    config.noise_sigma = args.sigma;
    config.weights = brixkit::synth_random_weights(args.nx, args.ny, args.seed, args.spread);

    brixkit::SynthWriteOptions options;
    options.with_wb = args.with_wb;
    options.atomic_splits = args.splits;
    options.device = args.device;
    options.year = args.year;

    const auto rows = brixkit::write_synth_dataset(config, args.seed, args.out_dir, options);
    ordered_json doc{{"out_dir", args.out_dir},
                     {"manifest", (fs::path(args.out_dir) / "manifest.csv").string()},
                     {"samples", args.count},
                     {"rows", rows.size()},
                     {"seed", args.seed}};
    emit_json(doc, "");
    std::cerr << "synthetic dataset with " << rows.size() << " rows written to " << args.out_dir
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"brixkit — grape SSC (°Brix) estimation from RGB bunch images"};
    app.require_subcommand(1);

    FeaturesArgs features_args;
    auto* cmd_features = app.add_subcommand("features", "extract feature CSV from a manifest");
    cmd_features->add_option("--manifest", features_args.manifest, "dataset manifest CSV")
        ->required();
    cmd_features->add_option("--out", features_args.out, "output CSV path (default stdout)");
    features_args.feature.attach(cmd_features);

    TrainArgs train_args;
    auto* cmd_train = app.add_subcommand("train", "fit a ridge model on a split");
    cmd_train->add_option("--manifest", train_args.manifest, "dataset manifest CSV")->required();
    cmd_train->add_option("--split", train_args.split, "split name (Sm_j, Ss_j, ...)")->required();
    cmd_train->add_option("--lambda", train_args.lambda, "ridge regularization strength");
    cmd_train->add_option("--out", train_args.out, "model JSON path");
    cmd_train->add_option("--seed", train_args.seed, "random seed");
    cmd_train->add_flag("--augment,!--no-augment", train_args.augment,
                        "horizontal-flip augmentation (default on)");
    train_args.feature.attach(cmd_train);

    PredictArgs predict_args;
    auto* cmd_predict = app.add_subcommand("predict", "predict brix for every manifest row");
    cmd_predict->add_option("--model", predict_args.model, "model JSON")->required();
    cmd_predict->add_option("--manifest", predict_args.manifest, "dataset manifest CSV")
        ->required();
    cmd_predict->add_option("--out", predict_args.out, "output JSON path (default stdout)");
    cmd_predict->add_flag("--clamp", predict_args.clamp,
                          "clamp predictions to the refractometer range [9, 26]");

    EvalArgs eval_args;
    auto* cmd_eval = app.add_subcommand("eval", "mae/rmse and harvesting report for a model");
    cmd_eval->add_option("--model", eval_args.model, "model JSON")->required();
    cmd_eval->add_option("--manifest", eval_args.manifest, "dataset manifest CSV")->required();
    cmd_eval->add_option("--split", eval_args.split, "restrict to a named split");
    cmd_eval->add_option("--part", eval_args.part, "train|test|all (with --split, default test)");
    cmd_eval->add_option("--threshold", eval_args.threshold, "harvest decision threshold (brix)");
    cmd_eval->add_option("--out", eval_args.out, "output JSON path (default stdout)");

    SweepArgs sweep_args;
    auto* cmd_sweep = app.add_subcommand("sweep", "exhaustive hyperparameter grid search");
    cmd_sweep->add_option("--manifest", sweep_args.manifest, "dataset manifest CSV")->required();
    cmd_sweep->add_option("--split", sweep_args.split, "split family: Sm, Ss or Ms");
    cmd_sweep->add_option("--grid", sweep_args.grid, "grid preset (full)");
    cmd_sweep->add_option("--out-dir", sweep_args.out_dir, "directory for sweep artifacts");
    cmd_sweep->add_option("--seed", sweep_args.seed, "random seed");
    cmd_sweep->add_option("--jobs", sweep_args.jobs, "worker threads (default: logical CPUs)")
        ->envname("BRIXKIT_JOBS");
    cmd_sweep->add_option("--holdout", sweep_args.holdout,
                          "carve a seeded test holdout of this size (Simple splits)");
    cmd_sweep->add_option("--top-frac", sweep_args.top_fraction,
                          "fraction of best runs for the correlation report");
    cmd_sweep->add_option("--nx", sweep_args.nx_list, "comma list, subset of 4,8,16");
    cmd_sweep->add_option("--ny", sweep_args.ny_list, "comma list, subset of 8,16,32");
    cmd_sweep->add_option("--cross", sweep_args.cross_list, "comma list of none,thin,fat");
    cmd_sweep->add_option("--spaces", sweep_args.space_list, "comma list of rgb,hsv,lab");
    cmd_sweep->add_option("--resolutions", sweep_args.res_list, "comma list of low,med,high");
    cmd_sweep->add_option("--variants", sweep_args.variant_list, "comma list of std,wb");
    cmd_sweep->add_option("--lambdas", sweep_args.lambda_list, "comma list of lambda values");

    StatsArgs stats_args;
    auto* cmd_stats = app.add_subcommand("stats", "label statistics of a manifest or split");
    cmd_stats->add_option("--manifest", stats_args.manifest, "dataset manifest CSV")->required();
    cmd_stats->add_option("--split", stats_args.split, "split name (Sm_j, Ss_j, ...)");
    cmd_stats->add_option("--out", stats_args.out, "output JSON path (default stdout)");

    BchArgs bch_args;
    auto* cmd_bch = app.add_subcommand("bch", "brix-color-hinge selection score");
    cmd_bch->add_option("--acolor", bch_args.a_color, "balanced color accuracy in [0,1]")
        ->required();
    cmd_bch->add_option("--lbrix", bch_args.l_brix, "brix MAE")->required();
    cmd_bch->add_option("--rho", bch_args.params.rho, "hinge degree");
    cmd_bch->add_option("--tbrix", bch_args.params.t_brix, "brix threshold");
    cmd_bch->add_option("--tcolor", bch_args.params.t_color, "color accuracy threshold");

    HumanArgs human_args;
    auto* cmd_human = app.add_subcommand("human", "correlations and harvest report for a human study");
    cmd_human->add_option("--scores", human_args.scores, "scores CSV")->required();
    cmd_human->add_option("--threshold", human_args.color_threshold,
                          "color score harvesting threshold");
    cmd_human->add_option("--brix-threshold", human_args.brix_threshold,
                          "brix ground-truth threshold");
    cmd_human->add_option("--level", human_args.level, "confidence level");
    cmd_human->add_option("--out", human_args.out, "output JSON path (default stdout)");

    SynthArgs synth_args;
    auto* cmd_synth = app.add_subcommand("synth", "generate a planted-model synthetic dataset");
    cmd_synth->add_option("--out-dir", synth_args.out_dir, "output directory")->required();
    cmd_synth->add_option("--count", synth_args.count, "number of samples");
    cmd_synth->add_option("--width", synth_args.width, "image width");
    cmd_synth->add_option("--height", synth_args.height, "image height");
    cmd_synth->add_option("--nx", synth_args.nx, "planted grid columns");
    cmd_synth->add_option("--ny", synth_args.ny, "planted grid rows");
    cmd_synth->add_option("--sigma", synth_args.sigma, "label noise sigma");
    cmd_synth->add_option("--bias", synth_args.bias, "label bias (brix)");
    cmd_synth->add_option("--spread", synth_args.spread, "worst-case label spread");
    cmd_synth->add_option("--seed", synth_args.seed, "random seed");
    cmd_synth->add_flag("--with-wb", synth_args.with_wb, "also emit raw_wb rows");
    cmd_synth->add_option("--splits", synth_args.splits, "atomic split letters, round-robin");
    cmd_synth->add_option("--device", synth_args.device, "device name for manifest rows");
    cmd_synth->add_option("--year", synth_args.year, "year for manifest rows");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (cmd_features->parsed()) return run_features(features_args);
        if (cmd_train->parsed()) return run_train(train_args);
        if (cmd_predict->parsed()) return run_predict(predict_args);
        if (cmd_eval->parsed()) return run_eval(eval_args);
        if (cmd_sweep->parsed()) return run_sweep(sweep_args);
        if (cmd_stats->parsed()) return run_stats(stats_args);
        if (cmd_bch->parsed()) return run_bch(bch_args);
        if (cmd_human->parsed()) return run_human(human_args);
        if (cmd_synth->parsed()) return run_synth(synth_args);
    } catch (const brixkit::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
