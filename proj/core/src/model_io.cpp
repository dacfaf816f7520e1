#include "brixkit/model_io.hpp"

#include <fstream>

#include <json.hpp>

namespace brixkit {

namespace {

constexpr int kSchemaVersion = 1;

using nlohmann::ordered_json;

} // namespace

void save_model(const TrainedModel& trained, const std::filesystem::path& path) {
    const FeatureConfig& fc = trained.feature_config;
    ordered_json doc{
        {"schema_version", kSchemaVersion},
        {"lambda", trained.model.lambda},
        {"feature_config",
         {{"n_bin_x", fc.n_bin_x},
          {"n_bin_y", fc.n_bin_y},
          {"cross", to_string(fc.cross)},
          {"space", to_string(fc.space)},
          {"resolution", to_string(fc.resolution)}}},
        {"means", trained.model.feature_means},
        {"scales", trained.model.feature_scales},
        {"weights", trained.model.weights},
        {"intercept", trained.model.intercept},
    };
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write model '" + path.string() + "'");
    out << doc.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open model '" + path.string() + "'");
    ordered_json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedRow, "model '" + path.string() + "': " + e.what());
    }

    try {
        if (doc.at("schema_version").get<int>() != kSchemaVersion)
            throw Error(ErrorCode::InvalidInput,
                        "unsupported model schema version in '" + path.string() + "'");
        TrainedModel trained;
        const auto& fc = doc.at("feature_config");
        trained.feature_config.n_bin_x = fc.at("n_bin_x").get<int>();
        trained.feature_config.n_bin_y = fc.at("n_bin_y").get<int>();
        trained.feature_config.cross = cross_mode_from_string(fc.at("cross").get<std::string>());
        trained.feature_config.space = color_space_from_string(fc.at("space").get<std::string>());
        trained.feature_config.resolution =
            resolution_from_string(fc.at("resolution").get<std::string>());
        trained.model.lambda = doc.at("lambda").get<double>();
        trained.model.feature_means = doc.at("means").get<std::vector<double>>();
        trained.model.feature_scales = doc.at("scales").get<std::vector<double>>();
        trained.model.weights = doc.at("weights").get<std::vector<double>>();
        trained.model.intercept = doc.at("intercept").get<double>();

        if (trained.model.feature_means.size() != trained.model.weights.size() ||
            trained.model.feature_scales.size() != trained.model.weights.size())
            throw Error(ErrorCode::DimensionMismatch,
                        "model arrays disagree in length in '" + path.string() + "'");
        return trained;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedRow, "model '" + path.string() + "': " + e.what());
    }
}

} // namespace brixkit
