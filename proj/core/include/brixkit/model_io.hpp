#pragma once

#include <filesystem>

#include "brixkit/features.hpp"
#include "brixkit/ridge.hpp"

namespace brixkit {

/// Fitted estimator together with the extraction recipe it expects.
struct TrainedModel {
    RidgeModel model;
    FeatureConfig feature_config;
};

/// JSON persistence. Doubles are written in shortest round-trip form, so a
/// save/load cycle reproduces the model bit-exactly.
void save_model(const TrainedModel& trained, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

} // namespace brixkit
