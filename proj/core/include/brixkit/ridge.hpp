#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "brixkit/errors.hpp"

namespace brixkit {

/// Dense row-major matrix of feature rows.
struct DataMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data; // rows * cols

    DataMatrix() = default;
    DataMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
    std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

    static DataMatrix from_rows(const std::vector<std::vector<double>>& rows_in);
};

/// Per-column standardization statistics. Zero-variance columns get scale 1.
struct StandardizeStats {
    std::vector<double> means;
    std::vector<double> scales; // sample standard deviation (n-1), all > 0
};

StandardizeStats standardize_fit(const DataMatrix& x);

/// Standardization statistics plus the fitted linear map.
struct RidgeModel {
    std::vector<double> feature_means;
    std::vector<double> feature_scales;
    std::vector<double> weights; // on standardized features
    double intercept = 0.0;      // mean of the training target, unpenalized
    double lambda = 0.0;

    std::size_t dim() const { return weights.size(); }
};

/// Closed-form L2-regularized least squares on standardized features with a
/// centered target: solves (Z'Z + lambda I) w = Z'(y - ybar) through a
/// symmetric positive-definite factorization (dual form when d > n).
/// lambda = 0 is accepted but reports SingularSystem when Z is rank-deficient
/// instead of regularizing silently.
RidgeModel ridge_fit(const DataMatrix& x, const std::vector<double>& y, double lambda);

std::vector<double> ridge_predict(const RidgeModel& model, const DataMatrix& x);
double ridge_predict_one(const RidgeModel& model, std::span<const double> features);

} // namespace brixkit
