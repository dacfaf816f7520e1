#include "brixkit/ridge.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace brixkit {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void check_finite(const DataMatrix& x, const std::vector<double>& y) {
    for (double v : x.data)
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "non-finite feature value");
    for (double v : y)
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "non-finite target value");
}

} // namespace

DataMatrix DataMatrix::from_rows(const std::vector<std::vector<double>>& rows_in) {
    if (rows_in.empty()) return {};
    DataMatrix m(rows_in.size(), rows_in.front().size());
    for (std::size_t r = 0; r < rows_in.size(); ++r) {
        if (rows_in[r].size() != m.cols)
            throw Error(ErrorCode::DimensionMismatch, "ragged feature rows");
        std::copy(rows_in[r].begin(), rows_in[r].end(), m.data.begin() + r * m.cols);
    }
    return m;
}

StandardizeStats standardize_fit(const DataMatrix& x) {
    if (x.rows == 0 || x.cols == 0)
        throw Error(ErrorCode::EmptyMatrix, "cannot standardize an empty matrix");

    const std::size_t n = x.rows, d = x.cols;
    StandardizeStats stats;
    stats.means.assign(d, 0.0);
    stats.scales.assign(d, 1.0);

    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) stats.means[c] += x.at(r, c);
    for (std::size_t c = 0; c < d; ++c) stats.means[c] /= static_cast<double>(n);

    if (n > 1) {
        // Bitwise-constant columns are exactly zero-variance regardless of
        // rounding in the mean; they keep scale 1 and the exact mean value.
        std::vector<bool> constant(d, true);
        for (std::size_t r = 1; r < n; ++r)
            for (std::size_t c = 0; c < d; ++c)
                if (x.at(r, c) != x.at(0, c)) constant[c] = false;

        std::vector<double> sq(d, 0.0);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < d; ++c) {
                const double delta = x.at(r, c) - stats.means[c];
                sq[c] += delta * delta;
            }
        for (std::size_t c = 0; c < d; ++c) {
            if (constant[c]) {
                stats.means[c] = x.at(0, c);
                stats.scales[c] = 1.0;
                continue;
            }
            const double var = sq[c] / static_cast<double>(n - 1);
            stats.scales[c] = var > 0.0 ? std::sqrt(var) : 1.0;
        }
    }
    return stats;
}

RidgeModel ridge_fit(const DataMatrix& x, const std::vector<double>& y, double lambda) {
    if (x.rows == 0 || x.cols == 0)
        throw Error(ErrorCode::EmptyMatrix, "cannot fit on an empty matrix");
    if (y.size() != x.rows)
        throw Error(ErrorCode::DimensionMismatch,
                    "target length " + std::to_string(y.size()) + " does not match " +
                        std::to_string(x.rows) + " rows");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw Error(ErrorCode::InvalidInput, "lambda must be finite and >= 0");
    check_finite(x, y);

    const std::size_t n = x.rows, d = x.cols;
    const StandardizeStats stats = standardize_fit(x);

    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(n);

    MatrixXd z(n, d);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c)
            z(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                (x.at(r, c) - stats.means[c]) / stats.scales[c];

    VectorXd yc(n);
    for (std::size_t r = 0; r < n; ++r) yc(static_cast<Eigen::Index>(r)) = y[r] - ybar;

    VectorXd w;
    if (lambda > 0.0 && d > n) {
        // Dual form: w = Z' (Z Z' + lambda I)^-1 yc, identical solution, n x n solve.
        MatrixXd k = z * z.transpose();
        k.diagonal().array() += lambda;
        Eigen::LLT<MatrixXd> llt(k);
        if (llt.info() != Eigen::Success)
            throw Error(ErrorCode::SingularSystem, "kernel system failed to factorize");
        w = z.transpose() * llt.solve(yc);
    } else {
        MatrixXd g = MatrixXd::Zero(d, d);
        g.selfadjointView<Eigen::Lower>().rankUpdate(z.transpose());
        g = g.selfadjointView<Eigen::Lower>();
        g.diagonal().array() += lambda;
        const VectorXd rhs = z.transpose() * yc;
        if (lambda > 0.0) {
            Eigen::LLT<MatrixXd> llt(g);
            if (llt.info() != Eigen::Success)
                throw Error(ErrorCode::SingularSystem,
                            "normal equations failed to factorize at lambda=" +
                                std::to_string(lambda));
            w = llt.solve(rhs);
        } else {
            // Unregularized: the Gram matrix may be singular even when the
            // system is consistent, so rank deficiency is detected from the
            // pivots rather than from a residual.
            Eigen::LDLT<MatrixXd> ldlt(g);
            if (ldlt.info() != Eigen::Success)
                throw Error(ErrorCode::SingularSystem, "rank-deficient features with lambda=0");
            const VectorXd pivots = ldlt.vectorD();
            const double dmax = pivots.maxCoeff();
            if (!(dmax > 0.0) || pivots.minCoeff() <= dmax * 1e-10)
                throw Error(ErrorCode::SingularSystem, "rank-deficient features with lambda=0");
            w = ldlt.solve(rhs);
            const double residual = (g * w - rhs).norm();
            const double base = rhs.norm() + g.norm() * w.norm();
            if (!(residual <= 1e-8 * std::max(1.0, base)))
                throw Error(ErrorCode::SingularSystem, "rank-deficient features with lambda=0");
        }
    }

    RidgeModel model;
    model.feature_means = stats.means;
    model.feature_scales = stats.scales;
    model.weights.assign(w.data(), w.data() + d);
    model.intercept = ybar;
    model.lambda = lambda;

    // Constant columns carry exactly zero weight by contract.
    if (n > 1) {
        for (std::size_t c = 0; c < d; ++c) {
            bool constant = true;
            for (std::size_t r = 1; r < n && constant; ++r)
                constant = x.at(r, c) == x.at(0, c);
            if (constant) model.weights[c] = 0.0;
        }
    }
    return model;
}

std::vector<double> ridge_predict(const RidgeModel& model, const DataMatrix& x) {
    if (x.cols != model.dim())
        throw Error(ErrorCode::DimensionMismatch,
                    "feature dimension " + std::to_string(x.cols) + " does not match model (" +
                        std::to_string(model.dim()) + ")");
    std::vector<double> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) out[r] = ridge_predict_one(model, x.row(r));
    return out;
}

double ridge_predict_one(const RidgeModel& model, std::span<const double> features) {
    if (features.size() != model.dim())
        throw Error(ErrorCode::DimensionMismatch,
                    "feature dimension " + std::to_string(features.size()) +
                        " does not match model (" + std::to_string(model.dim()) + ")");
    double acc = model.intercept;
    for (std::size_t c = 0; c < features.size(); ++c)
        acc += model.weights[c] * (features[c] - model.feature_means[c]) / model.feature_scales[c];
    return acc;
}

} // namespace brixkit
