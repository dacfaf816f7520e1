#pragma once

// Independent check for the closed-form ridge solver: standardizes with plain
// loops and minimizes ||Z w - (y - ybar)||^2 + lambda ||w||^2 by accelerated
// gradient descent. Shares no code with the library solve path.

#include <cmath>
#include <cstdint>
#include <vector>

namespace testutil {

struct OracleFit {
    std::vector<double> weights;
    double intercept = 0.0;
    std::size_t iterations = 0;
};

inline OracleFit ridge_descent_oracle(const std::vector<std::vector<double>>& x,
                                      const std::vector<double>& y, double lambda) {
    const std::size_t n = x.size();
    const std::size_t d = x.front().size();

    std::vector<double> mean(d, 0.0), scale(d, 1.0);
    for (const auto& row : x)
        for (std::size_t c = 0; c < d; ++c) mean[c] += row[c];
    for (double& m : mean) m /= static_cast<double>(n);
    if (n > 1) {
        std::vector<double> sq(d, 0.0);
        for (const auto& row : x)
            for (std::size_t c = 0; c < d; ++c)
                sq[c] += (row[c] - mean[c]) * (row[c] - mean[c]);
        for (std::size_t c = 0; c < d; ++c) {
            const double var = sq[c] / static_cast<double>(n - 1);
            scale[c] = var > 0.0 ? std::sqrt(var) : 1.0;
        }
    }

    std::vector<std::vector<double>> z(n, std::vector<double>(d));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) z[r][c] = (x[r][c] - mean[c]) / scale[c];

    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(n);
    std::vector<double> yc(n);
    for (std::size_t r = 0; r < n; ++r) yc[r] = y[r] - ybar;

    auto apply_zt_z = [&](const std::vector<double>& v, std::vector<double>& out) {
        std::vector<double> zv(n, 0.0);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < d; ++c) zv[r] += z[r][c] * v[c];
        out.assign(d, 0.0);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < d; ++c) out[c] += z[r][c] * zv[r];
    };

    // Largest eigenvalue of Z'Z by power iteration, for the step size.
    std::vector<double> v(d), tmp(d);
    std::uint64_t state = 0x243F6A8885A308D3ULL;
    for (double& e : v) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        e = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
    }
    double sigma_max = 1.0;
    for (int it = 0; it < 100; ++it) {
        apply_zt_z(v, tmp);
        double norm = 0.0;
        for (double e : tmp) norm += e * e;
        norm = std::sqrt(norm);
        if (norm == 0.0) break;
        sigma_max = norm;
        for (std::size_t c = 0; c < d; ++c) v[c] = tmp[c] / norm;
    }

    const double lips = 2.0 * (sigma_max * 1.05 + lambda) + 1e-12;
    const double mu = 2.0 * lambda;
    const double kappa = lips / (mu > 0.0 ? mu : lips);
    const double beta = (std::sqrt(kappa) - 1.0) / (std::sqrt(kappa) + 1.0);

    std::vector<double> rhs(d, 0.0); // Z' yc, for the gradient
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) rhs[c] += z[r][c] * yc[r];
    double rhs_max = 1.0;
    for (double e : rhs) rhs_max = std::max(rhs_max, std::abs(e));

    std::vector<double> w(d, 0.0), w_prev(d, 0.0), look(d, 0.0), grad(d);
    OracleFit fit;
    for (std::size_t iter = 0; iter < 400000; ++iter) {
        for (std::size_t c = 0; c < d; ++c) look[c] = w[c] + beta * (w[c] - w_prev[c]);
        apply_zt_z(look, grad);
        for (std::size_t c = 0; c < d; ++c)
            grad[c] = 2.0 * (grad[c] - rhs[c]) + 2.0 * lambda * look[c];

        w_prev = w;
        for (std::size_t c = 0; c < d; ++c) w[c] = look[c] - grad[c] / lips;

        apply_zt_z(w, grad);
        double gmax = 0.0;
        for (std::size_t c = 0; c < d; ++c)
            gmax = std::max(gmax, std::abs(2.0 * (grad[c] - rhs[c]) + 2.0 * lambda * w[c]));
        fit.iterations = iter + 1;
        if (gmax <= 1e-11 * rhs_max) break;
    }

    fit.weights = w;
    fit.intercept = ybar;
    return fit;
}

} // namespace testutil
