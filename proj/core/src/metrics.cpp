#include "brixkit/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace brixkit {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
    if (a != b)
        throw Error(ErrorCode::LengthMismatch,
                    std::to_string(a) + " predictions vs " + std::to_string(b) + " truths");
    if (a == 0) throw Error(ErrorCode::EmptyInput, "empty inputs");
}

} // namespace

double mae(const std::vector<double>& pred, const std::vector<double>& truth) {
    check_lengths(pred.size(), truth.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) acc += std::abs(pred[i] - truth[i]);
    return acc / static_cast<double>(pred.size());
}

double rmse(const std::vector<double>& pred, const std::vector<double>& truth) {
    check_lengths(pred.size(), truth.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - truth[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(pred.size()));
}

double balanced_accuracy(const std::vector<int>& pred_classes,
                         const std::vector<int>& truth_classes) {
    check_lengths(pred_classes.size(), truth_classes.size());
    std::array<std::size_t, 7> hits{}, totals{};
    for (std::size_t i = 0; i < truth_classes.size(); ++i) {
        const int t = truth_classes[i], p = pred_classes[i];
        if (t < 1 || t > 6 || p < 1 || p > 6)
            throw Error(ErrorCode::InvalidInput, "color classes must lie in 1..6");
        ++totals[static_cast<std::size_t>(t)];
        if (p == t) ++hits[static_cast<std::size_t>(t)];
    }
    double recall_sum = 0.0;
    int present = 0;
    for (int c = 1; c <= 6; ++c) {
        if (totals[static_cast<std::size_t>(c)] == 0) continue;
        ++present;
        recall_sum += static_cast<double>(hits[static_cast<std::size_t>(c)]) /
                      static_cast<double>(totals[static_cast<std::size_t>(c)]);
    }
    return recall_sum / present;
}

void BchParams::validate() const {
    if (!(t_color > 0.0 && t_color <= 1.0))
        throw Error(ErrorCode::InvalidInput, "t_color must lie in (0, 1]");
    if (!(t_brix > 0.0)) throw Error(ErrorCode::InvalidInput, "t_brix must be > 0");
    if (!(rho > 0.0)) throw Error(ErrorCode::InvalidInput, "rho must be > 0");
}

double bch_score(double a_color, double l_brix, const BchParams& params) {
    params.validate();
    if (!(a_color >= 0.0 && a_color <= 1.0))
        throw Error(ErrorCode::InvalidInput, "a_color must lie in [0, 1]");
    if (!(l_brix >= 0.0)) throw Error(ErrorCode::InvalidInput, "l_brix must be >= 0");

    const double eta = params.eta();
    const double hinge_brix = std::pow(std::max(0.0, l_brix - params.t_brix), params.rho);
    const double hinge_color =
        std::pow(std::max(0.0, -eta * (a_color - params.t_color)), params.rho);
    return eta * (1.0 - a_color) + l_brix + hinge_color + hinge_brix;
}

HarvestReport harvest_metrics(const std::vector<double>& pred, double pred_threshold,
                              const std::vector<double>& truth, double truth_threshold) {
    check_lengths(pred.size(), truth.size());
    HarvestReport rep;
    rep.threshold = truth_threshold;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const bool p = pred[i] >= pred_threshold;
        const bool t = truth[i] >= truth_threshold;
        if (p && t)
            ++rep.tp;
        else if (p && !t)
            ++rep.fp;
        else if (!p && t)
            ++rep.fn;
        else
            ++rep.tn;
    }
    if (rep.tp + rep.fp > 0)
        rep.precision = static_cast<double>(rep.tp) / static_cast<double>(rep.tp + rep.fp);
    else
        rep.degenerate_precision = true;
    if (rep.tp + rep.fn > 0)
        rep.recall = static_cast<double>(rep.tp) / static_cast<double>(rep.tp + rep.fn);
    else
        rep.degenerate_recall = true;

    rep.fdr = 1.0 - rep.precision;
    rep.fnr = 1.0 - rep.recall;
    rep.f1 = rep.precision + rep.recall > 0.0
                 ? 2.0 * rep.precision * rep.recall / (rep.precision + rep.recall)
                 : 0.0;
    return rep;
}

HarvestReport harvest_metrics(const std::vector<double>& pred_brix,
                              const std::vector<double>& truth_brix, double threshold) {
    return harvest_metrics(pred_brix, threshold, truth_brix, threshold);
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    check_lengths(x.size(), y.size());
    const std::size_t n = x.size();
    if (n < 2) throw Error(ErrorCode::InvalidInput, "need at least two points");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw Error(ErrorCode::DegenerateVariance, "zero variance input");
    return sxy / std::sqrt(sxx * syy);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw Error(ErrorCode::InvalidInput, "quantile argument must lie in (0, 1)");

    // Acklam's inverse normal CDF approximation.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

CorrelationReport fisher_ci(double r, std::size_t n, double level) {
    if (!(std::abs(r) < 1.0))
        throw Error(ErrorCode::InvalidInput, "|r| must be < 1 for the Fisher transform");
    if (n <= 3) throw Error(ErrorCode::InvalidInput, "need n > 3 for the Fisher interval");
    if (!(level > 0.0 && level < 1.0))
        throw Error(ErrorCode::InvalidInput, "confidence level must lie in (0, 1)");

    const double z = std::atanh(r);
    const double se = 1.0 / std::sqrt(static_cast<double>(n - 3));
    const double z_crit = normal_quantile(0.5 + level / 2.0);

    CorrelationReport rep;
    rep.r = r;
    rep.n = n;
    rep.ci_low = std::tanh(z - z_crit * se);
    rep.ci_high = std::tanh(z + z_crit * se);
    // Two-sided normal approximation: p = erfc(|z/se| / sqrt(2)).
    rep.p_value = std::erfc(std::abs(z / se) / std::sqrt(2.0));
    return rep;
}

CorrelationReport analyze_correlation(const std::vector<double>& x, const std::vector<double>& y,
                                      double level) {
    return fisher_ci(pearson(x, y), x.size(), level);
}

} // namespace brixkit
