#pragma once

#include <cstddef>
#include <vector>

#include "brixkit/errors.hpp"

namespace brixkit {

double mae(const std::vector<double>& pred, const std::vector<double>& truth);
double rmse(const std::vector<double>& pred, const std::vector<double>& truth);

/// Mean per-class recall over the classes present in the truth (1..6 scale).
double balanced_accuracy(const std::vector<int>& pred_classes,
                         const std::vector<int>& truth_classes);

/// Parameters of the combined brix/color selection score. eta is always
/// derived from the thresholds, never stored.
struct BchParams {
    double rho = 2.0;     // hinge degree
    double t_brix = 2.5;  // brix error threshold
    double t_color = 0.8; // balanced accuracy threshold

    double eta() const { return t_brix / t_color; }
    void validate() const;
};

/// S = eta*(1 - A_color) + L_brix
///       + max(0, -eta*(A_color - t_color))^rho
///       + max(0, L_brix - t_brix)^rho
/// Zero exactly when color accuracy is perfect and brix error is zero; both
/// hinge terms vanish on the quality-threshold side of their boundaries.
double bch_score(double a_color, double l_brix, const BchParams& params = {});

/// Binary harvesting decision quality at a brix threshold.
struct HarvestReport {
    double threshold = 17.0;
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double fdr = 0.0; // 1 - precision
    double fnr = 0.0; // 1 - recall
    bool degenerate_precision = false; // no predicted positives
    bool degenerate_recall = false;    // no actual positives
};

/// Positive means value >= threshold. Degenerate ratios are reported as 0
/// with the corresponding flag set; sweeps never abort on pathological
/// configurations.
HarvestReport harvest_metrics(const std::vector<double>& pred_brix,
                              const std::vector<double>& truth_brix, double threshold = 17.0);

/// Same report with separate prediction/truth thresholds (used when the
/// prediction lives on a different scale, e.g. a 1-10 color score).
HarvestReport harvest_metrics(const std::vector<double>& pred, double pred_threshold,
                              const std::vector<double>& truth, double truth_threshold);

/// Sample Pearson coefficient; both inputs need non-zero variance.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

struct CorrelationReport {
    double r = 0.0;
    std::size_t n = 0;
    double p_value = 1.0;
    double ci_low = -1.0;
    double ci_high = 1.0;
};

/// Fisher z confidence interval and two-sided p-value for r = 0:
/// z = atanh(r), se = 1/sqrt(n-3), interval tanh(z +- z_crit * se).
CorrelationReport fisher_ci(double r, std::size_t n, double level = 0.95);

/// pearson + fisher_ci in one call.
CorrelationReport analyze_correlation(const std::vector<double>& x, const std::vector<double>& y,
                                      double level = 0.95);

/// Quantile of the standard normal (Acklam's rational approximation,
/// |error| < 1.2e-9). level 0.95 yields the conventional 1.959964.
double normal_quantile(double p);

} // namespace brixkit
