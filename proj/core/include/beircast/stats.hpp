#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace beircast::stats {

/// Ordinary least squares fit. X must have full column rank.
struct OlsFit {
    Eigen::VectorXd coef;
    Eigen::VectorXd residuals;
    Eigen::VectorXd std_errors;
    double rss = 0.0;
    int n = 0;
    int p = 0;

    int dof() const { return n - p; }
};

// Solves min ||y - X b|| by column-pivoted QR. Throws NumericalError on rank
// deficiency, naming the dependent columns by index.
OlsFit ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    double dof1 = 0.0;
    double dof2 = 0.0;
    bool degenerate = false;
};

// F-test of `restricted` nested in `full` with q added regressors, fit on the
// same response. With q=1 the statistic equals the squared t-ratio of the
// added regressor. RSS_full == 0 yields p = 0 with the degenerate flag set.
TestResult f_test_nested(const OlsFit& restricted, const OlsFit& full, int q);

struct AdfResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int lags = 0;
    int nobs = 0; // observations entering the final regression
};

/// Augmented Dickey-Fuller test with constant, no trend. Null: unit root.
/// Lag order: fixed if `lags` is given, else AIC-minimizing over
/// 0..floor(12*(T/100)^0.25). P-values from the MacKinnon (1994) response
/// surface. Requires length >= 50; throws on constant series.
AdfResult adf_test(std::span<const double> series, std::optional<int> lags = std::nullopt);

struct BhResult {
    std::vector<double> adjusted; // same order as input
    std::vector<bool> reject;     // adjusted <= alpha
    int n_rejected = 0;
};

// Benjamini-Hochberg step-up adjustment; invariant under input permutation.
BhResult bh_adjust(std::span<const double> p_values, double alpha);

// Paired McNemar test on aligned 0/1 predictions against truth. Uses the
// continuity-corrected chi-square when the discordant count b+c >= 25, the
// exact two-sided binomial otherwise. b+c == 0 gives p = 1, degenerate.
TestResult mcnemar(std::span<const int> model_preds,
                   std::span<const int> benchmark_preds,
                   std::span<const int> truth);

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    // Set when the corresponding denominator was zero and the metric was
    // reported as 0 by convention.
    bool precision_undefined = false;
    bool recall_undefined = false;
    bool f1_undefined = false;
};

Prf precision_recall_f1(std::span<const int> preds, std::span<const int> truth,
                        int positive_class = 1);

} // namespace beircast::stats
