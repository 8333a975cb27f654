#include "beircast/stats.hpp"

#include "beircast/error.hpp"
#include "beircast/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace beircast::stats {

OlsFit ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const int n = int(X.rows());
    const int p = int(X.cols());
    if (y.size() != n) throw NumericalError("ols_fit: X and y row counts differ");
    if (n <= p) throw NumericalError("ols_fit: need n > p");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < p) {
        // The trailing pivots identify columns linearly dependent on the rest.
        std::ostringstream msg;
        msg << "ols_fit: design matrix is rank deficient (rank " << qr.rank() << " of " << p
            << "); dependent columns:";
        const auto& perm = qr.colsPermutation().indices();
        for (int i = int(qr.rank()); i < p; ++i) msg << ' ' << perm[i];
        throw NumericalError(msg.str());
    }

    OlsFit fit;
    fit.n = n;
    fit.p = p;
    fit.coef = qr.solve(y);
    fit.residuals = y - X * fit.coef;
    fit.rss = fit.residuals.squaredNorm();

    const double sigma2 = fit.rss / double(n - p);
    const Eigen::MatrixXd xtx_inv =
        (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    fit.std_errors = (sigma2 * xtx_inv.diagonal()).cwiseMax(0.0).cwiseSqrt();
    return fit;
}

TestResult f_test_nested(const OlsFit& restricted, const OlsFit& full, int q) {
    if (q < 1) throw NumericalError("f_test_nested: q must be >= 1");
    if (restricted.n != full.n) throw NumericalError("f_test_nested: mismatched sample sizes");
    if (full.p != restricted.p + q) {
        throw NumericalError("f_test_nested: full model must add exactly q regressors");
    }
    TestResult r;
    r.dof1 = double(q);
    r.dof2 = double(full.dof());
    if (full.rss <= 0.0) {
        r.statistic = std::numeric_limits<double>::infinity();
        r.p_value = 0.0;
        r.degenerate = true;
        return r;
    }
    const double num = (restricted.rss - full.rss) / double(q);
    const double den = full.rss / double(full.dof());
    r.statistic = std::max(num / den, 0.0);
    r.p_value = f_sf(r.statistic, r.dof1, r.dof2);
    return r;
}

namespace {

struct AdfRegression {
    double tau = 0.0;
    double aic = 0.0;
    int nobs = 0;
};

// Delta-x_t on [1, x_{t-1}, dx_{t-1}..dx_{t-L}], observations starting at
// `start` in the differenced series.
AdfRegression adf_fit(std::span<const double> x, int lag, int start) {
    const int t_diff = int(x.size()) - 1; // number of first differences
    const int nobs = t_diff - start;
    const int p = 2 + lag;
    Eigen::MatrixXd design(nobs, p);
    Eigen::VectorXd dy(nobs);
    for (int i = 0; i < nobs; ++i) {
        const int t = start + i; // index into the differenced series
        dy(i) = x[t + 1] - x[t];
        design(i, 0) = 1.0;
        design(i, 1) = x[t];
        for (int j = 1; j <= lag; ++j) design(i, 1 + j) = x[t - j + 1] - x[t - j];
    }
    const OlsFit fit = ols_fit(design, dy);
    AdfRegression out;
    out.tau = fit.coef(1) / fit.std_errors(1);
    out.aic = nobs * std::log(fit.rss / nobs) + 2.0 * p;
    out.nobs = nobs;
    return out;
}

// MacKinnon (1994) approximate asymptotic p-value surface, regression with
// constant, one I(1) series.
double mackinnon_p(double tau) {
    constexpr double tau_max = 2.74;
    constexpr double tau_min = -18.83;
    constexpr double tau_star = -1.61;
    if (tau > tau_max) return 1.0;
    if (tau < tau_min) return 0.0;
    double z;
    if (tau <= tau_star) {
        z = 2.1659 + tau * (1.4412 + tau * 0.038269);
    } else {
        z = 1.7339 + tau * (0.93202 + tau * (-0.12745 + tau * -0.010368));
    }
    return normal_cdf(z);
}

} // namespace

AdfResult adf_test(std::span<const double> series, std::optional<int> lags) {
    const int t = int(series.size());
    if (t < 50) throw NumericalError("adf_test: need at least 50 observations");
    const double first = series[0];
    bool constant = true;
    for (double v : series) {
        if (v != first) { constant = false; break; }
    }
    if (constant) throw NumericalError("adf_test: series is constant");

    int chosen;
    if (lags) {
        chosen = *lags;
        if (chosen < 0 || t - 1 - chosen < 10) throw NumericalError("adf_test: invalid lag order");
    } else {
        const int max_lag =
            std::min(int(std::floor(12.0 * std::pow(t / 100.0, 0.25))), (t - 1) / 2 - 2);
        // All candidates are compared on the common sample implied by max_lag.
        chosen = 0;
        double best_aic = std::numeric_limits<double>::infinity();
        for (int lag = 0; lag <= max_lag; ++lag) {
            const AdfRegression reg = adf_fit(series, lag, max_lag);
            if (reg.aic < best_aic) {
                best_aic = reg.aic;
                chosen = lag;
            }
        }
    }

    const AdfRegression final_reg = adf_fit(series, chosen, chosen);
    AdfResult out;
    out.statistic = final_reg.tau;
    out.p_value = mackinnon_p(final_reg.tau);
    out.lags = chosen;
    out.nobs = final_reg.nobs;
    return out;
}

BhResult bh_adjust(std::span<const double> p_values, double alpha) {
    const std::size_t m = p_values.size();
    BhResult out;
    out.adjusted.resize(m);
    out.reject.assign(m, false);
    if (m == 0) return out;
    for (double p : p_values) {
        if (!(p >= 0.0 && p <= 1.0)) throw NumericalError("bh_adjust: p-values must be in [0,1]");
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
    // adj_(i) = min_{j >= i} m * p_(j) / j, clipped to 1.
    double running_min = 1.0;
    for (std::size_t i = m; i-- > 0;) {
        const double scaled = double(m) * p_values[order[i]] / double(i + 1);
        running_min = std::min(running_min, scaled);
        out.adjusted[order[i]] = running_min;
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (out.adjusted[i] <= alpha) {
            out.reject[i] = true;
            ++out.n_rejected;
        }
    }
    return out;
}

TestResult mcnemar(std::span<const int> model_preds,
                   std::span<const int> benchmark_preds,
                   std::span<const int> truth) {
    if (model_preds.size() != truth.size() || benchmark_preds.size() != truth.size()) {
        throw NumericalError("mcnemar: prediction vectors must align with truth");
    }
    int b = 0; // model right, benchmark wrong
    int c = 0; // model wrong, benchmark right
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool model_ok = model_preds[i] == truth[i];
        const bool bench_ok = benchmark_preds[i] == truth[i];
        if (model_ok && !bench_ok) ++b;
        if (!model_ok && bench_ok) ++c;
    }
    TestResult r;
    r.dof1 = 1.0;
    const int n = b + c;
    if (n == 0) {
        r.statistic = 0.0;
        r.p_value = 1.0;
        r.degenerate = true;
        return r;
    }
    if (n >= 25) {
        const double d = std::max(std::abs(double(b) - double(c)) - 1.0, 0.0);
        r.statistic = d * d / double(n);
        r.p_value = chi2_sf(r.statistic, 1.0);
    } else {
        const int k = std::min(b, c);
        r.statistic = double(std::max(b, c));
        r.p_value = std::min(1.0, 2.0 * binom_cdf_half(k, n));
    }
    return r;
}

Prf precision_recall_f1(std::span<const int> preds, std::span<const int> truth,
                        int positive_class) {
    if (preds.size() != truth.size() || preds.empty()) {
        throw NumericalError("precision_recall_f1: need nonempty aligned vectors");
    }
    int tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const bool pred_pos = preds[i] == positive_class;
        const bool true_pos = truth[i] == positive_class;
        if (pred_pos && true_pos) ++tp;
        else if (pred_pos) ++fp;
        else if (true_pos) ++fn;
    }
    Prf out;
    if (tp + fp == 0) out.precision_undefined = true;
    else out.precision = double(tp) / double(tp + fp);
    if (tp + fn == 0) out.recall_undefined = true;
    else out.recall = double(tp) / double(tp + fn);
    if (out.precision + out.recall == 0.0) out.f1_undefined = true;
    else out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
    return out;
}

} // namespace beircast::stats
