#include "beircast/logistic.hpp"

#include "beircast/error.hpp"
#include "beircast/optim.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace beircast {

namespace {

double log1p_exp(double z) {
    // log(1 + e^z) without overflow.
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

} // namespace

double LogisticModel::objective(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                                double penalty, const Eigen::VectorXd& params,
                                Eigen::VectorXd& gradient) {
    const int n = int(X.rows());
    const int p = int(X.cols());
    const Eigen::VectorXd w = params.head(p);
    const double b = params(p);

    const Eigen::VectorXd z = X * w + Eigen::VectorXd::Constant(n, b);
    double loss = 0.5 * penalty * w.squaredNorm();
    Eigen::VectorXd dz(n);
    for (int i = 0; i < n; ++i) {
        const double yi = double(y(i));
        // Per-sample loss: log(1 + exp(z)) - y*z.
        loss += log1p_exp(z(i)) - yi * z(i);
        dz(i) = sigmoid(z(i)) - yi;
    }
    gradient.resize(p + 1);
    gradient.head(p) = X.transpose() * dz + penalty * w;
    gradient(p) = dz.sum();
    return loss;
}

LogisticModel LogisticModel::fit(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                                 const LogisticOptions& options) {
    const int n = int(X.rows());
    const int p = int(X.cols());
    if (y.size() != n) throw NumericalError("logistic fit: X and y row counts differ");
    const int positives = y.sum();
    if (positives == 0 || positives == n) {
        throw NumericalError("logistic fit: y must contain both classes");
    }

    LbfgsOptions lbfgs;
    lbfgs.max_iterations = options.max_iterations;
    lbfgs.gradient_tolerance = options.tolerance;
    const auto fn = [&](const Eigen::VectorXd& params, Eigen::VectorXd& grad) {
        return objective(X, y, options.l2_penalty, params, grad);
    };
    const LbfgsResult res = lbfgs_minimize(fn, Eigen::VectorXd::Zero(p + 1), lbfgs);
    if (!res.converged) {
        std::ostringstream msg;
        msg << "logistic fit failed to converge: " << res.iterations << " iterations, |grad|_inf="
            << res.gradient_norm << " > tol " << options.tolerance;
        throw NumericalError(msg.str());
    }

    LogisticModel m;
    m.weights_ = res.x.head(p);
    m.intercept_ = res.x(p);
    m.penalty_ = options.l2_penalty;
    m.iterations_ = res.iterations;
    return m;
}

LogisticModel LogisticModel::restore(Eigen::VectorXd weights, double intercept) {
    LogisticModel m;
    m.weights_ = std::move(weights);
    m.intercept_ = intercept;
    return m;
}

Eigen::VectorXd LogisticModel::predict_proba(const Eigen::MatrixXd& X) const {
    if (X.cols() != weights_.size()) {
        throw NumericalError("logistic predict: column count mismatch");
    }
    const Eigen::VectorXd z =
        X * weights_ + Eigen::VectorXd::Constant(X.rows(), intercept_);
    Eigen::VectorXd probs(z.size());
    for (int i = 0; i < z.size(); ++i) probs(i) = sigmoid(z(i));
    return probs;
}

Eigen::VectorXd LogisticModel::wald_p_values(const Eigen::MatrixXd& X) const {
    const int n = int(X.rows());
    const int p = int(X.cols());
    // Observed information of the penalized objective at the optimum:
    // H = X' diag(p(1-p)) X + penalty * I (intercept block unpenalized).
    const Eigen::VectorXd probs = predict_proba(X);
    Eigen::MatrixXd xb(n, p + 1);
    xb.leftCols(p) = X;
    xb.col(p).setOnes();
    const Eigen::VectorXd w = probs.array() * (1.0 - probs.array());
    Eigen::MatrixXd hessian = xb.transpose() * w.asDiagonal() * xb;
    for (int j = 0; j < p; ++j) hessian(j, j) += penalty_;
    const Eigen::MatrixXd cov = hessian.ldlt().solve(Eigen::MatrixXd::Identity(p + 1, p + 1));

    Eigen::VectorXd pv(p);
    for (int j = 0; j < p; ++j) {
        const double se = std::sqrt(std::max(cov(j, j), 0.0));
        if (se <= 0.0) {
            pv(j) = 1.0;
            continue;
        }
        const double zstat = std::abs(weights_(j)) / se;
        pv(j) = std::erfc(zstat / std::numbers::sqrt2); // two-sided normal
    }
    return pv;
}

} // namespace beircast
