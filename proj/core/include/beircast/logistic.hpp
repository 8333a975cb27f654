#pragma once

#include <Eigen/Dense>

#include <optional>

namespace beircast {

struct LogisticOptions {
    double l2_penalty = 1.0;  // on weights, not the intercept (C = 1 equivalent)
    double tolerance = 1e-6;
    int max_iterations = 1000;
};

/// L2-penalized binary logistic regression solved by L-BFGS.
/// Objective: sum_i log(1 + exp(-z_i)) + (penalty/2)*||w||^2.
class LogisticModel {
public:
    // y in {0,1}, both classes present. Throws NumericalError on
    // non-convergence (with iteration diagnostics) or single-class y.
    static LogisticModel fit(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                             const LogisticOptions& options = {});

    // Rebuilds a model from serialized coefficients.
    static LogisticModel restore(Eigen::VectorXd weights, double intercept);

    Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X) const;

    const Eigen::VectorXd& weights() const { return weights_; }
    double intercept() const { return intercept_; }
    int iterations() const { return iterations_; }

    // Wald z-test p-values per coefficient, from the inverse observed
    // information at the optimum.
    Eigen::VectorXd wald_p_values(const Eigen::MatrixXd& X) const;

    // Objective value and gradient at packed parameters [w; b]; exposed so
    // tests can check the analytic gradient against finite differences.
    static double objective(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                            double penalty, const Eigen::VectorXd& params,
                            Eigen::VectorXd& gradient);

private:
    Eigen::VectorXd weights_;
    double intercept_ = 0.0;
    double penalty_ = 1.0;
    int iterations_ = 0;
};

} // namespace beircast
