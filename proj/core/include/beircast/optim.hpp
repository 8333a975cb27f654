#pragma once

#include <Eigen/Dense>

#include <functional>

namespace beircast {

struct LbfgsOptions {
    int max_iterations = 1000;
    double gradient_tolerance = 1e-6; // on the gradient infinity norm
    int history = 10;
};

struct LbfgsResult {
    Eigen::VectorXd x;
    double value = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Limited-memory BFGS with backtracking line search. `objective` returns the
/// function value and writes the gradient.
LbfgsResult lbfgs_minimize(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>& objective,
    Eigen::VectorXd x0, const LbfgsOptions& options = {});

} // namespace beircast
