#include "beircast/optim.hpp"

#include <cmath>
#include <deque>

namespace beircast {

LbfgsResult lbfgs_minimize(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>& objective,
    Eigen::VectorXd x0, const LbfgsOptions& options) {
    const int n = int(x0.size());
    Eigen::VectorXd x = std::move(x0);
    Eigen::VectorXd grad(n);
    double fx = objective(x, grad);

    std::deque<Eigen::VectorXd> s_hist, y_hist;
    std::deque<double> rho_hist;

    LbfgsResult result;
    int it = 0;
    for (; it < options.max_iterations; ++it) {
        const double gnorm = grad.lpNorm<Eigen::Infinity>();
        if (gnorm < options.gradient_tolerance) {
            result.converged = true;
            break;
        }

        // Two-loop recursion.
        Eigen::VectorXd q = grad;
        std::vector<double> alpha(s_hist.size());
        for (int i = int(s_hist.size()) - 1; i >= 0; --i) {
            alpha[std::size_t(i)] = rho_hist[std::size_t(i)] * s_hist[std::size_t(i)].dot(q);
            q -= alpha[std::size_t(i)] * y_hist[std::size_t(i)];
        }
        if (!s_hist.empty()) {
            const auto& s = s_hist.back();
            const auto& y = y_hist.back();
            q *= s.dot(y) / y.squaredNorm();
        }
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
            const double beta = rho_hist[i] * y_hist[i].dot(q);
            q += (alpha[i] - beta) * s_hist[i];
        }
        Eigen::VectorXd direction = -q;

        double dg = direction.dot(grad);
        if (dg >= 0.0) { // fall back to steepest descent
            direction = -grad;
            dg = -grad.squaredNorm();
        }

        // Backtracking Armijo line search.
        double step = 1.0;
        const double c1 = 1e-4;
        Eigen::VectorXd x_new(n), grad_new(n);
        double fx_new = fx;
        bool accepted = false;
        for (int ls = 0; ls < 50; ++ls) {
            x_new = x + step * direction;
            fx_new = objective(x_new, grad_new);
            if (std::isfinite(fx_new) && fx_new <= fx + c1 * step * dg) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break; // line search failed; report best point so far

        Eigen::VectorXd s = x_new - x;
        Eigen::VectorXd y = grad_new - grad;
        const double sy = s.dot(y);
        if (sy > 1e-12) {
            if (int(s_hist.size()) == options.history) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
            rho_hist.push_back(1.0 / sy);
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
        }
        x = std::move(x_new);
        grad = std::move(grad_new);
        fx = fx_new;
    }

    result.x = std::move(x);
    result.value = fx;
    result.gradient_norm = grad.lpNorm<Eigen::Infinity>();
    result.iterations = it;
    if (result.gradient_norm < options.gradient_tolerance) result.converged = true;
    return result;
}

} // namespace beircast
