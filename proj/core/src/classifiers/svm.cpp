#include "beircast/error.hpp"
#include "impl.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace beircast::detail {

namespace {

double sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

double rbf(const Eigen::MatrixXd& X, int i, int j, double gamma) {
    return std::exp(-gamma * (X.row(i) - X.row(j)).squaredNorm());
}

/// Platt's SMO for the soft-margin RBF dual, C fixed, labels in {-1,+1}.
class SmoSolver {
public:
    SmoSolver(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double cost, double gamma,
              double tolerance)
        : x_(X), y_(y), c_(cost), gamma_(gamma), tol_(tolerance), n_(int(X.rows())),
          alpha_(Eigen::VectorXd::Zero(n_)), errors_(Eigen::VectorXd::Zero(n_)) {
        kernel_.resize(n_, n_);
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j <= i; ++j) {
                const double k = rbf(x_, i, j, gamma_);
                kernel_(i, j) = k;
                kernel_(j, i) = k;
            }
        }
        for (int i = 0; i < n_; ++i) errors_(i) = -y_(i); // f = 0 initially
    }

    void solve(int max_passes) {
        int changed = 0;
        bool examine_all = true;
        int passes = 0;
        while ((changed > 0 || examine_all) && passes < max_passes) {
            changed = 0;
            for (int i = 0; i < n_; ++i) {
                if (examine_all || (alpha_(i) > 0.0 && alpha_(i) < c_)) {
                    changed += examine(i);
                }
            }
            if (examine_all) {
                examine_all = false;
            } else if (changed == 0) {
                examine_all = true;
            }
            ++passes;
        }
    }

    const Eigen::VectorXd& alpha() const { return alpha_; }
    double bias() const { return b_; }

private:
    int examine(int i2) {
        const double y2 = y_(i2);
        const double alpha2 = alpha_(i2);
        const double e2 = errors_(i2);
        const double r2 = e2 * y2;
        if ((r2 < -tol_ && alpha2 < c_) || (r2 > tol_ && alpha2 > 0.0)) {
            // Second-choice heuristic: maximize |E1 - E2| over non-bound points.
            int best = -1;
            double best_gap = -1.0;
            for (int i = 0; i < n_; ++i) {
                if (alpha_(i) > 0.0 && alpha_(i) < c_) {
                    const double gap = std::abs(errors_(i) - e2);
                    if (gap > best_gap) {
                        best_gap = gap;
                        best = i;
                    }
                }
            }
            if (best >= 0 && take_step(best, i2)) return 1;
            for (int i = 0; i < n_; ++i) {
                if (alpha_(i) > 0.0 && alpha_(i) < c_ && take_step(i, i2)) return 1;
            }
            for (int i = 0; i < n_; ++i) {
                if (take_step(i, i2)) return 1;
            }
        }
        return 0;
    }

    bool take_step(int i1, int i2) {
        if (i1 == i2) return false;
        const double alpha1 = alpha_(i1), alpha2 = alpha_(i2);
        const double y1 = y_(i1), y2 = y_(i2);
        const double e1 = errors_(i1), e2 = errors_(i2);
        const double s = y1 * y2;

        double low, high;
        if (s < 0.0) {
            low = std::max(0.0, alpha2 - alpha1);
            high = std::min(c_, c_ + alpha2 - alpha1);
        } else {
            low = std::max(0.0, alpha1 + alpha2 - c_);
            high = std::min(c_, alpha1 + alpha2);
        }
        if (low >= high) return false;

        const double k11 = kernel_(i1, i1), k12 = kernel_(i1, i2), k22 = kernel_(i2, i2);
        // RBF Gram is PSD, so eta >= 0; a tiny floor handles duplicate rows.
        const double eta = std::max(k11 + k22 - 2.0 * k12, 1e-12);
        double a2 = alpha2 + y2 * (e1 - e2) / eta;
        a2 = std::clamp(a2, low, high);
        if (std::abs(a2 - alpha2) < 1e-12 * (a2 + alpha2 + 1e-12)) return false;

        const double a1 = alpha1 + s * (alpha2 - a2);
        const double b1 = b_ - e1 - y1 * (a1 - alpha1) * k11 - y2 * (a2 - alpha2) * k12;
        const double b2 = b_ - e2 - y1 * (a1 - alpha1) * k12 - y2 * (a2 - alpha2) * k22;
        double b_new;
        if (a1 > 0.0 && a1 < c_) b_new = b1;
        else if (a2 > 0.0 && a2 < c_) b_new = b2;
        else b_new = 0.5 * (b1 + b2);

        const double delta_b = b_new - b_;
        const double d1 = y1 * (a1 - alpha1);
        const double d2 = y2 * (a2 - alpha2);
        for (int i = 0; i < n_; ++i) {
            errors_(i) += d1 * kernel_(i1, i) + d2 * kernel_(i2, i) + delta_b;
        }
        b_ = b_new;
        alpha_(i1) = a1;
        alpha_(i2) = a2;
        errors_(i1) = f_value_raw(i1) - y1;
        errors_(i2) = f_value_raw(i2) - y2;
        return true;
    }

    double f_value_raw(int i) const {
        double f = b_;
        for (int j = 0; j < n_; ++j) {
            if (alpha_(j) > 0.0) f += alpha_(j) * y_(j) * kernel_(j, i);
        }
        return f;
    }

    const Eigen::MatrixXd& x_;
    const Eigen::VectorXd& y_;
    const double c_;
    const double gamma_;
    const double tol_;
    const int n_;
    Eigen::VectorXd alpha_;
    Eigen::VectorXd errors_; // f(x_i) - y_i
    Eigen::MatrixXd kernel_;
    double b_ = 0.0;
};

} // namespace

Eigen::VectorXd SvmClassifier::decision_values(const Eigen::MatrixXd& X) const {
    Eigen::VectorXd out(X.rows());
    for (int i = 0; i < X.rows(); ++i) {
        double f = bias_;
        for (int s = 0; s < support_vectors_.rows(); ++s) {
            f += dual_coef_(s) *
                 std::exp(-gamma_ * (X.row(i) - support_vectors_.row(s)).squaredNorm());
        }
        out(i) = f;
    }
    return out;
}

Eigen::VectorXd SvmClassifier::do_predict_proba(const Eigen::MatrixXd& X) const {
    Eigen::VectorXd decisions = decision_values(X);
    for (int i = 0; i < decisions.size(); ++i) decisions(i) = sigmoid(decisions(i));
    return decisions;
}

std::unique_ptr<TrainedClassifier> train_svm(const ClassifierSpec& spec, const Eigen::MatrixXd& X,
                                             const std::vector<std::string>& columns,
                                             const Eigen::VectorXi& y) {
    const int n = int(X.rows());
    Eigen::VectorXd signed_y(n);
    for (int i = 0; i < n; ++i) signed_y(i) = y(i) == 1 ? 1.0 : -1.0;

    double gamma;
    if (spec.svm.gamma) {
        gamma = *spec.svm.gamma;
    } else {
        // The common "scale" default: 1 / (p * Var(all entries of X)).
        const double mean = X.mean();
        const double var = (X.array() - mean).square().sum() / double(X.size());
        gamma = var > 0.0 ? 1.0 / (double(X.cols()) * var) : 1.0;
    }

    SmoSolver solver(X, signed_y, spec.svm.cost, gamma, spec.svm.tolerance);
    solver.solve(spec.svm.max_passes);

    std::vector<int> sv_indices;
    for (int i = 0; i < n; ++i) {
        if (solver.alpha()(i) > 1e-12) sv_indices.push_back(i);
    }
    Eigen::MatrixXd support(int(sv_indices.size()), X.cols());
    Eigen::VectorXd coef(int(sv_indices.size()));
    for (std::size_t k = 0; k < sv_indices.size(); ++k) {
        support.row(int(k)) = X.row(sv_indices[k]);
        coef(int(k)) = solver.alpha()(sv_indices[k]) * signed_y(sv_indices[k]);
    }
    return std::make_unique<SvmClassifier>(columns, spec.seed, std::move(support),
                                           std::move(coef), solver.bias(), gamma);
}

} // namespace beircast::detail
