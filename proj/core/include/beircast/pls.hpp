#pragma once

#include "beircast/logistic.hpp"
#include "beircast/taxonomy.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace beircast {

/// SIMPLS partial least squares model for a single target.
/// Weights R project centered predictors onto orthonormal score vectors;
/// scores maximize covariance with the target under score orthogonality.
struct PlsModel {
    std::vector<std::string> column_names;
    Eigen::VectorXd column_means;   // centering applied at fit time
    Eigen::MatrixXd weights;        // R, p x A (scores = Xc * R)
    Eigen::MatrixXd x_loadings;     // P, p x A
    Eigen::VectorXd y_loadings;     // q, A
    Eigen::MatrixXd training_scores; // n x A, orthonormal columns
    double target_mean = 0.0;
    Eigen::VectorXd explained;      // per-component fraction of target variance
    int components() const { return int(weights.cols()); }
};

// Fits SIMPLS with up to `n_components` components against `target`
// (typically baseline residuals). Stops early with a warning flag in the
// model if the cross-covariance vanishes. Requires n > n_components.
PlsModel fit_pls(const Eigen::MatrixXd& X, const std::vector<std::string>& column_names,
                 const Eigen::VectorXd& target, int n_components = 5);

// Scores for new data sharing the training column set: (X - means) * R.
// Throws NumericalError listing missing/extra columns on mismatch.
Eigen::MatrixXd pls_transform(const PlsModel& model, const Eigen::MatrixXd& X,
                              const std::vector<std::string>& column_names);

struct ExplainedVarianceCheck {
    bool passes = false;
    double cumulative = 0.0;
    std::vector<double> per_component;
};

// Compares the cumulative target-variance fraction of the fitted components
// against `threshold` (informative, not fatal).
ExplainedVarianceCheck explained_variance_check(const PlsModel& model, double threshold = 0.80);

/// Market-only logistic baseline plus its response residuals y - p_hat.
struct BaselineFit {
    LogisticModel model;
    Eigen::VectorXd residuals; // in (-1, 1)
};

BaselineFit fit_baseline(const Eigen::MatrixXd& market_features, const Eigen::VectorXi& labels,
                         const LogisticOptions& options = {});

/// Share of absolute loading mass per retained category for one component.
struct CategoryLoadingProfile {
    int component = 0;
    std::map<std::string, double> shares; // nonnegative, sum to 1
};

CategoryLoadingProfile category_profile(const PlsModel& model, const ThemeTaxonomy& tax,
                                        int component);

// Diagnostic from the design notes: logistic residuals do not make components
// exactly orthogonal to market features, so the max |correlation| is reported
// rather than asserted.
double max_abs_correlation(const Eigen::MatrixXd& scores, const Eigen::MatrixXd& market_features);

void write_pls_model_json(const std::filesystem::path& path, const PlsModel& model,
                          const std::string& country, const std::string& taxonomy_fingerprint);
PlsModel read_pls_model_json(const std::filesystem::path& path);

void write_category_profiles_csv(const std::filesystem::path& path,
                                 const std::vector<CategoryLoadingProfile>& profiles);

} // namespace beircast
