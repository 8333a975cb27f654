#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace beircast {

enum class ClassifierKind { LG, SV, RF, XG, MLP };

std::string_view classifier_kind_name(ClassifierKind k);
std::optional<ClassifierKind> classifier_kind_from_name(std::string_view name);

struct LogisticParams {
    double l2_penalty = 1.0;
    double tolerance = 1e-6;
    int max_iterations = 1000;
};

struct SvmParams {
    double cost = 1.0;                 // soft-margin C
    std::optional<double> gamma;       // RBF bandwidth; default 1/(p*Var(X))
    double tolerance = 1e-3;
    int max_passes = 200;
};

struct ForestParams {
    int n_trees = 50;
    int min_samples_split = 2;
};

struct BoostParams {
    int rounds = 100;
    double learning_rate = 0.3;
    int max_depth = 10;
    double l2_leaf = 1.0;
    double min_child_weight = 1.0;
};

struct MlpParams {
    int hidden_layers = 10;
    int hidden_units = 10;
    double l2_penalty = 1e-4;
    double learning_rate = 1e-3;
    int epochs = 200;
    int batch_size = 32;
};

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::LG;
    std::uint64_t seed = 0;
    LogisticParams logistic;
    SvmParams svm;
    ForestParams forest;
    BoostParams boost;
    MlpParams mlp;

    static ClassifierSpec make(ClassifierKind kind, std::uint64_t seed = 0);
    void validate() const; // throws UsageError on out-of-range parameters
};

struct FeatureImportance {
    std::vector<std::string> names;
    Eigen::VectorXd importance;          // LG: |coefficient|; RF/XG: gain share
    std::optional<Eigen::VectorXd> wald_p; // LG only
};

/// A fitted model bound to its training columns. Prediction requires exactly
/// the training columns, in order; probabilities are class-1.
class TrainedClassifier {
public:
    virtual ~TrainedClassifier() = default;

    ClassifierKind kind() const { return kind_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<std::string>& columns() const { return columns_; }

    Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X,
                                  const std::vector<std::string>& columns) const;
    std::vector<int> predict(const Eigen::MatrixXd& X,
                             const std::vector<std::string>& columns) const;

    // Supported for LG, RF and XG; throws NumericalError for SV and MLP.
    virtual FeatureImportance feature_importance() const;

protected:
    TrainedClassifier(ClassifierKind kind, std::vector<std::string> columns, std::uint64_t seed)
        : kind_(kind), columns_(std::move(columns)), seed_(seed) {}

    virtual Eigen::VectorXd do_predict_proba(const Eigen::MatrixXd& X) const = 0;

private:
    ClassifierKind kind_;
    std::vector<std::string> columns_;
    std::uint64_t seed_ = 0;

    friend void save_classifier_json(const std::filesystem::path&, const TrainedClassifier&);
};

// Trains one model. X must be standardized, y in {0,1} with both classes
// present. Deterministic given (spec, X, y): identical inputs give
// bit-identical predictions.
std::unique_ptr<TrainedClassifier> train_classifier(const ClassifierSpec& spec,
                                                    const Eigen::MatrixXd& X,
                                                    const std::vector<std::string>& columns,
                                                    const Eigen::VectorXi& y);

// Versioned JSON envelope {format, kind, seed, columns, parameters}.
void save_classifier_json(const std::filesystem::path& path, const TrainedClassifier& model);
std::unique_ptr<TrainedClassifier> load_classifier_json(const std::filesystem::path& path);

} // namespace beircast
