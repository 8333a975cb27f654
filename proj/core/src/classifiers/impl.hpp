#pragma once

#include "beircast/classifiers.hpp"
#include "beircast/logistic.hpp"
#include "beircast/mlp_network.hpp"
#include "decision_tree.hpp"

#include <Eigen/Dense>

namespace beircast::detail {

class LgClassifier final : public TrainedClassifier {
public:
    LgClassifier(std::vector<std::string> columns, std::uint64_t seed, LogisticModel model,
                 Eigen::VectorXd wald_p)
        : TrainedClassifier(ClassifierKind::LG, std::move(columns), seed),
          model_(std::move(model)), wald_p_(std::move(wald_p)) {}

    FeatureImportance feature_importance() const override;
    const LogisticModel& model() const { return model_; }
    const Eigen::VectorXd& wald_p() const { return wald_p_; }

protected:
    Eigen::VectorXd do_predict_proba(const Eigen::MatrixXd& X) const override {
        return model_.predict_proba(X);
    }

private:
    LogisticModel model_;
    Eigen::VectorXd wald_p_;
};

class SvmClassifier final : public TrainedClassifier {
public:
    SvmClassifier(std::vector<std::string> columns, std::uint64_t seed,
                  Eigen::MatrixXd support_vectors, Eigen::VectorXd dual_coef, double bias,
                  double gamma)
        : TrainedClassifier(ClassifierKind::SV, std::move(columns), seed),
          support_vectors_(std::move(support_vectors)), dual_coef_(std::move(dual_coef)),
          bias_(bias), gamma_(gamma) {}

    Eigen::VectorXd decision_values(const Eigen::MatrixXd& X) const;
    const Eigen::MatrixXd& support_vectors() const { return support_vectors_; }
    const Eigen::VectorXd& dual_coef() const { return dual_coef_; }
    double bias() const { return bias_; }
    double gamma() const { return gamma_; }

protected:
    // Probabilities through the logistic link on the decision value.
    Eigen::VectorXd do_predict_proba(const Eigen::MatrixXd& X) const override;

private:
    Eigen::MatrixXd support_vectors_; // one row per support vector
    Eigen::VectorXd dual_coef_;       // alpha_i * y_i
    double bias_ = 0.0;
    double gamma_ = 1.0;
};

class ForestClassifier final : public TrainedClassifier {
public:
    ForestClassifier(std::vector<std::string> columns, std::uint64_t seed,
                     std::vector<DecisionTree> trees, Eigen::VectorXd gain_share)
        : TrainedClassifier(ClassifierKind::RF, std::move(columns), seed),
          trees_(std::move(trees)), gain_share_(std::move(gain_share)) {}

    FeatureImportance feature_importance() const override;
    const std::vector<DecisionTree>& trees() const { return trees_; }
    const Eigen::VectorXd& gain_share() const { return gain_share_; }

protected:
    Eigen::VectorXd do_predict_proba(const Eigen::MatrixXd& X) const override;

private:
    std::vector<DecisionTree> trees_;
    Eigen::VectorXd gain_share_;
};

class BoostClassifier final : public TrainedClassifier {
public:
    BoostClassifier(std::vector<std::string> columns, std::uint64_t seed,
                    std::vector<DecisionTree> trees, Eigen::VectorXd gain_share,
                    double base_margin)
        : TrainedClassifier(ClassifierKind::XG, std::move(columns), seed),
          trees_(std::move(trees)), gain_share_(std::move(gain_share)),
          base_margin_(base_margin) {}

    FeatureImportance feature_importance() const override;
    const std::vector<DecisionTree>& trees() const { return trees_; }
    const Eigen::VectorXd& gain_share() const { return gain_share_; }
    double base_margin() const { return base_margin_; }

protected:
    Eigen::VectorXd do_predict_proba(const Eigen::MatrixXd& X) const override;

private:
    std::vector<DecisionTree> trees_;
    Eigen::VectorXd gain_share_;
    double base_margin_ = 0.0;
};

class MlpClassifier final : public TrainedClassifier {
public:
    MlpClassifier(std::vector<std::string> columns, std::uint64_t seed, MlpNetwork network)
        : TrainedClassifier(ClassifierKind::MLP, std::move(columns), seed),
          network_(std::move(network)) {}

    const MlpNetwork& network() const { return network_; }

protected:
    Eigen::VectorXd do_predict_proba(const Eigen::MatrixXd& X) const override {
        return network_.predict_proba(X);
    }

private:
    MlpNetwork network_;
};

std::unique_ptr<TrainedClassifier> train_svm(const ClassifierSpec& spec, const Eigen::MatrixXd& X,
                                             const std::vector<std::string>& columns,
                                             const Eigen::VectorXi& y);
std::unique_ptr<TrainedClassifier> train_forest(const ClassifierSpec& spec,
                                                const Eigen::MatrixXd& X,
                                                const std::vector<std::string>& columns,
                                                const Eigen::VectorXi& y);
std::unique_ptr<TrainedClassifier> train_boost(const ClassifierSpec& spec,
                                               const Eigen::MatrixXd& X,
                                               const std::vector<std::string>& columns,
                                               const Eigen::VectorXi& y);
std::unique_ptr<TrainedClassifier> train_mlp(const ClassifierSpec& spec, const Eigen::MatrixXd& X,
                                             const std::vector<std::string>& columns,
                                             const Eigen::VectorXi& y);

} // namespace beircast::detail
