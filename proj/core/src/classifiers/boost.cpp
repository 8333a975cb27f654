#include "beircast/error.hpp"
#include "impl.hpp"

#include <cmath>

namespace beircast::detail {

namespace {

double sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

} // namespace

FeatureImportance BoostClassifier::feature_importance() const {
    FeatureImportance out;
    out.names = columns();
    out.importance = gain_share_;
    return out;
}

Eigen::VectorXd BoostClassifier::do_predict_proba(const Eigen::MatrixXd& X) const {
    Eigen::VectorXd margin = Eigen::VectorXd::Constant(X.rows(), base_margin_);
    for (const auto& tree : trees_) {
        for (int i = 0; i < X.rows(); ++i) margin(i) += tree.predict_row(X, i);
    }
    for (int i = 0; i < margin.size(); ++i) margin(i) = sigmoid(margin(i));
    return margin;
}

std::unique_ptr<TrainedClassifier> train_boost(const ClassifierSpec& spec,
                                               const Eigen::MatrixXd& X,
                                               const std::vector<std::string>& columns,
                                               const Eigen::VectorXi& y) {
    const int n = int(X.rows());
    const int p = int(X.cols());

    BoostTreeConfig config;
    config.max_depth = spec.boost.max_depth;
    config.l2_leaf = spec.boost.l2_leaf;
    config.min_child_weight = spec.boost.min_child_weight;
    config.learning_rate = spec.boost.learning_rate;

    // Logistic loss: g = p - y, h = p(1 - p); margins start at logit(0.5) = 0.
    Eigen::VectorXd margin = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd grad(n), hess(n);
    std::vector<DecisionTree> trees;
    trees.reserve(std::size_t(spec.boost.rounds));
    Eigen::VectorXd gains = Eigen::VectorXd::Zero(p);

    for (int round = 0; round < spec.boost.rounds; ++round) {
        for (int i = 0; i < n; ++i) {
            const double prob = sigmoid(margin(i));
            grad(i) = prob - double(y(i));
            hess(i) = std::max(prob * (1.0 - prob), 1e-16);
        }
        DecisionTree tree = build_boost_tree(X, grad, hess, config, &gains);
        for (int i = 0; i < n; ++i) margin(i) += tree.predict_row(X, i);
        trees.push_back(std::move(tree));
    }
    const double total = gains.sum();
    if (total > 0.0) gains /= total;
    return std::make_unique<BoostClassifier>(columns, spec.seed, std::move(trees),
                                             std::move(gains), 0.0);
}

} // namespace beircast::detail
