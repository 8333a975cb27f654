#include "beircast/error.hpp"
#include "impl.hpp"

#include <cmath>

namespace beircast::detail {

FeatureImportance ForestClassifier::feature_importance() const {
    FeatureImportance out;
    out.names = columns();
    out.importance = gain_share_;
    return out;
}

Eigen::VectorXd ForestClassifier::do_predict_proba(const Eigen::MatrixXd& X) const {
    Eigen::VectorXd probs = Eigen::VectorXd::Zero(X.rows());
    for (const auto& tree : trees_) {
        for (int i = 0; i < X.rows(); ++i) probs(i) += tree.predict_row(X, i);
    }
    if (!trees_.empty()) probs /= double(trees_.size());
    return probs;
}

std::unique_ptr<TrainedClassifier> train_forest(const ClassifierSpec& spec,
                                                const Eigen::MatrixXd& X,
                                                const std::vector<std::string>& columns,
                                                const Eigen::VectorXi& y) {
    const int n = int(X.rows());
    const int p = int(X.cols());
    const int n_trees = spec.forest.n_trees;

    GiniTreeConfig config;
    config.min_samples_split = spec.forest.min_samples_split;
    config.max_features = std::max(1, int(std::lround(std::sqrt(double(p)))));

    std::vector<DecisionTree> trees(static_cast<std::size_t>(n_trees));
    Eigen::VectorXd gains = Eigen::VectorXd::Zero(p);
    for (int t = 0; t < n_trees; ++t) {
        Rng rng(derive_seed(spec.seed, "rf-tree-" + std::to_string(t)));
        std::vector<int> bootstrap(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) bootstrap[std::size_t(i)] = int(rng.uniform_index(std::uint64_t(n)));
        trees[std::size_t(t)] = build_gini_tree(X, y, bootstrap, config, rng, &gains);
    }
    const double total = gains.sum();
    if (total > 0.0) gains /= total;
    return std::make_unique<ForestClassifier>(columns, spec.seed, std::move(trees),
                                              std::move(gains));
}

} // namespace beircast::detail
