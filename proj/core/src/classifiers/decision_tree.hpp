#pragma once

#include "beircast/rng.hpp"

#include <Eigen/Dense>

#include <vector>

namespace beircast::detail {

struct TreeNode {
    int feature = -1;        // -1 marks a leaf
    double threshold = 0.0;  // go left when x[feature] <= threshold
    int left = -1;
    int right = -1;
    double value = 0.0;      // leaf payload (class fraction or boosting weight)
};

struct DecisionTree {
    std::vector<TreeNode> nodes;

    double predict_row(const Eigen::MatrixXd& X, int row) const {
        int idx = 0;
        while (nodes[std::size_t(idx)].feature >= 0) {
            const auto& node = nodes[std::size_t(idx)];
            idx = X(row, node.feature) <= node.threshold ? node.left : node.right;
        }
        return nodes[std::size_t(idx)].value;
    }
};

/// Gini CART for the random forest. Grows to purity; splits use midpoint
/// thresholds between consecutive distinct values, so predictions are
/// invariant to monotone rescaling of a feature. If every sampled feature is
/// constant within a node, the remaining features are considered before
/// declaring a leaf.
struct GiniTreeConfig {
    int min_samples_split = 2;
    int max_features = 0; // 0 = all
};

DecisionTree build_gini_tree(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                             const std::vector<int>& sample_indices,
                             const GiniTreeConfig& config, Rng& rng,
                             Eigen::VectorXd* gain_accumulator);

/// Second-order boosting tree on gradient/hessian pairs. Split gain is the
/// usual regularized reduction; splits require strictly positive gain and
/// min_child_weight hessian mass per child. Leaf values carry -G/(H+lambda)
/// with the learning rate already applied.
struct BoostTreeConfig {
    int max_depth = 10;
    double l2_leaf = 1.0;
    double min_child_weight = 1.0;
    double learning_rate = 0.3;
};

DecisionTree build_boost_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& grad,
                              const Eigen::VectorXd& hess, const BoostTreeConfig& config,
                              Eigen::VectorXd* gain_accumulator);

} // namespace beircast::detail
