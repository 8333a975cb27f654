#include "decision_tree.hpp"

#include <algorithm>
#include <numeric>

namespace beircast::detail {

namespace {

double gini(int positives, int total) {
    if (total == 0) return 0.0;
    const double p = double(positives) / double(total);
    return 2.0 * p * (1.0 - p);
}

struct SplitCandidate {
    int feature = -1;
    double threshold = 0.0;
    double gain = -1.0;
};

// Best Gini split of `indices` on `feature`; returns gain in weighted
// impurity units (n_node * gini_node - n_l * gini_l - n_r * gini_r).
SplitCandidate best_gini_split(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                               std::vector<int>& indices, int feature) {
    std::sort(indices.begin(), indices.end(), [&](int a, int b) {
        return X(a, feature) < X(b, feature);
    });
    const int n = int(indices.size());
    int total_pos = 0;
    for (int idx : indices) total_pos += y(idx);
    const double parent = double(n) * gini(total_pos, n);

    SplitCandidate best;
    best.feature = feature;
    int left_pos = 0;
    for (int i = 0; i < n - 1; ++i) {
        left_pos += y(indices[std::size_t(i)]);
        const double x_here = X(indices[std::size_t(i)], feature);
        const double x_next = X(indices[std::size_t(i + 1)], feature);
        if (x_here == x_next) continue;
        const int n_left = i + 1;
        const int n_right = n - n_left;
        const double gain = parent - double(n_left) * gini(left_pos, n_left) -
                            double(n_right) * gini(total_pos - left_pos, n_right);
        if (gain > best.gain) {
            best.gain = gain;
            best.threshold = x_here + 0.5 * (x_next - x_here);
        }
    }
    return best;
}

struct GiniBuilder {
    const Eigen::MatrixXd& X;
    const Eigen::VectorXi& y;
    const GiniTreeConfig& config;
    Rng& rng;
    Eigen::VectorXd* gains;
    DecisionTree tree;

    int build(std::vector<int> indices) {
        const int n = int(indices.size());
        int positives = 0;
        for (int idx : indices) positives += y(idx);

        const auto make_leaf = [&]() {
            TreeNode leaf;
            leaf.value = double(positives) / double(n);
            tree.nodes.push_back(leaf);
            return int(tree.nodes.size()) - 1;
        };
        if (n < config.min_samples_split || positives == 0 || positives == n) {
            return make_leaf();
        }

        const int p = int(X.cols());
        std::vector<int> features(static_cast<std::size_t>(p));
        std::iota(features.begin(), features.end(), 0);
        rng.shuffle(features);
        const int mtry = config.max_features > 0 ? std::min(config.max_features, p) : p;

        SplitCandidate best;
        std::vector<int> scratch = indices;
        for (int f = 0; f < p; ++f) {
            // Honor mtry, but keep scanning if nothing splittable came up.
            if (f >= mtry && best.gain >= 0.0) break;
            const SplitCandidate cand = best_gini_split(X, y, scratch, features[std::size_t(f)]);
            if (cand.gain > best.gain) best = cand;
        }
        if (best.gain < 0.0) return make_leaf(); // all features constant here

        std::vector<int> left, right;
        for (int idx : indices) {
            (X(idx, best.feature) <= best.threshold ? left : right).push_back(idx);
        }
        if (left.empty() || right.empty()) return make_leaf();

        if (gains) (*gains)(best.feature) += best.gain;
        TreeNode node;
        node.feature = best.feature;
        node.threshold = best.threshold;
        tree.nodes.push_back(node);
        const int self = int(tree.nodes.size()) - 1;
        const int left_child = build(std::move(left));
        const int right_child = build(std::move(right));
        tree.nodes[std::size_t(self)].left = left_child;
        tree.nodes[std::size_t(self)].right = right_child;
        return self;
    }
};

struct BoostSplit {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

struct BoostBuilder {
    const Eigen::MatrixXd& X;
    const Eigen::VectorXd& grad;
    const Eigen::VectorXd& hess;
    const BoostTreeConfig& config;
    Eigen::VectorXd* gains;
    DecisionTree tree;

    double leaf_weight(double g, double h) const {
        return -g / (h + config.l2_leaf) * config.learning_rate;
    }

    int build(std::vector<int> indices, int depth) {
        double g_total = 0.0, h_total = 0.0;
        for (int idx : indices) {
            g_total += grad(idx);
            h_total += hess(idx);
        }
        const auto make_leaf = [&]() {
            TreeNode leaf;
            leaf.value = leaf_weight(g_total, h_total);
            tree.nodes.push_back(leaf);
            return int(tree.nodes.size()) - 1;
        };
        if (depth >= config.max_depth || int(indices.size()) < 2) return make_leaf();

        const double parent_score = g_total * g_total / (h_total + config.l2_leaf);
        BoostSplit best;
        std::vector<int> sorted = indices;
        for (int f = 0; f < int(X.cols()); ++f) {
            std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
                return X(a, f) < X(b, f);
            });
            double g_left = 0.0, h_left = 0.0;
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                g_left += grad(sorted[i]);
                h_left += hess(sorted[i]);
                const double x_here = X(sorted[i], f);
                const double x_next = X(sorted[i + 1], f);
                if (x_here == x_next) continue;
                const double g_right = g_total - g_left;
                const double h_right = h_total - h_left;
                if (h_left < config.min_child_weight || h_right < config.min_child_weight) continue;
                const double gain = 0.5 * (g_left * g_left / (h_left + config.l2_leaf) +
                                           g_right * g_right / (h_right + config.l2_leaf) -
                                           parent_score);
                if (gain > best.gain) {
                    best.feature = f;
                    best.threshold = x_here + 0.5 * (x_next - x_here);
                    best.gain = gain;
                }
            }
        }
        if (best.feature < 0 || best.gain <= 0.0) return make_leaf();

        std::vector<int> left, right;
        for (int idx : indices) {
            (X(idx, best.feature) <= best.threshold ? left : right).push_back(idx);
        }
        if (left.empty() || right.empty()) return make_leaf();

        if (gains) (*gains)(best.feature) += best.gain;
        TreeNode node;
        node.feature = best.feature;
        node.threshold = best.threshold;
        tree.nodes.push_back(node);
        const int self = int(tree.nodes.size()) - 1;
        const int left_child = build(std::move(left), depth + 1);
        const int right_child = build(std::move(right), depth + 1);
        tree.nodes[std::size_t(self)].left = left_child;
        tree.nodes[std::size_t(self)].right = right_child;
        return self;
    }
};

} // namespace

DecisionTree build_gini_tree(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                             const std::vector<int>& sample_indices,
                             const GiniTreeConfig& config, Rng& rng,
                             Eigen::VectorXd* gain_accumulator) {
    GiniBuilder builder{X, y, config, rng, gain_accumulator, {}};
    builder.build(sample_indices);
    return std::move(builder.tree);
}

DecisionTree build_boost_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& grad,
                              const Eigen::VectorXd& hess, const BoostTreeConfig& config,
                              Eigen::VectorXd* gain_accumulator) {
    std::vector<int> all(std::size_t(X.rows()));
    std::iota(all.begin(), all.end(), 0);
    BoostBuilder builder{X, grad, hess, config, gain_accumulator, {}};
    builder.build(std::move(all), 0);
    return std::move(builder.tree);
}

} // namespace beircast::detail
