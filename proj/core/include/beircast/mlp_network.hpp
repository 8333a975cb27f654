#pragma once

#include "beircast/rng.hpp"

#include <Eigen/Dense>

#include <vector>

namespace beircast {

/// Fully connected relu network with a sigmoid output unit, trained on
/// binary cross-entropy. Exposed separately from the classifier wrapper so
/// its analytic gradient can be checked against finite differences.
class MlpNetwork {
public:
    MlpNetwork() = default;
    // layer_sizes = {inputs, hidden..., 1}. He-initialized from rng.
    MlpNetwork(const std::vector<int>& layer_sizes, Rng& rng);

    Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X) const;

    // Mean BCE over the batch plus (l2/2)*sum(W^2) on weights (biases
    // unpenalized). Writes the gradient in packed parameter order.
    double loss_and_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                             double l2_penalty, Eigen::VectorXd& gradient) const;

    Eigen::VectorXd packed_parameters() const;
    void set_packed_parameters(const Eigen::VectorXd& params);
    int parameter_count() const;

    // Adam on shuffled minibatches. Throws NumericalError if the loss goes
    // non-finite (with epoch/batch diagnostics).
    void train_adam(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, double l2_penalty,
                    double learning_rate, int epochs, int batch_size, Rng& rng);

    const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
    const std::vector<Eigen::VectorXd>& biases() const { return biases_; }
    void set_layers(std::vector<Eigen::MatrixXd> weights, std::vector<Eigen::VectorXd> biases);

private:
    std::vector<Eigen::MatrixXd> weights_; // weights_[l]: (out x in)
    std::vector<Eigen::VectorXd> biases_;
};

} // namespace beircast
