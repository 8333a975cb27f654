#include "beircast/mlp_network.hpp"

#include "beircast/error.hpp"
#include "impl.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace beircast {

namespace {

double sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

} // namespace

MlpNetwork::MlpNetwork(const std::vector<int>& layer_sizes, Rng& rng) {
    if (layer_sizes.size() < 2 || layer_sizes.back() != 1) {
        throw NumericalError("MlpNetwork: need at least input and a single output unit");
    }
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const int fan_in = layer_sizes[l];
        const int fan_out = layer_sizes[l + 1];
        Eigen::MatrixXd w(fan_out, fan_in);
        const double scale = std::sqrt(2.0 / double(fan_in));
        for (int r = 0; r < fan_out; ++r) {
            for (int c = 0; c < fan_in; ++c) w(r, c) = scale * rng.normal();
        }
        weights_.push_back(std::move(w));
        biases_.emplace_back(Eigen::VectorXd::Zero(fan_out));
    }
}

Eigen::VectorXd MlpNetwork::predict_proba(const Eigen::MatrixXd& X) const {
    Eigen::MatrixXd a = X.transpose(); // columns are samples
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        Eigen::MatrixXd z = (weights_[l] * a).colwise() + biases_[l];
        if (l + 1 < weights_.size()) {
            a = z.cwiseMax(0.0);
        } else {
            a = z;
        }
    }
    Eigen::VectorXd probs(X.rows());
    for (int i = 0; i < probs.size(); ++i) probs(i) = sigmoid(a(0, i));
    return probs;
}

double MlpNetwork::loss_and_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                                     double l2_penalty, Eigen::VectorXd& gradient) const {
    const int n = int(X.rows());
    const std::size_t layers = weights_.size();

    std::vector<Eigen::MatrixXd> activations(layers + 1);
    activations[0] = X.transpose();
    std::vector<Eigen::MatrixXd> pre(layers);
    for (std::size_t l = 0; l < layers; ++l) {
        pre[l] = (weights_[l] * activations[l]).colwise() + biases_[l];
        activations[l + 1] = (l + 1 < layers) ? pre[l].cwiseMax(0.0) : pre[l];
    }

    double loss = 0.0;
    Eigen::MatrixXd delta(1, n); // dL/dz at the output
    for (int i = 0; i < n; ++i) {
        const double z = activations[layers](0, i);
        const double yi = double(y(i));
        // BCE in terms of the logit: log(1+e^z) - y*z, overflow-safe.
        loss += (z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z))) - yi * z;
        delta(0, i) = (sigmoid(z) - yi) / double(n);
    }
    loss /= double(n);
    for (const auto& w : weights_) loss += 0.5 * l2_penalty * w.squaredNorm();

    gradient.resize(parameter_count());
    Eigen::MatrixXd back = delta;
    int offset = gradient.size();
    for (std::size_t l = layers; l-- > 0;) {
        const Eigen::MatrixXd grad_w = back * activations[l].transpose() + l2_penalty * weights_[l];
        const Eigen::VectorXd grad_b = back.rowwise().sum();
        offset -= int(grad_b.size());
        gradient.segment(offset, grad_b.size()) = grad_b;
        offset -= int(grad_w.size());
        gradient.segment(offset, grad_w.size()) =
            Eigen::Map<const Eigen::VectorXd>(grad_w.data(), grad_w.size());
        if (l > 0) {
            back = (weights_[l].transpose() * back).cwiseProduct(
                (pre[l - 1].array() > 0.0).cast<double>().matrix());
        }
    }
    return loss;
}

Eigen::VectorXd MlpNetwork::packed_parameters() const {
    Eigen::VectorXd out(parameter_count());
    int offset = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        out.segment(offset, weights_[l].size()) =
            Eigen::Map<const Eigen::VectorXd>(weights_[l].data(), weights_[l].size());
        offset += int(weights_[l].size());
        out.segment(offset, biases_[l].size()) = biases_[l];
        offset += int(biases_[l].size());
    }
    return out;
}

void MlpNetwork::set_packed_parameters(const Eigen::VectorXd& params) {
    int offset = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        Eigen::Map<Eigen::VectorXd>(weights_[l].data(), weights_[l].size()) =
            params.segment(offset, weights_[l].size());
        offset += int(weights_[l].size());
        biases_[l] = params.segment(offset, biases_[l].size());
        offset += int(biases_[l].size());
    }
}

int MlpNetwork::parameter_count() const {
    int n = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        n += int(weights_[l].size()) + int(biases_[l].size());
    }
    return n;
}

void MlpNetwork::set_layers(std::vector<Eigen::MatrixXd> weights,
                            std::vector<Eigen::VectorXd> biases) {
    weights_ = std::move(weights);
    biases_ = std::move(biases);
}

void MlpNetwork::train_adam(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, double l2_penalty,
                            double learning_rate, int epochs, int batch_size, Rng& rng) {
    const int n = int(X.rows());
    Eigen::VectorXd params = packed_parameters();
    Eigen::VectorXd m = Eigen::VectorXd::Zero(params.size());
    Eigen::VectorXd v = Eigen::VectorXd::Zero(params.size());
    const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    long step = 0;

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Eigen::VectorXd grad;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(order);
        for (int start = 0; start < n; start += batch_size) {
            const int count = std::min(batch_size, n - start);
            Eigen::MatrixXd xb(count, X.cols());
            Eigen::VectorXi yb(count);
            for (int i = 0; i < count; ++i) {
                xb.row(i) = X.row(order[std::size_t(start + i)]);
                yb(i) = y(order[std::size_t(start + i)]);
            }
            const double loss = loss_and_gradient(xb, yb, l2_penalty, grad);
            if (!std::isfinite(loss)) {
                std::ostringstream msg;
                msg << "mlp training diverged: non-finite loss at epoch " << epoch
                    << ", batch offset " << start;
                throw NumericalError(msg.str());
            }
            ++step;
            m = beta1 * m + (1.0 - beta1) * grad;
            v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
            const double correct1 = 1.0 - std::pow(beta1, double(step));
            const double correct2 = 1.0 - std::pow(beta2, double(step));
            params -= learning_rate *
                      (m / correct1).cwiseQuotient(((v / correct2).cwiseSqrt().array() + eps).matrix());
            set_packed_parameters(params);
        }
    }
}

namespace detail {

std::unique_ptr<TrainedClassifier> train_mlp(const ClassifierSpec& spec, const Eigen::MatrixXd& X,
                                             const std::vector<std::string>& columns,
                                             const Eigen::VectorXi& y) {
    Rng rng(derive_seed(spec.seed, "mlp"));
    std::vector<int> sizes;
    sizes.push_back(int(X.cols()));
    for (int l = 0; l < spec.mlp.hidden_layers; ++l) sizes.push_back(spec.mlp.hidden_units);
    sizes.push_back(1);
    MlpNetwork net(sizes, rng);
    net.train_adam(X, y, spec.mlp.l2_penalty, spec.mlp.learning_rate, spec.mlp.epochs,
                   spec.mlp.batch_size, rng);
    return std::make_unique<MlpClassifier>(columns, spec.seed, std::move(net));
}

} // namespace detail

} // namespace beircast
