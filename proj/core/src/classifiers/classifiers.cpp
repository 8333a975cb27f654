#include "beircast/classifiers.hpp"

#include "beircast/error.hpp"
#include "beircast/io.hpp"
#include "impl.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>

namespace beircast {

using detail::DecisionTree;
using json = nlohmann::json;

std::string_view classifier_kind_name(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::LG: return "LG";
        case ClassifierKind::SV: return "SV";
        case ClassifierKind::RF: return "RF";
        case ClassifierKind::XG: return "XG";
        case ClassifierKind::MLP: return "MLP";
    }
    return "unknown";
}

std::optional<ClassifierKind> classifier_kind_from_name(std::string_view name) {
    if (name == "LG") return ClassifierKind::LG;
    if (name == "SV") return ClassifierKind::SV;
    if (name == "RF") return ClassifierKind::RF;
    if (name == "XG") return ClassifierKind::XG;
    if (name == "MLP") return ClassifierKind::MLP;
    return std::nullopt;
}

ClassifierSpec ClassifierSpec::make(ClassifierKind kind, std::uint64_t seed) {
    ClassifierSpec spec;
    spec.kind = kind;
    spec.seed = seed;
    return spec;
}

void ClassifierSpec::validate() const {
    switch (kind) {
        case ClassifierKind::LG:
            if (logistic.l2_penalty < 0.0) throw UsageError("LG: penalty must be >= 0");
            if (logistic.max_iterations < 1) throw UsageError("LG: max_iterations must be >= 1");
            break;
        case ClassifierKind::SV:
            if (svm.cost <= 0.0) throw UsageError("SV: cost must be positive");
            if (svm.gamma && *svm.gamma <= 0.0) throw UsageError("SV: gamma must be positive");
            break;
        case ClassifierKind::RF:
            if (forest.n_trees < 1) throw UsageError("RF: tree count must be >= 1");
            if (forest.min_samples_split < 2) throw UsageError("RF: min_samples_split must be >= 2");
            break;
        case ClassifierKind::XG:
            if (boost.rounds < 1) throw UsageError("XG: rounds must be >= 1");
            if (boost.max_depth < 1) throw UsageError("XG: max_depth must be >= 1");
            if (boost.learning_rate <= 0.0) throw UsageError("XG: learning rate must be positive");
            if (boost.l2_leaf < 0.0) throw UsageError("XG: l2_leaf must be >= 0");
            break;
        case ClassifierKind::MLP:
            if (mlp.hidden_layers < 1 || mlp.hidden_units < 1) {
                throw UsageError("MLP: hidden layout must be >= 1x1");
            }
            if (mlp.l2_penalty < 0.0) throw UsageError("MLP: penalty must be >= 0");
            if (mlp.epochs < 1 || mlp.batch_size < 1) throw UsageError("MLP: bad epochs/batch");
            break;
    }
}

Eigen::VectorXd TrainedClassifier::predict_proba(const Eigen::MatrixXd& X,
                                                 const std::vector<std::string>& cols) const {
    if (cols != columns_) {
        std::ostringstream msg;
        msg << "predict: column mismatch;";
        for (const auto& c : columns_) {
            if (std::find(cols.begin(), cols.end(), c) == cols.end()) msg << " missing:" << c;
        }
        for (const auto& c : cols) {
            if (std::find(columns_.begin(), columns_.end(), c) == columns_.end()) {
                msg << " extra:" << c;
            }
        }
        throw NumericalError(msg.str());
    }
    if (X.cols() != int(columns_.size())) throw NumericalError("predict: column count mismatch");
    if (X.rows() == 0) return Eigen::VectorXd();
    return do_predict_proba(X);
}

std::vector<int> TrainedClassifier::predict(const Eigen::MatrixXd& X,
                                            const std::vector<std::string>& cols) const {
    const Eigen::VectorXd probs = predict_proba(X, cols);
    std::vector<int> labels(std::size_t(probs.size()));
    for (int i = 0; i < probs.size(); ++i) labels[std::size_t(i)] = probs(i) >= 0.5 ? 1 : 0;
    return labels;
}

FeatureImportance TrainedClassifier::feature_importance() const {
    throw NumericalError(std::string("feature importance is not supported for kind ") +
                         std::string(classifier_kind_name(kind_)));
}

namespace detail {

FeatureImportance LgClassifier::feature_importance() const {
    FeatureImportance out;
    out.names = columns();
    out.importance = model_.weights().cwiseAbs();
    out.wald_p = wald_p_;
    return out;
}

} // namespace detail

std::unique_ptr<TrainedClassifier> train_classifier(const ClassifierSpec& spec,
                                                    const Eigen::MatrixXd& X,
                                                    const std::vector<std::string>& columns,
                                                    const Eigen::VectorXi& y) {
    spec.validate();
    if (X.rows() != y.size()) throw NumericalError("train: X and y row counts differ");
    if (X.cols() != int(columns.size())) throw NumericalError("train: column name mismatch");
    if (X.rows() < 2) throw NumericalError("train: need at least 2 samples");
    const int positives = y.sum();
    if (positives == 0 || positives == int(y.size())) {
        throw NumericalError("train: y must contain both classes");
    }

    switch (spec.kind) {
        case ClassifierKind::LG: {
            LogisticOptions opt;
            opt.l2_penalty = spec.logistic.l2_penalty;
            opt.tolerance = spec.logistic.tolerance;
            opt.max_iterations = spec.logistic.max_iterations;
            LogisticModel model = LogisticModel::fit(X, y, opt);
            Eigen::VectorXd wald = model.wald_p_values(X);
            return std::make_unique<detail::LgClassifier>(columns, spec.seed, std::move(model),
                                                          std::move(wald));
        }
        case ClassifierKind::SV: return detail::train_svm(spec, X, columns, y);
        case ClassifierKind::RF: return detail::train_forest(spec, X, columns, y);
        case ClassifierKind::XG: return detail::train_boost(spec, X, columns, y);
        case ClassifierKind::MLP: return detail::train_mlp(spec, X, columns, y);
    }
    throw UsageError("train: unknown classifier kind");
}

namespace {

json vec_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Eigen::VectorXd vec_from_json(const json& j) {
    Eigen::VectorXd v(int(j.size()));
    for (int i = 0; i < v.size(); ++i) v(i) = j.at(std::size_t(i)).get<double>();
    return v;
}

json mat_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd mat_from_json(const json& j, int cols_hint = 0) {
    const int rows = int(j.size());
    const int cols = rows > 0 ? int(j.at(0).size()) : cols_hint;
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) m(r, c) = j.at(std::size_t(r)).at(std::size_t(c)).get<double>();
    }
    return m;
}

json trees_to_json(const std::vector<DecisionTree>& trees) {
    json out = json::array();
    for (const auto& tree : trees) {
        json nodes = json::array();
        for (const auto& node : tree.nodes) {
            nodes.push_back({node.feature, node.threshold, node.left, node.right, node.value});
        }
        out.push_back(std::move(nodes));
    }
    return out;
}

std::vector<DecisionTree> trees_from_json(const json& j) {
    std::vector<DecisionTree> trees;
    for (const auto& tj : j) {
        DecisionTree tree;
        for (const auto& nj : tj) {
            detail::TreeNode node;
            node.feature = nj.at(0).get<int>();
            node.threshold = nj.at(1).get<double>();
            node.left = nj.at(2).get<int>();
            node.right = nj.at(3).get<int>();
            node.value = nj.at(4).get<double>();
            tree.nodes.push_back(node);
        }
        trees.push_back(std::move(tree));
    }
    return trees;
}

} // namespace

void save_classifier_json(const std::filesystem::path& path, const TrainedClassifier& model) {
    json j;
    j["format"] = "beircast-classifier-v1";
    j["kind"] = std::string(classifier_kind_name(model.kind()));
    j["seed"] = model.seed();
    j["columns"] = model.columns();

    switch (model.kind()) {
        case ClassifierKind::LG: {
            const auto& lg = dynamic_cast<const detail::LgClassifier&>(model);
            j["weights"] = vec_to_json(lg.model().weights());
            j["intercept"] = lg.model().intercept();
            j["wald_p"] = vec_to_json(lg.wald_p());
            break;
        }
        case ClassifierKind::SV: {
            const auto& sv = dynamic_cast<const detail::SvmClassifier&>(model);
            j["support_vectors"] = mat_to_json(sv.support_vectors());
            j["dual_coef"] = vec_to_json(sv.dual_coef());
            j["bias"] = sv.bias();
            j["gamma"] = sv.gamma();
            break;
        }
        case ClassifierKind::RF: {
            const auto& rf = dynamic_cast<const detail::ForestClassifier&>(model);
            j["trees"] = trees_to_json(rf.trees());
            j["gain_share"] = vec_to_json(rf.gain_share());
            break;
        }
        case ClassifierKind::XG: {
            const auto& xg = dynamic_cast<const detail::BoostClassifier&>(model);
            j["trees"] = trees_to_json(xg.trees());
            j["gain_share"] = vec_to_json(xg.gain_share());
            j["base_margin"] = xg.base_margin();
            break;
        }
        case ClassifierKind::MLP: {
            const auto& mlp = dynamic_cast<const detail::MlpClassifier&>(model);
            json weights = json::array();
            json biases = json::array();
            for (const auto& w : mlp.network().weights()) weights.push_back(mat_to_json(w));
            for (const auto& b : mlp.network().biases()) biases.push_back(vec_to_json(b));
            j["layer_weights"] = std::move(weights);
            j["layer_biases"] = std::move(biases);
            break;
        }
    }
    atomic_write_file(path, j.dump() + "\n");
}

std::unique_ptr<TrainedClassifier> load_classifier_json(const std::filesystem::path& path) {
    const json j = json::parse(read_file(path), nullptr, false);
    if (j.is_discarded() || j.value("format", "") != "beircast-classifier-v1") {
        throw DataError("not a classifier file: " + path.string());
    }
    const auto kind = classifier_kind_from_name(j.at("kind").get<std::string>());
    if (!kind) throw DataError("unknown classifier kind in " + path.string());
    auto columns = j.at("columns").get<std::vector<std::string>>();
    const auto seed = j.at("seed").get<std::uint64_t>();

    switch (*kind) {
        case ClassifierKind::LG: {
            LogisticModel model;
            model = LogisticModel::restore(vec_from_json(j.at("weights")),
                                           j.at("intercept").get<double>());
            return std::make_unique<detail::LgClassifier>(std::move(columns), seed,
                                                          std::move(model),
                                                          vec_from_json(j.at("wald_p")));
        }
        case ClassifierKind::SV:
            return std::make_unique<detail::SvmClassifier>(
                std::move(columns), seed, mat_from_json(j.at("support_vectors")),
                vec_from_json(j.at("dual_coef")), j.at("bias").get<double>(),
                j.at("gamma").get<double>());
        case ClassifierKind::RF:
            return std::make_unique<detail::ForestClassifier>(std::move(columns), seed,
                                                              trees_from_json(j.at("trees")),
                                                              vec_from_json(j.at("gain_share")));
        case ClassifierKind::XG:
            return std::make_unique<detail::BoostClassifier>(
                std::move(columns), seed, trees_from_json(j.at("trees")),
                vec_from_json(j.at("gain_share")), j.at("base_margin").get<double>());
        case ClassifierKind::MLP: {
            std::vector<Eigen::MatrixXd> weights;
            std::vector<Eigen::VectorXd> biases;
            for (const auto& wj : j.at("layer_weights")) weights.push_back(mat_from_json(wj));
            for (const auto& bj : j.at("layer_biases")) biases.push_back(vec_from_json(bj));
            MlpNetwork net;
            net.set_layers(std::move(weights), std::move(biases));
            return std::make_unique<detail::MlpClassifier>(std::move(columns), seed,
                                                           std::move(net));
        }
    }
    throw DataError("unreachable classifier kind");
}

} // namespace beircast
