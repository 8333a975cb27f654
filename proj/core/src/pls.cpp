#include "beircast/pls.hpp"

#include "beircast/csv.hpp"
#include "beircast/error.hpp"
#include "beircast/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace beircast {

using json = nlohmann::json;

PlsModel fit_pls(const Eigen::MatrixXd& X, const std::vector<std::string>& column_names,
                 const Eigen::VectorXd& target, int n_components) {
    const int n = int(X.rows());
    const int p = int(X.cols());
    if (int(column_names.size()) != p) throw NumericalError("fit_pls: column name mismatch");
    if (target.size() != n) throw NumericalError("fit_pls: target length mismatch");
    if (n_components < 1) throw NumericalError("fit_pls: need at least one component");
    if (n <= n_components) throw NumericalError("fit_pls: need n > n_components");

    PlsModel model;
    model.column_names = column_names;
    model.column_means = X.colwise().mean();
    model.target_mean = target.mean();

    const Eigen::MatrixXd xc = X.rowwise() - model.column_means.transpose();
    const Eigen::VectorXd yc = target.array() - model.target_mean;
    const double total_ss = yc.squaredNorm();

    const int a_max = n_components;
    Eigen::MatrixXd weights(p, a_max);
    Eigen::MatrixXd x_loadings(p, a_max);
    Eigen::VectorXd y_loadings(a_max);
    Eigen::MatrixXd scores(n, a_max);
    Eigen::MatrixXd loading_basis(p, a_max); // orthonormal, spans extracted loadings
    Eigen::VectorXd explained(a_max);

    // de Jong's SIMPLS: deflate the cross-product vector, never the data.
    Eigen::VectorXd s = xc.transpose() * yc;
    int extracted = 0;
    const double tol = 1e-12 * std::max(1.0, s.norm());
    for (int a = 0; a < a_max; ++a) {
        if (s.norm() <= tol) break; // zero cross-covariance: stop early
        Eigen::VectorXd r = s;      // univariate target: weight is s itself
        Eigen::VectorXd t = xc * r;
        const double t_norm = t.norm();
        if (t_norm <= 1e-14) break;
        t /= t_norm;
        r /= t_norm;
        const Eigen::VectorXd p_load = xc.transpose() * t;
        const double q_load = yc.dot(t);

        Eigen::VectorXd v = p_load;
        for (int j = 0; j < extracted; ++j) v -= loading_basis.col(j).dot(p_load) * loading_basis.col(j);
        const double v_norm = v.norm();
        if (v_norm <= 1e-14) break;
        v /= v_norm;
        s -= v * v.dot(s);

        weights.col(extracted) = r;
        x_loadings.col(extracted) = p_load;
        y_loadings(extracted) = q_load;
        scores.col(extracted) = t;
        loading_basis.col(extracted) = v;
        explained(extracted) = total_ss > 0.0 ? q_load * q_load / total_ss : 0.0;
        ++extracted;
    }
    if (extracted == 0) throw NumericalError("fit_pls: no component could be extracted");

    model.weights = weights.leftCols(extracted);
    model.x_loadings = x_loadings.leftCols(extracted);
    model.y_loadings = y_loadings.head(extracted);
    model.training_scores = scores.leftCols(extracted);
    model.explained = explained.head(extracted);
    return model;
}

Eigen::MatrixXd pls_transform(const PlsModel& model, const Eigen::MatrixXd& X,
                              const std::vector<std::string>& column_names) {
    if (column_names != model.column_names) {
        std::ostringstream msg;
        msg << "pls_transform: column mismatch;";
        for (const auto& c : model.column_names) {
            if (std::find(column_names.begin(), column_names.end(), c) == column_names.end()) {
                msg << " missing:" << c;
            }
        }
        for (const auto& c : column_names) {
            if (std::find(model.column_names.begin(), model.column_names.end(), c) ==
                model.column_names.end()) {
                msg << " extra:" << c;
            }
        }
        throw NumericalError(msg.str());
    }
    return (X.rowwise() - model.column_means.transpose()) * model.weights;
}

ExplainedVarianceCheck explained_variance_check(const PlsModel& model, double threshold) {
    ExplainedVarianceCheck out;
    out.per_component.assign(model.explained.data(),
                             model.explained.data() + model.explained.size());
    out.cumulative = model.explained.sum();
    out.passes = out.cumulative > threshold;
    return out;
}

BaselineFit fit_baseline(const Eigen::MatrixXd& market_features, const Eigen::VectorXi& labels,
                         const LogisticOptions& options) {
    if (market_features.rows() != labels.size()) {
        throw NumericalError("fit_baseline: feature/label row mismatch");
    }
    BaselineFit fit{LogisticModel::fit(market_features, labels, options), {}};
    const Eigen::VectorXd probs = fit.model.predict_proba(market_features);
    fit.residuals = labels.cast<double>() - probs;
    return fit;
}

CategoryLoadingProfile category_profile(const PlsModel& model, const ThemeTaxonomy& tax,
                                        int component) {
    if (component < 0 || component >= model.components()) {
        throw NumericalError("category_profile: component out of range");
    }
    CategoryLoadingProfile profile;
    profile.component = component;
    double total = 0.0;
    for (int j = 0; j < int(model.column_names.size()); ++j) {
        const auto cat = tax.reporting_category(model.column_names[std::size_t(j)]);
        if (!cat) continue;
        const double mass = std::abs(model.x_loadings(j, component));
        profile.shares[std::string(category_name(*cat))] += mass;
        total += mass;
    }
    if (total > 0.0) {
        for (auto& [name, share] : profile.shares) share /= total;
    }
    return profile;
}

double max_abs_correlation(const Eigen::MatrixXd& scores, const Eigen::MatrixXd& market_features) {
    double max_corr = 0.0;
    for (int a = 0; a < scores.cols(); ++a) {
        const Eigen::VectorXd s = scores.col(a).array() - scores.col(a).mean();
        const double s_norm = s.norm();
        if (s_norm <= 0.0) continue;
        for (int j = 0; j < market_features.cols(); ++j) {
            const Eigen::VectorXd m =
                market_features.col(j).array() - market_features.col(j).mean();
            const double m_norm = m.norm();
            if (m_norm <= 0.0) continue;
            max_corr = std::max(max_corr, std::abs(s.dot(m)) / (s_norm * m_norm));
        }
    }
    return max_corr;
}

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const int rows = int(j.size());
    const int cols = rows > 0 ? int(j.at(0).size()) : 0;
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) m(r, c) = j.at(std::size_t(r)).at(std::size_t(c)).get<double>();
    }
    return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(int(j.size()));
    for (int i = 0; i < v.size(); ++i) v(i) = j.at(std::size_t(i)).get<double>();
    return v;
}

} // namespace

void write_pls_model_json(const std::filesystem::path& path, const PlsModel& model,
                          const std::string& country, const std::string& taxonomy_fingerprint) {
    json j;
    j["format"] = "beircast-pls-v1";
    j["country"] = country;
    j["taxonomy_fingerprint"] = taxonomy_fingerprint;
    j["column_names"] = model.column_names;
    j["column_means"] = vector_to_json(model.column_means);
    j["weights"] = matrix_to_json(model.weights);
    j["x_loadings"] = matrix_to_json(model.x_loadings);
    j["y_loadings"] = vector_to_json(model.y_loadings);
    j["target_mean"] = model.target_mean;
    j["explained"] = vector_to_json(model.explained);
    atomic_write_file(path, j.dump(2) + "\n");
}

PlsModel read_pls_model_json(const std::filesystem::path& path) {
    const json j = json::parse(read_file(path), nullptr, false);
    if (j.is_discarded() || j.value("format", "") != "beircast-pls-v1") {
        throw DataError("not a PLS model file: " + path.string());
    }
    PlsModel model;
    model.column_names = j.at("column_names").get<std::vector<std::string>>();
    model.column_means = vector_from_json(j.at("column_means"));
    model.weights = matrix_from_json(j.at("weights"));
    model.x_loadings = matrix_from_json(j.at("x_loadings"));
    model.y_loadings = vector_from_json(j.at("y_loadings"));
    model.target_mean = j.at("target_mean").get<double>();
    model.explained = vector_from_json(j.at("explained"));
    return model;
}

void write_category_profiles_csv(const std::filesystem::path& path,
                                 const std::vector<CategoryLoadingProfile>& profiles) {
    std::string body = "component,category,share\n";
    for (const auto& profile : profiles) {
        for (const auto& [cat, share] : profile.shares) {
            body += std::to_string(profile.component + 1);
            body += ',';
            body += csv::escape(cat);
            body += ',';
            body += format_double(share);
            body += '\n';
        }
    }
    atomic_write_file(path, body);
}

} // namespace beircast
