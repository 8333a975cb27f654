#include "beircast/evaluation.hpp"

#include "beircast/error.hpp"
#include "beircast/pls.hpp"
#include "beircast/rng.hpp"

#include <algorithm>
#include <cmath>

namespace beircast {

FoldPlan walk_forward_splits(int n, int k) {
    if (k < 1) throw NumericalError("walk_forward_splits: need k >= 1");
    if (n < k + 1) throw NumericalError("walk_forward_splits: need n >= k + 1");
    const int blocks = k + 1;
    const int base = n / blocks;
    const int remainder = n % blocks;

    std::vector<int> boundaries(std::size_t(blocks) + 1, 0);
    for (int b = 0; b < blocks; ++b) {
        boundaries[std::size_t(b) + 1] = boundaries[std::size_t(b)] + base + (b < remainder ? 1 : 0);
    }

    FoldPlan plan;
    plan.sample_size = n;
    for (int i = 1; i <= k; ++i) {
        FoldPlan::Split split;
        split.train_begin = 0;
        split.train_end = boundaries[std::size_t(i)];
        split.test_begin = boundaries[std::size_t(i)];
        split.test_end = boundaries[std::size_t(i) + 1];
        plan.splits.push_back(split);
    }
    return plan;
}

double delta_f1(double model_f1, double benchmark_f1) { return model_f1 - benchmark_f1; }

namespace {

struct StandardizedFold {
    Eigen::MatrixXd train;
    Eigen::MatrixXd test;
    std::vector<std::string> names;
};

// Standardizes the kept columns on the fit window; drops columns whose fit
// window has zero variance (a theme never observed early in the sample).
StandardizedFold standardize_fold(const Eigen::MatrixXd& data,
                                  const std::vector<std::string>& names, int fit_begin,
                                  int fit_end, int train_begin, int train_end, int test_begin,
                                  int test_end, std::vector<std::string>* dropped) {
    const int p = int(data.cols());
    std::vector<int> keep;
    Eigen::VectorXd mean(p), sd(p);
    for (int c = 0; c < p; ++c) {
        const auto window = data.col(c).segment(fit_begin, fit_end - fit_begin);
        const double mu = window.mean();
        const double var = (window.array() - mu).square().sum() / double(window.size());
        if (var <= 0.0) {
            if (dropped) dropped->push_back(names[std::size_t(c)]);
            continue;
        }
        mean(c) = mu;
        sd(c) = std::sqrt(var);
        keep.push_back(c);
    }
    StandardizedFold out;
    out.train.resize(train_end - train_begin, int(keep.size()));
    out.test.resize(test_end - test_begin, int(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
        const int c = keep[j];
        out.train.col(int(j)) =
            (data.col(c).segment(train_begin, train_end - train_begin).array() - mean(c)) / sd(c);
        out.test.col(int(j)) =
            (data.col(c).segment(test_begin, test_end - test_begin).array() - mean(c)) / sd(c);
        out.names.push_back(names[std::size_t(keep[j])]);
    }
    return out;
}

struct ArmData {
    Eigen::MatrixXd train;
    Eigen::MatrixXd test;
    std::vector<std::string> names;
};

ArmData concat(const StandardizedFold& market, const Eigen::MatrixXd& scores_train,
               const Eigen::MatrixXd& scores_test, const std::vector<std::string>& score_names) {
    ArmData out;
    out.train.resize(market.train.rows(), market.train.cols() + scores_train.cols());
    out.train << market.train, scores_train;
    out.test.resize(market.test.rows(), market.test.cols() + scores_test.cols());
    out.test << market.test, scores_test;
    out.names = market.names;
    out.names.insert(out.names.end(), score_names.begin(), score_names.end());
    return out;
}

} // namespace

CvReport run_experiment(const ExperimentInputs& inputs, const ClassifierSpec& spec,
                        const ExperimentOptions& options) {
    const int n = int(inputs.dates.size());
    if (inputs.market.rows() != n || inputs.themes.rows() != n || int(inputs.labels.size()) != n) {
        throw NumericalError("run_experiment: inputs are not aligned");
    }
    const FoldPlan plan = walk_forward_splits(n, options.folds);

    CvReport report;
    for (const auto& split : plan.splits) {
        const int fold_index = int(&split - plan.splits.data()) + 1;
        const auto train_labels_begin = inputs.labels.begin() + split.train_begin;
        const auto train_labels_end = inputs.labels.begin() + split.train_end;
        const int train_positives = int(std::count(train_labels_begin, train_labels_end, 1));
        const int train_size = split.train_end - split.train_begin;
        if (train_positives == 0 || train_positives == train_size) {
            report.warnings.push_back("fold " + std::to_string(fold_index) +
                                      " skipped: single-class training labels");
            continue;
        }

        const int fit_begin = options.leak_full_sample_scaler ? 0 : split.train_begin;
        const int fit_end = options.leak_full_sample_scaler ? n : split.train_end;

        std::vector<std::string> dropped;
        const StandardizedFold market = standardize_fold(
            inputs.market, inputs.market_names, fit_begin, fit_end, split.train_begin,
            split.train_end, split.test_begin, split.test_end, &dropped);
        const StandardizedFold themes = standardize_fold(
            inputs.themes, inputs.theme_names, fit_begin, fit_end, split.train_begin,
            split.train_end, split.test_begin, split.test_end, &dropped);
        if (!dropped.empty()) {
            std::string msg = "fold " + std::to_string(fold_index) + " dropped zero-variance:";
            for (const auto& name : dropped) msg += ' ' + name;
            report.warnings.push_back(std::move(msg));
        }
        if (market.train.cols() == 0) {
            throw NumericalError("run_experiment: no usable market columns in fold " +
                                 std::to_string(fold_index));
        }

        Eigen::VectorXi y_train(train_size);
        for (int i = 0; i < train_size; ++i) y_train(i) = inputs.labels[std::size_t(split.train_begin + i)];

        // Narrative arm: baseline residuals -> SIMPLS scores -> extra columns.
        Eigen::MatrixXd scores_train(train_size, 0), scores_test(split.test_end - split.test_begin, 0);
        std::vector<std::string> score_names;
        if (themes.train.cols() > 0) {
            const BaselineFit baseline = fit_baseline(market.train, y_train, options.baseline);
            const int a = std::min(options.pls_components, int(themes.train.cols()));
            const PlsModel pls = fit_pls(themes.train, themes.names, baseline.residuals, a);
            Eigen::MatrixXd raw_train = pls_transform(pls, themes.train, themes.names);
            Eigen::MatrixXd raw_test = pls_transform(pls, themes.test, themes.names);
            // Scores are unit-norm over train rows; rescale to unit variance so
            // penalized classifiers see them on the market features' scale.
            for (int c = 0; c < raw_train.cols(); ++c) {
                const double mu = raw_train.col(c).mean();
                const double var =
                    (raw_train.col(c).array() - mu).square().sum() / double(train_size);
                if (var <= 0.0) continue;
                const double sd = std::sqrt(var);
                scores_train.conservativeResize(Eigen::NoChange, scores_train.cols() + 1);
                scores_test.conservativeResize(Eigen::NoChange, scores_test.cols() + 1);
                scores_train.col(scores_train.cols() - 1) = (raw_train.col(c).array() - mu) / sd;
                scores_test.col(scores_test.cols() - 1) = (raw_test.col(c).array() - mu) / sd;
                score_names.push_back("PLS_" + std::to_string(c + 1));
            }
        }

        const ArmData model_arm = concat(market, scores_train, scores_test, score_names);

        const std::uint64_t fold_seed = derive_seed(spec.seed, "fold-" + std::to_string(fold_index));
        ClassifierSpec fold_spec = spec;
        fold_spec.seed = fold_seed;

        const auto model = train_classifier(fold_spec, model_arm.train, model_arm.names, y_train);
        const auto bench = train_classifier(fold_spec, market.train, market.names, y_train);

        const std::vector<int> model_preds = model->predict(model_arm.test, model_arm.names);
        const std::vector<int> bench_preds = bench->predict(market.test, market.names);

        std::vector<int> truth(std::size_t(split.test_end - split.test_begin));
        for (std::size_t i = 0; i < truth.size(); ++i) {
            truth[i] = inputs.labels[std::size_t(split.test_begin) + i];
        }

        FoldMetrics metrics;
        metrics.fold = fold_index;
        metrics.model = stats::precision_recall_f1(model_preds, truth);
        metrics.benchmark = stats::precision_recall_f1(bench_preds, truth);
        report.folds.push_back(metrics);
        report.pooled_truth.insert(report.pooled_truth.end(), truth.begin(), truth.end());
        report.pooled_model_preds.insert(report.pooled_model_preds.end(), model_preds.begin(),
                                         model_preds.end());
        report.pooled_bench_preds.insert(report.pooled_bench_preds.end(), bench_preds.begin(),
                                         bench_preds.end());
    }

    if (int(report.folds.size()) < 3) {
        throw NumericalError("run_experiment: fewer than 3 usable folds (" +
                             std::to_string(report.folds.size()) + ")");
    }

    // Macro means over folds; F1 is averaged per fold, not recombined from
    // averaged precision/recall.
    for (const auto& fold : report.folds) {
        report.model_precision += fold.model.precision;
        report.model_recall += fold.model.recall;
        report.model_f1 += fold.model.f1;
        report.bench_precision += fold.benchmark.precision;
        report.bench_recall += fold.benchmark.recall;
        report.bench_f1 += fold.benchmark.f1;
    }
    const double count = double(report.folds.size());
    report.model_precision /= count;
    report.model_recall /= count;
    report.model_f1 /= count;
    report.bench_precision /= count;
    report.bench_recall /= count;
    report.bench_f1 /= count;
    report.delta_f1 = delta_f1(report.model_f1, report.bench_f1);
    report.mcnemar =
        stats::mcnemar(report.pooled_model_preds, report.pooled_bench_preds, report.pooled_truth);
    return report;
}

} // namespace beircast
