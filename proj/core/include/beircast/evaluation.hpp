#pragma once

#include "beircast/classifiers.hpp"
#include "beircast/date.hpp"
#include "beircast/logistic.hpp"
#include "beircast/stats.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace beircast {

/// Expanding-window fold plan: the sample is cut into k+1 contiguous blocks
/// (remainder spread over the earliest blocks); split i trains on blocks
/// 1..i and tests on block i+1.
struct FoldPlan {
    struct Split {
        int train_begin = 0;
        int train_end = 0; // == test_begin
        int test_begin = 0;
        int test_end = 0;
    };
    std::vector<Split> splits;
    int sample_size = 0;
};

FoldPlan walk_forward_splits(int n, int k = 5);

double delta_f1(double model_f1, double benchmark_f1);

/// Date-aligned inputs for one country: unstandardized 5-day differences and
/// binary labels on the same date index. Scalers, the market-only baseline
/// and the residual PLS are all refit inside each fold on train data only.
struct ExperimentInputs {
    std::vector<Date> dates;
    Eigen::MatrixXd market;
    std::vector<std::string> market_names;
    Eigen::MatrixXd themes;
    std::vector<std::string> theme_names;
    std::vector<int> labels;
};

struct ExperimentOptions {
    int folds = 5;
    int pls_components = 5;
    LogisticOptions baseline;
    // Fits the scaler on the full sample instead of the fold's train window.
    // Exists only so tests can prove the harness detects leakage; never set
    // in pipeline code.
    bool leak_full_sample_scaler = false;
};

struct FoldMetrics {
    int fold = 0;
    stats::Prf model;
    stats::Prf benchmark;
};

struct CvReport {
    std::vector<FoldMetrics> folds; // usable folds only
    double model_precision = 0.0, model_recall = 0.0, model_f1 = 0.0;
    double bench_precision = 0.0, bench_recall = 0.0, bench_f1 = 0.0;
    double delta_f1 = 0.0; // model_f1 - bench_f1, exactly
    stats::TestResult mcnemar; // pooled out-of-fold predictions
    std::vector<int> pooled_truth;
    std::vector<int> pooled_model_preds;
    std::vector<int> pooled_bench_preds;
    std::vector<std::string> warnings;
};

// Runs the narrative-augmented model and its market-only benchmark over the
// same fold plan. Folds whose training labels are single-class are skipped
// with a warning; fewer than 3 usable folds is an error.
CvReport run_experiment(const ExperimentInputs& inputs, const ClassifierSpec& spec,
                        const ExperimentOptions& options = {});

} // namespace beircast
