#pragma once

#include "beircast/evaluation.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace beircast {

/// Country-by-model score table (the layout of the result tables).
struct ScoreTable {
    std::vector<std::string> countries;    // row labels
    std::vector<std::string> model_kinds;  // column labels
    Eigen::MatrixXd values;

    double at(const std::string& country, const std::string& kind) const;
};

ScoreTable read_score_table(const std::filesystem::path& path);
void write_score_table(const std::filesystem::path& path, const ScoreTable& table);

// Elementwise model - benchmark. Row/column labels must match.
ScoreTable delta_table(const ScoreTable& model_f1, const ScoreTable& benchmark_f1);

/// All per-(country, kind) walk-forward reports for one run.
struct RunResults {
    std::vector<std::string> countries;
    std::vector<std::string> model_kinds;
    std::map<std::pair<std::string, std::string>, CvReport> reports;
};

struct ReportArtifacts {
    ScoreTable delta_f1;
    ScoreTable model_f1, model_recall, model_precision;
    ScoreTable bench_f1, bench_recall, bench_precision;
    ScoreTable mcnemar_statistic;
    ScoreTable mcnemar_p;
};

ReportArtifacts assemble_reports(const RunResults& results);
void write_report_artifacts(const std::filesystem::path& out_dir, const ReportArtifacts& artifacts);

} // namespace beircast
