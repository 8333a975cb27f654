#include "beircast/report.hpp"

#include "beircast/csv.hpp"
#include "beircast/error.hpp"
#include "beircast/io.hpp"

#include <algorithm>

namespace beircast {

double ScoreTable::at(const std::string& country, const std::string& kind) const {
    const auto r = std::find(countries.begin(), countries.end(), country);
    const auto c = std::find(model_kinds.begin(), model_kinds.end(), kind);
    if (r == countries.end() || c == model_kinds.end()) {
        throw DataError("score table has no entry (" + country + ", " + kind + ")");
    }
    return values(int(r - countries.begin()), int(c - model_kinds.begin()));
}

ScoreTable read_score_table(const std::filesystem::path& path) {
    const csv::Table table = csv::read_file(path);
    if (table.header.size() < 2 || table.header[0] != "country") {
        throw DataError("score table must have header country,<model kinds>: " + path.string());
    }
    ScoreTable out;
    out.model_kinds.assign(table.header.begin() + 1, table.header.end());
    out.values.resize(int(table.rows.size()), int(out.model_kinds.size()));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != table.header.size()) {
            throw DataError(path.string() + ": row " + std::to_string(r + 2) + " field count");
        }
        out.countries.push_back(row[0]);
        for (std::size_t c = 1; c < row.size(); ++c) {
            out.values(int(r), int(c - 1)) = std::stod(row[c]);
        }
    }
    return out;
}

void write_score_table(const std::filesystem::path& path, const ScoreTable& table) {
    std::string body = "country";
    for (const auto& kind : table.model_kinds) body += "," + csv::escape(kind);
    body += '\n';
    for (std::size_t r = 0; r < table.countries.size(); ++r) {
        body += csv::escape(table.countries[r]);
        for (int c = 0; c < table.values.cols(); ++c) {
            body += ',';
            body += format_double(table.values(int(r), c));
        }
        body += '\n';
    }
    atomic_write_file(path, body);
}

ScoreTable delta_table(const ScoreTable& model_f1, const ScoreTable& benchmark_f1) {
    if (model_f1.countries != benchmark_f1.countries ||
        model_f1.model_kinds != benchmark_f1.model_kinds) {
        throw DataError("delta_table: model and benchmark tables have different labels");
    }
    ScoreTable out = model_f1;
    out.values = model_f1.values - benchmark_f1.values;
    return out;
}

ReportArtifacts assemble_reports(const RunResults& results) {
    const int rows = int(results.countries.size());
    const int cols = int(results.model_kinds.size());
    const auto blank = [&]() {
        ScoreTable t;
        t.countries = results.countries;
        t.model_kinds = results.model_kinds;
        t.values = Eigen::MatrixXd::Zero(rows, cols);
        return t;
    };
    ReportArtifacts art{blank(), blank(), blank(), blank(),
                        blank(), blank(), blank(), blank(), blank()};
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const auto key = std::make_pair(results.countries[std::size_t(r)],
                                            results.model_kinds[std::size_t(c)]);
            const auto it = results.reports.find(key);
            if (it == results.reports.end()) {
                throw DataError("missing report for (" + key.first + ", " + key.second + ")");
            }
            const CvReport& report = it->second;
            art.model_f1.values(r, c) = report.model_f1;
            art.model_recall.values(r, c) = report.model_recall;
            art.model_precision.values(r, c) = report.model_precision;
            art.bench_f1.values(r, c) = report.bench_f1;
            art.bench_recall.values(r, c) = report.bench_recall;
            art.bench_precision.values(r, c) = report.bench_precision;
            art.mcnemar_statistic.values(r, c) = report.mcnemar.statistic;
            art.mcnemar_p.values(r, c) = report.mcnemar.p_value;
        }
    }
    art.delta_f1 = delta_table(art.model_f1, art.bench_f1);
    return art;
}

void write_report_artifacts(const std::filesystem::path& out_dir,
                            const ReportArtifacts& artifacts) {
    write_score_table(out_dir / "delta_f1.csv", artifacts.delta_f1);
    write_score_table(out_dir / "f1_model.csv", artifacts.model_f1);
    write_score_table(out_dir / "recall_model.csv", artifacts.model_recall);
    write_score_table(out_dir / "precision_model.csv", artifacts.model_precision);
    write_score_table(out_dir / "f1_benchmark.csv", artifacts.bench_f1);
    write_score_table(out_dir / "recall_benchmark.csv", artifacts.bench_recall);
    write_score_table(out_dir / "precision_benchmark.csv", artifacts.bench_precision);
    write_score_table(out_dir / "mcnemar_statistic.csv", artifacts.mcnemar_statistic);
    write_score_table(out_dir / "mcnemar_p.csv", artifacts.mcnemar_p);
}

} // namespace beircast
