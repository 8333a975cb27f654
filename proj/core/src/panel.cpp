#include "beircast/panel.hpp"

#include "beircast/csv.hpp"
#include "beircast/error.hpp"
#include "beircast/io.hpp"
#include "beircast/parallel.hpp"
#include "beircast/stats.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

namespace beircast {

using json = nlohmann::json;

double DailyThemePanel::value_at(Date d, const std::string& theme) const {
    const auto dit = std::lower_bound(dates.begin(), dates.end(), d);
    if (dit == dates.end() || *dit != d) return 0.0;
    const auto tit = std::lower_bound(themes.begin(), themes.end(), theme);
    if (tit == themes.end() || *tit != theme) return 0.0;
    return values(int(dit - dates.begin()), int(tit - themes.begin()));
}

DailyThemePanel aggregate_daily(std::span<const GkgRecord> records, const ThemeTaxonomy& tax,
                                const std::string& country, int jobs) {
    // Pass 1: the (date, theme) universe.
    std::set<Date> date_set;
    std::set<std::string> theme_set;
    for (const auto& rec : records) {
        date_set.insert(rec.date);
        for (const auto& theme : rec.themes) {
            if (tax.is_retained(theme)) theme_set.insert(theme);
        }
    }

    DailyThemePanel panel;
    panel.country = country;
    panel.dates.assign(date_set.begin(), date_set.end());
    panel.themes.assign(theme_set.begin(), theme_set.end());
    const int n_dates = int(panel.dates.size());
    const int n_themes = int(panel.themes.size());
    panel.values = Eigen::MatrixXd::Zero(n_dates, n_themes);
    panel.counts = Eigen::MatrixXi::Zero(n_dates, n_themes);
    if (records.empty()) return panel;

    // Pass 2: parallel reduce over date-partitioned batches. Records within a
    // date land in one partition, so per-row sums need no synchronization.
    std::map<Date, int> date_index;
    for (int i = 0; i < n_dates; ++i) date_index[panel.dates[std::size_t(i)]] = i;

    const int partitions = std::max(1, std::min(jobs, n_dates));
    std::vector<std::vector<const GkgRecord*>> buckets(static_cast<std::size_t>(partitions));
    for (const auto& rec : records) {
        const int row = date_index.at(rec.date);
        buckets[std::size_t(row % partitions)].push_back(&rec);
    }

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(n_dates, n_themes);
    parallel_for(std::size_t(partitions), jobs, [&](std::size_t b) {
        for (const GkgRecord* rec : buckets[b]) {
            const int row = date_index.at(rec->date);
            for (const auto& theme : rec->themes) {
                const auto tit = std::lower_bound(panel.themes.begin(), panel.themes.end(), theme);
                if (tit == panel.themes.end() || *tit != theme) continue;
                const int col = int(tit - panel.themes.begin());
                sums(row, col) += rec->avg_tone;
                panel.counts(row, col) += 1;
            }
        }
    });

    for (int r = 0; r < n_dates; ++r) {
        for (int c = 0; c < n_themes; ++c) {
            if (panel.counts(r, c) > 0) panel.values(r, c) = sums(r, c) / panel.counts(r, c);
        }
    }
    return panel;
}

void write_panel_csv(const std::filesystem::path& path, const DailyThemePanel& panel) {
    std::string body = "date";
    for (const auto& theme : panel.themes) body += "," + csv::escape(theme);
    body += '\n';
    for (std::size_t d = 0; d < panel.dates.size(); ++d) {
        body += panel.dates[d].to_iso();
        for (int c = 0; c < panel.values.cols(); ++c) {
            body += ',';
            body += format_double(panel.values(int(d), c));
        }
        body += '\n';
    }
    atomic_write_file(path, body);
}

void write_panel_sidecar(const std::filesystem::path& path, const DailyThemePanel& panel,
                         const ThemeTaxonomy& tax, std::uint64_t record_count) {
    json j;
    j["country"] = panel.country;
    j["taxonomy_fingerprint"] = tax.fingerprint();
    j["record_count"] = record_count;
    j["date_count"] = panel.dates.size();
    j["theme_count"] = panel.themes.size();
    j["cell_count"] = std::uint64_t(panel.counts.cast<std::int64_t>().sum());
    atomic_write_file(path, j.dump(2) + "\n");
}

DailyThemePanel read_panel_csv(const std::filesystem::path& path, const std::string& country) {
    const csv::Table table = csv::read_file(path);
    if (table.header.empty() || table.header[0] != "date") {
        throw DataError("panel CSV must start with a date column: " + path.string());
    }
    DailyThemePanel panel;
    panel.country = country;
    panel.themes.assign(table.header.begin() + 1, table.header.end());
    panel.values.resize(int(table.rows.size()), int(panel.themes.size()));
    panel.counts = Eigen::MatrixXi::Zero(int(table.rows.size()), int(panel.themes.size()));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != table.header.size()) {
            throw DataError(path.string() + ": row " + std::to_string(r + 2) + " field count");
        }
        const auto date = Date::parse_iso(row[0]);
        if (!date) throw DataError(path.string() + ": bad date " + row[0]);
        panel.dates.push_back(*date);
        for (std::size_t c = 1; c < row.size(); ++c) {
            panel.values(int(r), int(c - 1)) = std::stod(row[c]);
        }
    }
    return panel;
}

std::vector<double> diff_k(std::span<const double> series, int k) {
    if (k < 1) throw NumericalError("diff_k: k must be positive");
    if (int(series.size()) <= k) throw NumericalError("diff_k: series length must exceed k");
    std::vector<double> out(series.size() - std::size_t(k));
    for (std::size_t t = std::size_t(k); t < series.size(); ++t) {
        out[t - std::size_t(k)] = series[t] - series[t - std::size_t(k)];
    }
    return out;
}

Eigen::MatrixXd diff_k_matrix(const Eigen::MatrixXd& levels, int k) {
    if (k < 1) throw NumericalError("diff_k: k must be positive");
    if (levels.rows() <= k) throw NumericalError("diff_k: series length must exceed k");
    return levels.bottomRows(levels.rows() - k) - levels.topRows(levels.rows() - k);
}

std::string_view column_kind_name(ColumnKind k) {
    switch (k) {
        case ColumnKind::market: return "market";
        case ColumnKind::theme: return "theme";
        case ColumnKind::pls_component: return "pls";
    }
    return "unknown";
}

std::vector<std::string> FeatureMatrix::column_names() const {
    std::vector<std::string> out;
    out.reserve(columns.size());
    for (const auto& c : columns) out.push_back(c.name);
    return out;
}

Scaler standardize_fit(const FeatureMatrix& m, int window_begin, int window_end) {
    if (window_begin < 0 || window_end > m.values.rows() || window_end - window_begin < 2) {
        throw NumericalError("standardize_fit: window must contain at least 2 observations");
    }
    const auto window = m.values.middleRows(window_begin, window_end - window_begin);
    Scaler s;
    s.mean = window.colwise().mean();
    s.stddev.resize(window.cols());
    for (int c = 0; c < window.cols(); ++c) {
        const double var =
            (window.col(c).array() - s.mean(c)).square().sum() / double(window.rows());
        if (var <= 0.0) {
            throw NumericalError("standardize_fit: zero variance in column '" +
                                 m.columns[std::size_t(c)].name + "'");
        }
        s.stddev(c) = std::sqrt(var);
    }
    return s;
}

FeatureMatrix standardize_apply(const Scaler& s, const FeatureMatrix& m) {
    if (s.mean.size() != m.values.cols()) {
        throw NumericalError("standardize_apply: scaler/matrix column mismatch");
    }
    FeatureMatrix out = m;
    out.values = (m.values.rowwise() - s.mean.transpose()).array().rowwise() /
                 s.stddev.transpose().array();
    return out;
}

std::vector<AdfGateRow> adf_gate(const Eigen::MatrixXd& levels,
                                 const std::vector<std::string>& names, int k,
                                 double alpha, int jobs) {
    if (levels.cols() != int(names.size())) throw NumericalError("adf_gate: name/column mismatch");
    if (levels.rows() < 50) throw NumericalError("adf_gate: need at least 50 observations");
    std::vector<AdfGateRow> report(names.size());
    parallel_for(names.size(), jobs, [&](std::size_t c) {
        AdfGateRow& row = report[c];
        row.column = names[c];
        const Eigen::VectorXd col = levels.col(int(c));
        const bool constant = (col.array() == col(0)).all();
        if (constant) {
            row.degenerate = true;
            return;
        }
        const std::vector<double> level_vec(col.data(), col.data() + col.size());
        const auto level = stats::adf_test(level_vec);
        row.level_stat = level.statistic;
        row.level_p = level.p_value;
        const std::vector<double> diff = diff_k(level_vec, k);
        if (diff.size() < 50 || std::all_of(diff.begin(), diff.end(),
                                            [&](double v) { return v == diff[0]; })) {
            row.degenerate = true;
            return;
        }
        const auto differenced = stats::adf_test(diff);
        row.diff_stat = differenced.statistic;
        row.diff_p = differenced.p_value;
        row.stationary_after_differencing = differenced.p_value <= alpha;
    });
    return report;
}

LabelSet make_labels(const MarketSeries& beir, int k, int horizon) {
    return make_labels(beir.dates, beir.values, k, horizon);
}

LabelSet make_labels(std::span<const Date> dates, std::span<const double> values,
                     int k, int horizon) {
    if (k < 1 || horizon < 0) throw NumericalError("make_labels: bad k/horizon");
    const int n = int(values.size());
    if (n <= k + horizon) throw NumericalError("make_labels: series too short for k + horizon");
    LabelSet out;
    // Feature date t needs the change over (t+horizon-k, t+horizon].
    for (int t = k - horizon; t + horizon < n; ++t) {
        if (t < 0) continue;
        const double change = values[std::size_t(t + horizon)] -
                              values[std::size_t(t + horizon - k)];
        if (change == 0.0) {
            ++out.excluded_zero_change;
            continue;
        }
        out.feature_dates.push_back(dates[std::size_t(t)]);
        out.labels.push_back(change > 0.0 ? 1 : 0);
    }
    return out;
}

void write_feature_matrix(const std::filesystem::path& csv_path, const FeatureMatrix& m) {
    std::string body = "date";
    for (const auto& col : m.columns) {
        body += ',';
        body += csv::escape(std::string(column_kind_name(col.kind)) + ":" + col.name);
    }
    body += '\n';
    for (std::size_t d = 0; d < m.dates.size(); ++d) {
        body += m.dates[d].to_iso();
        for (int c = 0; c < m.values.cols(); ++c) {
            body += ',';
            body += format_double(m.values(int(d), c));
        }
        body += '\n';
    }
    atomic_write_file(csv_path, body);
}

FeatureMatrix read_feature_matrix(const std::filesystem::path& csv_path) {
    const csv::Table table = csv::read_file(csv_path);
    if (table.header.empty() || table.header[0] != "date") {
        throw DataError("feature CSV must start with a date column: " + csv_path.string());
    }
    FeatureMatrix m;
    for (std::size_t c = 1; c < table.header.size(); ++c) {
        const auto& h = table.header[c];
        const auto colon = h.find(':');
        if (colon == std::string::npos) {
            throw DataError("feature CSV header needs kind:name entries: " + h);
        }
        const std::string kind = h.substr(0, colon);
        ColumnMeta meta;
        meta.name = h.substr(colon + 1);
        if (kind == "market") meta.kind = ColumnKind::market;
        else if (kind == "theme") meta.kind = ColumnKind::theme;
        else if (kind == "pls") meta.kind = ColumnKind::pls_component;
        else throw DataError("unknown feature column kind: " + kind);
        m.columns.push_back(std::move(meta));
    }
    m.values.resize(int(table.rows.size()), int(m.columns.size()));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != table.header.size()) {
            throw DataError(csv_path.string() + ": row " + std::to_string(r + 2) + " field count");
        }
        const auto date = Date::parse_iso(row[0]);
        if (!date) throw DataError(csv_path.string() + ": bad date " + row[0]);
        m.dates.push_back(*date);
        for (std::size_t c = 1; c < row.size(); ++c) {
            m.values(int(r), int(c - 1)) = std::stod(row[c]);
        }
    }
    return m;
}

void write_labels_csv(const std::filesystem::path& path, const LabelSet& labels) {
    std::string body = "date,label\n";
    for (std::size_t i = 0; i < labels.labels.size(); ++i) {
        body += labels.feature_dates[i].to_iso();
        body += ',';
        body += std::to_string(labels.labels[i]);
        body += '\n';
    }
    atomic_write_file(path, body);
}

LabelSet read_labels_csv(const std::filesystem::path& path) {
    const csv::Table table = csv::read_file(path);
    LabelSet out;
    const std::size_t date_col = table.column("date");
    const std::size_t label_col = table.column("label");
    for (const auto& row : table.rows) {
        const auto date = Date::parse_iso(row[date_col]);
        if (!date) throw DataError(path.string() + ": bad date " + row[date_col]);
        out.feature_dates.push_back(*date);
        out.labels.push_back(std::stoi(row[label_col]));
    }
    return out;
}

} // namespace beircast
