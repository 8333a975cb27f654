#pragma once

#include "beircast/date.hpp"
#include "beircast/gkg.hpp"
#include "beircast/market_data.hpp"
#include "beircast/taxonomy.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace beircast {

/// Date-by-theme matrix of mean daily tone for one country. Cells with no
/// underlying record read as 0.0 (neutral); counts record how many records
/// contributed to each stored mean.
struct DailyThemePanel {
    std::string country;
    std::vector<Date> dates;          // days with at least one record
    std::vector<std::string> themes;  // retained theme labels, sorted
    Eigen::MatrixXd values;           // mean tone; 0.0 where count is 0
    Eigen::MatrixXi counts;

    double value_at(Date d, const std::string& theme) const;
};

// Groups records by (day, retained theme) and averages document tone over the
// records carrying the theme that day. Documents attach their tone to every
// retained theme they contain.
DailyThemePanel aggregate_daily(std::span<const GkgRecord> records, const ThemeTaxonomy& tax,
                                const std::string& country, int jobs = 1);

void write_panel_csv(const std::filesystem::path& path, const DailyThemePanel& panel);
// Sidecar carries country, taxonomy fingerprint and record counts.
void write_panel_sidecar(const std::filesystem::path& path, const DailyThemePanel& panel,
                         const ThemeTaxonomy& tax, std::uint64_t record_count);
DailyThemePanel read_panel_csv(const std::filesystem::path& path, const std::string& country);

// out[t] = x[t] - x[t-k] on index positions, defined for t >= k.
std::vector<double> diff_k(std::span<const double> series, int k);
Eigen::MatrixXd diff_k_matrix(const Eigen::MatrixXd& levels, int k);

enum class ColumnKind { market, theme, pls_component };
std::string_view column_kind_name(ColumnKind k);

struct ColumnMeta {
    std::string name;
    ColumnKind kind = ColumnKind::market;
};

/// Design matrix over dates with per-column metadata. After standardization
/// each column has mean 0 / variance 1 over the scaler's fit window.
struct FeatureMatrix {
    std::vector<Date> dates;
    std::vector<ColumnMeta> columns;
    Eigen::MatrixXd values;

    std::vector<std::string> column_names() const;
};

/// Column means and population standard deviations estimated on a fit window.
struct Scaler {
    Eigen::VectorXd mean;
    Eigen::VectorXd stddev;
};

// Fits on rows [window_begin, window_end). Throws NumericalError naming the
// column when a window has fewer than 2 rows or a zero-variance column.
Scaler standardize_fit(const FeatureMatrix& m, int window_begin, int window_end);
FeatureMatrix standardize_apply(const Scaler& s, const FeatureMatrix& m);

struct AdfGateRow {
    std::string column;
    double level_stat = 0.0;
    double level_p = 1.0;
    double diff_stat = 0.0;
    double diff_p = 1.0;
    bool stationary_after_differencing = false;
    bool degenerate = false; // constant column; excluded from modelling
};

// Runs the ADF test on levels and on k-differenced values of every column.
std::vector<AdfGateRow> adf_gate(const Eigen::MatrixXd& levels,
                                 const std::vector<std::string>& names, int k,
                                 double alpha = 0.05, int jobs = 1);

struct LabelSet {
    std::vector<Date> feature_dates; // date t each label is aligned to
    std::vector<int> labels;         // 1 = BEIR rises over the horizon window
    int excluded_zero_change = 0;
};

// Label for feature date t: 1 if beir[t+horizon] - beir[t+horizon-k] > 0,
// 0 if negative. Exact zeros are excluded and counted.
LabelSet make_labels(const MarketSeries& beir, int k = 5, int horizon = 1);
LabelSet make_labels(std::span<const Date> dates, std::span<const double> values,
                     int k = 5, int horizon = 1);

void write_feature_matrix(const std::filesystem::path& csv_path, const FeatureMatrix& m);
FeatureMatrix read_feature_matrix(const std::filesystem::path& csv_path);
void write_labels_csv(const std::filesystem::path& path, const LabelSet& labels);
LabelSet read_labels_csv(const std::filesystem::path& path);

} // namespace beircast
