#pragma once

// Aggregation of per-instance TTS records and the three scaling-law fits.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mct/tts.hpp"

namespace mct::analysis {

enum class Family {
    SqrtExp,  ///< A * B^sqrt(n)
    Exp,      ///< A * B^n
    QmfForm,  ///< (A n^2 ln ln n + C (ln n)^2 + D n) * B^n with B fixed
};

std::string_view to_string(Family f);
Family family_from_string(std::string_view s);

struct Point {
    double n;
    double value;
};

struct ScalingFit {
    Family family;
    /// SqrtExp, Exp: {A, B}. QmfForm: {A, C, D, B}.
    std::vector<double> params;
    /// Log space for the exponential families, linear space for QmfForm.
    double sum_sq_residual = 0.0;
    double n_min = 0.0;
    double n_max = 0.0;

    double base() const { return params.back(); }
    bool growing() const { return base() > 1.0; }
    double evaluate(double n) const;
};

struct Quantiles {
    double median;
    double q25;
    double q75;
    int finite = 0;
    int excluded = 0;  ///< infinite entries left out
};

/// Type-7 (linear interpolation) quantiles over the finite entries.
Quantiles median_iqr(std::vector<double> values);

/// Median with the unsolved rule: infinite entries are dropped when they are
/// fewer than half of the values, otherwise the point is unsolved (nullopt).
std::optional<Quantiles> aggregate(const std::vector<double>& values);

ScalingFit fit_sqrt_exponential(const std::vector<Point>& points);
ScalingFit fit_exponential(const std::vector<Point>& points);
ScalingFit fit_qmf_form(const std::vector<Point>& points, double b_tilde = 1.4142135623730951);
ScalingFit fit(Family family, const std::vector<Point>& points);

struct SeriesRow {
    std::string solver;
    double n;
    bool solved;
    Quantiles q;
    double fit;  ///< NaN when no fit is available
    bool extrapolated = false;
};

struct CompareReport {
    std::vector<SeriesRow> rows;
    std::map<std::string, ScalingFit> fits;
};

/// Per-solver median/IQR by n, fits of the medians and fitted values at the
/// extra n values given. Solvers appear in name order, n ascending.
CompareReport compare_report(const std::map<std::string, std::vector<TtsRecord>>& records,
                             const std::map<std::string, Family>& families, const std::vector<double>& extrapolate_n = {});

std::string series_to_csv(const CompareReport& report);
std::string fit_to_json(const ScalingFit& fit);
std::string fits_to_json(const CompareReport& report);

/// Minimal comma-separated table with a header row.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    int column(std::string_view name) const;  ///< -1 when absent
    int require(std::string_view name) const;
};

Table parse_csv(std::string_view text);
Table read_csv(const std::filesystem::path& path);

/// Reads instance_id, n and the first present TTS column (tts_wallclock_s or
/// tts_s); "inf" entries become the infinite sentinel.
std::vector<TtsRecord> records_from_table(const Table& table, const std::string& solver);

/// (n, median) pairs of the solved points of a record set.
std::vector<Point> median_points(const std::vector<TtsRecord>& records);

}  // namespace mct::analysis
