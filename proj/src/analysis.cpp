#include "mct/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mct::analysis {

std::string_view to_string(Family f) {
    switch (f) {
        case Family::SqrtExp: return "sqrt-exp";
        case Family::Exp: return "exp";
        case Family::QmfForm: return "qmf";
    }
    return "?";
}

Family family_from_string(std::string_view s) {
    if (s == "sqrt-exp" || s == "sqrtexp") return Family::SqrtExp;
    if (s == "exp") return Family::Exp;
    if (s == "qmf" || s == "qmf-form") return Family::QmfForm;
    throw std::invalid_argument("unknown fit family '" + std::string(s) + "' (sqrt-exp, exp, qmf)");
}

namespace {

double qmf_basis(int k, double n) {
    const double ln = std::log(n);
    switch (k) {
        case 0: return n * n * std::log(ln);
        case 1: return ln * ln;
        default: return n;
    }
}

double quantile(const std::vector<double>& sorted, double q) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::size_t distinct_n(const std::vector<Point>& pts) {
    std::set<double> s;
    for (const auto& p : pts) s.insert(p.n);
    return s.size();
}

// Least squares by modified Gram-Schmidt on the columns of X (m x k, column major).
std::vector<double> least_squares(std::vector<std::vector<double>> cols, std::vector<double> y) {
    const std::size_t k = cols.size();
    const std::size_t m = y.size();
    std::vector<std::vector<double>> R(k, std::vector<double>(k, 0.0));
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            double d = 0.0;
            for (std::size_t r = 0; r < m; ++r) d += cols[i][r] * cols[j][r];
            R[i][j] = d;
            for (std::size_t r = 0; r < m; ++r) cols[j][r] -= d * cols[i][r];
        }
        double nrm = 0.0;
        for (double v : cols[j]) nrm += v * v;
        nrm = std::sqrt(nrm);
        if (!(nrm > 1e-300)) throw std::invalid_argument("regression basis is rank deficient on these n values");
        R[j][j] = nrm;
        for (auto& v : cols[j]) v /= nrm;
    }
    std::vector<double> qy(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t r = 0; r < m; ++r) qy[j] += cols[j][r] * y[r];
    }
    std::vector<double> beta(k, 0.0);
    for (std::size_t j = k; j-- > 0;) {
        double s = qy[j];
        for (std::size_t i = j + 1; i < k; ++i) s -= R[j][i] * beta[i];
        beta[j] = s / R[j][j];
    }
    return beta;
}

ScalingFit log_linear(const std::vector<Point>& pts, Family fam, double (*regressor)(double)) {
    if (distinct_n(pts) < 2) throw std::invalid_argument("need at least two distinct n values");
    std::vector<double> ones, x, y;
    for (const auto& p : pts) {
        if (!(p.value > 0.0) || !std::isfinite(p.value)) throw std::invalid_argument("fit needs positive finite values");
        ones.push_back(1.0);
        x.push_back(regressor(p.n));
        y.push_back(std::log(p.value));
    }
    const auto beta = least_squares({ones, x}, y);
    ScalingFit f{fam, {std::exp(beta[0]), std::exp(beta[1])}};
    for (std::size_t r = 0; r < y.size(); ++r) {
        const double e = y[r] - beta[0] - beta[1] * x[r];
        f.sum_sq_residual += e * e;
    }
    auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.n < b.n; });
    f.n_min = lo->n;
    f.n_max = hi->n;
    return f;
}

}  // namespace

double ScalingFit::evaluate(double n) const {
    switch (family) {
        case Family::SqrtExp: return params[0] * std::pow(params[1], std::sqrt(n));
        case Family::Exp: return params[0] * std::pow(params[1], n);
        case Family::QmfForm: {
            double poly = 0.0;
            for (int k = 0; k < 3; ++k) poly += params[k] * qmf_basis(k, n);
            return poly * std::pow(params[3], n);
        }
    }
    return std::nan("");
}

Quantiles median_iqr(std::vector<double> values) {
    Quantiles q{};
    std::vector<double> finite;
    for (double v : values) {
        if (std::isnan(v)) throw std::invalid_argument("NaN in quantile input");
        if (std::isinf(v)) {
            ++q.excluded;
        } else {
            finite.push_back(v);
        }
    }
    if (finite.empty()) throw std::invalid_argument("no finite values to summarize");
    std::sort(finite.begin(), finite.end());
    q.median = quantile(finite, 0.5);
    q.q25 = quantile(finite, 0.25);
    q.q75 = quantile(finite, 0.75);
    q.finite = static_cast<int>(finite.size());
    return q;
}

std::optional<Quantiles> aggregate(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("empty input");
    const auto unsolved = std::count_if(values.begin(), values.end(), [](double v) { return std::isinf(v); });
    if (2 * unsolved >= static_cast<std::ptrdiff_t>(values.size())) return std::nullopt;
    return median_iqr(values);
}

ScalingFit fit_sqrt_exponential(const std::vector<Point>& points) {
    return log_linear(points, Family::SqrtExp, [](double n) { return std::sqrt(n); });
}

ScalingFit fit_exponential(const std::vector<Point>& points) {
    return log_linear(points, Family::Exp, [](double n) { return n; });
}

ScalingFit fit_qmf_form(const std::vector<Point>& points, double b_tilde) {
    if (distinct_n(points) < 3) throw std::invalid_argument("need at least three distinct n values");
    if (!(b_tilde > 0.0)) throw std::invalid_argument("fixed base must be positive");
    std::vector<std::vector<double>> cols(3);
    std::vector<double> y;
    for (const auto& p : points) {
        if (!(p.n >= 3.0)) throw std::invalid_argument("qmf form needs n >= 3");
        if (!std::isfinite(p.value)) throw std::invalid_argument("fit needs finite values");
        for (int k = 0; k < 3; ++k) cols[k].push_back(qmf_basis(k, p.n));
        y.push_back(p.value / std::pow(b_tilde, p.n));
    }
    const auto beta = least_squares(cols, y);
    ScalingFit f{Family::QmfForm, {beta[0], beta[1], beta[2], b_tilde}};
    for (std::size_t r = 0; r < y.size(); ++r) {
        double e = y[r];
        for (int k = 0; k < 3; ++k) e -= beta[k] * cols[k][r];
        f.sum_sq_residual += e * e;
    }
    auto [lo, hi] = std::minmax_element(points.begin(), points.end(), [](auto& a, auto& b) { return a.n < b.n; });
    f.n_min = lo->n;
    f.n_max = hi->n;
    return f;
}

ScalingFit fit(Family family, const std::vector<Point>& points) {
    switch (family) {
        case Family::SqrtExp: return fit_sqrt_exponential(points);
        case Family::Exp: return fit_exponential(points);
        case Family::QmfForm: return fit_qmf_form(points);
    }
    throw std::invalid_argument("unknown family");
}

std::vector<Point> median_points(const std::vector<TtsRecord>& records) {
    std::map<int, std::vector<double>> by_n;
    for (const auto& r : records) by_n[r.n].push_back(r.tts_wallclock_s);
    std::vector<Point> pts;
    for (const auto& [n, vals] : by_n) {
        if (auto q = aggregate(vals)) pts.push_back({static_cast<double>(n), q->median});
    }
    return pts;
}

CompareReport compare_report(const std::map<std::string, std::vector<TtsRecord>>& records,
                             const std::map<std::string, Family>& families, const std::vector<double>& extrapolate_n) {
    if (records.empty()) throw std::invalid_argument("no solver series to compare");
    CompareReport rep;
    for (const auto& [solver, recs] : records) {
        std::map<int, std::vector<double>> by_n;
        for (const auto& r : recs) by_n[r.n].push_back(r.tts_wallclock_s);
        std::optional<ScalingFit> f;
        const auto fam = families.find(solver);
        const auto pts = median_points(recs);
        if (fam != families.end()) {
            try {
                f = fit(fam->second, pts);
                rep.fits.emplace(solver, *f);
            } catch (const std::invalid_argument&) {
                // Too few solved sizes for this family; the series is still reported.
            }
        }
        const double nan = std::nan("");
        for (const auto& [n, vals] : by_n) {
            SeriesRow row{solver, static_cast<double>(n), false, {nan, nan, nan, 0, 0}, nan};
            if (auto q = aggregate(vals)) {
                row.solved = true;
                row.q = *q;
            } else {
                row.q.excluded = static_cast<int>(vals.size());
            }
            if (f) row.fit = f->evaluate(n);
            rep.rows.push_back(row);
        }
        if (f) {
            std::vector<double> extra = extrapolate_n;
            std::sort(extra.begin(), extra.end());
            for (double n : extra) {
                if (by_n.count(static_cast<int>(n)) && n == std::floor(n)) continue;
                rep.rows.push_back({solver, n, false, {nan, nan, nan, 0, 0}, f->evaluate(n), true});
            }
        }
    }
    return rep;
}

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

nlohmann::json fit_json(const ScalingFit& f) {
    return {{"family", std::string(to_string(f.family))},
            {"params", f.params},
            {"residual", f.sum_sq_residual},
            {"n_range", {f.n_min, f.n_max}}};
}

}  // namespace

std::string series_to_csv(const CompareReport& report) {
    std::ostringstream os;
    os << "solver,n,median,q25,q75,fit,solved,extrapolated\n";
    for (const auto& r : report.rows)
        os << r.solver << ',' << num(r.n) << ',' << num(r.q.median) << ',' << num(r.q.q25) << ',' << num(r.q.q75)
           << ',' << num(r.fit) << ',' << (r.solved ? 1 : 0) << ',' << (r.extrapolated ? 1 : 0) << '\n';
    return os.str();
}

std::string fit_to_json(const ScalingFit& f) { return fit_json(f).dump(2) + "\n"; }

std::string fits_to_json(const CompareReport& report) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [solver, f] : report.fits) j[solver] = fit_json(f);
    return j.dump(2) + "\n";
}

int Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

int Table::require(std::string_view name) const {
    const int c = column(name);
    if (c < 0) throw std::invalid_argument("missing column '" + std::string(name) + "'");
    return c;
}

Table parse_csv(std::string_view text) {
    Table t;
    bool first = true;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t c = 0;
        while (true) {
            const auto comma = line.find(',', c);
            cells.emplace_back(line.substr(c, comma == std::string_view::npos ? std::string_view::npos : comma - c));
            if (comma == std::string_view::npos) break;
            c = comma + 1;
        }
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != t.header.size())
                throw std::invalid_argument("row with " + std::to_string(cells.size()) + " cells, header has " +
                                            std::to_string(t.header.size()));
            t.rows.push_back(std::move(cells));
        }
    }
    if (first) throw std::invalid_argument("empty CSV");
    return t;
}

Table read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str());
}

namespace {

double parse_double(const std::string& s) {
    if (s == "inf" || s == "Infinity") return kInfinity;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

}  // namespace

std::vector<TtsRecord> records_from_table(const Table& table, const std::string& solver) {
    const int id = table.require("instance_id");
    const int n = table.require("n");
    int tts = table.column("tts_wallclock_s");
    if (tts < 0) tts = table.column("tts_s");
    if (tts < 0) throw std::invalid_argument("missing column 'tts_wallclock_s' or 'tts_s'");
    const int ps = table.column("Ps");
    std::vector<TtsRecord> out;
    for (const auto& row : table.rows) {
        TtsRecord r;
        r.instance_id = row[id];
        r.n = static_cast<int>(parse_double(row[n]));
        r.solver = solver;
        r.tts_wallclock_s = parse_double(row[tts]);
        if (ps >= 0) r.ps = parse_double(row[ps]);
        out.push_back(r);
    }
    return out;
}

}  // namespace mct::analysis
