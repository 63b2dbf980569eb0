#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "mct/analysis.hpp"
#include "mct/nelder_mead.hpp"

using namespace mct;
using namespace mct::analysis;

namespace {

std::vector<Point> planted(double (*f)(double), int lo, int hi, int step = 1) {
    std::vector<Point> pts;
    for (int n = lo; n <= hi; n += step) pts.push_back({double(n), f(n)});
    return pts;
}

double rel(double a, double b) { return std::abs(a / b - 1.0); }

}  // namespace

TEST_CASE("quantiles") {
    const auto q = median_iqr({3.0, 1.0, 2.0});
    CHECK(q.median == 2.0);
    CHECK(q.q25 == 1.5);
    CHECK(q.q75 == 2.5);
    const auto single = median_iqr({5.0});
    CHECK(single.median == 5.0);
    CHECK(single.q25 == 5.0);
    CHECK(single.q75 == 5.0);
    CHECK_THROWS(median_iqr({}));

    std::mt19937 rng(1);
    std::vector<double> v(37);
    for (auto& x : v) x = std::uniform_real_distribution<double>(0, 10)(rng);
    const auto a = median_iqr(v);
    std::shuffle(v.begin(), v.end(), rng);
    const auto b = median_iqr(v);
    CHECK(a.median == b.median);
    CHECK(a.q25 == b.q25);
    CHECK(a.q25 <= a.median);
    CHECK(a.median <= a.q75);

    const auto with_inf = median_iqr({1.0, kInfinity, 3.0});
    CHECK(with_inf.excluded == 1);
    CHECK(with_inf.median == 2.0);
}

TEST_CASE("unsolved instances and the half rule") {
    CHECK(aggregate({1.0, 2.0, kInfinity}).has_value());
    CHECK_FALSE(aggregate({1.0, kInfinity}).has_value());
    CHECK_FALSE(aggregate({kInfinity, kInfinity, 1.0}).has_value());
    CHECK(aggregate({1.0, 2.0, 3.0, kInfinity})->median == 2.0);
}

TEST_CASE("planted scaling laws are recovered") {
    const auto cim = fit_sqrt_exponential(planted([](double n) { return 0.26 * std::pow(2.32, std::sqrt(n)); }, 4, 30));
    CHECK(rel(cim.params[0], 0.26) < 1e-9);
    CHECK(rel(cim.params[1], 2.32) < 1e-9);
    CHECK(cim.sum_sq_residual < 1e-12);
    CHECK(cim.growing());

    const auto daqc = fit_exponential(planted([](double n) { return 4.6e-6 * std::pow(1.17, n); }, 4, 20));
    CHECK(rel(daqc.params[0], 4.6e-6) < 1e-9);
    CHECK(rel(daqc.params[1], 1.17) < 1e-9);
    CHECK(daqc.sum_sq_residual < 1e-12);

    const auto qmf = fit_qmf_form(planted(
        [](double n) {
            return (17.3 * n * n * std::log(std::log(n)) + 2.87e3 * std::pow(std::log(n), 2) - 1.65e3 * n) *
                   std::pow(std::sqrt(2.0), n);
        },
        4, 30));
    CHECK(rel(qmf.params[0], 17.3) < 1e-6);
    CHECK(rel(qmf.params[1], 2.87e3) < 1e-6);
    CHECK(rel(qmf.params[2], -1.65e3) < 1e-6);
    CHECK(qmf.base() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("fit edge cases") {
    const std::vector<Point> two{{4, 10.0}, {9, 40.0}};
    const auto f = fit_sqrt_exponential(two);
    CHECK(f.evaluate(4) == doctest::Approx(10.0));
    CHECK(f.evaluate(9) == doctest::Approx(40.0));

    const auto flat = fit_exponential({{3, 2.0}, {5, 2.0}, {8, 2.0}});
    CHECK(flat.params[1] == doctest::Approx(1.0));
    CHECK_FALSE(flat.growing());
    CHECK(fit_sqrt_exponential({{3, 2.0}, {7, 2.0}}).params[1] == doctest::Approx(1.0));

    CHECK_THROWS(fit_exponential({{3, 1.0}, {3, 2.0}}));
    CHECK_THROWS(fit_exponential({{3, 1.0}, {4, -2.0}}));
    CHECK_THROWS(fit_qmf_form({{3, 1.0}, {4, 2.0}}));
    CHECK_THROWS(fit_qmf_form({{2, 1.0}, {4, 2.0}, {5, 3.0}}));

    std::vector<Point> lin;
    for (int n = 3; n <= 12; ++n) lin.push_back({double(n), n * std::pow(std::sqrt(2.0), n)});
    const auto basis = fit_qmf_form(lin);
    CHECK(std::abs(basis.params[0]) < 1e-8);
    CHECK(std::abs(basis.params[1]) < 1e-8);
    CHECK(basis.params[2] == doctest::Approx(1.0));
    auto shuffled = lin;
    std::reverse(shuffled.begin(), shuffled.end());
    CHECK(fit_qmf_form(shuffled).sum_sq_residual == doctest::Approx(basis.sum_sq_residual).epsilon(1e-6));
}

TEST_CASE("exponential fits are scale equivariant") {
    std::vector<Point> pts, scaled;
    std::mt19937 rng(3);
    for (int n = 4; n <= 20; n += 2) {
        const double v = 0.3 * std::pow(1.4, n) * std::exp(std::normal_distribution<double>(0, 0.2)(rng));
        pts.push_back({double(n), v});
        scaled.push_back({double(n), 7.5 * v});
    }
    for (auto fam : {Family::Exp, Family::SqrtExp}) {
        const auto a = fit(fam, pts), b = fit(fam, scaled);
        CHECK(b.params[0] == doctest::Approx(7.5 * a.params[0]).epsilon(1e-9));
        CHECK(b.params[1] == doctest::Approx(a.params[1]).epsilon(1e-9));
    }
}

TEST_CASE("compare report") {
    std::map<std::string, std::vector<TtsRecord>> recs;
    for (int n = 4; n <= 12; n += 2)
        for (int k = 0; k < 5; ++k) {
            TtsRecord a;
            a.n = n;
            a.tts_wallclock_s = 1e-6 * std::pow(2.0, std::sqrt(n)) * (1 + 0.1 * k);
            recs["cim"].push_back(a);
            TtsRecord b = a;
            b.tts_wallclock_s = 1e-7 * std::pow(1.3, n) * (1 + 0.1 * k);
            recs["daqc"].push_back(b);
        }
    recs["daqc"].back().tts_wallclock_s = kInfinity;
    const auto rep = compare_report(recs, {{"cim", Family::SqrtExp}, {"daqc", Family::Exp}}, {20, 40});
    CHECK(rep.fits.size() == 2);
    CHECK(rep.rows.size() == 14);
    CHECK(rep.rows.front().solver == "cim");
    CHECK(rep.rows.back().solver == "daqc");
    CHECK(rep.rows.back().extrapolated);
    CHECK(rep.rows[0].q.median == doctest::Approx(1e-6 * 4.0 * 1.2));
    const auto csv = series_to_csv(rep);
    CHECK(csv.rfind("solver,n,median,q25,q75,fit,solved,extrapolated\n", 0) == 0);
    CHECK(compare_report(recs, {{"cim", Family::SqrtExp}}).fits.size() == 1);
    CHECK(series_to_csv(compare_report(recs, {{"cim", Family::SqrtExp}})) ==
          series_to_csv(compare_report(recs, {{"cim", Family::SqrtExp}})));
    CHECK_THROWS(compare_report({}, {}));
    CHECK(fits_to_json(rep).find("\"n_range\"") != std::string::npos);
}

TEST_CASE("CSV tables") {
    const auto t = parse_csv("instance_id,n,tts_s\na,4,1.5\nb,6,inf\n");
    CHECK(t.rows.size() == 2);
    const auto recs = records_from_table(t, "x");
    CHECK(recs[0].n == 4);
    CHECK(recs[0].tts_wallclock_s == 1.5);
    CHECK(std::isinf(recs[1].tts_wallclock_s));
    CHECK_THROWS(records_from_table(parse_csv("instance_id,n\na,4\n"), "x"));
    CHECK_THROWS(parse_csv("a,b\n1\n"));
    CHECK(family_from_string("qmf") == Family::QmfForm);
    CHECK_THROWS(family_from_string("cubic"));
}

TEST_CASE("Nelder-Mead") {
    auto rosen = [](const std::vector<double>& x) {
        return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
    };
    NelderMeadOptions opt;
    opt.max_evaluations = 2000;
    opt.initial_step = 0.5;
    const auto r = nelder_mead(rosen, {-1.2, 1.0}, opt);
    CHECK(r.value < 1e-6);
    CHECK(r.evaluations <= 2000);

    opt.max_evaluations = 7;
    int calls = 0;
    const auto b = nelder_mead([&](const std::vector<double>& x) { ++calls; return rosen(x); }, {-1.2, 1.0}, opt);
    CHECK(calls == 7);
    CHECK(b.value <= rosen({-1.2, 1.0}));

    opt.max_evaluations = 0;
    const auto z = nelder_mead(rosen, {0.3, 0.4}, opt);
    CHECK(z.x == std::vector<double>{0.3, 0.4});
    CHECK(z.evaluations == 0);
}
