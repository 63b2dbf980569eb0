#include "mct/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mct {

namespace {

struct BudgetExhausted {};

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             const NelderMeadOptions& opt) {
    if (opt.max_evaluations < 0) throw std::invalid_argument("negative evaluation budget");
    NelderMeadResult best{x0, std::numeric_limits<double>::quiet_NaN(), 0};
    if (opt.max_evaluations == 0 || x0.empty()) return best;

    auto eval = [&](const std::vector<double>& x) {
        if (best.evaluations >= opt.max_evaluations) throw BudgetExhausted{};
        const double v = f(x);
        ++best.evaluations;
        if (best.evaluations == 1 || v < best.value) {
            best.value = v;
            best.x = x;
        }
        return v;
    };

    const std::size_t d = x0.size();
    std::vector<std::vector<double>> simplex;
    std::vector<double> values;
    try {
        simplex.push_back(x0);
        values.push_back(eval(x0));
        for (std::size_t k = 0; k < d; ++k) {
            auto x = x0;
            x[k] += opt.initial_step;
            simplex.push_back(x);
            values.push_back(eval(x));
        }

        std::vector<std::size_t> order(d + 1);
        auto point = [&](const std::vector<double>& c, const std::vector<double>& w, double coef) {
            std::vector<double> out(d);
            for (std::size_t i = 0; i < d; ++i) out[i] = c[i] + coef * (w[i] - c[i]);
            return out;
        };
        while (true) {
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
            const std::size_t lo = order.front(), hi = order.back(), second = order[d - 1];

            std::vector<double> centroid(d, 0.0);
            for (std::size_t k : order)
                if (k != hi)
                    for (std::size_t i = 0; i < d; ++i) centroid[i] += simplex[k][i] / static_cast<double>(d);

            const auto xr = point(centroid, simplex[hi], -opt.reflection);
            const double fr = eval(xr);
            if (fr < values[lo]) {
                const auto xe = point(centroid, simplex[hi], -opt.reflection * opt.expansion);
                const double fe = eval(xe);
                if (fe < fr) {
                    simplex[hi] = xe;
                    values[hi] = fe;
                } else {
                    simplex[hi] = xr;
                    values[hi] = fr;
                }
                continue;
            }
            if (fr < values[second]) {
                simplex[hi] = xr;
                values[hi] = fr;
                continue;
            }
            // Contraction: outside if the reflected point beats the worst, inside otherwise.
            const bool outside = fr < values[hi];
            const auto xc = outside ? point(centroid, xr, opt.contraction) : point(centroid, simplex[hi], opt.contraction);
            const double fc = eval(xc);
            if (fc < (outside ? fr : values[hi])) {
                simplex[hi] = xc;
                values[hi] = fc;
                continue;
            }
            for (std::size_t k : order) {
                if (k == lo) continue;
                simplex[k] = point(simplex[lo], simplex[k], opt.shrink);
                values[k] = eval(simplex[k]);
            }
        }
    } catch (const BudgetExhausted&) {
    }
    return best;
}

}  // namespace mct
