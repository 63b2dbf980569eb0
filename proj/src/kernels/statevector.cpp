#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "mct/kernels.hpp"

namespace mct::kernels {

namespace {

// Block-wise reduction: each block is summed serially, then block sums are
// added in block order. The result does not depend on the thread count.
template <class Term>
double block_reduce(std::size_t size, Term&& term, Exec exec) {
    const std::size_t block = static_cast<std::size_t>(kBlockSize);
    const std::size_t count = (size + block - 1) / block;
    std::vector<double> partial(count, 0.0);
    auto body = [&](std::int64_t b) {
        const std::size_t lo = static_cast<std::size_t>(b) * block;
        const std::size_t hi = std::min(size, lo + block);
        double acc = 0.0;
        for (std::size_t x = lo; x < hi; ++x) acc += term(x);
        partial[b] = acc;
    };
    const auto blocks = static_cast<std::int64_t>(count);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t b = 0; b < blocks; ++b) body(b);
    } else {
        for (std::int64_t b = 0; b < blocks; ++b) body(b);
    }
    return std::accumulate(partial.begin(), partial.end(), 0.0);
}

}  // namespace

void apply_phase(std::span<Complex> amps, std::span<const double> diag, double gamma, Exec exec) {
    const auto size = static_cast<std::int64_t>(amps.size());
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t x = 0; x < size; ++x) amps[x] *= std::polar(1.0, -gamma * diag[x]);
    } else {
        for (std::int64_t x = 0; x < size; ++x) amps[x] *= std::polar(1.0, -gamma * diag[x]);
    }
}

void apply_x_rotation(std::span<Complex> amps, int n, double angle, Exec exec) {
    const double c = std::cos(angle);
    const Complex mis{0.0, -std::sin(angle)};
    const auto half = static_cast<std::int64_t>(amps.size() / 2);
    for (int q = 0; q < n; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << q;
        const std::uint64_t low = bit - 1;
        // k enumerates the pairs (x, x | bit) with bit q of x clear.
        auto pair = [&](std::int64_t k) {
            const auto uk = static_cast<std::uint64_t>(k);
            const std::uint64_t x0 = ((uk & ~low) << 1) | (uk & low);
            const std::uint64_t x1 = x0 | bit;
            const Complex a0 = amps[x0];
            const Complex a1 = amps[x1];
            amps[x0] = c * a0 + mis * a1;
            amps[x1] = mis * a0 + c * a1;
        };
        if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
            for (std::int64_t k = 0; k < half; ++k) pair(k);
        } else {
            for (std::int64_t k = 0; k < half; ++k) pair(k);
        }
    }
}

double probability_at_or_below(std::span<const Complex> amps, std::span<const double> diag, double threshold,
                               Exec exec) {
    return block_reduce(
        amps.size(), [&](std::size_t x) { return diag[x] <= threshold ? std::norm(amps[x]) : 0.0; }, exec);
}

double expectation(std::span<const Complex> amps, std::span<const double> diag, Exec exec) {
    return block_reduce(amps.size(), [&](std::size_t x) { return std::norm(amps[x]) * diag[x]; }, exec);
}

double norm_sq(std::span<const Complex> amps, Exec exec) {
    return block_reduce(amps.size(), [&](std::size_t x) { return std::norm(amps[x]); }, exec);
}

}  // namespace mct::kernels
