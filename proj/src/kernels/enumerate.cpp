#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>

#include "mct/kernels.hpp"

namespace mct::kernels {

namespace {

std::uint64_t gray(std::uint64_t k) { return k ^ (k >> 1); }

/// Walks block `b` of the Gray-code order, calling visit(index, energy) for
/// every state. Energies are recomputed from scratch at the block start.
template <class Visit>
void walk_block(const IsingInstance& inst, std::uint64_t b, std::uint64_t block, Visit&& visit) {
    const int n = inst.n();
    std::vector<int> s(static_cast<std::size_t>(n));
    std::vector<double> h(static_cast<std::size_t>(n), 0.0);

    const std::uint64_t k0 = b * block;
    std::uint64_t x = gray(k0);
    for (int i = 0; i < n; ++i) s[i] = ((x >> i) & 1u) ? -1 : 1;
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto row = inst.row(i);
        double hi = 0.0;
        for (int j = 0; j < n; ++j) hi += row[j] * s[j];
        h[i] = hi;
        e += s[i] * hi;
    }
    e *= -0.5;
    visit(x, e);

    for (std::uint64_t k = k0 + 1; k < k0 + block; ++k) {
        const int flip = std::countr_zero(k);
        const int old = s[flip];
        e += 2.0 * old * h[flip];
        s[flip] = -old;
        x ^= std::uint64_t{1} << flip;
        const auto row = inst.row(flip);
        const double d = -2.0 * old;
        for (int j = 0; j < n; ++j) h[j] += d * row[j];
        visit(x, e);
    }
}

struct Blocks {
    std::uint64_t count;
    std::uint64_t size;
};

Blocks blocks_for(int n) {
    const std::uint64_t total = std::uint64_t{1} << n;
    const std::uint64_t size = std::min(total, kBlockSize);
    return {total / size, size};
}

void merge_level(std::map<double, std::uint64_t>& levels, double e, std::uint64_t count) {
    auto it = levels.lower_bound(e - kLevelTolerance);
    if (it != levels.end() && std::abs(it->first - e) <= kLevelTolerance) {
        it->second += count;
    } else {
        levels.emplace(e, count);
    }
}

GroundScan combine(GroundScan a, const GroundScan& b) {
    if (b.degeneracy == 0) return a;
    if (a.degeneracy == 0 || b.energy < a.energy - kLevelTolerance) return b;
    if (std::abs(b.energy - a.energy) <= kLevelTolerance) {
        a.degeneracy += b.degeneracy;
        if (b.energy < a.energy) a.energy = b.energy;
        a.witness = std::min(a.witness, b.witness);
    }
    return a;
}

}  // namespace

GroundScan scan_ground(const IsingInstance& instance, Exec exec) {
    const auto [count, size] = blocks_for(instance.n());
    std::vector<GroundScan> partial(count, GroundScan{0.0, 0, 0});

    auto body = [&](std::int64_t b) {
        GroundScan g{std::numeric_limits<double>::infinity(), 0, 0};
        walk_block(instance, static_cast<std::uint64_t>(b), size, [&](std::uint64_t x, double e) {
            g = combine(g, GroundScan{e, 1, x});
        });
        partial[b] = g;
    };
    const auto blocks = static_cast<std::int64_t>(count);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t b = 0; b < blocks; ++b) body(b);
    } else {
        for (std::int64_t b = 0; b < blocks; ++b) body(b);
    }

    GroundScan total{0.0, 0, 0};
    for (const auto& g : partial) total = combine(total, g);
    return total;
}

std::vector<EnergyLevel> scan_levels(const IsingInstance& instance, Exec exec) {
    const auto [count, size] = blocks_for(instance.n());
    std::vector<std::vector<EnergyLevel>> partial(count);

    auto body = [&](std::int64_t b) {
        std::vector<double> es;
        es.reserve(size);
        walk_block(instance, static_cast<std::uint64_t>(b), size, [&](std::uint64_t, double e) { es.push_back(e); });
        std::sort(es.begin(), es.end());
        std::vector<EnergyLevel> runs;
        for (double e : es) {
            if (!runs.empty() && e - runs.back().energy <= kLevelTolerance) {
                ++runs.back().degeneracy;
            } else {
                runs.push_back({e, 1});
            }
        }
        partial[b] = std::move(runs);
    };
    const auto blocks = static_cast<std::int64_t>(count);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t b = 0; b < blocks; ++b) body(b);
    } else {
        for (std::int64_t b = 0; b < blocks; ++b) body(b);
    }

    std::map<double, std::uint64_t> merged;
    for (const auto& runs : partial)
        for (const auto& lvl : runs) merge_level(merged, lvl.energy, lvl.degeneracy);

    std::vector<EnergyLevel> out;
    out.reserve(merged.size());
    for (const auto& [e, d] : merged) out.push_back({e, d});
    return out;
}

void diagonal_energies(const IsingInstance& instance, std::span<double> out, Exec exec) {
    const auto [count, size] = blocks_for(instance.n());
    auto body = [&](std::int64_t b) {
        walk_block(instance, static_cast<std::uint64_t>(b), size, [&](std::uint64_t x, double e) { out[x] = e; });
    };
    const auto blocks = static_cast<std::int64_t>(count);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t b = 0; b < blocks; ++b) body(b);
    } else {
        for (std::int64_t b = 0; b < blocks; ++b) body(b);
    }
}

}  // namespace mct::kernels
