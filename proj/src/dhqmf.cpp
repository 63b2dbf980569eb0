#include "mct/dhqmf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mct::dhqmf {

GroverOutcome grover_success_prob(std::int64_t m, double theta) {
    if (m < 0) throw std::invalid_argument("iteration count must be non-negative");
    if (!(theta > 0.0 && theta <= std::numbers::pi / 2)) throw std::invalid_argument("theta outside (0, pi/2]");
    const double s = std::sin((2.0 * static_cast<double>(m) + 1.0) * theta);
    const double p = s * s;
    return {p, 1.0 - p};
}

IterationPlan optimal_iterations(std::uint64_t t, std::uint64_t N) {
    if (t == 0 || t > N) throw std::invalid_argument("need 1 <= t <= N marked states");
    const double theta =
        t == N ? std::numbers::pi / 2 : std::asin(std::sqrt(static_cast<double>(t) / static_cast<double>(N)));
    return {static_cast<std::int64_t>(std::floor(std::numbers::pi / (4.0 * theta))), theta};
}

std::int64_t boosting_count(double wp_fail, std::int64_t J, double p_target) {
    if (!(wp_fail >= 0.0 && wp_fail < 1.0)) throw std::invalid_argument("wp_fail outside [0, 1)");
    if (J < 1) throw std::invalid_argument("J must be >= 1");
    if (!(p_target > 0.0 && p_target < 1.0)) throw std::invalid_argument("p_target outside (0, 1)");
    if (wp_fail == 0.0) return 1;
    // 1 - p^(1/J), computed without cancellation.
    const double miss = -std::expm1(std::log(p_target) / static_cast<double>(J));
    const double k = std::ceil(std::log(miss) / std::log(wp_fail));
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(k));
}

double GroverTrajectory::sum_km() const {
    double s = 0.0;
    for (const auto& st : steps) s += static_cast<double>(st.K) * static_cast<double>(st.m_opt);
    return s;
}

namespace {

// Level holding the r-th state (0-based) in ascending-energy order.
std::size_t level_of(const std::vector<std::uint64_t>& cumulative, std::uint64_t r) {
    return static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), r) - cumulative.begin());
}

std::vector<std::uint64_t> cumulative_of(const EnergyHistogram& h) {
    std::vector<std::uint64_t> c;
    std::uint64_t acc = 0;
    for (const auto& l : h.levels) c.push_back(acc += l.degeneracy);
    return c;
}

GroverTrajectory walk(const EnergyHistogram& h, const std::vector<std::uint64_t>& cum, double p_target, Rng& rng) {
    if (h.levels.empty()) throw std::invalid_argument("empty histogram");
    const std::uint64_t N = cum.back();
    GroverTrajectory tr;
    std::size_t level = level_of(cum, uniform_below(rng, N));
    tr.initial_energy = h.levels[level].energy;
    while (level > 0) {
        const std::uint64_t t = cum[level - 1];
        const auto plan = optimal_iterations(t, N);
        GroverStep st;
        st.t = t;
        st.theta = plan.theta;
        st.m_opt = plan.m_opt;
        st.wp_fail = grover_success_prob(plan.m_opt, plan.theta).p_fail;
        st.threshold = h.levels[level].energy;
        tr.steps.push_back(st);
        level = level_of(cum, uniform_below(rng, t));
    }
    tr.final_energy = h.levels[level].energy;
    const auto J = tr.J();
    for (auto& st : tr.steps) st.K = boosting_count(st.wp_fail, J, p_target);
    return tr;
}

template <class Body>
void for_runs(int runs, kernels::Exec exec, Body&& body) {
    if (exec == kernels::Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (int k = 0; k < runs; ++k) body(k);
    } else {
        for (int k = 0; k < runs; ++k) body(k);
    }
}

}  // namespace

GroverTrajectory simulate_trajectory(const EnergyHistogram& histogram, double p_target, Rng& rng) {
    return walk(histogram, cumulative_of(histogram), p_target, rng);
}

int register_bits(int n) {
    if (n < 2) throw std::invalid_argument("need n >= 2");
    const auto range = static_cast<std::uint64_t>(10) * n * (n - 1);
    int b = 0;
    while ((std::uint64_t{1} << b) < range) ++b;
    return b;
}

namespace {

int ceil_log2(int x) {
    int c = 0;
    while ((1 << c) < x) ++c;
    return c;
}

double family_count(int n, int b, const GateCoefficients& g) {
    const double pairs = static_cast<double>(n) * (n - 1);
    return g.g1 * pairs * b * ceil_log2(b) + g.g2 * b * b + g.g3 * n;
}

}  // namespace

double circuit_depth(int n, const QmfCostModel& cost) {
    const int b = register_bits(n);
    const double pairs = static_cast<double>(n) * (n - 1);
    return cost.a1 * pairs * ceil_log2(b) + cost.a2 * b * b + cost.a3 * n;
}

GateCounts circuit_gates(int n, const QmfCostModel& cost) {
    const int b = register_bits(n);
    return {family_count(n, b, cost.single_qubit), family_count(n, b, cost.cnot), family_count(n, b, cost.t_gate)};
}

QmfResult qmf_tts(const GroverTrajectory& trajectory, int n, const QmfCostModel& cost) {
    QmfResult r;
    r.J = trajectory.J();
    r.sum_km = trajectory.sum_km();
    r.depth = circuit_depth(n, cost);
    r.tts_s = r.sum_km * r.depth * cost.gate_time;
    if (cost.charge_prep_meas) r.tts_s += static_cast<double>(r.J) * cost.prep_meas_time;
    const auto g = circuit_gates(n, cost);
    r.gates = {r.sum_km * g.single_qubit, r.sum_km * g.cnot, r.sum_km * g.t_gate};
    return r;
}

VerifyResult verify_success_probability(const EnergyHistogram& histogram, double p_target, int runs,
                                        std::uint64_t seed, kernels::Exec exec) {
    if (runs < 1) throw std::invalid_argument("need at least one run");
    const auto cum = cumulative_of(histogram);
    const double ground = histogram.levels.front().energy;
    std::vector<std::uint8_t> ok(static_cast<std::size_t>(runs), 0);
    for_runs(runs, exec, [&](int k) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(k)}));
        const auto tr = walk(histogram, cum, p_target, rng);
        bool alive = true;
        for (const auto& st : tr.steps) {
            const double fail = std::pow(st.wp_fail, static_cast<double>(st.K));
            if (uniform_unit(rng) < fail) {
                alive = false;
                break;
            }
        }
        ok[k] = alive && tr.final_energy == ground;
    });
    int good = 0;
    for (auto v : ok) good += v;
    const double rate = static_cast<double>(good) / runs;
    return {rate, std::sqrt(rate * (1.0 - rate) / runs), runs};
}

std::vector<QmfResult> sample_tts(const EnergyHistogram& histogram, double p_target, int runs, std::uint64_t seed,
                                  const QmfCostModel& cost, kernels::Exec exec) {
    if (runs < 1) throw std::invalid_argument("need at least one run");
    const auto cum = cumulative_of(histogram);
    std::vector<QmfResult> out(static_cast<std::size_t>(runs));
    for_runs(runs, exec, [&](int k) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(k)}));
        out[k] = qmf_tts(walk(histogram, cum, p_target, rng), histogram.n, cost);
    });
    return out;
}

}  // namespace mct::dhqmf
