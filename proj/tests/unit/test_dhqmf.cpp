#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mct/dhqmf.hpp"

using namespace mct;
using namespace mct::dhqmf;

namespace {

// Largest gap between the empirical CDFs of two integer samples.
double ks_statistic(std::vector<std::int64_t> a, std::vector<std::int64_t> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const auto hi = std::max(a.back(), b.back());
    double d = 0.0;
    for (std::int64_t v = 0; v <= hi; ++v) {
        const double fa = double(std::upper_bound(a.begin(), a.end(), v) - a.begin()) / a.size();
        const double fb = double(std::upper_bound(b.begin(), b.end(), v) - b.begin()) / b.size();
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

// Walks explicit basis states instead of energy levels.
std::int64_t state_level_j(const std::vector<double>& energies, Rng& rng) {
    double current = energies[uniform_below(rng, energies.size())];
    std::int64_t j = 0;
    std::vector<double> below;
    for (;;) {
        below.clear();
        for (double e : energies)
            if (e < current) below.push_back(e);
        if (below.empty()) return j;
        ++j;
        current = below[uniform_below(rng, below.size())];
    }
}

}  // namespace

TEST_CASE("Grover success probability") {
    const double th = std::asin(std::sqrt(3.0 / 64.0));
    CHECK(grover_success_prob(0, th).p_succ == doctest::Approx(3.0 / 64.0).epsilon(1e-12));
    const auto r = grover_success_prob(1, std::numbers::pi / 6);
    CHECK(r.p_succ == doctest::Approx(1.0).epsilon(1e-14));

    // Explicit rotation in the (unmarked, marked) plane.
    const double theta = std::asin(1.0 / 32.0);
    double u = std::cos(theta), m = std::sin(theta);
    const double c = std::cos(2 * theta), s = std::sin(2 * theta);
    for (int k = 0; k < 25; ++k) {
        const double nu = c * u - s * m, nm = s * u + c * m;
        u = nu;
        m = nm;
    }
    CHECK(grover_success_prob(25, theta).p_succ == doctest::Approx(m * m).epsilon(1e-12));

    for (std::int64_t k : {0, 3, 17, 400})
        for (double t : {0.01, 0.4, 1.2, std::numbers::pi / 2}) {
            const auto g = grover_success_prob(k, t);
            CHECK(g.p_succ + g.p_fail == 1.0);
        }
    CHECK_THROWS(grover_success_prob(1, 0.0));
    CHECK_THROWS(grover_success_prob(1, 2.0));
    CHECK_THROWS(grover_success_prob(-1, 0.3));
}

TEST_CASE("optimal iteration count") {
    CHECK(optimal_iterations(8, 8).m_opt == 0);
    CHECK(optimal_iterations(8, 8).theta == doctest::Approx(std::numbers::pi / 2));
    CHECK(optimal_iterations(1, 4).m_opt == 1);
    const auto big = optimal_iterations(1, 1u << 20);
    CHECK(big.m_opt == 804);
    CHECK(grover_success_prob(big.m_opt, big.theta).p_fail <= std::ldexp(1.0, -20));
    CHECK_THROWS(optimal_iterations(0, 4));
    CHECK_THROWS(optimal_iterations(5, 4));
}

TEST_CASE("failure bound holds for every marked count") {
    for (std::uint64_t N : {2ull, 7ull, 100ull, 4096ull, 1ull << 20}) {
        const std::uint64_t stride = N > 5000 ? 97 : 1;
        for (std::uint64_t t = 1; t <= N; t += stride) {
            const auto plan = optimal_iterations(t, N);
            CHECK(grover_success_prob(plan.m_opt, plan.theta).p_fail <= double(t) / double(N) + 1e-12);
        }
    }
}

TEST_CASE("boosting count") {
    CHECK(boosting_count(0.0, 5) == 1);
    CHECK(boosting_count(0.25, 1, 0.99) == 4);
    std::int64_t prev = 0;
    for (std::int64_t J = 1; J <= 100; ++J) {
        const auto K = boosting_count(0.3, J);
        CHECK(K >= prev);
        CHECK(K >= 1);
        CHECK(1.0 - std::pow(1.0 - std::pow(0.3, double(K)), double(J)) <= 0.01 + 1e-12);
        prev = K;
    }
    CHECK_THROWS(boosting_count(1.0, 1));
    CHECK_THROWS(boosting_count(0.2, 0));
    CHECK_THROWS(boosting_count(0.2, 1, 1.0));
}

TEST_CASE("trajectories on small histograms") {
    Rng rng(4);
    const EnergyHistogram flat{3, {{-2.0, 8}}};
    const auto tr = simulate_trajectory(flat, 0.99, rng);
    CHECK(tr.J() == 0);
    CHECK(qmf_tts(tr, 3).tts_s == 0.0);

    const EnergyHistogram two{4, {{-5.0, 2}, {1.0, 14}}};
    int empty = 0;
    const int runs = 20000;
    for (int k = 0; k < runs; ++k) {
        const auto t = simulate_trajectory(two, 0.99, rng);
        CHECK(t.J() <= 1);
        CHECK(t.final_energy == -5.0);
        if (t.J() == 0)
            ++empty;
        else
            CHECK(t.steps[0].t == 2);
    }
    const double expect = 2.0 / 16.0;
    CHECK(std::abs(double(empty) / runs - expect) < 4 * std::sqrt(expect * (1 - expect) / runs));
}

TEST_CASE("trajectory invariants and state-level oracle") {
    const auto inst = generate_instance(10, WeightClass::TwentyOneWeight, 21);
    const auto hist = energy_histogram(inst);
    std::vector<double> energies(1u << 10);
    for (std::uint64_t x = 0; x < energies.size(); ++x) energies[x] = energy(inst, x);

    Rng a(1), b(2);
    const int samples = 10000;
    std::vector<std::int64_t> level_j, state_j;
    for (int k = 0; k < samples; ++k) {
        const auto tr = simulate_trajectory(hist, 0.99, a);
        CHECK(tr.final_energy == hist.ground_energy());
        for (std::size_t s = 1; s < tr.steps.size(); ++s) CHECK(tr.steps[s].threshold < tr.steps[s - 1].threshold);
        for (const auto& st : tr.steps) {
            CHECK(st.K >= 1);
            CHECK(st.wp_fail >= 0.0);
            CHECK(st.wp_fail < 1.0);
            CHECK(st.t > 0);
        }
        level_j.push_back(tr.J());
        state_j.push_back(state_level_j(energies, b));
    }
    // Two-sample critical value at the 1% level.
    const double crit = 1.628 * std::sqrt(2.0 / samples);
    CHECK(ks_statistic(level_j, state_j) < crit);
}

TEST_CASE("circuit cost counters") {
    CHECK(register_bits(10) == 10);
    CHECK(circuit_depth(10) == 470.0);
    for (int n = 3; n <= 30; ++n) CHECK(circuit_depth(n) > circuit_depth(n - 1));
    const double ratio = circuit_depth(400) / circuit_depth(200);
    CHECK(ratio > 3.8);
    CHECK(ratio < 4.2);

    const auto g = circuit_gates(10);
    CHECK(g.single_qubit == 90.0 * 10 * 4 + 100 + 10);
    CHECK(g.cnot == g.single_qubit);
    QmfCostModel c;
    c.cnot.g1 = 2.0;
    CHECK(circuit_gates(10, c).cnot == 2.0 * 3600 + 110);
    for (int n = 3; n <= 30; ++n) CHECK(circuit_gates(n).t_gate > circuit_gates(n - 1).t_gate);
    CHECK_THROWS(register_bits(1));
}

TEST_CASE("time to solution") {
    GroverTrajectory tr;
    GroverStep st{};
    st.K = 4;
    st.m_opt = 1;
    tr.steps.push_back(st);
    const auto r = qmf_tts(tr, 10);
    CHECK(r.tts_s == doctest::Approx(18.8e-6));
    CHECK(r.gates.single_qubit == 4 * circuit_gates(10).single_qubit);

    QmfCostModel slow;
    slow.gate_time = 30e-9;
    CHECK(qmf_tts(tr, 10, slow).tts_s == doctest::Approx(3 * r.tts_s));
    tr.steps.push_back(st);
    CHECK(qmf_tts(tr, 10).tts_s == doctest::Approx(2 * r.tts_s));
    slow.charge_prep_meas = true;
    CHECK(qmf_tts(tr, 10, slow).tts_s == doctest::Approx(6 * r.tts_s + 2e-6));
}

TEST_CASE("boosted success rate") {
    const auto hist = energy_histogram(generate_instance(10, WeightClass::TwentyOneWeight, 3));
    const auto hi = verify_success_probability(hist, 0.99, 10000, 9);
    CHECK(hi.rate >= 0.99 - 3 * std::sqrt(0.99 * 0.01 / 10000));
    const auto lo = verify_success_probability(hist, 0.5, 10000, 9);
    CHECK(lo.rate >= 0.5 - 3 * std::sqrt(0.25 / 10000));
    const EnergyHistogram flat{2, {{0.0, 4}}};
    CHECK(verify_success_probability(flat, 0.99, 100, 1).rate == 1.0);

    const auto ser = sample_tts(hist, 0.99, 200, 5, {}, kernels::Exec::Serial);
    const auto par = sample_tts(hist, 0.99, 200, 5, {}, kernels::Exec::Parallel);
    for (std::size_t k = 0; k < ser.size(); ++k) CHECK(ser[k].tts_s == par[k].tts_s);
}
