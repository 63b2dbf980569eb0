#pragma once

// Monte Carlo emulation of Duerr-Hoyer minimum finding driven by an exact
// energy histogram, with closed-form Grover statistics and analytic circuit
// cost counters.

#include <cstdint>
#include <vector>

#include "mct/instance.hpp"
#include "mct/kernels.hpp"
#include "mct/rng.hpp"
#include "mct/tts.hpp"

namespace mct::dhqmf {

struct GroverOutcome {
    double p_succ;
    double p_fail;
};

/// sin^2((2m+1) theta) and its complement.
GroverOutcome grover_success_prob(std::int64_t m, double theta);

struct IterationPlan {
    std::int64_t m_opt;
    double theta;
};

/// theta = asin(sqrt(t/N)), m_opt = floor(pi / (4 theta)).
IterationPlan optimal_iterations(std::uint64_t t, std::uint64_t N);

/// Repetitions so that J boosted searches all succeed with probability p_target.
std::int64_t boosting_count(double wp_fail, std::int64_t J, double p_target = 0.99);

struct GroverStep {
    std::uint64_t t;
    double theta;
    std::int64_t m_opt;
    double wp_fail;
    std::int64_t K = 1;
    double threshold;   ///< energy of the level the search runs below
};

struct GroverTrajectory {
    std::vector<GroverStep> steps;
    double initial_energy;
    double final_energy;
    std::int64_t J() const { return static_cast<std::int64_t>(steps.size()); }
    /// sum_j K_j m_j
    double sum_km() const;
};

/// Threshold walk down the histogram. Each step's next threshold is a uniform
/// marked state; K_j are filled in afterwards from the realized J.
GroverTrajectory simulate_trajectory(const EnergyHistogram& histogram, double p_target, Rng& rng);

struct GateCoefficients {
    double g1 = 1.0;
    double g2 = 1.0;
    double g3 = 1.0;
};

struct QmfCostModel {
    double gate_time = 10e-9;
    double prep_meas_time = 1.0e-6;
    double a1 = 1.0;
    double a2 = 1.0;
    double a3 = 1.0;
    GateCoefficients single_qubit;
    GateCoefficients cnot;
    GateCoefficients t_gate;
    /// Charge prep_meas_time once per boosted search (J times per run).
    bool charge_prep_meas = false;
};

/// ceil(log2(10 n (n-1))): energy register width.
int register_bits(int n);

/// A1 n(n-1) ceil(log2 b) + A2 b^2 + A3 n.
double circuit_depth(int n, const QmfCostModel& cost = {});

struct GateCounts {
    double single_qubit = 0.0;
    double cnot = 0.0;
    double t_gate = 0.0;
};

/// G1 n(n-1) b ceil(log2 b) + G2 b^2 + G3 n per gate family.
GateCounts circuit_gates(int n, const QmfCostModel& cost = {});

struct QmfResult {
    std::int64_t J = 0;
    double sum_km = 0.0;
    double depth = 0.0;
    double tts_s = 0.0;
    GateCounts gates;
};

QmfResult qmf_tts(const GroverTrajectory& trajectory, int n, const QmfCostModel& cost = {});

struct VerifyResult {
    double rate;
    double stderr_;
    int runs;
};

/// Full boosted algorithm: each boosted search fails with wp_fail^K and a
/// single failure fails the run.
VerifyResult verify_success_probability(const EnergyHistogram& histogram, double p_target, int runs,
                                        std::uint64_t seed, kernels::Exec exec = kernels::Exec::Parallel);

/// Trajectories with streams derive_seed(seed, {k}).
std::vector<QmfResult> sample_tts(const EnergyHistogram& histogram, double p_target, int runs, std::uint64_t seed,
                                  const QmfCostModel& cost = {}, kernels::Exec exec = kernels::Exec::Parallel);

}  // namespace mct::dhqmf
