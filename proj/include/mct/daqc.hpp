#pragma once

// Statevector simulation of p-layer QAOA with angles taken from a Trotterized
// cubic annealing schedule, plus the ideal-hardware shot cost model.
//
// Layer k applies exp(-i gamma_k E) and then exp(+i beta_k sum X), which is
// one Trotter step of H(t) = s(t) E/|E| + (1 - s(t)) (-sum X / sqrt(n)). The
// circuit therefore starts in the ground state |+...+> of the driver.

#include <complex>
#include <span>
#include <vector>

#include "mct/instance.hpp"
#include "mct/kernels.hpp"
#include "mct/tts.hpp"

namespace mct::daqc {

using kernels::Complex;

/// Largest register the statevector routines accept.
inline constexpr int kStatevectorCap = 26;
/// Largest register for the adiabatic reference integrator.
inline constexpr int kAdiabaticCap = 12;
inline constexpr double kGroundTolerance = 1e-6;

struct QaoaSchedule {
    int p = 0;
    std::vector<double> gamma;
    std::vector<double> beta;
    double a = 0.0;
    double L = 0.0;
    double T = 0.0;
};

/// Default per-layer time for n qubits.
inline double default_layer_time(int n) { return 1.6 + 0.1 * n; }
inline constexpr double kDefaultCubic = 4.0;

/// s(t/T) = u + a u (u - 1/2)(u - 1)
double schedule_s(double u, double a);

/// |H_P| = sqrt(sum_{i<j} J_ij^2); 1 for an uncoupled instance.
double problem_norm(const IsingInstance& instance);

QaoaSchedule build_schedule(const IsingInstance& instance, int p, double a, double L);

struct Statevector {
    int n = 0;
    std::vector<Complex> amps;

    static Statevector uniform(int n);
    static Statevector basis(int n, std::uint64_t index);
    double norm() const;
};

/// Diagonal E(x) used by the phase layer; cached by callers running many layers.
std::vector<double> diagonal(const IsingInstance& instance, kernels::Exec exec = kernels::Exec::Parallel);

/// amp[x] *= exp(-i gamma D(x))
void apply_phase_layer(Statevector& state, std::span<const double> diag, double gamma,
                       kernels::Exec exec = kernels::Exec::Parallel);
void apply_phase_layer(Statevector& state, const IsingInstance& instance, double gamma,
                       kernels::Exec exec = kernels::Exec::Parallel);

/// exp(-i beta X) on every qubit.
void apply_mixer_layer(Statevector& state, double beta, kernels::Exec exec = kernels::Exec::Parallel);

Statevector run_qaoa(const IsingInstance& instance, const QaoaSchedule& schedule,
                     kernels::Exec exec = kernels::Exec::Parallel);
Statevector run_qaoa(int n, std::span<const double> diag, std::span<const double> gamma,
                     std::span<const double> beta, kernels::Exec exec = kernels::Exec::Parallel);

/// RK4 integration of the annealing Schroedinger equation from |+...+>, with
/// the Hamiltonian applied exactly but matrix-free.
Statevector adiabatic_reference(const IsingInstance& instance, double T, double a, int steps);

/// |<a|b>|^2
double fidelity(const Statevector& a, const Statevector& b);

double ground_probability(const Statevector& state, std::span<const double> diag, double ground_energy);
double ground_probability(const Statevector& state, const IsingInstance& instance, double ground_energy);

struct ShotCostModel {
    double prep_meas_time = 1.0e-6;
    double gate_time = 10e-9;
};

/// Parallel ZZ rounds for the complete graph: n-1 for even n, n for odd n.
int zz_rounds(int n);

double shot_time(int n, int p, const ShotCostModel& cost = {});

struct DaqcResult {
    QaoaSchedule schedule;
    double ground_prob = 0.0;
    double shot_time_s = 0.0;
    TtsRecord record;
};

DaqcResult daqc_tts(const IsingInstance& instance, int p, double ground_energy, const ShotCostModel& cost = {},
                    double a = kDefaultCubic, double L = 0.0, kernels::Exec exec = kernels::Exec::Parallel);

struct VariationalReport {
    double r99_baseline;
    double r99_after_ee_opt;
    double r99_after_r99_opt;
    double ee_ratio() const { return r99_after_ee_opt / r99_baseline; }
    double r99_ratio() const { return r99_after_r99_opt / r99_baseline; }
    int ee_evaluations = 0;
    int r99_evaluations = 0;
};

VariationalReport variational_experiment(const IsingInstance& instance, double ground_energy, int p = 4,
                                         int evals = 100, kernels::Exec exec = kernels::Exec::Parallel);

}  // namespace mct::daqc
