#pragma once

// Continuous-time Gaussian model of the measurement-feedback CIM. Each OPO is
// described by its mean field mu_i = <X_i>/sqrt(2) and the quadrature
// variances sigma_i = <dX_i^2>, eta_i = <dP_i^2>; time is normalized to the
// background amplitude decay rate (t = gamma_s T).

#include <span>
#include <vector>

#include "mct/cim.hpp"

namespace mct::cim {

struct ContinuousCimParams {
    double j = 1.0;        ///< normalized out-coupling rate J / gamma_s
    double g2 = 1e-4;      ///< saturation parameter
    double dt = 0.025;     ///< Euler-Maruyama step, equal to gamma_s * dT_c
    double t_max = 20.0;   ///< trial duration in normalized time
    Mode mode = Mode::ClosedLoop;
    FeedbackConstants feedback;
    double p_start = 0.5;  ///< open loop: pump at t = 0
    double p_end = 1.0;    ///< open loop: pump at t = t_max
    /// gamma_s in 1/s. Default is a 400 ns amplitude decay time.
    double gamma_s_wallclock = 1.0 / 400e-9;
    /// End the trial at the first ground-state hit; Ps does not depend on it.
    bool stop_at_hit = true;
    /// Keep a snapshot every `record_every` steps (0 disables recording).
    int record_every = 0;

    void validate() const;
};

struct CimState {
    std::vector<double> mu;
    std::vector<double> sigma;
    std::vector<double> eta;
    std::vector<double> e;
    double t = 0.0;
    std::int64_t steps = 0;
    double e_opt = kInfinity;
    double best_energy = kInfinity;
    std::vector<int> best_spins;
    // Last measurement, kept for diagnostics and trajectory dumps.
    double energy = kInfinity;
    double a = 0.0;
    double p = 0.0;
    std::vector<int> spins;
};

/// Vacuum start: mu = 0, sigma = eta = 1/2, e = 1.
CimState init_state(int n);

/// One step with externally supplied noise. `w[i] * sqrt(dt)` is the standard
/// normal draw for OPO i and is shared by inference, measurement drift and feedback.
void step_with_noise(CimState& state, const IsingInstance& instance, const ContinuousCimParams& params,
                     std::span<const double> w);

void step(CimState& state, const IsingInstance& instance, const ContinuousCimParams& params, Rng& rng);

TrialResult run_trial(const IsingInstance& instance, const ContinuousCimParams& params, double ground_energy,
                      Rng& rng);

SuccessEstimate success_probability(const IsingInstance& instance, const ContinuousCimParams& params,
                                    double ground_energy, int trials, std::uint64_t seed,
                                    kernels::Exec exec = kernels::Exec::Parallel);

OptimizeResult optimize_tts(const IsingInstance& instance, const ContinuousCimParams& params,
                            double ground_energy, std::span<const double> t_max_grid, int trials,
                            std::uint64_t seed, kernels::Exec exec = kernels::Exec::Parallel);

}  // namespace mct::cim
