#pragma once

// Pieces shared by the continuous and discrete CIM models: the
// self-diagnosis law, trial bookkeeping and the Monte Carlo harness.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mct/instance.hpp"
#include "mct/kernels.hpp"
#include "mct/rng.hpp"
#include "mct/tts.hpp"

namespace mct::cim {

enum class Mode { ClosedLoop, OpenLoop };

std::string_view to_string(Mode m);
Mode mode_from_string(std::string_view s);

/// Energy match tolerance for declaring a ground-state hit.
inline constexpr double kSuccessTolerance = 1e-6;

/// Self-diagnosis and feedback constants. Defaults are the closed-loop
/// values alpha=1, pi=0.2, rho_a=rho_p=1, Delta=1/5, beta=1.
struct FeedbackConstants {
    double alpha = 1.0;
    double pi_pump = 0.2;
    double rho_a = 1.0;
    double rho_p = 1.0;
    double delta_scale = 0.2;
    double beta_rate = 1.0;
};

struct Diagnosis {
    double a;  ///< target squared amplitude
    double p;  ///< pump rate
};

/// a = alpha + rho_a tanh((E - E_opt)/Delta), p = pi - rho_p tanh(...).
/// With E_opt still +inf the tanh is taken at its saturated value -1.
Diagnosis diagnose(double energy, double e_opt, const FeedbackConstants& fb);

/// Spin from the sign of an inferred amplitude; zero maps to +1.
inline int spin_of(double amplitude) { return amplitude < 0.0 ? -1 : 1; }

/// -sum_{i<k} J_ik S_i S_k for spins stored as +-1.
double inferred_energy(const IsingInstance& instance, std::span<const int> spins);

class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One recorded point of a trajectory. Amplitudes are in units of
/// mu = <X>/sqrt(2); variances are <dX^2>, <dP^2>.
struct Snapshot {
    double t;
    double energy;
    double a;
    double p;
    std::vector<double> mu;
    std::vector<double> var_x;
    std::vector<double> var_p;
    std::vector<double> e;
};

struct TrialResult {
    bool success = false;
    /// First ground-state visit in the model's native time unit
    /// (normalized time for the continuous model, round trips for the discrete one).
    std::optional<double> hit_time;
    double min_energy = kInfinity;
    std::int64_t steps = 0;
    bool aborted = false;
    std::string diagnostic;
    std::vector<Snapshot> trajectory;
};

struct SuccessEstimate {
    double ps = 0.0;
    double stderr_ = 0.0;
    int successes = 0;
    int trials = 0;
    int aborted = 0;
};

/// Runs `trials` independent trials, each with its own stream
/// derive_seed(seed, {trial}). Order of evaluation never affects the result.
template <class TrialFn>
SuccessEstimate success_probability(TrialFn&& trial, int trials, std::uint64_t seed,
                                    kernels::Exec exec = kernels::Exec::Parallel) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    std::vector<std::uint8_t> ok(static_cast<std::size_t>(trials), 0);
    std::vector<std::uint8_t> bad(static_cast<std::size_t>(trials), 0);
    auto body = [&](int k) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(k)}));
        const TrialResult r = trial(rng);
        ok[k] = r.success ? 1 : 0;
        bad[k] = r.aborted ? 1 : 0;
    };
    if (exec == kernels::Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int k = 0; k < trials; ++k) body(k);
    } else {
        for (int k = 0; k < trials; ++k) body(k);
    }
    SuccessEstimate est;
    est.trials = trials;
    for (int k = 0; k < trials; ++k) {
        est.successes += ok[k];
        est.aborted += bad[k];
    }
    est.ps = static_cast<double>(est.successes) / trials;
    est.stderr_ = std::sqrt(est.ps * (1.0 - est.ps) / trials);
    return est;
}

struct GridPoint {
    double t_max;
    SuccessEstimate estimate;
    TtsRecord record;
};

struct OptimizeResult {
    bool solved = false;
    TtsRecord best;
    std::vector<GridPoint> grid;
};

/// Picks the minimum finite TTS over the grid (ties go to the smaller t_max).
/// `evaluate(t_max)` returns the grid point for one runtime.
OptimizeResult optimize_over_grid(std::span<const double> t_max_grid,
                                  const std::function<GridPoint(double)>& evaluate);

}  // namespace mct::cim
