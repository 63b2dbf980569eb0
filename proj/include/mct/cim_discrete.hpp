#pragma once

// Discrete-map Gaussian model of the measurement-feedback CIM. One round trip
// is background loss, crystal propagation with a fresh pump pulse, out-coupling
// with homodyne detection, then feedback displacement. Pulse states are kept in
// X/P quadrature units (vacuum covariance I/2), so mu = <X>/sqrt(2).

#include <array>
#include <span>
#include <vector>

#include "mct/cim.hpp"

namespace mct::cim {

struct PulseState {
    std::array<double, 2> mean{0.0, 0.0};              ///< (<X>, <P>)
    std::array<double, 4> cov{0.5, 0.0, 0.0, 0.5};     ///< row-major 2x2

    double var_x() const { return cov[0]; }
    double var_p() const { return cov[3]; }
    double det() const { return cov[0] * cov[3] - cov[1] * cov[2]; }
};

/// How the homodyne record is scaled into the feedback displacement.
enum class FeedbackScaling {
    /// v_i = e_i (j*loss/r_out) sum_k J_ik m_k, the scaling that reduces to the
    /// continuous model's j e_i sum_k J_ik mu~_k dt.
    Continuum,
    /// v_i = e_i sum_k J_ik m_k, without any rate factor.
    Raw,
};

struct DiscreteCimParams {
    double loss_per_rt = 0.1;   ///< gamma_s * dT_c
    double j = 1.0;             ///< out-coupling rate relative to background loss
    double g2 = 1e-4;
    int crystal_substeps = 32;
    std::int64_t n_roundtrips_max = 200;
    FeedbackConstants feedback;
    Mode mode = Mode::ClosedLoop;
    FeedbackScaling scaling = FeedbackScaling::Continuum;
    double p_start = 0.5;
    double p_end = 1.0;
    double rt_wallclock = 10e-9;  ///< seconds per round trip
    bool stop_at_hit = true;
    int record_every = 0;

    void validate() const;
    /// Background power transmission per round trip, exp(-2 loss).
    double transmit2() const;
    /// Out-coupler reflectivity, 1 - exp(-2 j loss).
    double r_out2() const;
};

void map_background_loss(PulseState& s, double transmit2);

/// Largest eps_tau * amplitude per RK4 substep in the crystal map.
inline constexpr double kCrystalStepRate = 0.05;

/// Joint signal/pump propagation over unit interaction time (RK4). The pump
/// starts coherent with X mean `pump_mean` and is traced out afterwards.
/// `substeps` is a minimum; strongly driven pulses get more.
void map_crystal(PulseState& s, double pump_mean, double eps_tau, int substeps);

/// Crystal settings that give a small-signal X gain exp(p*loss) per pass and
/// the -g^2 mu^2 depletion term of the continuous model.
struct CrystalCalibration {
    double eps_tau;
    double pump_mean;
};
CrystalCalibration calibrate_crystal(double p, double g2, double loss_per_rt);

/// Beamsplitter to a vacuum probe, then conditioning on a sampled homodyne
/// result of the probe's X quadrature. Returns the measurement.
double map_outcouple_and_homodyne(PulseState& s, double r_out2, Rng& rng);

/// Same map with the probe's standard normal deviate supplied by the caller.
double map_outcouple_and_homodyne(PulseState& s, double r_out2, double z);

inline void map_feedback(PulseState& s, double v) { s.mean[0] += v; }

struct DiscreteCimState {
    std::vector<PulseState> pulses;
    std::vector<double> e;
    std::int64_t roundtrips = 0;
    double e_opt = kInfinity;
    double best_energy = kInfinity;
    std::vector<int> best_spins;
    double energy = kInfinity;
    double a = 0.0;
    double p = 0.0;     ///< pump used for the next crystal pass
    std::vector<int> spins;
    std::vector<double> measurements;
};

DiscreteCimState init_discrete_state(int n, const DiscreteCimParams& params);

struct RoundtripDiagnostics {
    double min_det = kInfinity;
    double min_var = kInfinity;
};

/// One round trip over all pulses. The feedback step consumes every
/// measurement of the current round trip.
RoundtripDiagnostics roundtrip(DiscreteCimState& state, const IsingInstance& instance,
                               const DiscreteCimParams& params, Rng& rng);

TrialResult run_trial_discrete(const IsingInstance& instance, const DiscreteCimParams& params,
                               double ground_energy, Rng& rng);

SuccessEstimate success_probability(const IsingInstance& instance, const DiscreteCimParams& params,
                                    double ground_energy, int trials, std::uint64_t seed,
                                    kernels::Exec exec = kernels::Exec::Parallel);

/// Grid over trial lengths in round trips. TTS is reported in round trips
/// (tts_normalized) and seconds (round trips * rt_wallclock).
OptimizeResult optimize_tts(const IsingInstance& instance, const DiscreteCimParams& params,
                            double ground_energy, std::span<const double> roundtrip_grid, int trials,
                            std::uint64_t seed, kernels::Exec exec = kernels::Exec::Parallel);

}  // namespace mct::cim
