#include "mct/cim_discrete.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mct::cim {

void DiscreteCimParams::validate() const {
    if (!(loss_per_rt > 0.0)) throw std::invalid_argument("loss_per_rt must be positive");
    if (!(j > 0.0)) throw std::invalid_argument("j must be positive");
    if (!(g2 > 0.0)) throw std::invalid_argument("g2 must be positive");
    if (crystal_substeps < 1) throw std::invalid_argument("crystal_substeps must be >= 1");
    if (n_roundtrips_max < 0) throw std::invalid_argument("n_roundtrips_max must be >= 0");
    if (!(feedback.delta_scale > 0.0)) throw std::invalid_argument("delta_scale must be positive");
    if (!(rt_wallclock > 0.0)) throw std::invalid_argument("rt_wallclock must be positive");
}

double DiscreteCimParams::transmit2() const { return std::exp(-2.0 * loss_per_rt); }
double DiscreteCimParams::r_out2() const { return -std::expm1(-2.0 * j * loss_per_rt); }

void map_background_loss(PulseState& s, double transmit2) {
    if (!(transmit2 > 0.0 && transmit2 <= 1.0)) throw std::invalid_argument("transmit2 outside (0, 1]");
    const double t = std::sqrt(transmit2);
    const double r2 = 1.0 - transmit2;
    s.mean[0] *= t;
    s.mean[1] *= t;
    for (auto& c : s.cov) c *= transmit2;
    s.cov[0] += 0.5 * r2;
    s.cov[3] += 0.5 * r2;
}

namespace {

// Signal X mean, pump X mean, signal X/P variances, pump X/P variances,
// and the X-X and P-P signal/pump covariances.
using Crystal = std::array<double, 8>;

Crystal crystal_rhs(const Crystal& y, double eps) {
    const double xi = y[0], xb = y[1], vxi = y[2], vpi = y[3], vxb = y[4], vpb = y[5], cx = y[6], cp = y[7];
    return {
        eps * xb * xi + eps * (cx + cp),
        -0.5 * eps * xi * xi - 0.5 * eps * (vxi - vpi),
        2.0 * eps * (xb * vxi + xi * cx),
        2.0 * eps * (-xb * vpi + xi * cp),
        -2.0 * eps * xi * cx,
        -2.0 * eps * xi * cp,
        eps * xi * (vxb - vxi) + eps * xb * cx,
        eps * xi * (vpb - vpi) - eps * xb * cp,
    };
}

Crystal axpy(const Crystal& y, double h, const Crystal& k) {
    Crystal out;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = y[i] + h * k[i];
    return out;
}

std::int64_t open_loop_length(const DiscreteCimParams& p) { return std::max<std::int64_t>(p.n_roundtrips_max, 1); }

}  // namespace

void map_crystal(PulseState& s, double pump_mean, double eps_tau, int substeps) {
    if (substeps < 1) throw std::invalid_argument("substeps must be >= 1");
    const double scale = 1e-12 * (1.0 + std::abs(s.mean[0]) + s.cov[0] + s.cov[3]);
    if (std::abs(s.mean[1]) > scale || std::abs(s.cov[1]) > scale)
        throw std::invalid_argument("crystal map needs <P> = 0 and no X-P correlation");
    Crystal y{s.mean[0], pump_mean, s.cov[0], s.cov[3], 0.5, 0.5, 0.0, 0.0};
    // Strongly driven pulses exchange energy with the pump within one pass;
    // refine so that each substep stays well inside the RK4 stability region.
    const double rate = std::abs(eps_tau) * (std::abs(y[0]) + std::abs(y[1]) + std::sqrt(y[2] + y[3]));
    const int steps = std::max(substeps, static_cast<int>(std::ceil(rate / kCrystalStepRate)));
    const double h = 1.0 / steps;
    for (int k = 0; k < steps; ++k) {
        const Crystal k1 = crystal_rhs(y, eps_tau);
        const Crystal k2 = crystal_rhs(axpy(y, 0.5 * h, k1), eps_tau);
        const Crystal k3 = crystal_rhs(axpy(y, 0.5 * h, k2), eps_tau);
        const Crystal k4 = crystal_rhs(axpy(y, h, k3), eps_tau);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    for (double v : y)
        if (!std::isfinite(v)) throw DivergenceError("non-finite value in crystal propagation");
    s.mean = {y[0], 0.0};
    s.cov = {y[2], 0.0, 0.0, y[3]};
}

CrystalCalibration calibrate_crystal(double p, double g2, double loss_per_rt) {
    const double g = std::sqrt(g2);
    return {g * std::sqrt(2.0 * loss_per_rt), (p / g) * std::sqrt(0.5 * loss_per_rt)};
}

double map_outcouple_and_homodyne(PulseState& s, double r_out2, double z) {
    if (!(r_out2 > 0.0 && r_out2 < 1.0)) throw std::invalid_argument("r_out2 outside (0, 1)");
    const double r = std::sqrt(r_out2);
    const double t2 = 1.0 - r_out2;
    const double t = std::sqrt(t2);
    const double vx = s.cov[0];
    const double vp = s.cov[3];

    // Joint Gaussian after the beamsplitter; only the probe X quadrature is read.
    const double probe_mean = r * s.mean[0];
    const double probe_var = r_out2 * vx + 0.5 * t2;
    const double corr_x = t * r * (vx - 0.5);
    const double m = probe_mean + std::sqrt(probe_var) * z;

    s.mean[0] = t * s.mean[0] + (m - probe_mean) / probe_var * corr_x;
    s.mean[1] = t * s.mean[1];
    s.cov[0] = t2 * vx + 0.5 * r_out2 - corr_x * corr_x / probe_var;
    s.cov[3] = t2 * vp + 0.5 * r_out2;
    s.cov[1] *= t2;
    s.cov[2] *= t2;
    return m;
}

double map_outcouple_and_homodyne(PulseState& s, double r_out2, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    return map_outcouple_and_homodyne(s, r_out2, normal(rng));
}

DiscreteCimState init_discrete_state(int n, const DiscreteCimParams& params) {
    if (n < 1) throw std::invalid_argument("need at least one pulse");
    DiscreteCimState s;
    const auto un = static_cast<std::size_t>(n);
    s.pulses.assign(un, PulseState{});
    s.e.assign(un, 1.0);
    s.spins.assign(un, 1);
    s.measurements.assign(un, 0.0);
    if (params.mode == Mode::ClosedLoop) {
        const auto d = diagnose(kInfinity, kInfinity, params.feedback);
        s.a = d.a;
        s.p = d.p;
    } else {
        s.p = params.p_start;
    }
    return s;
}

RoundtripDiagnostics roundtrip(DiscreteCimState& s, const IsingInstance& instance, const DiscreteCimParams& params,
                               Rng& rng) {
    const int n = instance.n();
    const double loss = params.loss_per_rt;
    const double transmit2 = params.transmit2();
    const double r_out2 = params.r_out2();
    const double r_out = std::sqrt(r_out2);
    const auto cal = calibrate_crystal(s.p, params.g2, loss);

    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> inferred(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        PulseState& pulse = s.pulses[i];
        map_background_loss(pulse, transmit2);
        map_crystal(pulse, cal.pump_mean, cal.eps_tau, params.crystal_substeps);
        s.measurements[i] = map_outcouple_and_homodyne(pulse, r_out2, normal(rng));
        inferred[i] = s.measurements[i] / r_out / std::sqrt(2.0);
        s.spins[i] = spin_of(inferred[i]);
    }
    s.energy = inferred_energy(instance, s.spins);

    const double gain = params.scaling == FeedbackScaling::Continuum ? params.j * loss / r_out : 1.0;
    for (int i = 0; i < n; ++i) {
        const auto row = instance.row(i);
        double field = 0.0;
        for (int k = 0; k < n; ++k) field += row[k] * s.measurements[k];
        map_feedback(s.pulses[i], s.e[i] * gain * field);
    }

    ++s.roundtrips;
    if (params.mode == Mode::ClosedLoop) {
        const auto d = diagnose(s.energy, s.e_opt, params.feedback);
        s.a = d.a;
        s.p = d.p;
        const double beta = params.feedback.beta_rate;
        for (int i = 0; i < n; ++i) {
            s.e[i] *= std::exp(-beta * (params.g2 * inferred[i] * inferred[i] - s.a) * loss);
            if (!(std::isfinite(s.e[i]) && s.e[i] > 0.0))
                throw DivergenceError("feedback amplitude left (0, inf) at round trip " +
                                      std::to_string(s.roundtrips));
        }
    } else {
        const double frac = static_cast<double>(s.roundtrips) / static_cast<double>(open_loop_length(params));
        s.p = params.p_start + (params.p_end - params.p_start) * std::min(frac, 1.0);
    }
    s.e_opt = std::min(s.e_opt, s.energy);
    if (s.energy < s.best_energy) {
        s.best_energy = s.energy;
        s.best_spins = s.spins;
    }

    RoundtripDiagnostics diag;
    for (const auto& pulse : s.pulses) {
        if (!std::isfinite(pulse.mean[0]) || !std::isfinite(pulse.cov[0]) || !std::isfinite(pulse.cov[3]))
            throw DivergenceError("non-finite pulse state at round trip " + std::to_string(s.roundtrips));
        diag.min_det = std::min(diag.min_det, pulse.det());
        diag.min_var = std::min({diag.min_var, pulse.cov[0], pulse.cov[3]});
    }
    return diag;
}

TrialResult run_trial_discrete(const IsingInstance& instance, const DiscreteCimParams& params, double ground_energy,
                               Rng& rng) {
    params.validate();
    TrialResult result;
    DiscreteCimState s = init_discrete_state(instance.n(), params);
    auto record = [&] {
        std::vector<double> mu, vx, vp;
        for (const auto& pulse : s.pulses) {
            mu.push_back(pulse.mean[0] / std::sqrt(2.0));
            vx.push_back(pulse.cov[0]);
            vp.push_back(pulse.cov[3]);
        }
        result.trajectory.push_back(
            {static_cast<double>(s.roundtrips), s.energy, s.a, s.p, std::move(mu), std::move(vx), std::move(vp), s.e});
    };
    if (params.record_every > 0) record();
    try {
        for (std::int64_t k = 0; k < params.n_roundtrips_max; ++k) {
            roundtrip(s, instance, params, rng);
            if (!result.hit_time && s.energy <= ground_energy + kSuccessTolerance)
                result.hit_time = static_cast<double>(s.roundtrips);
            if (params.record_every > 0 && s.roundtrips % params.record_every == 0) record();
            if (result.hit_time && params.stop_at_hit) break;
        }
    } catch (const DivergenceError& err) {
        result.aborted = true;
        result.diagnostic = err.what();
    }
    result.steps = s.roundtrips;
    result.min_energy = s.best_energy;
    result.success = result.hit_time.has_value();
    return result;
}

SuccessEstimate success_probability(const IsingInstance& instance, const DiscreteCimParams& params,
                                    double ground_energy, int trials, std::uint64_t seed, kernels::Exec exec) {
    return success_probability([&](Rng& rng) { return run_trial_discrete(instance, params, ground_energy, rng); },
                               trials, seed, exec);
}

OptimizeResult optimize_tts(const IsingInstance& instance, const DiscreteCimParams& params, double ground_energy,
                            std::span<const double> roundtrip_grid, int trials, std::uint64_t seed,
                            kernels::Exec exec) {
    return optimize_over_grid(roundtrip_grid, [&](double length) {
        DiscreteCimParams p = params;
        p.n_roundtrips_max = static_cast<std::int64_t>(std::llround(length));
        const auto est = success_probability(instance, p, ground_energy, trials,
                                             derive_seed(seed, {static_cast<std::uint64_t>(p.n_roundtrips_max)}),
                                             exec);
        auto rec = tts_from_ps(est.ps, static_cast<double>(p.n_roundtrips_max), 1.0 / p.rt_wallclock);
        rec.n = instance.n();
        rec.solver = std::string("cim-disc-") + std::string(to_string(p.mode));
        return GridPoint{length, est, rec};
    });
}

}  // namespace mct::cim
