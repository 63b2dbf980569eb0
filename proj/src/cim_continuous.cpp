#include "mct/cim_continuous.hpp"

#include <cmath>
#include <random>

namespace mct::cim {

void ContinuousCimParams::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(t_max >= 0.0)) throw std::invalid_argument("t_max must be non-negative");
    if (!(g2 > 0.0)) throw std::invalid_argument("g2 must be positive");
    if (!(j > 0.0)) throw std::invalid_argument("j must be positive");
    if (!(feedback.delta_scale > 0.0)) throw std::invalid_argument("delta_scale must be positive");
    if (!(gamma_s_wallclock > 0.0)) throw std::invalid_argument("gamma_s must be positive");
}

CimState init_state(int n) {
    if (n < 1) throw std::invalid_argument("need at least one OPO");
    CimState s;
    const auto un = static_cast<std::size_t>(n);
    s.mu.assign(un, 0.0);
    s.sigma.assign(un, 0.5);
    s.eta.assign(un, 0.5);
    s.e.assign(un, 1.0);
    s.spins.assign(un, 1);
    return s;
}

namespace {

std::int64_t step_count(double t_max, double dt) {
    if (t_max <= 0.0) return 0;
    return static_cast<std::int64_t>(std::ceil(t_max / dt - 1e-9));
}

Snapshot snapshot(const CimState& s) {
    return {s.t, s.energy, s.a, s.p, s.mu, s.sigma, s.eta, s.e};
}

}  // namespace

void step_with_noise(CimState& s, const IsingInstance& instance, const ContinuousCimParams& params,
                     std::span<const double> w) {
    const int n = instance.n();
    const double dt = params.dt;
    const double j = params.j;
    const double g2 = params.g2;

    // Homodyne inference and spin readout.
    const double inference = std::sqrt(1.0 / (4.0 * j));
    std::vector<double> inferred(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        inferred[i] = s.mu[i] + inference * w[i];
        s.spins[i] = spin_of(inferred[i]);
    }
    s.energy = inferred_energy(instance, s.spins);

    double p;
    if (params.mode == Mode::ClosedLoop) {
        const auto d = diagnose(s.energy, s.e_opt, params.feedback);
        s.a = d.a;
        p = d.p;
    } else {
        const double frac = params.t_max > 0.0 ? s.t / params.t_max : 0.0;
        p = params.p_start + (params.p_end - params.p_start) * frac;
    }
    s.p = p;

    bool finite = true;
    for (int i = 0; i < n; ++i) {
        const double mu = s.mu[i];
        const double mu2 = g2 * mu * mu;
        const auto row = instance.row(i);
        double field = 0.0;
        for (int k = 0; k < n; ++k) field += row[k] * inferred[k];

        const double sig = s.sigma[i];
        const double eta = s.eta[i];
        const double dmu = ((-(1.0 + j) + p - mu2) * mu + j * s.e[i] * field) * dt +
                           std::sqrt(j) * (sig - 0.5) * w[i] * dt;
        const double dsig = (2.0 * (-(1.0 + j) + p - 3.0 * mu2) * sig - 2.0 * j * (sig - 0.5) * (sig - 0.5) +
                             ((1.0 + j) + 2.0 * mu2)) * dt;
        const double deta = (2.0 * (-(1.0 + j) - p - mu2) * eta + ((1.0 + j) + 2.0 * mu2)) * dt;
        s.mu[i] = mu + dmu;
        s.sigma[i] = sig + dsig;
        s.eta[i] = eta + deta;
        finite = finite && std::isfinite(s.mu[i]) && std::isfinite(s.sigma[i]) && std::isfinite(s.eta[i]);
    }

    if (params.mode == Mode::ClosedLoop) {
        const double beta = params.feedback.beta_rate;
        for (int i = 0; i < n; ++i) {
            s.e[i] *= std::exp(-beta * (g2 * inferred[i] * inferred[i] - s.a) * dt);
            finite = finite && std::isfinite(s.e[i]) && s.e[i] > 0.0;
        }
    }
    if (!finite)
        throw DivergenceError("non-finite CIM state at t=" + std::to_string(s.t) + "; reduce dt");

    s.e_opt = std::min(s.e_opt, s.energy);
    if (s.energy < s.best_energy) {
        s.best_energy = s.energy;
        s.best_spins = s.spins;
    }
    ++s.steps;
    s.t = static_cast<double>(s.steps) * dt;
}

void step(CimState& state, const IsingInstance& instance, const ContinuousCimParams& params, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double scale = 1.0 / std::sqrt(params.dt);
    std::vector<double> w(state.mu.size());
    for (auto& x : w) x = normal(rng) * scale;
    step_with_noise(state, instance, params, w);
}

TrialResult run_trial(const IsingInstance& instance, const ContinuousCimParams& params, double ground_energy,
                      Rng& rng) {
    params.validate();
    TrialResult result;
    CimState s = init_state(instance.n());
    const std::int64_t total = step_count(params.t_max, params.dt);
    if (params.record_every > 0) result.trajectory.push_back(snapshot(s));
    try {
        for (std::int64_t k = 0; k < total; ++k) {
            const double t_measure = s.t;
            step(s, instance, params, rng);
            if (!result.hit_time && s.energy <= ground_energy + kSuccessTolerance) result.hit_time = t_measure;
            if (params.record_every > 0 && s.steps % params.record_every == 0) result.trajectory.push_back(snapshot(s));
            if (result.hit_time && params.stop_at_hit) break;
        }
    } catch (const DivergenceError& err) {
        result.aborted = true;
        result.diagnostic = err.what();
    }
    result.steps = s.steps;
    result.min_energy = s.best_energy;
    result.success = result.hit_time.has_value();
    return result;
}

SuccessEstimate success_probability(const IsingInstance& instance, const ContinuousCimParams& params,
                                    double ground_energy, int trials, std::uint64_t seed, kernels::Exec exec) {
    return success_probability([&](Rng& rng) { return run_trial(instance, params, ground_energy, rng); }, trials,
                               seed, exec);
}

OptimizeResult optimize_tts(const IsingInstance& instance, const ContinuousCimParams& params, double ground_energy,
                            std::span<const double> t_max_grid, int trials, std::uint64_t seed,
                            kernels::Exec exec) {
    return optimize_over_grid(t_max_grid, [&](double t_max) {
        ContinuousCimParams p = params;
        p.t_max = t_max;
        const auto est = success_probability(instance, p, ground_energy, trials,
                                             derive_seed(seed, {static_cast<std::uint64_t>(t_max * 1e6)}), exec);
        auto rec = tts_from_ps(est.ps, t_max, p.gamma_s_wallclock);
        rec.n = instance.n();
        rec.solver = std::string("cim-cont-") + std::string(to_string(p.mode));
        return GridPoint{t_max, est, rec};
    });
}

}  // namespace mct::cim
