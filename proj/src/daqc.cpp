#include "mct/daqc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mct/nelder_mead.hpp"

namespace mct::daqc {

namespace {

void check_size(int n, int cap) {
    if (n < 1 || n > cap)
        throw std::invalid_argument("register of " + std::to_string(n) + " qubits outside [1, " + std::to_string(cap) +
                                    "]");
}

// Antiderivative of s(u) in u.
double schedule_integral(double u, double a) {
    const double u2 = u * u;
    return 0.5 * u2 + a * (0.25 * u2 * u2 - 0.5 * u2 * u + 0.25 * u2);
}

double clamp_prob(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

double schedule_s(double u, double a) { return u + a * u * (u - 0.5) * (u - 1.0); }

double problem_norm(const IsingInstance& instance) {
    const double s = instance.coupling_sum_sq();
    return s > 0.0 ? std::sqrt(s) : 1.0;
}

QaoaSchedule build_schedule(const IsingInstance& instance, int p, double a, double L) {
    if (p < 0) throw std::invalid_argument("layer count must be non-negative");
    if (!(a >= 0.0 && a <= 4.0)) throw std::invalid_argument("cubic coefficient outside [0, 4]");
    if (!(L > 0.0)) throw std::invalid_argument("layer time must be positive");
    QaoaSchedule sch;
    sch.p = p;
    sch.a = a;
    sch.L = L;
    sch.T = p * L;
    const double hp = problem_norm(instance);
    const double hm = std::sqrt(static_cast<double>(instance.n()));
    for (int k = 1; k <= p; ++k) {
        const double u0 = static_cast<double>(k - 1) / p;
        const double u1 = static_cast<double>(k) / p;
        const double int_s = sch.T * (schedule_integral(u1, a) - schedule_integral(u0, a));
        const double int_rest = sch.T * (u1 - u0) - int_s;
        sch.gamma.push_back(int_s / hp);
        sch.beta.push_back(int_rest / hm);
    }
    return sch;
}

Statevector Statevector::uniform(int n) {
    check_size(n, kStatevectorCap);
    const std::size_t dim = std::size_t{1} << n;
    return {n, std::vector<Complex>(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0))};
}

Statevector Statevector::basis(int n, std::uint64_t index) {
    check_size(n, kStatevectorCap);
    const std::size_t dim = std::size_t{1} << n;
    if (index >= dim) throw std::invalid_argument("basis index out of range");
    Statevector s{n, std::vector<Complex>(dim)};
    s.amps[index] = 1.0;
    return s;
}

double Statevector::norm() const { return std::sqrt(kernels::norm_sq(amps)); }

std::vector<double> diagonal(const IsingInstance& instance, kernels::Exec exec) {
    check_size(instance.n(), kStatevectorCap);
    std::vector<double> d(std::size_t{1} << instance.n());
    kernels::diagonal_energies(instance, d, exec);
    return d;
}

void apply_phase_layer(Statevector& state, std::span<const double> diag, double gamma, kernels::Exec exec) {
    if (diag.size() != state.amps.size()) throw std::invalid_argument("diagonal size mismatch");
    kernels::apply_phase(state.amps, diag, gamma, exec);
}

void apply_phase_layer(Statevector& state, const IsingInstance& instance, double gamma, kernels::Exec exec) {
    if (instance.n() != state.n) throw std::invalid_argument("instance size mismatch");
    const auto d = diagonal(instance, exec);
    apply_phase_layer(state, d, gamma, exec);
}

void apply_mixer_layer(Statevector& state, double beta, kernels::Exec exec) {
    kernels::apply_x_rotation(state.amps, state.n, beta, exec);
}

Statevector run_qaoa(int n, std::span<const double> diag, std::span<const double> gamma,
                     std::span<const double> beta, kernels::Exec exec) {
    if (gamma.size() != beta.size()) throw std::invalid_argument("gamma and beta lengths differ");
    Statevector s = Statevector::uniform(n);
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        apply_phase_layer(s, diag, gamma[k], exec);
        // Driver -sum X: exp(+i beta sum X).
        apply_mixer_layer(s, -beta[k], exec);
    }
    return s;
}

Statevector run_qaoa(const IsingInstance& instance, const QaoaSchedule& schedule, kernels::Exec exec) {
    const auto d = diagonal(instance, exec);
    return run_qaoa(instance.n(), d, schedule.gamma, schedule.beta, exec);
}

Statevector adiabatic_reference(const IsingInstance& instance, double T, double a, int steps) {
    const int n = instance.n();
    check_size(n, kAdiabaticCap);
    if (!(T >= 0.0)) throw std::invalid_argument("anneal time must be non-negative");
    if (steps < 1) throw std::invalid_argument("need at least one step");
    Statevector psi = Statevector::uniform(n);
    if (T == 0.0) return psi;

    const auto diag = diagonal(instance, kernels::Exec::Serial);
    const double hp = problem_norm(instance);
    const double hm = std::sqrt(static_cast<double>(n));
    const std::size_t dim = psi.amps.size();

    // k = -i H(u) y
    auto deriv = [&](double u, const std::vector<Complex>& y, std::vector<Complex>& k) {
        const double s = schedule_s(u, a);
        const double cp = s / hp;
        const double cm = -(1.0 - s) / hm;
        for (std::size_t x = 0; x < dim; ++x) {
            Complex acc = cp * diag[x] * y[x];
            Complex flips = 0.0;
            for (int q = 0; q < n; ++q) flips += y[x ^ (std::size_t{1} << q)];
            acc += cm * flips;
            k[x] = Complex(acc.imag(), -acc.real());
        }
    };

    const double h = T / steps;
    std::vector<Complex> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    auto& y = psi.amps;
    for (int step = 0; step < steps; ++step) {
        const double u0 = static_cast<double>(step) / steps;
        const double um = (step + 0.5) / steps;
        const double u1 = static_cast<double>(step + 1) / steps;
        deriv(u0, y, k1);
        for (std::size_t x = 0; x < dim; ++x) tmp[x] = y[x] + 0.5 * h * k1[x];
        deriv(um, tmp, k2);
        for (std::size_t x = 0; x < dim; ++x) tmp[x] = y[x] + 0.5 * h * k2[x];
        deriv(um, tmp, k3);
        for (std::size_t x = 0; x < dim; ++x) tmp[x] = y[x] + h * k3[x];
        deriv(u1, tmp, k4);
        for (std::size_t x = 0; x < dim; ++x) y[x] += h / 6.0 * (k1[x] + 2.0 * k2[x] + 2.0 * k3[x] + k4[x]);
    }
    return psi;
}

double fidelity(const Statevector& a, const Statevector& b) {
    if (a.amps.size() != b.amps.size()) throw std::invalid_argument("state sizes differ");
    Complex overlap = 0.0;
    for (std::size_t x = 0; x < a.amps.size(); ++x) overlap += std::conj(a.amps[x]) * b.amps[x];
    return std::norm(overlap);
}

double ground_probability(const Statevector& state, std::span<const double> diag, double ground_energy) {
    return clamp_prob(kernels::probability_at_or_below(state.amps, diag, ground_energy + kGroundTolerance));
}

double ground_probability(const Statevector& state, const IsingInstance& instance, double ground_energy) {
    return ground_probability(state, diagonal(instance), ground_energy);
}

int zz_rounds(int n) {
    if (n < 2) return 0;
    return n % 2 == 0 ? n - 1 : n;
}

double shot_time(int n, int p, const ShotCostModel& cost) {
    if (!(cost.prep_meas_time > 0.0 && cost.gate_time > 0.0)) throw std::invalid_argument("cost times must be positive");
    return cost.prep_meas_time + p * (zz_rounds(n) + 1) * cost.gate_time;
}

DaqcResult daqc_tts(const IsingInstance& instance, int p, double ground_energy, const ShotCostModel& cost, double a,
                    double L, kernels::Exec exec) {
    DaqcResult out;
    out.schedule = build_schedule(instance, p, a, L > 0.0 ? L : default_layer_time(instance.n()));
    const auto diag = diagonal(instance, exec);
    const auto psi = run_qaoa(instance.n(), diag, out.schedule.gamma, out.schedule.beta, exec);
    out.ground_prob = ground_probability(psi, diag, ground_energy);
    out.shot_time_s = shot_time(instance.n(), p, cost);
    auto& rec = out.record;
    rec.n = instance.n();
    rec.solver = "daqc";
    rec.ps = out.ground_prob;
    rec.r99 = r99(out.ground_prob);
    rec.trial_length = out.shot_time_s;
    if (std::isfinite(rec.r99)) {
        rec.tts_wallclock_s = rec.r99 * out.shot_time_s;
        rec.tts_normalized = rec.r99 * p;
    }
    return out;
}

VariationalReport variational_experiment(const IsingInstance& instance, double ground_energy, int p, int evals,
                                         kernels::Exec exec) {
    const int n = instance.n();
    if (n > 20) throw std::invalid_argument("variational experiment limited to n <= 20");
    const auto sch = build_schedule(instance, p, kDefaultCubic, default_layer_time(n));
    const auto diag = diagonal(instance, exec);
    const auto up = static_cast<std::size_t>(p);

    auto state_of = [&](const std::vector<double>& x) {
        return run_qaoa(n, diag, std::span(x).first(up), std::span(x).subspan(up), exec);
    };
    auto r99_of = [&](const std::vector<double>& x) { return r99(ground_probability(state_of(x), diag, ground_energy)); };

    std::vector<double> x0 = sch.gamma;
    x0.insert(x0.end(), sch.beta.begin(), sch.beta.end());

    VariationalReport rep;
    rep.r99_baseline = r99_of(x0);

    NelderMeadOptions opt;
    opt.max_evaluations = evals;
    const auto ee = nelder_mead(
        [&](const std::vector<double>& x) { return kernels::expectation(state_of(x).amps, diag, exec); }, x0, opt);
    const auto rr = nelder_mead(r99_of, x0, opt);
    rep.r99_after_ee_opt = evals == 0 ? rep.r99_baseline : r99_of(ee.x);
    rep.r99_after_r99_opt = evals == 0 ? rep.r99_baseline : rr.value;
    rep.ee_evaluations = ee.evaluations;
    rep.r99_evaluations = rr.evaluations;
    return rep;
}

}  // namespace mct::daqc
