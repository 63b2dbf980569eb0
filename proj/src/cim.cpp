#include "mct/cim.hpp"

#include <algorithm>

namespace mct::cim {

std::string_view to_string(Mode m) { return m == Mode::ClosedLoop ? "closed" : "open"; }

Mode mode_from_string(std::string_view s) {
    if (s == "closed" || s == "closed-loop" || s == "ClosedLoop") return Mode::ClosedLoop;
    if (s == "open" || s == "open-loop" || s == "OpenLoop") return Mode::OpenLoop;
    throw std::invalid_argument("unknown CIM mode '" + std::string(s) + "'");
}

Diagnosis diagnose(double energy, double e_opt, const FeedbackConstants& fb) {
    const double x = std::isinf(e_opt) ? -1.0 : std::tanh((energy - e_opt) / fb.delta_scale);
    return {fb.alpha + fb.rho_a * x, fb.pi_pump - fb.rho_p * x};
}

double inferred_energy(const IsingInstance& instance, std::span<const int> spins) {
    const int n = instance.n();
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto row = instance.row(i);
        double local = 0.0;
        for (int k = i + 1; k < n; ++k) local += row[k] * spins[k];
        e -= spins[i] * local;
    }
    return e;
}

OptimizeResult optimize_over_grid(std::span<const double> t_max_grid,
                                  const std::function<GridPoint(double)>& evaluate) {
    if (t_max_grid.empty()) throw std::invalid_argument("t_max grid is empty");
    OptimizeResult out;
    for (double t : t_max_grid) out.grid.push_back(evaluate(t));
    const GridPoint* best = nullptr;
    for (const auto& g : out.grid) {
        if (!g.record.solved()) continue;
        if (!best || g.record.tts_normalized < best->record.tts_normalized ||
            (g.record.tts_normalized == best->record.tts_normalized && g.t_max < best->t_max))
            best = &g;
    }
    if (best) {
        out.solved = true;
        out.best = best->record;
    } else {
        // Unsolved: report the longest runtime tried.
        const auto longest = std::max_element(out.grid.begin(), out.grid.end(),
                                              [](const auto& a, const auto& b) { return a.t_max < b.t_max; });
        out.best = longest->record;
    }
    return out;
}

}  // namespace mct::cim
