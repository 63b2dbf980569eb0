#pragma once

#include <cstdint>
#include <limits>
#include <string>

namespace mct {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Number of independent repetitions needed for 99% cumulative success,
/// ln(0.01)/ln(1-ps), clamped to >= 1. Infinite for ps == 0.
double r99(double ps);

struct TtsRecord {
    std::string instance_id;
    int n = 0;
    std::string solver;
    double ps = 0.0;
    double r99 = kInfinity;
    /// Per-trial duration in the solver's native unit (normalized time, round trips, shots).
    double trial_length = 0.0;
    double tts_normalized = kInfinity;
    double tts_wallclock_s = kInfinity;

    bool solved() const { return tts_wallclock_s < kInfinity; }
};

/// t_s = R99 * t_max in normalized time; wall clock T = t_s / gamma_s.
TtsRecord tts_from_ps(double ps, double t_max, double gamma_s_wallclock);

}  // namespace mct
