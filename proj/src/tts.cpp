#include "mct/tts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mct {

double r99(double ps) {
    if (!(ps >= 0.0 && ps <= 1.0)) throw std::invalid_argument("success probability outside [0, 1]");
    if (ps == 0.0) return kInfinity;
    if (ps >= 0.99) return 1.0;
    return std::max(1.0, std::log(0.01) / std::log1p(-ps));
}

TtsRecord tts_from_ps(double ps, double t_max, double gamma_s_wallclock) {
    TtsRecord rec;
    rec.ps = ps;
    rec.r99 = r99(ps);
    rec.trial_length = t_max;
    if (std::isinf(rec.r99)) return rec;
    rec.tts_normalized = rec.r99 * t_max;
    rec.tts_wallclock_s = rec.tts_normalized / gamma_s_wallclock;
    return rec;
}

}  // namespace mct
