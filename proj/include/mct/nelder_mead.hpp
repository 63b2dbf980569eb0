#pragma once

// Derivative-free simplex minimizer with a hard budget on objective calls.

#include <functional>
#include <vector>

namespace mct {

struct NelderMeadOptions {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    /// Initial simplex: x0 plus x0 + step * e_k for each coordinate.
    double initial_step = 0.05;
    int max_evaluations = 100;
};

struct NelderMeadResult {
    std::vector<double> x;   ///< best point seen
    double value;            ///< objective at x
    int evaluations;
};

/// Returns the best point evaluated. With max_evaluations == 0 the start
/// point is returned unevaluated and value is NaN.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             const NelderMeadOptions& options = {});

}  // namespace mct
