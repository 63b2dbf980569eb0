#pragma once

// Data-parallel inner loops. Every kernel has a serial and an OpenMP path
// that produce bit-identical results: work is split into fixed-size blocks
// independent of the thread count, and block results are combined in block
// order.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "mct/instance.hpp"

namespace mct::kernels {

enum class Exec { Serial, Parallel };

using Complex = std::complex<double>;

/// Basis states per enumeration / reduction block.
inline constexpr std::uint64_t kBlockSize = std::uint64_t{1} << 12;

struct GroundScan {
    double energy;
    std::uint64_t degeneracy;
    std::uint64_t witness;
};

/// Minimum energy, number of minimizers and the lowest-index minimizer.
GroundScan scan_ground(const IsingInstance& instance, Exec exec = Exec::Parallel);

/// Merged (energy, degeneracy) table, ascending.
std::vector<EnergyLevel> scan_levels(const IsingInstance& instance, Exec exec = Exec::Parallel);

/// out[x] = E(x) for all 2^n basis indices.
void diagonal_energies(const IsingInstance& instance, std::span<double> out, Exec exec = Exec::Parallel);

/// amps[x] *= exp(-i * gamma * diag[x])
void apply_phase(std::span<Complex> amps, std::span<const double> diag, double gamma,
                 Exec exec = Exec::Parallel);

/// Applies exp(-i * angle * sum_q X_q) qubit by qubit.
void apply_x_rotation(std::span<Complex> amps, int n, double angle, Exec exec = Exec::Parallel);

/// sum_x |amps[x]|^2 over diag[x] <= threshold
double probability_at_or_below(std::span<const Complex> amps, std::span<const double> diag, double threshold,
                               Exec exec = Exec::Parallel);

/// sum_x |amps[x]|^2 diag[x]
double expectation(std::span<const Complex> amps, std::span<const double> diag, Exec exec = Exec::Parallel);

double norm_sq(std::span<const Complex> amps, Exec exec = Exec::Parallel);

}  // namespace mct::kernels
