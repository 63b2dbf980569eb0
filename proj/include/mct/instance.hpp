#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mct {

/// Hard cap on exhaustive enumeration. Above it the ground energy has to be
/// supplied by the caller.
inline constexpr int kBruteForceCap = 30;

/// Energies closer than this are treated as the same level.
inline constexpr double kLevelTolerance = 1e-9;

enum class WeightClass { TwentyOneWeight, SKBinary, Custom };

std::string_view to_string(WeightClass c);
WeightClass weight_class_from_string(std::string_view s);

class InstanceError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Fully connected Ising problem with zero local fields,
///   E(s) = -sum_{i<j} J_ij s_i s_j.
/// MaxCut weights are w_ij = -J_ij. Immutable once built.
class IsingInstance {
public:
    /// Builds from a dense row-major n*n matrix. Throws unless symmetric with zero diagonal.
    IsingInstance(int n, std::vector<double> couplings, WeightClass weight_class = WeightClass::Custom,
                  std::uint64_t seed = 0);

    /// n spins with all couplings zero.
    static IsingInstance uncoupled(int n);

    int n() const { return n_; }
    WeightClass weight_class() const { return weight_class_; }
    std::uint64_t seed() const { return seed_; }

    double coupling(int i, int j) const { return couplings_[static_cast<std::size_t>(i) * n_ + j]; }
    std::span<const double> row(int i) const {
        return {couplings_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)};
    }
    std::span<const double> couplings() const { return couplings_; }

    /// sum_{i<j} J_ij
    double coupling_sum() const;
    /// sum_{i<j} J_ij^2
    double coupling_sum_sq() const;

    bool operator==(const IsingInstance&) const = default;

private:
    int n_;
    std::vector<double> couplings_;
    WeightClass weight_class_;
    std::uint64_t seed_;
};

/// Bit i = 0 means s_i = +1, bit i = 1 means s_i = -1. The same encoding is
/// used for statevector basis indices.
class SpinConfig {
public:
    SpinConfig() = default;
    explicit SpinConfig(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}
    static SpinConfig from_index(std::uint64_t index, int n);
    static SpinConfig from_spins(std::span<const int> spins);

    int size() const { return static_cast<int>(bits_.size()); }
    int spin(int i) const { return bits_[static_cast<std::size_t>(i)] ? -1 : 1; }
    std::uint64_t index() const;
    SpinConfig flipped() const;
    const std::vector<std::uint8_t>& bits() const { return bits_; }

    bool operator==(const SpinConfig&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

struct EnergyLevel {
    double energy;
    std::uint64_t degeneracy;
};

/// Exact level table over all 2^n configurations, ascending in energy.
struct EnergyHistogram {
    int n = 0;
    std::vector<EnergyLevel> levels;

    double ground_energy() const { return levels.front().energy; }
    std::uint64_t total() const;
};

struct GroundState {
    double energy;
    std::uint64_t degeneracy;
    SpinConfig witness;
};

IsingInstance generate_instance(int n, WeightClass weight_class, std::uint64_t seed);

double energy(const IsingInstance& instance, const SpinConfig& config);
/// Same as energy() but the configuration is a basis index.
double energy(const IsingInstance& instance, std::uint64_t index);
double cut_value(const IsingInstance& instance, const SpinConfig& config);

GroundState brute_force_ground(const IsingInstance& instance, int cap = kBruteForceCap);
EnergyHistogram energy_histogram(const IsingInstance& instance, int cap = kBruteForceCap);

// Persistence.
std::string instance_to_json(const IsingInstance& instance);
IsingInstance instance_from_json(std::string_view text);
void write_instance(const IsingInstance& instance, const std::filesystem::path& path);
IsingInstance read_instance(const std::filesystem::path& path);

std::string histogram_to_csv(const EnergyHistogram& histogram);
EnergyHistogram histogram_from_csv(std::string_view text, int n);

}  // namespace mct
