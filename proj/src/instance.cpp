#include "mct/instance.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "mct/kernels.hpp"
#include "mct/rng.hpp"

namespace mct {

using nlohmann::json;

std::string_view to_string(WeightClass c) {
    switch (c) {
        case WeightClass::TwentyOneWeight: return "21-weight";
        case WeightClass::SKBinary: return "sk";
        case WeightClass::Custom: return "custom";
    }
    return "custom";
}

WeightClass weight_class_from_string(std::string_view s) {
    if (s == "21-weight" || s == "TwentyOneWeight") return WeightClass::TwentyOneWeight;
    if (s == "sk" || s == "SKBinary") return WeightClass::SKBinary;
    if (s == "custom" || s == "Custom") return WeightClass::Custom;
    throw InstanceError("unknown weight class '" + std::string(s) + "'");
}

IsingInstance::IsingInstance(int n, std::vector<double> couplings, WeightClass weight_class, std::uint64_t seed)
    : n_(n), couplings_(std::move(couplings)), weight_class_(weight_class), seed_(seed) {
    if (n_ < 1 || n_ > 62) throw InstanceError("instance size out of range: " + std::to_string(n_));
    if (couplings_.size() != static_cast<std::size_t>(n_) * n_)
        throw InstanceError("coupling matrix must be n*n");
    for (int i = 0; i < n_; ++i) {
        if (coupling(i, i) != 0.0) throw InstanceError("coupling matrix must have zero diagonal");
        for (int j = i + 1; j < n_; ++j) {
            const double v = coupling(i, j);
            if (!std::isfinite(v)) throw InstanceError("non-finite coupling");
            if (v != coupling(j, i)) throw InstanceError("coupling matrix must be symmetric");
        }
    }
}

IsingInstance IsingInstance::uncoupled(int n) {
    return IsingInstance(n, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0));
}

double IsingInstance::coupling_sum() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) s += coupling(i, j);
    return s;
}

double IsingInstance::coupling_sum_sq() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) s += coupling(i, j) * coupling(i, j);
    return s;
}

SpinConfig SpinConfig::from_index(std::uint64_t index, int n) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) bits[i] = static_cast<std::uint8_t>((index >> i) & 1u);
    return SpinConfig(std::move(bits));
}

SpinConfig SpinConfig::from_spins(std::span<const int> spins) {
    std::vector<std::uint8_t> bits;
    bits.reserve(spins.size());
    for (int s : spins) bits.push_back(s < 0 ? 1 : 0);
    return SpinConfig(std::move(bits));
}

std::uint64_t SpinConfig::index() const {
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) x |= std::uint64_t{1} << i;
    return x;
}

SpinConfig SpinConfig::flipped() const {
    auto bits = bits_;
    for (auto& b : bits) b ^= 1u;
    return SpinConfig(std::move(bits));
}

std::uint64_t EnergyHistogram::total() const {
    std::uint64_t t = 0;
    for (const auto& l : levels) t += l.degeneracy;
    return t;
}

IsingInstance generate_instance(int n, WeightClass weight_class, std::uint64_t seed) {
    if (n < 2) throw InstanceError("instance needs n >= 2, got " + std::to_string(n));
    if (weight_class == WeightClass::Custom) throw InstanceError("custom instances are not generated");
    Rng rng(seed);
    std::vector<double> J(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double v;
            if (weight_class == WeightClass::TwentyOneWeight) {
                v = static_cast<double>(static_cast<int>(uniform_below(rng, 21)) - 10) / 10.0;
            } else {
                v = uniform_below(rng, 2) ? 1.0 : -1.0;
            }
            J[static_cast<std::size_t>(i) * n + j] = v;
            J[static_cast<std::size_t>(j) * n + i] = v;
        }
    }
    return IsingInstance(n, std::move(J), weight_class, seed);
}

namespace {

void check_length(const IsingInstance& instance, const SpinConfig& config) {
    if (config.size() != instance.n())
        throw InstanceError("configuration length " + std::to_string(config.size()) + " does not match n=" +
                            std::to_string(instance.n()));
}

void check_cap(const IsingInstance& instance, int cap) {
    if (instance.n() > cap)
        throw InstanceError("n=" + std::to_string(instance.n()) + " exceeds the exhaustive-search cap of " +
                            std::to_string(cap) + "; supply the ground energy externally");
}

}  // namespace

double energy(const IsingInstance& instance, const SpinConfig& config) {
    check_length(instance, config);
    double e = 0.0;
    for (int i = 0; i < instance.n(); ++i)
        for (int j = i + 1; j < instance.n(); ++j) e -= instance.coupling(i, j) * config.spin(i) * config.spin(j);
    return e;
}

double energy(const IsingInstance& instance, std::uint64_t index) {
    const int n = instance.n();
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
        const int si = ((index >> i) & 1u) ? -1 : 1;
        for (int j = i + 1; j < n; ++j) {
            const int sj = ((index >> j) & 1u) ? -1 : 1;
            e -= instance.coupling(i, j) * si * sj;
        }
    }
    return e;
}

double cut_value(const IsingInstance& instance, const SpinConfig& config) {
    check_length(instance, config);
    double c = 0.0;
    for (int i = 0; i < instance.n(); ++i)
        for (int j = i + 1; j < instance.n(); ++j)
            if (config.spin(i) != config.spin(j)) c -= instance.coupling(i, j);
    return c;
}

GroundState brute_force_ground(const IsingInstance& instance, int cap) {
    check_cap(instance, cap);
    const auto g = kernels::scan_ground(instance);
    return {g.energy, g.degeneracy, SpinConfig::from_index(g.witness, instance.n())};
}

EnergyHistogram energy_histogram(const IsingInstance& instance, int cap) {
    check_cap(instance, cap);
    return {instance.n(), kernels::scan_levels(instance)};
}

std::string instance_to_json(const IsingInstance& instance) {
    json edges = json::array();
    for (int i = 0; i < instance.n(); ++i)
        for (int j = i + 1; j < instance.n(); ++j) {
            const double v = instance.coupling(i, j);
            if (v != 0.0) edges.push_back(json::array({i, j, v}));
        }
    json doc = {{"version", 1},
                {"n", instance.n()},
                {"weight_class", std::string(to_string(instance.weight_class()))},
                {"seed", instance.seed()},
                {"edges", std::move(edges)}};
    return doc.dump() + "\n";
}

namespace {

double parse_value(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        double out = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec != std::errc() || ptr != s.data() + s.size()) throw InstanceError("bad coupling value '" + s + "'");
        return out;
    }
    throw InstanceError("coupling must be a number or decimal string");
}

}  // namespace

IsingInstance instance_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InstanceError(std::string("instance JSON: ") + e.what());
    }
    if (doc.value("version", 0) != 1) throw InstanceError("unsupported instance file version");
    const int n = doc.at("n").get<int>();
    const auto cls = weight_class_from_string(doc.value("weight_class", std::string("custom")));
    const auto seed = doc.value("seed", std::uint64_t{0});
    std::vector<double> J(static_cast<std::size_t>(n) * n, 0.0);
    for (const auto& e : doc.at("edges")) {
        const int i = e.at(0).get<int>();
        const int j = e.at(1).get<int>();
        if (!(0 <= i && i < j && j < n)) throw InstanceError("edge indices must satisfy 0 <= i < j < n");
        const double v = parse_value(e.at(2));
        J[static_cast<std::size_t>(i) * n + j] = v;
        J[static_cast<std::size_t>(j) * n + i] = v;
    }
    return IsingInstance(n, std::move(J), cls, seed);
}

void write_instance(const IsingInstance& instance, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << instance_to_json(instance);
}

IsingInstance read_instance(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return instance_from_json(ss.str());
}

std::string histogram_to_csv(const EnergyHistogram& histogram) {
    std::ostringstream out;
    out.precision(17);
    out << "energy,degeneracy\n";
    for (const auto& l : histogram.levels) out << l.energy << ',' << l.degeneracy << '\n';
    return out.str();
}

EnergyHistogram histogram_from_csv(std::string_view text, int n) {
    EnergyHistogram h{n, {}};
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line.rfind("energy,degeneracy", 0) != 0)
        throw InstanceError("histogram CSV must start with 'energy,degeneracy'");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw InstanceError("malformed histogram row: " + line);
        h.levels.push_back({std::stod(line.substr(0, comma)), std::stoull(line.substr(comma + 1))});
    }
    if (h.levels.empty()) throw InstanceError("empty histogram");
    for (std::size_t k = 1; k < h.levels.size(); ++k)
        if (!(h.levels[k].energy > h.levels[k - 1].energy)) throw InstanceError("histogram energies must increase");
    if (h.total() != (std::uint64_t{1} << n)) throw InstanceError("histogram degeneracies must sum to 2^n");
    return h;
}

}  // namespace mct
