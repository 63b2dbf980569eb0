#include <omp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "mct/cli.hpp"

namespace mct::cli {

namespace fs = std::filesystem;

std::string instance_id(int n, WeightClass cls, int k) {
    std::ostringstream os;
    os << 'n' << n << '-' << to_string(cls) << '-' << std::setw(4) << std::setfill('0') << k;
    return os.str();
}

std::uint64_t instance_stream(std::uint64_t master, std::string_view id) {
    // FNV-1a keeps the stream independent of the standard library's hash.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : id) h = (h ^ ch) * 0x100000001b3ULL;
    return derive_seed(master, {h});
}

namespace {

std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string join(const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) s += ',';
        s += cells[i];
    }
    return s;
}

double column_median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

std::vector<IndexEntry> cmd_gen(const CampaignConfig& config) {
    config.validate();
    if (config.weight_class == WeightClass::Custom) throw ConfigError("cannot generate custom instances");
    fs::create_directories(config.instance_dir);
    std::vector<IndexEntry> entries;
    std::string index = "instance_id,n,weight_class,seed,path\n";
    for (int n : config.n_list) {
        for (int k = 0; k < config.instances_per_n; ++k) {
            const auto id = instance_id(n, config.weight_class, k);
            const auto seed = derive_seed(config.master_seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k)});
            const auto inst = generate_instance(n, config.weight_class, seed);
            const fs::path file = id + ".json";
            write_instance(inst, config.instance_dir / file);
            index += id + ',' + std::to_string(n) + ',' + std::string(to_string(config.weight_class)) + ',' +
                     std::to_string(seed) + ',' + file.string() + '\n';
            entries.push_back({id, n, config.instance_dir / file, std::nullopt});
        }
    }
    write_text(config.instance_dir / "index.csv", index);
    return entries;
}

std::vector<IndexEntry> read_index(const fs::path& instance_dir) {
    const auto table = analysis::read_csv(instance_dir / "index.csv");
    const int id = table.require("instance_id");
    const int n = table.require("n");
    const int path = table.require("path");
    const int ground = table.column("ground_energy");
    std::vector<IndexEntry> out;
    for (const auto& row : table.rows) {
        IndexEntry e{row[id], std::stoi(row[n]), instance_dir / row[path], std::nullopt};
        if (ground >= 0 && !row[ground].empty()) e.ground_energy = std::stod(row[ground]);
        out.push_back(e);
    }
    return out;
}

std::string result_header(Solver s) {
    switch (s) {
        case Solver::CimContinuous: return "instance_id,n,mode,t_max,trials,Ps,R99,tts_norm,tts_wallclock_s";
        case Solver::CimDiscrete:
            return "instance_id,n,mode,t_max,trials,Ps,R99,tts_norm,tts_wallclock_s,loss_per_rt,round_trips";
        case Solver::Daqc: return "instance_id,n,p,a,L,ground_prob,R99,t_ss_s,tts_s";
        case Solver::Dhqmf: return "instance_id,n,J,sum_Km,depth,tts_s,single_qubit_gates,cnot_gates,t_gates";
    }
    return "";
}

namespace {

std::vector<std::string> solve_one(const CampaignConfig& c, const IndexEntry& entry, const IsingInstance& inst,
                                   double ground) {
    const std::uint64_t seed = instance_stream(c.master_seed, entry.instance_id);
    const std::string id = entry.instance_id;
    const std::string n = std::to_string(inst.n());
    switch (c.solver) {
        case Solver::CimContinuous: {
            const auto r = cim::optimize_tts(inst, c.cim, ground, c.tmax_grid, c.trials_per_instance, seed);
            const auto& b = r.best;
            return {id, n, std::string(cim::to_string(c.cim.mode)), num(b.trial_length), std::to_string(c.trials_per_instance),
                    num(b.ps), num(b.r99), num(b.tts_normalized), num(b.tts_wallclock_s)};
        }
        case Solver::CimDiscrete: {
            const auto r = cim::optimize_tts(inst, c.disc, ground, c.roundtrip_grid, c.trials_per_instance, seed);
            const auto& b = r.best;
            return {id, n, std::string(cim::to_string(c.disc.mode)), num(b.trial_length * c.disc.loss_per_rt),
                    std::to_string(c.trials_per_instance), num(b.ps), num(b.r99), num(b.tts_normalized),
                    num(b.tts_wallclock_s), num(c.disc.loss_per_rt), num(b.trial_length)};
        }
        case Solver::Daqc: {
            const auto r = daqc::daqc_tts(inst, c.layers, ground, c.shot_cost, c.cubic_a, c.layer_time);
            return {id, n, std::to_string(c.layers), num(c.cubic_a), num(r.schedule.L), num(r.ground_prob),
                    num(r.record.r99), num(r.shot_time_s), num(r.record.tts_wallclock_s)};
        }
        case Solver::Dhqmf: {
            const auto hist = energy_histogram(inst);
            const auto runs = dhqmf::sample_tts(hist, c.p_target, c.qmf_runs, seed, c.qmf_cost);
            auto med = [&](auto field) {
                std::vector<double> v;
                for (const auto& r : runs) v.push_back(field(r));
                return num(column_median(v));
            };
            return {id,
                    n,
                    med([](const auto& r) { return static_cast<double>(r.J); }),
                    med([](const auto& r) { return r.sum_km; }),
                    num(dhqmf::circuit_depth(inst.n(), c.qmf_cost)),
                    med([](const auto& r) { return r.tts_s; }),
                    med([](const auto& r) { return r.gates.single_qubit; }),
                    med([](const auto& r) { return r.gates.cnot; }),
                    med([](const auto& r) { return r.gates.t_gate; })};
        }
    }
    return {};
}

}  // namespace

SolveSummary cmd_solve(const CampaignConfig& config, std::ostream& log) {
    config.validate();
    if (config.workers > 0) omp_set_num_threads(config.workers);
    const auto index = read_index(config.instance_dir);
    const std::string header = result_header(config.solver);

    std::set<std::string> done;
    bool have_header = false;
    if (fs::exists(config.output) && fs::file_size(config.output) > 0) {
        const auto table = analysis::read_csv(config.output);
        if (join(table.header) != header)
            throw ConfigError("existing output " + config.output.string() + " has a different header");
        have_header = true;
        const int id = table.require("instance_id");
        for (const auto& row : table.rows) done.insert(row[id]);
    }
    if (config.output.has_parent_path()) fs::create_directories(config.output.parent_path());
    std::ofstream out(config.output, std::ios::app | std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + config.output.string());
    if (!have_header) out << header << '\n' << std::flush;

    const std::set<int> sizes(config.n_list.begin(), config.n_list.end());
    SolveSummary summary;
    for (const auto& entry : index) {
        if (!sizes.count(entry.n)) continue;
        if (done.count(entry.instance_id)) {
            ++summary.skipped;
            continue;
        }
        try {
            const auto inst = read_instance(entry.path);
            const double ground = entry.ground_energy ? *entry.ground_energy : brute_force_ground(inst).energy;
            const auto row = solve_one(config, entry, inst, ground);
            out << join(row) << '\n' << std::flush;
            ++summary.solved_rows;
            log << entry.instance_id << " done\n";
        } catch (const std::exception& e) {
            summary.failures.push_back(entry.instance_id);
            log << entry.instance_id << " failed: " << e.what() << '\n';
        }
    }
    return summary;
}

analysis::ScalingFit cmd_fit(const fs::path& results, analysis::Family family) {
    const auto recs = analysis::records_from_table(analysis::read_csv(results), results.stem().string());
    return analysis::fit(family, analysis::median_points(recs));
}

CompareInput parse_compare_input(std::string_view spec) {
    const auto a = spec.find(':');
    const auto b = a == std::string_view::npos ? a : spec.find(':', a + 1);
    if (b == std::string_view::npos) throw ConfigError("compare input must be label:family:path");
    return {std::string(spec.substr(0, a)), analysis::family_from_string(spec.substr(a + 1, b - a - 1)),
            std::string(spec.substr(b + 1))};
}

analysis::CompareReport cmd_compare(const std::vector<CompareInput>& inputs, const std::vector<double>& extrapolate_n,
                                    const fs::path& out_prefix) {
    if (inputs.empty()) throw ConfigError("compare needs at least one input");
    std::map<std::string, std::vector<TtsRecord>> records;
    std::map<std::string, analysis::Family> families;
    for (const auto& in : inputs) {
        auto recs = analysis::records_from_table(analysis::read_csv(in.path), in.solver);
        auto& dst = records[in.solver];
        dst.insert(dst.end(), recs.begin(), recs.end());
        families[in.solver] = in.family;
    }
    auto report = analysis::compare_report(records, families, extrapolate_n);
    write_text(fs::path(out_prefix.string() + "_series.csv"), analysis::series_to_csv(report));
    write_text(fs::path(out_prefix.string() + "_fits.json"), analysis::fits_to_json(report));
    return report;
}

int cmd_verify(std::uint64_t seed, std::ostream& out) {
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        out << (ok ? "PASS " : "FAIL ") << name << '\n';
        failures += ok ? 0 : 1;
    };
    auto guarded = [&](const char* name, auto&& body) {
        try {
            check(name, body());
        } catch (const std::exception& e) {
            out << "FAIL " << name << ": " << e.what() << '\n';
            ++failures;
        }
    };

    guarded("r99 formulas", [] {
        return r99(0.99) == 1.0 && std::abs(r99(0.5) - std::log(0.01) / std::log(0.5)) < 1e-12 &&
               std::isinf(r99(0.0));
    });
    guarded("histogram and ground state agree", [&] {
        const auto inst = generate_instance(12, WeightClass::TwentyOneWeight, seed);
        const auto h = energy_histogram(inst);
        const auto g = brute_force_ground(inst);
        return h.total() == (std::uint64_t{1} << 12) && std::abs(h.ground_energy() - g.energy) < 1e-12 &&
               h.levels.front().degeneracy == g.degeneracy;
    });
    guarded("serial and parallel energies identical", [&] {
        const auto inst = generate_instance(14, WeightClass::SKBinary, seed + 1);
        std::vector<double> a(1 << 14), b(1 << 14);
        kernels::diagonal_energies(inst, a, kernels::Exec::Serial);
        kernels::diagonal_energies(inst, b, kernels::Exec::Parallel);
        return a == b;
    });
    guarded("qaoa circuit is unitary", [&] {
        const auto inst = generate_instance(10, WeightClass::TwentyOneWeight, seed + 2);
        const auto psi = daqc::run_qaoa(inst, daqc::build_schedule(inst, 20, 4.0, daqc::default_layer_time(10)));
        return std::abs(psi.norm() - 1.0) < 1e-10;
    });
    guarded("grover probabilities sum to one", [] {
        const std::uint64_t N = 1 << 12;
        for (std::uint64_t t = 1; t <= N; ++t) {
            const auto plan = dhqmf::optimal_iterations(t, N);
            const auto g = dhqmf::grover_success_prob(plan.m_opt, plan.theta);
            if (g.p_succ + g.p_fail != 1.0 && std::abs(g.p_succ + g.p_fail - 1.0) > 1e-15) return false;
            if (g.p_fail > static_cast<double>(t) / N + 1e-12) return false;
        }
        return true;
    });
    guarded("continuous cim stays positive", [&] {
        const auto inst = generate_instance(8, WeightClass::TwentyOneWeight, seed + 3);
        cim::ContinuousCimParams p;
        p.t_max = 10.0;
        p.stop_at_hit = false;
        p.record_every = 1;
        Rng rng(seed);
        const auto r = cim::run_trial(inst, p, brute_force_ground(inst).energy, rng);
        for (const auto& s : r.trajectory)
            for (std::size_t i = 0; i < s.mu.size(); ++i)
                if (!(s.var_x[i] > 0 && s.var_p[i] > 0 && s.e[i] > 0)) return false;
        return !r.aborted;
    });
    guarded("discrete cim respects the uncertainty bound", [&] {
        const auto inst = generate_instance(8, WeightClass::TwentyOneWeight, seed + 4);
        cim::DiscreteCimParams p;
        auto st = cim::init_discrete_state(8, p);
        Rng rng(seed);
        for (int k = 0; k < 200; ++k)
            if (cim::roundtrip(st, inst, p, rng).min_det < 0.25 - 1e-9) return false;
        return true;
    });
    guarded("fitters recover planted constants", [] {
        std::vector<analysis::Point> a, b;
        for (int n = 4; n <= 30; n += 2) {
            a.push_back({double(n), 0.26 * std::pow(2.32, std::sqrt(n))});
            b.push_back({double(n), 4.6e-6 * std::pow(1.17, n)});
        }
        const auto fa = analysis::fit_sqrt_exponential(a);
        const auto fb = analysis::fit_exponential(b);
        return std::abs(fa.params[0] / 0.26 - 1) < 1e-9 && std::abs(fa.params[1] / 2.32 - 1) < 1e-9 &&
               std::abs(fb.params[0] / 4.6e-6 - 1) < 1e-9 && std::abs(fb.params[1] / 1.17 - 1) < 1e-9;
    });
    return failures;
}

}  // namespace mct::cli
