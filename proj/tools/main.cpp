// mct: instance generation, solver campaigns, fitting and comparison.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mct/cli.hpp"

namespace {

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    if (out.empty()) throw mct::cli::ConfigError("empty list '" + s + "'");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace mct::cli;
    CLI::App app{"Benchmark toolkit for CIM, DAQC and DH-QMF time-to-solution studies"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    int workers = -1;
    std::string out_path;
    std::string solver;
    std::string tmax_grid;
    int layers = -1;
    double loss_per_rt = 0.0;
    double p_target = 0.0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON campaign config")->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "master seed");
        sub->add_option("--workers", workers, "OpenMP threads (0 = default)");
        sub->add_option("--out", out_path, "output path");
    };

    auto* gen = app.add_subcommand("gen", "write instance files and index.csv");
    add_common(gen);
    auto* solve = app.add_subcommand("solve", "run a solver campaign (resumable)");
    add_common(solve);
    solve->add_option("--solver", solver, "cim-cont, cim-disc, daqc or dhqmf")
        ->check(CLI::IsMember({"cim-cont", "cim-disc", "daqc", "dhqmf"}));
    solve->add_option("--tmax-grid", tmax_grid, "comma separated trial lengths (normalized time or round trips)");
    solve->add_option("--layers", layers, "QAOA layer count");
    solve->add_option("--loss-per-rt", loss_per_rt, "discrete model loss per round trip");
    solve->add_option("--p-target", p_target, "DH-QMF overall success target");

    std::string results;
    std::string family = "sqrt-exp";
    auto* fit = app.add_subcommand("fit", "fit a scaling law to the medians of a result CSV");
    add_common(fit);
    fit->add_option("results", results, "result CSV")->required()->check(CLI::ExistingFile);
    fit->add_option("--family", family, "sqrt-exp, exp or qmf");

    std::vector<std::string> inputs;
    std::string extrapolate;
    auto* compare = app.add_subcommand("compare", "median/IQR series and fits for several solvers");
    add_common(compare);
    compare->add_option("inputs", inputs, "label:family:path entries")->required();
    compare->add_option("--extrapolate", extrapolate, "comma separated n values for fitted extrapolation");

    auto* verify = app.add_subcommand("verify", "run the quick invariant suite");
    add_common(verify);

    CLI11_PARSE(app, argc, argv);

    try {
        CampaignConfig cfg = config_path.empty() ? CampaignConfig{} : load_config(config_path);
        if (seed) cfg.master_seed = seed;
        if (workers >= 0) cfg.workers = workers;
        if (!solver.empty()) cfg.solver = solver_from_string(solver);
        if (!tmax_grid.empty()) {
            const auto g = parse_list(tmax_grid);
            (cfg.solver == Solver::CimDiscrete ? cfg.roundtrip_grid : cfg.tmax_grid) = g;
        }
        if (layers >= 0) cfg.layers = layers;
        if (loss_per_rt > 0.0) cfg.disc.loss_per_rt = loss_per_rt;
        if (p_target > 0.0) cfg.p_target = p_target;

        if (gen->parsed()) {
            if (!out_path.empty()) cfg.instance_dir = out_path;
            const auto entries = cmd_gen(cfg);
            std::cout << "wrote " << entries.size() << " instances to " << cfg.instance_dir << '\n';
            return 0;
        }
        if (solve->parsed()) {
            if (!out_path.empty()) cfg.output = out_path;
            const auto s = cmd_solve(cfg, std::cerr);
            std::cout << s.solved_rows << " rows written, " << s.skipped << " already present\n";
            if (!s.failures.empty()) {
                std::cerr << "failed instances:";
                for (const auto& id : s.failures) std::cerr << ' ' << id;
                std::cerr << '\n';
                return 1;
            }
            return 0;
        }
        if (fit->parsed()) {
            const auto f = cmd_fit(results, mct::analysis::family_from_string(family));
            const auto text = mct::analysis::fit_to_json(f);
            if (out_path.empty()) {
                std::cout << text;
            } else {
                std::ofstream(out_path) << text;
            }
            return 0;
        }
        if (compare->parsed()) {
            std::vector<CompareInput> parsed;
            for (const auto& s : inputs) parsed.push_back(parse_compare_input(s));
            const auto extra = extrapolate.empty() ? std::vector<double>{} : parse_list(extrapolate);
            const std::string prefix = out_path.empty() ? "compare" : out_path;
            const auto rep = cmd_compare(parsed, extra, prefix);
            std::cout << rep.rows.size() << " series rows, " << rep.fits.size() << " fits -> " << prefix
                      << "_series.csv, " << prefix << "_fits.json\n";
            return 0;
        }
        if (verify->parsed()) return cmd_verify(cfg.master_seed, std::cout) == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
