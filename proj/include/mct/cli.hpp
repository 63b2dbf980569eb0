#pragma once

// Campaign configuration and the subcommand bodies behind the mct tool.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mct/analysis.hpp"
#include "mct/cim_continuous.hpp"
#include "mct/cim_discrete.hpp"
#include "mct/daqc.hpp"
#include "mct/dhqmf.hpp"
#include "mct/instance.hpp"

namespace mct::cli {

enum class Solver { CimContinuous, CimDiscrete, Daqc, Dhqmf };

std::string_view to_string(Solver s);
Solver solver_from_string(std::string_view s);

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct CampaignConfig {
    Solver solver = Solver::CimContinuous;
    std::vector<int> n_list{8};
    int instances_per_n = 10;
    int trials_per_instance = 100;
    WeightClass weight_class = WeightClass::TwentyOneWeight;
    std::uint64_t master_seed = 1;
    std::filesystem::path instance_dir = "instances";
    std::filesystem::path output = "results.csv";
    int workers = 0;  ///< 0 keeps the OpenMP default

    cim::ContinuousCimParams cim;
    std::vector<double> tmax_grid{5.0, 10.0, 20.0};

    cim::DiscreteCimParams disc;
    std::vector<double> roundtrip_grid{50.0, 100.0, 200.0};

    int layers = 20;
    double cubic_a = daqc::kDefaultCubic;
    double layer_time = 0.0;  ///< 0 selects 1.6 + 0.1 n
    daqc::ShotCostModel shot_cost;

    double p_target = 0.99;
    int qmf_runs = 1000;
    dhqmf::QmfCostModel qmf_cost;

    void validate() const;
};

/// Parses the JSON campaign schema. Unknown keys are rejected.
CampaignConfig config_from_json(std::string_view text);
CampaignConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const CampaignConfig& config);

/// Stable id "n<n>-<class>-<k>" of the k-th instance of size n.
std::string instance_id(int n, WeightClass cls, int k);
/// Stable stream seed for a named instance.
std::uint64_t instance_stream(std::uint64_t master, std::string_view instance_id);

struct IndexEntry {
    std::string instance_id;
    int n;
    std::filesystem::path path;
    std::optional<double> ground_energy;
};

/// Writes one JSON file per instance and index.csv into instance_dir.
std::vector<IndexEntry> cmd_gen(const CampaignConfig& config);
std::vector<IndexEntry> read_index(const std::filesystem::path& instance_dir);

struct SolveSummary {
    int solved_rows = 0;
    int skipped = 0;
    std::vector<std::string> failures;
};

/// Header of the result CSV written for a solver.
std::string result_header(Solver s);

/// Runs the configured solver on every indexed instance whose id is not yet
/// in the output file, appending one row per instance.
SolveSummary cmd_solve(const CampaignConfig& config, std::ostream& log);

analysis::ScalingFit cmd_fit(const std::filesystem::path& results, analysis::Family family);

struct CompareInput {
    std::string solver;
    analysis::Family family;
    std::filesystem::path path;
};

/// Parses "label:family:path".
CompareInput parse_compare_input(std::string_view spec);

/// Writes <out_prefix>_series.csv and <out_prefix>_fits.json.
analysis::CompareReport cmd_compare(const std::vector<CompareInput>& inputs, const std::vector<double>& extrapolate_n,
                                    const std::filesystem::path& out_prefix);

/// Quick invariant suite; prints one line per check and returns the failures.
int cmd_verify(std::uint64_t seed, std::ostream& out);

}  // namespace mct::cli
