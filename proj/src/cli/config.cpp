#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mct/cli.hpp"

namespace mct::cli {

using nlohmann::json;

std::string_view to_string(Solver s) {
    switch (s) {
        case Solver::CimContinuous: return "cim-cont";
        case Solver::CimDiscrete: return "cim-disc";
        case Solver::Daqc: return "daqc";
        case Solver::Dhqmf: return "dhqmf";
    }
    return "?";
}

Solver solver_from_string(std::string_view s) {
    if (s == "cim-cont") return Solver::CimContinuous;
    if (s == "cim-disc") return Solver::CimDiscrete;
    if (s == "daqc") return Solver::Daqc;
    if (s == "dhqmf") return Solver::Dhqmf;
    throw ConfigError("unknown solver '" + std::string(s) + "' (cim-cont, cim-disc, daqc, dhqmf)");
}

void CampaignConfig::validate() const {
    if (n_list.empty()) throw ConfigError("n_list is empty");
    for (int n : n_list)
        if (n < 2) throw ConfigError("instance size " + std::to_string(n) + " is below 2");
    if (instances_per_n < 1) throw ConfigError("instances_per_n must be >= 1");
    if (trials_per_instance < 1) throw ConfigError("trials_per_instance must be >= 1");
    if (workers < 0) throw ConfigError("workers must be >= 0");
    if (tmax_grid.empty()) throw ConfigError("tmax_grid is empty");
    if (roundtrip_grid.empty()) throw ConfigError("roundtrip_grid is empty");
    if (layers < 0) throw ConfigError("layers must be >= 0");
    if (!(p_target > 0.0 && p_target < 1.0)) throw ConfigError("p_target must lie in (0, 1)");
    if (qmf_runs < 1) throw ConfigError("dhqmf runs must be >= 1");
    try {
        cim.validate();
        disc.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

namespace {

void check_keys(const json& j, std::string_view where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items())
        if (!ok.count(k)) throw ConfigError("unknown key '" + k + "' in " + std::string(where));
}

template <class T>
void get(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void read_feedback(const json& j, cim::FeedbackConstants& fb) {
    check_keys(j, "feedback", {"alpha", "pi", "rho_a", "rho_p", "delta", "beta"});
    get(j, "alpha", fb.alpha);
    get(j, "pi", fb.pi_pump);
    get(j, "rho_a", fb.rho_a);
    get(j, "rho_p", fb.rho_p);
    get(j, "delta", fb.delta_scale);
    get(j, "beta", fb.beta_rate);
}

json feedback_json(const cim::FeedbackConstants& fb) {
    return {{"alpha", fb.alpha}, {"pi", fb.pi_pump},       {"rho_a", fb.rho_a},
            {"rho_p", fb.rho_p}, {"delta", fb.delta_scale}, {"beta", fb.beta_rate}};
}

}  // namespace

CampaignConfig config_from_json(std::string_view text) {
    CampaignConfig c;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        check_keys(j, "config",
                   {"solver", "n_list", "instances_per_n", "trials_per_instance", "weight_class", "master_seed",
                    "instance_dir", "output", "workers", "cim_continuous", "cim_discrete", "daqc", "dhqmf"});
        if (j.contains("solver")) c.solver = solver_from_string(j.at("solver").get<std::string>());
        get(j, "n_list", c.n_list);
        get(j, "instances_per_n", c.instances_per_n);
        get(j, "trials_per_instance", c.trials_per_instance);
        if (j.contains("weight_class"))
            c.weight_class = weight_class_from_string(j.at("weight_class").get<std::string>());
        get(j, "master_seed", c.master_seed);
        if (j.contains("instance_dir")) c.instance_dir = j.at("instance_dir").get<std::string>();
        if (j.contains("output")) c.output = j.at("output").get<std::string>();
        get(j, "workers", c.workers);

        if (j.contains("cim_continuous")) {
            const auto& s = j.at("cim_continuous");
            check_keys(s, "cim_continuous",
                       {"mode", "j", "g2", "dt", "tmax_grid", "gamma_s_wallclock", "p_start", "p_end", "feedback"});
            if (s.contains("mode")) c.cim.mode = cim::mode_from_string(s.at("mode").get<std::string>());
            get(s, "j", c.cim.j);
            get(s, "g2", c.cim.g2);
            get(s, "dt", c.cim.dt);
            get(s, "tmax_grid", c.tmax_grid);
            get(s, "gamma_s_wallclock", c.cim.gamma_s_wallclock);
            get(s, "p_start", c.cim.p_start);
            get(s, "p_end", c.cim.p_end);
            if (s.contains("feedback")) read_feedback(s.at("feedback"), c.cim.feedback);
        }
        if (j.contains("cim_discrete")) {
            const auto& s = j.at("cim_discrete");
            check_keys(s, "cim_discrete",
                       {"mode", "loss_per_rt", "j", "g2", "crystal_substeps", "roundtrip_grid", "rt_wallclock",
                        "p_start", "p_end", "scaling", "feedback"});
            if (s.contains("mode")) c.disc.mode = cim::mode_from_string(s.at("mode").get<std::string>());
            get(s, "loss_per_rt", c.disc.loss_per_rt);
            get(s, "j", c.disc.j);
            get(s, "g2", c.disc.g2);
            get(s, "crystal_substeps", c.disc.crystal_substeps);
            get(s, "roundtrip_grid", c.roundtrip_grid);
            get(s, "rt_wallclock", c.disc.rt_wallclock);
            get(s, "p_start", c.disc.p_start);
            get(s, "p_end", c.disc.p_end);
            if (s.contains("scaling")) {
                const auto v = s.at("scaling").get<std::string>();
                if (v == "continuum") c.disc.scaling = cim::FeedbackScaling::Continuum;
                else if (v == "raw") c.disc.scaling = cim::FeedbackScaling::Raw;
                else throw ConfigError("cim_discrete.scaling must be 'continuum' or 'raw'");
            }
            if (s.contains("feedback")) read_feedback(s.at("feedback"), c.disc.feedback);
        }
        if (j.contains("daqc")) {
            const auto& s = j.at("daqc");
            check_keys(s, "daqc", {"layers", "a", "layer_time", "prep_meas_time", "gate_time"});
            get(s, "layers", c.layers);
            get(s, "a", c.cubic_a);
            get(s, "layer_time", c.layer_time);
            get(s, "prep_meas_time", c.shot_cost.prep_meas_time);
            get(s, "gate_time", c.shot_cost.gate_time);
        }
        if (j.contains("dhqmf")) {
            const auto& s = j.at("dhqmf");
            check_keys(s, "dhqmf", {"p_target", "runs", "gate_time", "prep_meas_time", "charge_prep_meas", "depth"});
            get(s, "p_target", c.p_target);
            get(s, "runs", c.qmf_runs);
            get(s, "gate_time", c.qmf_cost.gate_time);
            get(s, "prep_meas_time", c.qmf_cost.prep_meas_time);
            get(s, "charge_prep_meas", c.qmf_cost.charge_prep_meas);
            if (s.contains("depth")) {
                const auto d = s.at("depth").get<std::vector<double>>();
                if (d.size() != 3) throw ConfigError("dhqmf.depth needs three coefficients");
                c.qmf_cost.a1 = d[0];
                c.qmf_cost.a2 = d[1];
                c.qmf_cost.a3 = d[2];
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    c.validate();
    return c;
}

CampaignConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

std::string config_to_json(const CampaignConfig& c) {
    json j = {
        {"solver", std::string(to_string(c.solver))},
        {"n_list", c.n_list},
        {"instances_per_n", c.instances_per_n},
        {"trials_per_instance", c.trials_per_instance},
        {"weight_class", std::string(to_string(c.weight_class))},
        {"master_seed", c.master_seed},
        {"instance_dir", c.instance_dir.string()},
        {"output", c.output.string()},
        {"workers", c.workers},
        {"cim_continuous",
         {{"mode", std::string(cim::to_string(c.cim.mode))},
          {"j", c.cim.j},
          {"g2", c.cim.g2},
          {"dt", c.cim.dt},
          {"tmax_grid", c.tmax_grid},
          {"gamma_s_wallclock", c.cim.gamma_s_wallclock},
          {"p_start", c.cim.p_start},
          {"p_end", c.cim.p_end},
          {"feedback", feedback_json(c.cim.feedback)}}},
        {"cim_discrete",
         {{"mode", std::string(cim::to_string(c.disc.mode))},
          {"loss_per_rt", c.disc.loss_per_rt},
          {"j", c.disc.j},
          {"g2", c.disc.g2},
          {"crystal_substeps", c.disc.crystal_substeps},
          {"roundtrip_grid", c.roundtrip_grid},
          {"rt_wallclock", c.disc.rt_wallclock},
          {"p_start", c.disc.p_start},
          {"p_end", c.disc.p_end},
          {"scaling", c.disc.scaling == cim::FeedbackScaling::Continuum ? "continuum" : "raw"},
          {"feedback", feedback_json(c.disc.feedback)}}},
        {"daqc",
         {{"layers", c.layers},
          {"a", c.cubic_a},
          {"layer_time", c.layer_time},
          {"prep_meas_time", c.shot_cost.prep_meas_time},
          {"gate_time", c.shot_cost.gate_time}}},
        {"dhqmf",
         {{"p_target", c.p_target},
          {"runs", c.qmf_runs},
          {"gate_time", c.qmf_cost.gate_time},
          {"prep_meas_time", c.qmf_cost.prep_meas_time},
          {"charge_prep_meas", c.qmf_cost.charge_prep_meas},
          {"depth", {c.qmf_cost.a1, c.qmf_cost.a2, c.qmf_cost.a3}}}},
    };
    return j.dump(2) + "\n";
}

}  // namespace mct::cli
