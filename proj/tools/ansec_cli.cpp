// Command-line front end: scenario configuration comes from an optional JSON
// file plus flag overrides; power-like quantities cross this boundary in dBm
// and are converted to watts immediately. All numerical work lives in the
// library; this file only parses, dispatches, and writes CSV.

#include "ansec/complexity.hpp"
#include "ansec/harness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace ansec;

// JSON keys mirror the SystemConfig fields; *_dbm variants convert power
// values at the boundary.
void apply_scenario(const json& j, SystemConfig& cfg) {
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key);
    };
    auto get_dbm = [&](const char* key, double& field) {
        if (j.contains(key)) field = dbm_to_watts(j.at(key).get<double>());
    };
    get("nt", cfg.nt);
    get("l_count", cfg.l_count);
    get("k_count", cfg.k_count);
    get("nr", cfg.nr);
    get("p_budget", cfg.p_budget);
    get_dbm("p_budget_dbm", cfg.p_budget);
    get("r_target", cfg.r_target);
    get("e_cr_target", cfg.e_cr_target);
    get_dbm("e_cr_target_dbm", cfg.e_cr_target);
    get("e_er_target", cfg.e_er_target);
    get_dbm("e_er_target_dbm", cfg.e_er_target);
    get("eta_cr", cfg.eta_cr);
    get("eta_er", cfg.eta_er);
    get("sigma_c_sq", cfg.sigma_c_sq);
    get_dbm("sigma_c_sq_dbm", cfg.sigma_c_sq);
    get("sigma_p_sq", cfg.sigma_p_sq);
    get_dbm("sigma_p_sq_dbm", cfg.sigma_p_sq);
    get("sigma_k_sq", cfg.sigma_k_sq);
    get_dbm("sigma_k_sq_dbm", cfg.sigma_k_sq);
    get("d_cr", cfg.d_cr);
    get("d_er", cfg.d_er);
    get("d_ref", cfg.d_ref);
    get("alpha", cfg.alpha);
    get("rician_k", cfg.rician_k);
}

Method parse_method(const std::string& name) {
    static const std::map<std::string, Method> table{
        {"one_d", Method::one_d},
        {"spca", Method::spca},
        {"no_an", Method::no_an},
        {"fixed_rho", Method::fixed_rho}};
    auto it = table.find(name);
    if (it == table.end())
        throw std::invalid_argument("unknown method: " + name);
    return it->second;
}

struct CliState {
    std::string config_path;
    std::string out_path;
    std::string methods_csv;
    std::vector<double> sweep;
    // flag values; applied after the JSON file so flags always win
    std::optional<std::uint64_t> seed_flag;
    std::optional<int> trials_flag;
    std::optional<int> grid_flag;
    ExperimentConfig ec;

    void load() {
        json j = json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw std::runtime_error("cannot open config: " + config_path);
            in >> j;
        }
        apply_scenario(j, ec.base);
        if (j.contains("trials")) ec.trials = j.at("trials");
        if (j.contains("seed")) ec.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("grid_points")) ec.grid_points = j.at("grid_points");
        if (j.contains("refine")) ec.refine = j.at("refine");
        if (j.contains("sweep") && sweep.empty())
            sweep = j.at("sweep").get<std::vector<double>>();
        if (j.contains("methods") && methods_csv.empty()) {
            ec.methods.clear();
            for (const auto& m : j.at("methods"))
                ec.methods.push_back(parse_method(m.get<std::string>()));
        }
        if (!methods_csv.empty()) {
            ec.methods.clear();
            std::istringstream ss(methods_csv);
            std::string token;
            while (std::getline(ss, token, ','))
                ec.methods.push_back(parse_method(token));
        }
        if (seed_flag) ec.seed = *seed_flag;
        if (trials_flag) ec.trials = *trials_flag;
        if (grid_flag) ec.grid_points = *grid_flag;
    }
};

void add_common(CLI::App* cmd, CliState& st) {
    cmd->add_option("--config", st.config_path, "JSON scenario file");
    cmd->add_option("--seed", st.seed_flag, "master seed");
    cmd->add_option("--trials", st.trials_flag, "Monte-Carlo trials");
    cmd->add_option("--grid", st.grid_flag, "1-D search grid points");
    cmd->add_option("--out", st.out_path, "CSV output path (default stdout)");
    cmd->add_option("--methods", st.methods_csv,
                    "comma list of one_d,spca,no_an,fixed_rho");
    cmd->add_flag("--refine", st.ec.refine, "golden-section polish of the 1-D search");
    cmd->add_flag("--timing", st.ec.timing, "record wall-clock times");
}

template <class Rows, class Writer>
void emit(const Rows& rows, Writer writer, const std::string& out_path) {
    if (out_path.empty()) {
        writer(rows, std::cout);
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output: " + out_path);
    writer(rows, out);
    if (!out) throw std::runtime_error("write failed: " + out_path);
}

int run(int argc, char** argv) {
    CLI::App app{"artificial-noise-aided secure SWIPT beamforming designer"};
    app.require_subcommand(1);
    CliState st;

    auto* single = app.add_subcommand("single", "one scenario, one realization per trial");
    auto* rate = app.add_subcommand("sweep-rate", "sweep the secrecy-rate target");
    auto* energy =
        app.add_subcommand("sweep-energy", "sweep the harvested-power target (dBm)");
    auto* conv =
        app.add_subcommand("convergence", "per-iteration traces of the iterative method");
    for (auto* cmd : {single, rate, energy, conv}) add_common(cmd, st);
    rate->add_option("--sweep", st.sweep, "rate targets in bits/s/Hz")->delimiter(',');
    energy->add_option("--sweep", st.sweep, "harvested-power targets in dBm")
        ->delimiter(',');
    conv->add_option("--sweep", st.sweep, "harvested-power targets in dBm")
        ->delimiter(',');

    auto* cx = app.add_subcommand("complexity", "analytic flop-count orders");
    ComplexityParams cp;
    cx->add_option("--nt", cp.nt, "transmit antennas");
    cx->add_option("--cr", cp.l_count, "co-located receivers");
    cx->add_option("--er", cp.k_count, "energy-harvesting receivers");
    cx->add_option("--nr", cp.nr, "ER receive antennas");
    cx->add_option("--d-steps", cp.d_steps, "1-D search size D");
    cx->add_option("--q-iters", cp.q_iters, "iteration budget Q");

    CLI11_PARSE(app, argc, argv);

    if (cx->parsed()) {
        std::printf("flops_one_d,%.6e\n", flops_one_d(cp));
        std::printf("flops_spca,%.6e\n", flops_spca(cp));
        std::printf("ratio,%.6e\n", flops_spca(cp) / flops_one_d(cp));
        return 0;
    }

    st.load();
    if (single->parsed()) st.ec.kind = ExperimentKind::single;
    if (rate->parsed()) st.ec.kind = ExperimentKind::rate_sweep;
    if (energy->parsed() || conv->parsed()) {
        st.ec.kind = energy->parsed() ? ExperimentKind::energy_sweep
                                      : ExperimentKind::convergence;
        for (double& v : st.sweep) v = dbm_to_watts(v);  // sweep given in dBm
    }
    st.ec.sweep = st.sweep;

    if (conv->parsed())
        emit(run_convergence(st.ec), write_convergence_csv, st.out_path);
    else
        emit(run_experiment(st.ec), write_csv, st.out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":\"" << e.what() << "\"}\n";
        return 1;
    }
}
