#pragma once

#include "ansec/model.hpp"
#include "ansec/pm_sdr.hpp"
#include "ansec/pm_spca.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ansec {

enum class Method { one_d, spca, no_an, fixed_rho };

std::string method_name(Method m);

enum class ExperimentKind { single, rate_sweep, energy_sweep, convergence };

// One Monte-Carlo experiment: a base scenario, a sweep axis, the methods to
// compare, and the trial/seed bookkeeping. Sweep values are secrecy-rate
// targets (bits/s/Hz) for rate sweeps and harvested-power targets (watts,
// applied to both receiver classes) for energy sweeps.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::single;
    SystemConfig base;
    std::vector<double> sweep;
    std::vector<Method> methods{Method::one_d};
    int trials = 1;
    std::uint64_t seed = 0;
    int grid_points = 15;   // outer 1-D resolution
    bool refine = false;    // golden-section polish of the 1-D minimizer
    bool timing = false;    // fill wall_ms (breaks byte-identical reruns)

    void validate() const;
};

// One CSV row. Infeasible trials are recorded with converged = false and
// NaN objective rather than dropped.
struct TrialRecord {
    std::uint64_t seed = 0;  // channel seed of the trial
    std::string method;
    std::string sweep_name;
    double sweep_value = 0.0;
    double obj_w = 0.0;
    double obj_dbm = 0.0;
    double an_power_w = 0.0;
    bool converged = false;
    int iterations = 0;
    double wall_ms = 0.0;
    double rank_ratio = 0.0;
    double min_margin = 0.0;
};

struct ConvergenceRow {
    std::uint64_t seed = 0;
    double sweep_value = 0.0;
    int iteration = 0;
    double obj_w = 0.0;
    double max_violation = 0.0;
};

double watts_to_dbm(double watts);
double dbm_to_watts(double dbm);

// Deterministic per-(trial, method) seed stream; method 0 seeds the shared
// channel realization of the trial.
std::uint64_t child_seed(std::uint64_t master, std::uint64_t trial,
                         std::uint64_t method);

// Runs every requested method on the same channel realization per trial.
// Records come back sorted by (sweep value, trial, method); deterministic
// in (config, seed) when timing is off.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& ec);

// Per-iteration objective traces of the iterative method across the sweep
// values (harvested-power targets), on per-trial fixed channels.
std::vector<ConvergenceRow> run_convergence(const ExperimentConfig& ec);

void write_csv(const std::vector<TrialRecord>& records, std::ostream& out);
void write_convergence_csv(const std::vector<ConvergenceRow>& rows,
                           std::ostream& out);

}  // namespace ansec
