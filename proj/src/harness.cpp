#include "ansec/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace ansec {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

const char* sweep_label(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::rate_sweep: return "rate";
        case ExperimentKind::energy_sweep: return "energy";
        case ExperimentKind::convergence: return "energy";
        case ExperimentKind::single: return "single";
    }
    return "single";
}

// the scenario at one sweep value
SystemConfig scenario_at(const ExperimentConfig& ec, double value) {
    SystemConfig cfg = ec.base;
    if (ec.kind == ExperimentKind::rate_sweep) cfg.r_target = value;
    if (ec.kind == ExperimentKind::energy_sweep ||
        ec.kind == ExperimentKind::convergence) {
        cfg.e_cr_target = value;
        cfg.e_er_target = value;
    }
    return cfg;
}

double smallest_margin(const FeasibilityReport& rep) {
    double m = rep.power_margin;
    m = std::min(m, rep.rate_margin.minCoeff());
    m = std::min(m, rep.e_cr_margin.minCoeff());
    return std::min(m, rep.e_er_margin.minCoeff());
}

// feasible starting point for the iterative method, or nothing
bool try_initialize(const SystemConfig& cfg, const ChannelSet& ch,
                    std::uint64_t seed, LinearizationPoint& pt) {
    for (auto strategy :
         {InitStrategy::sdr, InitStrategy::cheap, InitStrategy::random}) {
        try {
            pt = initialize_point(cfg, ch, strategy, seed);
            return true;
        } catch (const InitializationFailure&) {
        }
    }
    return false;
}

TrialRecord run_method(const ExperimentConfig& ec, const SystemConfig& cfg,
                       const ChannelSet& ch, Method m, std::uint64_t chan_seed,
                       std::uint64_t method_seed) {
    TrialRecord rec;
    rec.seed = chan_seed;
    rec.method = method_name(m);
    rec.obj_w = rec.obj_dbm = rec.an_power_w = kNan;
    rec.rank_ratio = rec.min_margin = kNan;

    const auto t0 = std::chrono::steady_clock::now();
    if (m == Method::spca) {
        try {
            SpcaTrace trace = spca_best(cfg, ch, method_seed);
            rec.iterations = static_cast<int>(trace.iterations.size());
            rec.converged = trace.converged;
            if (trace.converged) {
                rec.obj_w = trace.final.q.squaredNorm();
                rec.an_power_w = trace.final.w.squaredNorm();
                rec.rank_ratio = 0.0;  // vector-form design, rank one by construction
                rec.min_margin =
                    smallest_margin(check_feasibility(cfg, ch, trace.final.to_design()));
            }
        } catch (const InitializationFailure&) {
            // infeasible trial: recorded with NaN objective
        }
    } else {
        InnerOptions opts;
        if (m == Method::no_an) opts.with_an = false;
        if (m == Method::fixed_rho) opts.fixed_rho = 0.5;
        SearchTrace trace = line_search(cfg, ch, ec.grid_points, opts, ec.refine);
        rec.iterations = static_cast<int>(trace.grid.size());
        if (trace.feasible) {
            auto rep = check_feasibility(cfg, ch, trace.best.design);
            rec.converged = rep.overall;
            rec.obj_w = trace.best.f_t;
            rec.an_power_w = std::real(trace.best.design.w_cov.trace());
            rec.rank_ratio = extract_rank_one(trace.best.design.q_cov).second;
            rec.min_margin = smallest_margin(rep);
        }
    }
    if (ec.timing) {
        rec.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    }
    if (std::isfinite(rec.obj_w)) rec.obj_dbm = watts_to_dbm(rec.obj_w);
    return rec;
}

void write_double(std::ostream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    out << buf;
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::one_d: return "one_d";
        case Method::spca: return "spca";
        case Method::no_an: return "no_an";
        case Method::fixed_rho: return "fixed_rho";
    }
    throw std::invalid_argument("method_name: unknown method");
}

void ExperimentConfig::validate() const {
    base.validate();
    if (trials < 1)
        throw std::invalid_argument("ExperimentConfig: trials must be positive");
    if (methods.empty())
        throw std::invalid_argument("ExperimentConfig: methods must be nonempty");
    if (grid_points < 2)
        throw std::invalid_argument("ExperimentConfig: grid_points must be >= 2");
    if (kind != ExperimentKind::single) {
        if (sweep.empty())
            throw std::invalid_argument("ExperimentConfig: sweep must be nonempty");
        if (std::adjacent_find(sweep.begin(), sweep.end(), [](double a, double b) {
                return a >= b;
            }) != sweep.end())
            throw std::invalid_argument(
                "ExperimentConfig: sweep values must be strictly increasing");
    }
}

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts * 1000.0); }

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) / 1000.0; }

std::uint64_t child_seed(std::uint64_t master, std::uint64_t trial,
                         std::uint64_t method) {
    return mix64(mix64(master ^ mix64(trial)) ^ mix64(method + 1));
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& ec) {
    ec.validate();
    std::vector<double> values =
        ec.kind == ExperimentKind::single ? std::vector<double>{ec.base.r_target}
                                          : ec.sweep;
    const char* label = sweep_label(ec.kind);

    std::vector<TrialRecord> records;
    for (double value : values) {
        SystemConfig cfg = scenario_at(ec, value);
        for (int trial = 0; trial < ec.trials; ++trial) {
            std::uint64_t chan_seed = child_seed(ec.seed, trial, 0);
            ChannelSet ch = generate_channels(cfg, chan_seed);
            for (size_t mi = 0; mi < ec.methods.size(); ++mi) {
                TrialRecord rec =
                    run_method(ec, cfg, ch, ec.methods[mi], chan_seed,
                               child_seed(ec.seed, trial, mi + 1));
                rec.sweep_name = label;
                rec.sweep_value = value;
                records.push_back(std::move(rec));
            }
        }
    }
    return records;
}

std::vector<ConvergenceRow> run_convergence(const ExperimentConfig& ec) {
    ec.validate();
    if (ec.kind != ExperimentKind::convergence)
        throw std::invalid_argument("run_convergence: kind must be convergence");

    std::vector<ConvergenceRow> rows;
    for (double value : ec.sweep) {
        SystemConfig cfg = scenario_at(ec, value);
        for (int trial = 0; trial < ec.trials; ++trial) {
            std::uint64_t chan_seed = child_seed(ec.seed, trial, 0);
            ChannelSet ch = generate_channels(cfg, chan_seed);
            LinearizationPoint init;
            if (!try_initialize(cfg, ch, child_seed(ec.seed, trial, 1), init))
                continue;  // infeasible trial: no trace
            SpcaTrace trace = spca_solve(cfg, ch, init);
            for (size_t i = 0; i < trace.iterations.size(); ++i) {
                ConvergenceRow row;
                row.seed = chan_seed;
                row.sweep_value = value;
                row.iteration = static_cast<int>(i);
                row.obj_w = trace.iterations[i].objective;
                row.max_violation = trace.iterations[i].max_violation;
                rows.push_back(row);
            }
        }
    }
    return rows;
}

void write_csv(const std::vector<TrialRecord>& records, std::ostream& out) {
    out << "seed,method,sweep_name,sweep_value,obj_w,obj_dbm,an_power_w,"
           "converged,iterations,wall_ms,rank_ratio,min_margin\n";
    for (const TrialRecord& r : records) {
        out << r.seed << ',' << r.method << ',' << r.sweep_name << ',';
        write_double(out, r.sweep_value);
        out << ',';
        write_double(out, r.obj_w);
        out << ',';
        write_double(out, r.obj_dbm);
        out << ',';
        write_double(out, r.an_power_w);
        out << ',' << (r.converged ? 1 : 0) << ',' << r.iterations << ',';
        write_double(out, r.wall_ms);
        out << ',';
        write_double(out, r.rank_ratio);
        out << ',';
        write_double(out, r.min_margin);
        out << '\n';
    }
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows,
                           std::ostream& out) {
    out << "seed,sweep_value,iteration,obj_w,max_violation\n";
    for (const ConvergenceRow& r : rows) {
        out << r.seed << ',';
        write_double(out, r.sweep_value);
        out << ',' << r.iteration << ',';
        write_double(out, r.obj_w);
        out << ',';
        write_double(out, r.max_violation);
        out << '\n';
    }
}

}  // namespace ansec
