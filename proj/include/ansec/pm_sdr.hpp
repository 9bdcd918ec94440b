#pragma once

#include "ansec/conic.hpp"
#include "ansec/model.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace ansec {

// Variants of the inner problem used by the baselines: with_an=false drops
// the AN covariance entirely; fixed_rho pins every power-splitting ratio.
struct InnerOptions {
    bool with_an = true;
    std::optional<double> fixed_rho;
    SolverOptions solver{};
};

// Multipliers of the inner problem mapped back to the dual variables of the
// power-minimization Lagrangian.
struct InnerDuals {
    Vec xi;     // secrecy-rate rows, per CR
    Vec mu;     // CR-energy coupling, per CR
    Vec theta;  // ER-energy rows, per ER
    double gamma = 0.0;        // power budget
    std::vector<CMat> a_ek;    // eavesdropper LMIs, per ER
    CMat z;                    // PSD multiplier of Q
    CMat y;                    // PSD multiplier of W
};

struct InnerResult {
    double t = 0.0;
    double f_t = 0.0;  // optimal tr(Q), +inf when infeasible
    BeamDesign design;
    InnerDuals duals;
    SolveStatus status = SolveStatus::numerical_failure;
    int iterations = 0;
};

struct SearchTrace {
    std::vector<std::pair<double, double>> grid;  // (t, f(t)) pairs
    double t_star = 0.0;
    InnerResult best;
    bool feasible = false;
};

// search interval of the outer problem
std::pair<double, double> t_bounds(const SystemConfig& cfg, const ChannelSet& ch);

// the relaxed inner problem at fixed t, in conic form
ConicProblem build_inner(const SystemConfig& cfg, const ChannelSet& ch, double t,
                         const InnerOptions& options = {});

InnerResult solve_inner(const SystemConfig& cfg, const ChannelSet& ch, double t,
                        const InnerOptions& options = {});

// Uniform grid over [t_min, t_max]; infeasible points participate as +inf;
// argmin with lowest-t tie-break; optional golden-section refinement around
// the grid minimizer.
SearchTrace line_search(const SystemConfig& cfg, const ChannelSet& ch,
                        int grid_points, const InnerOptions& options = {},
                        bool refine = false);

// dominant eigenpair beam and the rank-one certificate lambda2/lambda1
std::pair<CVec, double> extract_rank_one(const CMat& q_cov,
                                         double tol_rank = 1e-5);

// Residual per CR of the closed-form optimal splitting ratio implied by the
// recovered duals. The formula assumes the CR's rate and energy constraints
// are both active; CRs whose multipliers vanish (inactive constraints) yield
// NaN residuals rather than a meaningless number.
Vec verify_rho_kkt(const InnerResult& res, const SystemConfig& cfg,
                   double tol_dual = 1e-4);

}  // namespace ansec
