#pragma once

#include "ansec/conic.hpp"
#include "ansec/model.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ansec {

// Expansion point of the convexified subproblem. r1_tilde must stay strictly
// above 1 (the quadratic-over-linear denominator r1 - 1), r2_tilde in (0, 1].
struct LinearizationPoint {
    CVec q_tilde;
    CVec w_tilde;
    double r1_tilde = 0.0;
    double r2_tilde = 0.0;
    Vec rho_tilde;

    void validate(const SystemConfig& cfg) const;
};

enum class InitStrategy { cheap, sdr, random };

struct InitializationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpcaOptions {
    int max_iter = 50;
    double tol_obj = 1e-4;  // relative objective change
    SolverOptions solver{};
};

struct SpcaIteration {
    double objective = 0.0;  // |q|^2 in watts
    LinearizationPoint point;
    SolveStatus status = SolveStatus::numerical_failure;
    double max_violation = 0.0;  // against the true constraints
};

struct SpcaTrace {
    std::vector<SpcaIteration> iterations;
    bool converged = false;
    BeamVectors final;
};

// Affine minorant of the quadratic-over-linear function w^H A w / (t - a)
// expanded at (w_t, t_t); exact at the expansion point.
double taylor_qol(const CMat& a, double a_shift, const CVec& w_t, double t_t,
                  const CVec& w, double t);

// The convexified subproblem at the given expansion point, in conic form.
// Complex vector variables are lowered to interleaved (Re, Im) real pairs.
ConicProblem build_spca_subproblem(const SystemConfig& cfg, const ChannelSet& ch,
                                   const LinearizationPoint& pt);

// Feasible starting point, or throws InitializationFailure. `seed` is used
// by the random strategy only.
LinearizationPoint initialize_point(const SystemConfig& cfg, const ChannelSet& ch,
                                    InitStrategy strategy = InitStrategy::cheap,
                                    std::uint64_t seed = 0);

// Iterate the subproblem from `init` until the relative objective change
// drops below tol_obj or max_iter is reached. A trace is always returned;
// converged is set only if the final point passes check_feasibility against
// the true constraints.
SpcaTrace spca_solve(const SystemConfig& cfg, const ChannelSet& ch,
                     const LinearizationPoint& init, const SpcaOptions& opts = {});

// Multi-start driver: runs spca_solve from the deterministic strategies and
// `restarts` seeded random starts, and keeps the converged run with the
// smallest objective. Throws InitializationFailure when no strategy yields
// a feasible start.
SpcaTrace spca_best(const SystemConfig& cfg, const ChannelSet& ch,
                    std::uint64_t seed, int restarts = 4,
                    const SpcaOptions& opts = {});

}  // namespace ansec
