#include "ansec/pm_spca.hpp"

#include "ansec/pm_sdr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

namespace ansec {
namespace {

// Interleaved (Re, Im) coefficients of the linear functional z -> Re(a^H z)
// over the lowered real parameters of z.
Vec inter(const CVec& a) {
    Vec v(2 * a.size());
    for (Index i = 0; i < a.size(); ++i) {
        v[2 * i] = std::real(a[i]);
        v[2 * i + 1] = std::imag(a[i]);
    }
    return v;
}

CVec from_inter(const Eigen::Ref<const Vec>& x) {
    CVec v(x.size() / 2);
    for (Index i = 0; i < v.size(); ++i)
        v[i] = std::complex<double>(x[2 * i], x[2 * i + 1]);
    return v;
}

struct SpcaLayout {
    Index nq2 = 0;  // reals per complex vector variable
    Index q_off = 0, w_off = 0, r1 = 0, r2 = 0, rho_off = 0, beta_off = 0,
          t_obj = 0;
    Index n = 0;

    SpcaLayout(const SystemConfig& cfg) {
        nq2 = 2 * cfg.nt;
        q_off = 0;
        w_off = nq2;
        r1 = 2 * nq2;
        r2 = r1 + 1;
        rho_off = r2 + 1;
        beta_off = rho_off + cfg.l_count;
        t_obj = beta_off + cfg.l_count;
        n = t_obj + 1;
    }
};

double quad(const CVec& v, const CMat& m) {
    return std::real(std::complex<double>(v.adjoint() * m * v));
}

// r1 = 1 + worst legitimate SINR, r2 = worst scalarized eavesdropper ratio,
// both evaluated at the given vectors; used to anchor expansion points.
void set_rates_from_vectors(const SystemConfig& cfg, const ChannelSet& ch,
                            LinearizationPoint& pt) {
    double min_sinr = std::numeric_limits<double>::infinity();
    for (int l = 0; l < cfg.l_count; ++l) {
        const CVec& h = ch.h_cr[l];
        double sig = std::norm(std::complex<double>(h.adjoint() * pt.q_tilde));
        double an = std::norm(std::complex<double>(h.adjoint() * pt.w_tilde));
        double rho = pt.rho_tilde[l];
        min_sinr = std::min(min_sinr, rho * sig /
                                          (rho * (cfg.sigma_c_sq + an) +
                                           cfg.sigma_p_sq));
    }
    double min_ratio = 1.0;
    for (int k = 0; k < cfg.k_count; ++k) {
        const CMat& he = ch.h_er[k];
        double an = (he.adjoint() * pt.w_tilde).squaredNorm();
        double sig = (he.adjoint() * pt.q_tilde).squaredNorm();
        min_ratio = std::min(min_ratio, (cfg.sigma_k_sq + an) /
                                            (cfg.sigma_k_sq + an + sig));
    }
    pt.r1_tilde = std::max(1.0 + 1e-6, 1.0 + min_sinr);
    pt.r2_tilde = std::min(1.0, std::max(1e-9, min_ratio));
}

BeamVectors vectors_from_point(const LinearizationPoint& pt) {
    BeamVectors bv;
    bv.q = pt.q_tilde;
    bv.w = pt.w_tilde;
    bv.rho = pt.rho_tilde;
    return bv;
}

double worst_violation(const FeasibilityReport& rep) {
    double v = std::max(0.0, -rep.power_margin);
    v = std::max(v, -rep.rate_margin.minCoeff());
    v = std::max(v, -rep.e_cr_margin.minCoeff());
    v = std::max(v, -rep.e_er_margin.minCoeff());
    return std::max(v, 0.0);
}

}  // namespace

void LinearizationPoint::validate(const SystemConfig& cfg) const {
    if (q_tilde.size() != cfg.nt || w_tilde.size() != cfg.nt)
        throw std::invalid_argument("LinearizationPoint: vector size mismatch");
    if (rho_tilde.size() != cfg.l_count)
        throw std::invalid_argument("LinearizationPoint: rho size mismatch");
    if (!q_tilde.allFinite() || !w_tilde.allFinite() || !rho_tilde.allFinite() ||
        !std::isfinite(r1_tilde) || !std::isfinite(r2_tilde))
        throw std::invalid_argument("LinearizationPoint: non-finite entry");
    if (!(r1_tilde > 1.0))
        throw std::invalid_argument("LinearizationPoint: r1_tilde must exceed 1");
    if (!(r2_tilde > 0.0) || r2_tilde > 1.0)
        throw std::invalid_argument("LinearizationPoint: r2_tilde must lie in (0, 1]");
    if ((rho_tilde.array() <= 0.0).any() || (rho_tilde.array() > 1.0).any())
        throw std::invalid_argument("LinearizationPoint: rho_tilde must lie in (0, 1]");
}

double taylor_qol(const CMat& a, double a_shift, const CVec& w_t, double t_t,
                  const CVec& w, double t) {
    if (!(t_t > a_shift))
        throw std::invalid_argument("taylor_qol: expansion point at or below the pole");
    const double d = t_t - a_shift;
    double cross = std::real(std::complex<double>(w_t.adjoint() * a * w));
    double curv = std::real(std::complex<double>(w_t.adjoint() * a * w_t));
    return 2.0 * cross / d - curv / (d * d) * (t - a_shift);
}

ConicProblem build_spca_subproblem(const SystemConfig& cfg, const ChannelSet& ch,
                                   const LinearizationPoint& pt) {
    cfg.validate();
    pt.validate(cfg);
    const int l_count = cfg.l_count, k_count = cfg.k_count;
    const SpcaLayout lo(cfg);
    const double d1 = std::max(pt.r1_tilde, 1.0 + 1e-6) - 1.0;
    const double d2 = pt.r2_tilde;

    ConicProblem p;
    p.c = Vec::Zero(lo.n);
    p.c[lo.t_obj] = 1.0;
    p.cones.nonneg = l_count + k_count;
    for (int l = 0; l < l_count; ++l) p.cones.soc.push_back(3);  // rate product
    for (int l = 0; l < l_count; ++l) p.cones.soc.push_back(4);  // CR-rate QOL
    for (int k = 0; k < k_count; ++k)
        p.cones.soc.push_back(4 * cfg.nr + 2);                   // ER-rate QOL
    for (int l = 0; l < l_count; ++l) p.cones.soc.push_back(3);  // CR energy
    for (int l = 0; l < l_count; ++l) p.cones.soc.push_back(3);  // rho splitting
    p.cones.soc.push_back(2 * lo.nq2 + 1);                       // power budget
    p.cones.soc.push_back(lo.nq2 + 1);                           // objective
    p.G = Mat::Zero(p.cones.dim(), lo.n);
    p.h = Vec::Zero(p.cones.dim());
    p.A = Mat(0, lo.n);
    p.b = Vec(0);

    const double pow2r = std::pow(2.0, cfg.r_target);
    Index row = 0;

    // nonneg: rho <= 1, then linearized ER-energy rows
    for (int l = 0; l < l_count; ++l) {
        p.G(row, lo.rho_off + l) = 1.0;
        p.h[row++] = 1.0;
    }
    for (int k = 0; k < k_count; ++k) {
        const CMat hhat = ch.h_er[k] * ch.h_er[k].adjoint();
        p.G.row(row).segment(lo.q_off, lo.nq2) =
            -2.0 * inter(CVec(hhat * pt.q_tilde));
        p.G.row(row).segment(lo.w_off, lo.nq2) =
            -2.0 * inter(CVec(hhat * pt.w_tilde));
        p.h[row++] = -quad(pt.q_tilde, hhat) - quad(pt.w_tilde, hhat) +
                     cfg.nr * cfg.sigma_k_sq - cfg.e_er_target / cfg.eta_er;
    }

    // rate product cones: ||(sqrt(2^(R+2)), r1 - r2)|| <= r1 + r2
    for (int l = 0; l < l_count; ++l) {
        p.G(row, lo.r1) = -1.0;
        p.G(row, lo.r2) = -1.0;
        ++row;
        p.h[row++] = std::sqrt(4.0 * pow2r);
        p.G(row, lo.r1) = -1.0;
        p.G(row, lo.r2) = 1.0;
        ++row;
    }

    // CR-rate cones: ||(2 w^H h, g1 - 1)|| <= g1 + 1, with the affine
    // g1 = F(q, r1) - sigma_c^2 - beta  (beta the epigraph of sigma_p^2/rho)
    for (int l = 0; l < l_count; ++l) {
        const CVec& h = ch.h_cr[l];
        const CMat hc = h * h.adjoint();
        Vec g1 = Vec::Zero(lo.n);
        g1.segment(lo.q_off, lo.nq2) = (2.0 / d1) * inter(CVec(hc * pt.q_tilde));
        const double curv = quad(pt.q_tilde, hc) / (d1 * d1);
        g1[lo.r1] = -curv;
        g1[lo.beta_off + l] = -1.0;
        const double g1c = curv - cfg.sigma_c_sq;

        p.G.row(row) = -g1.transpose();
        p.h[row++] = g1c + 1.0;
        p.G.row(row).segment(lo.w_off, lo.nq2) = -2.0 * inter(h);
        ++row;
        p.G.row(row).segment(lo.w_off, lo.nq2) =
            -2.0 * inter(CVec(std::complex<double>(0.0, -1.0) * h));
        ++row;
        p.G.row(row) = -g1.transpose();
        p.h[row++] = g1c - 1.0;
    }

    // ER-rate cones: ||(2 w^H H, 2 q^H H, g2 - 1)|| <= g2 + 1
    for (int k = 0; k < k_count; ++k) {
        const CMat& he = ch.h_er[k];
        const CMat hhat = he * he.adjoint();
        Vec g2 = Vec::Zero(lo.n);
        g2.segment(lo.w_off, lo.nq2) = (2.0 / d2) * inter(CVec(hhat * pt.w_tilde));
        g2[lo.r2] = -(cfg.sigma_k_sq + quad(pt.w_tilde, hhat)) / (d2 * d2);
        const double g2c = cfg.sigma_k_sq * (2.0 / d2 - 1.0);

        p.G.row(row) = -g2.transpose();
        p.h[row++] = g2c + 1.0;
        for (int c = 0; c < cfg.nr; ++c) {
            const CVec hj = he.col(c);
            p.G.row(row).segment(lo.w_off, lo.nq2) = -2.0 * inter(hj);
            ++row;
            p.G.row(row).segment(lo.w_off, lo.nq2) =
                -2.0 * inter(CVec(std::complex<double>(0.0, -1.0) * hj));
            ++row;
        }
        for (int c = 0; c < cfg.nr; ++c) {
            const CVec hj = he.col(c);
            p.G.row(row).segment(lo.q_off, lo.nq2) = -2.0 * inter(hj);
            ++row;
            p.G.row(row).segment(lo.q_off, lo.nq2) =
                -2.0 * inter(CVec(std::complex<double>(0.0, -1.0) * hj));
            ++row;
        }
        p.G.row(row) = -g2.transpose();
        p.h[row++] = g2c - 1.0;
    }

    // CR-energy cones: the linearized harvested power A must satisfy the
    // hyperbolic constraint A (1 - rho) >= E_cr / eta_cr
    for (int l = 0; l < l_count; ++l) {
        const CVec& h = ch.h_cr[l];
        const CMat hc = h * h.adjoint();
        Vec a = Vec::Zero(lo.n);
        a.segment(lo.q_off, lo.nq2) = 2.0 * inter(CVec(hc * pt.q_tilde));
        a.segment(lo.w_off, lo.nq2) = 2.0 * inter(CVec(hc * pt.w_tilde));
        const double ac =
            -quad(pt.q_tilde, hc) - quad(pt.w_tilde, hc) + cfg.sigma_c_sq;

        p.G.row(row) = -a.transpose();
        p.G(row, lo.rho_off + l) += 1.0;
        p.h[row++] = ac + 1.0;
        p.G.row(row) = -a.transpose();
        p.G(row, lo.rho_off + l) -= 1.0;
        p.h[row++] = ac - 1.0;
        p.h[row++] = 2.0 * std::sqrt(cfg.e_cr_target / cfg.eta_cr);
    }

    // power-splitting cones: beta * rho >= sigma_p^2
    const double sigma_p = std::sqrt(cfg.sigma_p_sq);
    for (int l = 0; l < l_count; ++l) {
        p.G(row, lo.beta_off + l) = -1.0;
        p.G(row, lo.rho_off + l) = -1.0;
        ++row;
        p.G(row, lo.beta_off + l) = -1.0;
        p.G(row, lo.rho_off + l) = 1.0;
        ++row;
        p.h[row++] = 2.0 * sigma_p;
    }

    // power budget: ||(q, w)|| <= sqrt(P)
    p.h[row++] = std::sqrt(cfg.p_budget);
    for (Index i = 0; i < 2 * lo.nq2; ++i) p.G(row++, i) = -1.0;

    // objective epigraph: ||q|| <= t
    p.G(row++, lo.t_obj) = -1.0;
    for (Index i = 0; i < lo.nq2; ++i) p.G(row++, lo.q_off + i) = -1.0;

    p.segment_names = {"rho-range",       "er-energy", "rate-product",
                       "cr-rate",         "er-rate",   "cr-energy",
                       "power-splitting", "power",     "objective"};
    return p;
}

LinearizationPoint initialize_point(const SystemConfig& cfg, const ChannelSet& ch,
                                    InitStrategy strategy, std::uint64_t seed) {
    cfg.validate();

    auto finish = [&](LinearizationPoint pt) {
        set_rates_from_vectors(cfg, ch, pt);
        return pt;
    };

    if (strategy == InitStrategy::sdr) {
        const double t_min = t_bounds(cfg, ch).first;
        InnerResult res = solve_inner(cfg, ch, 0.5 * (t_min + 1.0));
        if (res.status != SolveStatus::optimal)
            throw InitializationFailure(
                "initialize_point: inner problem infeasible at the midpoint");
        LinearizationPoint pt;
        pt.q_tilde = extract_rank_one(res.design.q_cov).first;
        // keep the full AN power on the dominant direction
        auto [w1, ratio] = extract_rank_one(res.design.w_cov);
        const double trw = std::real(res.design.w_cov.trace());
        pt.w_tilde = w1.norm() > 0.0 ? CVec(std::sqrt(trw) / w1.norm() * w1)
                                     : CVec(CVec::Zero(cfg.nt));
        pt.rho_tilde = res.design.rho.cwiseMax(1e-9).cwiseMin(1.0);
        return finish(std::move(pt));
    }

    // Shrink the transmit scale while feasibility holds; `hi` stays feasible
    // throughout, so the returned point is always certified.
    auto scaled_point = [&](const CVec& uq, const CVec& uw, double q_frac,
                            const Vec& rho) -> std::optional<LinearizationPoint> {
        auto at_scale = [&](double s) {
            LinearizationPoint pt;
            pt.q_tilde = std::sqrt(q_frac * s * cfg.p_budget) * uq;
            pt.w_tilde = std::sqrt((1.0 - q_frac) * s * cfg.p_budget) * uw;
            pt.rho_tilde = rho;
            return pt;
        };
        auto feasible = [&](const LinearizationPoint& pt) {
            return check_feasibility(cfg, ch, vectors_from_point(pt).to_design(),
                                     1e-9)
                .overall;
        };
        // full power can overshoot the secrecy constraint (the eavesdropper
        // rate grows with scale too), so probe downward for a feasible anchor
        double anchor = 0.0;
        for (double s : {1.0, 0.6, 0.35, 0.2, 0.1, 0.05, 0.02})
            if (feasible(at_scale(s))) {
                anchor = s;
                break;
            }
        if (anchor == 0.0) return std::nullopt;
        double lo = 0.0, hi = anchor;
        for (int it = 0; it < 30; ++it) {
            double mid = 0.5 * (lo + hi);
            (feasible(at_scale(mid)) ? hi : lo) = mid;
        }
        return at_scale(hi);
    };

    if (strategy == InitStrategy::cheap) {
        // matched beam at the worst CR (weakest channel), AN spread on the
        // orthogonal complement of that beam
        Index worst = 0;
        double worst_norm = std::numeric_limits<double>::infinity();
        for (int l = 0; l < cfg.l_count; ++l)
            if (ch.h_cr[l].norm() < worst_norm) {
                worst_norm = ch.h_cr[l].norm();
                worst = l;
            }
        CVec uq = ch.h_cr[worst].normalized();
        CVec flat = CVec::Constant(cfg.nt, 1.0 / std::sqrt(double(cfg.nt)));
        CVec uw = flat - (uq.adjoint() * flat)[0] * uq;
        if (uw.norm() > 1e-9)
            uw.normalize();
        else
            uw.setZero();
        const Vec rho = Vec::Constant(cfg.l_count, 0.5);
        for (double frac : {0.75, 0.5, 0.9, 1.0})
            if (auto pt = scaled_point(uq, uw, frac, rho))
                return finish(std::move(*pt));
        throw InitializationFailure(
            "initialize_point: no feasible cheap start (instance likely infeasible)");
    }

    // random restarts: seeded complex-Gaussian directions
    std::mt19937_64 rng(seed);
    auto uniform01 = [&] {
        return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
    };
    auto gauss_dir = [&](int n) {
        CVec v(n);
        for (int i = 0; i < n; ++i) {
            double r = std::sqrt(-2.0 * std::log(uniform01()));
            double phi = 2.0 * std::numbers::pi * uniform01();
            v[i] = std::polar(r, phi);
        }
        return CVec(v.normalized());
    };
    for (int attempt = 0; attempt < 50; ++attempt) {
        CVec uq = gauss_dir(cfg.nt);
        CVec uw = gauss_dir(cfg.nt);
        double frac = 0.2 + 0.75 * uniform01();
        Vec rho(cfg.l_count);
        for (int l = 0; l < cfg.l_count; ++l) rho[l] = 0.2 + 0.75 * uniform01();
        if (auto pt = scaled_point(uq, uw, frac, rho))
            return finish(std::move(*pt));
    }
    throw InitializationFailure(
        "initialize_point: no feasible random start in 50 attempts");
}

namespace {

// One monotone SPCA round at a fixed target; stops when the relative
// objective change drops below tol_obj or a subproblem cannot be solved.
struct RoundResult {
    std::vector<SpcaIteration> iterations;
    LinearizationPoint last;
    bool settled = false;
};

RoundResult run_round(const SystemConfig& eff, const SystemConfig& cfg,
                      const ChannelSet& ch, LinearizationPoint pt,
                      const SpcaOptions& opts) {
    const SpcaLayout lo(cfg);
    RoundResult round;
    double prev_obj = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opts.max_iter; ++it) {
        ConicProblem prob = build_spca_subproblem(eff, ch, pt);
        ConicSolution sol = InteriorPointSolver(opts.solver).solve(prob);
        if (sol.status == SolveStatus::numerical_failure ||
            sol.status == SolveStatus::max_iterations) {
            SolverOptions loose = opts.solver;
            loose.tol_gap = std::max(loose.tol_gap, 1e-6);
            loose.tol_res = std::max(loose.tol_res, 1e-6);
            sol = InteriorPointSolver(loose).solve(prob);
        }

        SpcaIteration rec;
        rec.status = sol.status;
        if (sol.status != SolveStatus::optimal) {
            rec.point = pt;
            rec.max_violation = std::numeric_limits<double>::quiet_NaN();
            round.iterations.push_back(std::move(rec));
            break;
        }

        LinearizationPoint next;
        next.q_tilde = from_inter(sol.x.segment(lo.q_off, lo.nq2));
        next.w_tilde = from_inter(sol.x.segment(lo.w_off, lo.nq2));
        next.r1_tilde = std::max(sol.x[lo.r1], 1.0 + 1e-6);
        next.r2_tilde = std::min(1.0, std::max(1e-9, sol.x[lo.r2]));
        next.rho_tilde =
            sol.x.segment(lo.rho_off, cfg.l_count).cwiseMax(1e-9).cwiseMin(1.0);

        const double obj = next.q_tilde.squaredNorm();
        // violations always measured against the caller's true targets
        auto rep = check_feasibility(cfg, ch, vectors_from_point(next).to_design(),
                                     1e-6);
        rec.objective = obj;
        rec.point = next;
        rec.max_violation = worst_violation(rep);
        round.iterations.push_back(std::move(rec));

        round.settled =
            std::isfinite(prev_obj) &&
            std::abs(prev_obj - obj) <= opts.tol_obj * std::max(prev_obj, 1e-12);
        prev_obj = obj;
        pt = std::move(next);
        if (round.settled) break;
    }
    round.last = std::move(pt);
    return round;
}

}  // namespace

SpcaTrace spca_solve(const SystemConfig& cfg, const ChannelSet& ch,
                     const LinearizationPoint& init, const SpcaOptions& opts) {
    init.validate(cfg);
    SpcaTrace trace;
    LinearizationPoint pt = init;

    // The scalarized eavesdropper bound in the subproblem is not exact for
    // multi-antenna ERs, so a settled point can miss the true secrecy target.
    // When that happens, inflate the working target by the observed deficit
    // (plus a little slack) and run another round from the settled point.
    // The trace reports the final round only, keeping it monotone.
    SystemConfig eff = cfg;
    double r_prev = 0.0, d_prev = 0.0;
    bool have_prev = false;
    for (int attempt = 0; attempt < 25; ++attempt) {
        RoundResult round = run_round(eff, cfg, ch, pt, opts);
        trace.iterations = std::move(round.iterations);
        pt = std::move(round.last);
        if (trace.iterations.empty() ||
            trace.iterations.back().status != SolveStatus::optimal)
            break;
        auto rep = check_feasibility(cfg, ch, vectors_from_point(pt).to_design(),
                                     1e-6);
        if (round.settled && rep.overall) {
            trace.converged = true;
            break;
        }
        if (rep.overall) continue;  // feasible but still descending: keep going
        double deficit = -rep.rate_margin.minCoeff();
        if (!(deficit > 0.0)) break;  // a non-rate margin failed; give up
        // secant step on the deficit-vs-working-target curve, floored at the
        // plain additive step so progress never stalls
        double step = deficit;
        if (have_prev && d_prev > deficit) {
            double secant = deficit * (eff.r_target - r_prev) / (d_prev - deficit);
            step = std::min(std::max(deficit, secant), 2.0);
        }
        r_prev = eff.r_target;
        d_prev = deficit;
        have_prev = true;
        eff.r_target += step + 1e-4;
    }
    trace.final = vectors_from_point(pt);
    return trace;
}

SpcaTrace spca_best(const SystemConfig& cfg, const ChannelSet& ch,
                    std::uint64_t seed, int restarts, const SpcaOptions& opts) {
    std::optional<SpcaTrace> best;
    bool any_start = false;
    auto consider = [&](InitStrategy strategy, std::uint64_t s) {
        LinearizationPoint init;
        try {
            init = initialize_point(cfg, ch, strategy, s);
        } catch (const InitializationFailure&) {
            return;
        }
        any_start = true;
        SpcaTrace trace = spca_solve(cfg, ch, init, opts);
        const bool better =
            !best ||
            (trace.converged && !best->converged) ||
            (trace.converged == best->converged &&
             trace.iterations.back().objective <
                 best->iterations.back().objective);
        if (!trace.iterations.empty() && better) best = std::move(trace);
    };
    consider(InitStrategy::sdr, seed);
    consider(InitStrategy::cheap, seed);
    for (int r = 0; r < restarts; ++r)
        consider(InitStrategy::random, seed + static_cast<std::uint64_t>(r) + 1);
    if (!any_start)
        throw InitializationFailure("spca_best: no feasible starting point");
    if (!best)  // starts existed but every run failed before its first iterate
        throw InitializationFailure("spca_best: no run produced an iterate");
    return *best;
}

}  // namespace ansec
