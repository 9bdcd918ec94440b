#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ansec/pm_sdr.hpp"

#include <cmath>
#include <limits>

using namespace ansec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// single-antenna scenario with O(1) powers so grid oracles are well scaled
SystemConfig oracle_config() {
    SystemConfig cfg;
    cfg.nt = 1;
    cfg.l_count = 1;
    cfg.k_count = 1;
    cfg.nr = 1;
    cfg.p_budget = 4.0;
    cfg.r_target = 0.8;
    cfg.e_cr_target = 0.05;
    cfg.e_er_target = 0.05;
    cfg.sigma_c_sq = 0.1;
    cfg.sigma_p_sq = 0.2;
    cfg.sigma_k_sq = 0.3;
    return cfg;
}

ChannelSet oracle_channels(double h, double he) {
    return ChannelSet({CVec::Constant(1, h)}, {CMat::Constant(1, 1, he)});
}

// Exhaustive oracle for the scalar inner problem: grids (w, rho) and solves
// the remaining single-variable feasibility interval for q in closed form.
double scalar_inner_oracle(const SystemConfig& cfg, double h, double he,
                           double t) {
    const double h2 = h * h, he2 = he * he;
    const double pow2r = std::pow(2.0, cfg.r_target);
    double best = kInf;
    double w_lo = 0.0, w_hi = cfg.p_budget, r_lo = 1e-4, r_hi = 1.0;
    for (int stage = 0; stage < 4; ++stage) {
        const int steps = 400;
        double best_w = w_lo, best_r = r_lo;
        for (int i = 0; i <= steps; ++i) {
            double w = w_lo + (w_hi - w_lo) * i / steps;
            for (int j = 0; j <= steps; ++j) {
                double rho = r_lo + (r_hi - r_lo) * j / steps;
                if (rho >= 1.0) continue;  // CR energy needs rho < 1
                double q_need = (pow2r - t) *
                                (h2 * w + cfg.sigma_c_sq + cfg.sigma_p_sq / rho) /
                                (t * h2);
                double q_ecr = (cfg.e_cr_target / (cfg.eta_cr * (1.0 - rho)) -
                                cfg.sigma_c_sq) / h2 - w;
                double q_eer =
                    (cfg.e_er_target / cfg.eta_er - cfg.sigma_k_sq) / he2 - w;
                double q = std::max({0.0, q_need, q_ecr, q_eer});
                double q_cap = std::min(cfg.p_budget - w,
                                        (1.0 / t - 1.0) * (cfg.sigma_k_sq + he2 * w) / he2);
                if (q <= q_cap && q < best) {
                    best = q;
                    best_w = w;
                    best_r = rho;
                }
            }
        }
        double w_span = (w_hi - w_lo) / steps, r_span = (r_hi - r_lo) / steps;
        w_lo = std::max(0.0, best_w - 2.0 * w_span);
        w_hi = std::min(cfg.p_budget, best_w + 2.0 * w_span);
        r_lo = std::max(1e-6, best_r - 2.0 * r_span);
        r_hi = std::min(1.0, best_r + 2.0 * r_span);
    }
    return best;
}

// small multi-antenna scenario with comfortably feasible targets
SystemConfig desk_config() {
    SystemConfig cfg;
    cfg.l_count = 2;
    cfg.k_count = 2;
    cfg.e_cr_target = 1e-4;
    cfg.e_er_target = 1e-3;
    return cfg;
}

}  // namespace

TEST_CASE("t_bounds") {
    SystemConfig cfg;
    cfg.nt = 1;
    cfg.l_count = 1;
    cfg.k_count = 1;
    cfg.nr = 1;
    cfg.p_budget = 1.0;
    cfg.sigma_c_sq = 0.5;
    cfg.sigma_p_sq = 0.5;
    auto [t_min, t_max] = t_bounds(cfg, oracle_channels(std::sqrt(3.0), 1.0));
    CHECK(t_max == 1.0);
    CHECK(t_min == doctest::Approx(0.25).epsilon(1e-12));

    SystemConfig cfg2 = cfg;
    cfg2.l_count = 2;
    ChannelSet two({CVec::Constant(1, std::sqrt(3.0)), CVec::Constant(1, 3.0)},
                   {CMat::Constant(1, 1, 1.0)});
    CHECK(t_bounds(cfg2, two).first == doctest::Approx(0.1).epsilon(1e-12));

    // vanishing transmit power degenerates the interval toward 1
    SystemConfig cfg3 = cfg;
    cfg3.p_budget = 1e-12;
    CHECK(t_bounds(cfg3, oracle_channels(1.0, 1.0)).first ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("build_inner: cone structure") {
    SystemConfig cfg = desk_config();
    cfg.k_count = 3;
    auto ch = generate_channels(cfg, 5);
    auto p = build_inner(cfg, ch, 0.5);
    CHECK(p.cones.nonneg == 2 * 2 + 3 + 1);
    REQUIRE(p.cones.soc.size() == 4);  // L power-splitting + L CR-energy
    for (Index q : p.cones.soc) CHECK(q == 3);
    REQUIRE(p.cones.psd.size() == 5);  // Q, W, then 3 eavesdropper LMIs
    CHECK(p.cones.psd[0] == 8);
    CHECK(p.cones.psd[1] == 8);
    CHECK(p.cones.psd[2] == 4);
    p.validate();

    CHECK_THROWS_AS(build_inner(cfg, ch, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_inner(cfg, ch, 1.5), std::invalid_argument);
}

TEST_CASE("build_inner: rate row degenerates at t = 1, r_target = 0") {
    SystemConfig cfg = oracle_config();
    cfg.r_target = 0.0;
    auto ch = oracle_channels(1.0, 0.5);
    auto p = build_inner(cfg, ch, 1.0);
    // 2^R - t = 0 wipes the W, u, and constant terms of the rate row
    CHECK(p.h[0] == 0.0);
    CHECK(p.G(0, 0) == doctest::Approx(-1.0));  // -t h^2 on the Q parameter
    Index n = p.num_vars();
    CHECK(p.G(0, n - 2) == 0.0);  // u coefficient
}

TEST_CASE("solve_inner matches the scalar grid oracle") {
    auto cfg = oracle_config();
    const double h = 1.0, he = 0.6;
    auto ch = oracle_channels(h, he);
    for (double t : {0.2, 0.3, 0.35}) {
        double oracle = scalar_inner_oracle(cfg, h, he, t);
        auto res = solve_inner(cfg, ch, t);
        REQUIRE(res.status == SolveStatus::optimal);
        CHECK(res.f_t == doctest::Approx(oracle).epsilon(1e-3));
    }
    // the eavesdropper cap shrinks with t until the instance turns infeasible;
    // the oracle and the solver must agree on that too
    CHECK(scalar_inner_oracle(cfg, h, he, 0.6) == kInf);
    CHECK(solve_inner(cfg, ch, 0.6).status == SolveStatus::infeasible);
}

TEST_CASE("solve_inner: infeasible targets") {
    auto cfg = oracle_config();
    cfg.e_cr_target = 100.0;  // far beyond the power budget
    auto res = solve_inner(cfg, oracle_channels(1.0, 0.6), 0.5);
    CHECK(res.status == SolveStatus::infeasible);
    CHECK(res.f_t == kInf);
}

TEST_CASE("solve_inner: trivial targets cost nothing") {
    auto cfg = oracle_config();
    cfg.r_target = 0.0;
    cfg.e_cr_target = 1e-9;  // below the noise-floor harvest
    cfg.e_er_target = 1e-9;
    auto res = solve_inner(cfg, oracle_channels(1.0, 0.6), 1.0);
    REQUIRE(res.status == SolveStatus::optimal);
    CHECK(res.f_t <= 1e-6);
}

TEST_CASE("inner solution is feasible for the true constraints") {
    SystemConfig cfg = desk_config();
    auto ch = generate_channels(cfg, 21);
    auto trace = line_search(cfg, ch, 12);
    REQUIRE(trace.feasible);
    auto rep = check_feasibility(cfg, ch, trace.best.design, 1e-6);
    CHECK(rep.overall);
    // grid minimality
    for (auto& [t, f] : trace.grid) CHECK(f >= trace.best.f_t);
}

TEST_CASE("baseline orderings: no-AN and fixed-rho never help") {
    SystemConfig cfg = desk_config();
    for (unsigned seed : {31u, 32u, 33u}) {
        auto ch = generate_channels(cfg, seed);
        auto free_an = line_search(cfg, ch, 10);
        InnerOptions no_an;
        no_an.with_an = false;
        auto forced = line_search(cfg, ch, 10, no_an);
        InnerOptions half;
        half.fixed_rho = 0.5;
        auto pinned = line_search(cfg, ch, 10, half);
        REQUIRE(free_an.feasible);
        if (forced.feasible) CHECK(free_an.best.f_t <= forced.best.f_t + 1e-6);
        if (pinned.feasible) CHECK(free_an.best.f_t <= pinned.best.f_t + 1e-6);
        if (pinned.feasible)
            CHECK(pinned.best.design.rho[0] == doctest::Approx(0.5).epsilon(1e-6));
    }
}

TEST_CASE("line_search: two points evaluate only the endpoints") {
    SystemConfig cfg = desk_config();
    auto ch = generate_channels(cfg, 41);
    auto trace = line_search(cfg, ch, 2);
    auto [t_min, t_max] = t_bounds(cfg, ch);
    REQUIRE(trace.grid.size() == 2);
    CHECK(trace.grid[0].first == doctest::Approx(t_min));
    CHECK(trace.grid[1].first == doctest::Approx(t_max));
    CHECK_THROWS_AS(line_search(cfg, ch, 1), std::invalid_argument);
}

TEST_CASE("line_search: refinement only improves the objective") {
    SystemConfig cfg = desk_config();
    auto ch = generate_channels(cfg, 55);
    auto coarse = line_search(cfg, ch, 8);
    auto refined = line_search(cfg, ch, 8, {}, true);
    REQUIRE(coarse.feasible);
    REQUIRE(refined.feasible);
    CHECK(refined.best.f_t <= coarse.best.f_t + 1e-12);
}

TEST_CASE("extract_rank_one") {
    CVec q(3);
    q << std::complex<double>(1.0, 0.5), std::complex<double>(-0.3, 0.2),
        std::complex<double>(0.0, -0.7);
    auto [rec, ratio] = extract_rank_one(CMat(q * q.adjoint()));
    CHECK(ratio <= 1e-12);
    // recovered up to a unit phase: compare covariances
    CHECK((rec * rec.adjoint() - q * q.adjoint()).norm() <= 1e-10);
    Index imax = 0;
    rec.cwiseAbs().maxCoeff(&imax);
    CHECK(std::abs(std::imag(rec[imax])) <= 1e-12);
    CHECK(std::real(rec[imax]) >= 0.0);

    auto [qz, rz] = extract_rank_one(CMat::Zero(2, 2));
    CHECK(qz.norm() == 0.0);
    CHECK(rz == 0.0);

    auto [qi, ri] = extract_rank_one(CMat::Identity(2, 2));
    CHECK(ri == doctest::Approx(1.0));
}

TEST_CASE("verify_rho_kkt: formula identities") {
    SystemConfig cfg = oracle_config();
    InnerResult res;
    res.t = 0.5;
    const double pow2r = std::pow(2.0, cfg.r_target);
    double xi = 0.7, mu = 0.4;
    double num = std::sqrt(xi * (pow2r - res.t) * cfg.sigma_p_sq);
    double den = num + std::sqrt(mu * cfg.e_cr_target / cfg.eta_cr);
    res.duals.xi = Vec::Constant(1, xi);
    res.duals.mu = Vec::Constant(1, mu);
    res.design.rho = Vec::Constant(1, num / den);
    CHECK(verify_rho_kkt(res, cfg)[0] == doctest::Approx(0.0));

    // symmetric case: equal duals and matched constants give rho = 1/2
    SystemConfig sym = cfg;
    sym.e_cr_target = (pow2r - res.t) * sym.sigma_p_sq * sym.eta_cr;
    res.duals.mu = res.duals.xi;
    res.design.rho = Vec::Constant(1, 0.5);
    CHECK(verify_rho_kkt(res, sym)[0] == doctest::Approx(0.0));

    // vanishing duals are flagged, not evaluated
    res.duals.xi = Vec::Zero(1);
    CHECK(std::isnan(verify_rho_kkt(res, sym)[0]));
}

TEST_CASE("duals certify the optimum on a realistic instance") {
    SystemConfig cfg = desk_config();
    auto ch = generate_channels(cfg, 77);
    auto trace = line_search(cfg, ch, 15);
    REQUIRE(trace.feasible);
    const auto& res = trace.best;

    auto [q, ratio] = extract_rank_one(res.design.q_cov);
    CHECK(ratio <= 1e-5);

    Vec residual = verify_rho_kkt(res, cfg);
    for (int l = 0; l < cfg.l_count; ++l) {
        REQUIRE(!std::isnan(residual[l]));
        CHECK(residual[l] <= 1e-4);
    }
    double zq = (res.duals.z * res.design.q_cov).norm();
    CHECK(zq <= 1e-6 * res.design.q_cov.norm());
}
