#pragma once

#include "ansec/conic.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace ansec {

// Scenario scalars. All powers in linear watts; rates in bits/s/Hz;
// distances in meters. dBm conversion happens only at the CLI boundary.
struct SystemConfig {
    int nt = 4;       // transmit antennas N_T
    int l_count = 4;  // co-located receivers L
    int k_count = 3;  // energy-harvesting receivers K
    int nr = 2;       // ER receive antennas N_R

    double p_budget = 1.0;       // total transmit power P
    double r_target = 1.0;       // target secrecy rate per CR
    double e_cr_target = 1e-5;   // harvested-power target per CR
    double e_er_target = 1e-5;   // harvested-power target per ER
    double eta_cr = 0.3;         // CR energy-harvesting efficiency
    double eta_er = 0.3;         // ER energy-harvesting efficiency
    double sigma_c_sq = 1e-9;    // CR antenna noise power
    double sigma_p_sq = 1e-8;    // CR power-splitting circuit noise power
    double sigma_k_sq = 1e-8;    // ER noise power

    double d_cr = 40.0;   // transmitter-CR distance
    double d_er = 20.0;   // transmitter-ER distance
    double d_ref = 10.0;  // reference distance
    double alpha = 3.0;   // path-loss exponent
    double rician_k = 3.0;  // Rician factor; +inf selects a pure-LOS channel

    // throws std::invalid_argument on violated invariants
    void validate() const;
};

// One channel realization: L CR vectors and K ER matrices.
struct ChannelSet {
    std::vector<CVec> h_cr;  // each nt
    std::vector<CMat> h_er;  // each nt x nr

    ChannelSet(std::vector<CVec> cr, std::vector<CMat> er);
};

// Covariance-form design (Q, W, rho).
struct BeamDesign {
    CMat q_cov;  // transmit covariance, Hermitian PSD
    CMat w_cov;  // AN covariance, Hermitian PSD
    Vec rho;     // power-splitting ratios, one per CR, in (0, 1]
};

// Vector-form design; converts losslessly via Q = qq^H, W = ww^H.
struct BeamVectors {
    CVec q;
    CVec w;
    Vec rho;

    BeamDesign to_design() const;
};

// Per-constraint slacks of the power-minimization problem. Margins are
// "value minus requirement" (nonnegative means satisfied); energy margins
// are compared at tolerance scaled by (1 + target).
struct FeasibilityReport {
    Vec rate_margin;    // per CR: achieved secrecy rate - r_target
    double power_margin = 0.0;  // p_budget - tr(Q + W)
    Vec e_cr_margin;    // per CR: harvested - e_cr_target
    Vec e_er_margin;    // per ER: harvested - e_er_target
    double q_min_eig = 0.0;
    double w_min_eig = 0.0;
    bool rho_in_range = false;
    bool overall = false;
};

// large-scale gain (d / d_ref)^(-alpha)
double path_loss(double d, double d_ref, double alpha);

// Rician channels with ULA line-of-sight components; deterministic in
// (cfg, seed). CR vectors use the d_cr path loss, ER columns use d_er.
ChannelSet generate_channels(const SystemConfig& cfg, std::uint64_t seed);

// legitimate-link term of the secrecy rate (before subtracting the
// eavesdropper term), log2(1 + rho h^H Q h / (rho (sigma_c^2 + h^H W h) + sigma_p^2))
double cr_rate_term(const SystemConfig& cfg, const CVec& h, const CMat& q_cov,
                    const CMat& w_cov, double rho);

// eavesdropper term log2 det(I + (H^H W H + sigma_k^2 I)^{-1} H^H Q H)
double er_rate_term(const SystemConfig& cfg, const CMat& h_er, const CMat& q_cov,
                    const CMat& w_cov);

// per-CR secrecy rates, clamped at zero
Vec secrecy_rate(const SystemConfig& cfg, const ChannelSet& ch,
                 const BeamDesign& design);

// (per-CR, per-ER) harvested powers in watts
std::pair<Vec, Vec> harvested_power(const SystemConfig& cfg, const ChannelSet& ch,
                                    const BeamDesign& design);

// Evaluates every constraint of the original problem on the true (not
// relaxed, not linearized) expressions.
FeasibilityReport check_feasibility(const SystemConfig& cfg, const ChannelSet& ch,
                                    const BeamDesign& design,
                                    double tol_feas = 1e-6);

}  // namespace ansec
