#include "ansec/model.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace ansec {
namespace {

// Deterministic standard-normal stream. Box-Muller on top of the fixed
// mt19937_64 bit stream, so draws are identical across platforms and
// standard-library implementations.
class NormalStream {
  public:
    explicit NormalStream(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double phi = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(phi);
        have_spare_ = true;
        return r * std::cos(phi);
    }

    // uniform on (0, 1]; never returns 0 so log() above is safe
    double uniform01() {
        return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    }

  private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

CVec steering_vector(int nt, double theta, double gain) {
    CVec a(nt);
    const double scale = std::sqrt(gain / nt);
    for (int i = 0; i < nt; ++i) {
        double phase = std::numbers::pi * i * std::sin(theta);
        a[i] = std::polar(scale, phase);
    }
    return a;
}

// one Rician draw: LOS steering at theta plus i.i.d. complex Gaussian
// scattering with per-entry variance gain / nt
CVec rician_vector(int nt, double gain, double k_factor, double theta,
                   NormalStream& ns) {
    CVec h = steering_vector(nt, theta, gain);
    if (std::isinf(k_factor)) {
        // skip no draws: the scattered component is exactly zero
        return h;
    }
    const double los_w = std::sqrt(k_factor / (1.0 + k_factor));
    const double nlos_w = std::sqrt(1.0 / (1.0 + k_factor));
    const double entry_sd = std::sqrt(gain / nt / 2.0);
    CVec scatter(nt);
    for (int i = 0; i < nt; ++i) {
        double re = ns.next();
        double im = ns.next();
        scatter[i] = std::complex<double>(entry_sd * re, entry_sd * im);
    }
    return los_w * h + nlos_w * scatter;
}

double quad_form(const CVec& h, const CMat& m) {
    return std::real(std::complex<double>(h.adjoint() * m * h));
}

double min_eig(const CMat& m) {
    Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace

void SystemConfig::validate() const {
    if (nt < 1 || l_count < 1 || k_count < 1 || nr < 1)
        throw std::invalid_argument("SystemConfig: counts must be >= 1");
    if (!(p_budget > 0.0)) throw std::invalid_argument("SystemConfig: p_budget must be positive");
    if (r_target < 0.0) throw std::invalid_argument("SystemConfig: r_target must be >= 0");
    if (!(e_cr_target > 0.0) || !(e_er_target > 0.0))
        throw std::invalid_argument("SystemConfig: energy targets must be positive");
    if (!(eta_cr > 0.0 && eta_cr <= 1.0) || !(eta_er > 0.0 && eta_er <= 1.0))
        throw std::invalid_argument("SystemConfig: efficiencies must be in (0, 1]");
    if (!(sigma_c_sq > 0.0) || !(sigma_p_sq > 0.0) || !(sigma_k_sq > 0.0))
        throw std::invalid_argument("SystemConfig: noise powers must be positive");
    if (!(d_cr > 0.0) || !(d_er > 0.0) || !(d_ref > 0.0))
        throw std::invalid_argument("SystemConfig: distances must be positive");
    if (!(alpha > 0.0)) throw std::invalid_argument("SystemConfig: alpha must be positive");
    if (!(rician_k > 0.0)) throw std::invalid_argument("SystemConfig: rician_k must be positive");
}

ChannelSet::ChannelSet(std::vector<CVec> cr, std::vector<CMat> er)
    : h_cr(std::move(cr)), h_er(std::move(er)) {
    for (const CVec& h : h_cr) {
        if (!h.allFinite()) throw std::invalid_argument("ChannelSet: non-finite CR channel");
        if (h.norm() == 0.0) throw std::invalid_argument("ChannelSet: all-zero CR channel");
    }
    for (const CMat& h : h_er) {
        if (!h.allFinite()) throw std::invalid_argument("ChannelSet: non-finite ER channel");
        if (h.norm() == 0.0) throw std::invalid_argument("ChannelSet: all-zero ER channel");
    }
}

BeamDesign BeamVectors::to_design() const {
    return BeamDesign{CMat(q * q.adjoint()), CMat(w * w.adjoint()), rho};
}

double path_loss(double d, double d_ref, double alpha) {
    if (!(d > 0.0) || !(d_ref > 0.0))
        throw std::invalid_argument("path_loss: distances must be positive");
    return std::pow(d / d_ref, -alpha);
}

ChannelSet generate_channels(const SystemConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    NormalStream ns(seed);
    const double gain_cr = path_loss(cfg.d_cr, cfg.d_ref, cfg.alpha);
    const double gain_er = path_loss(cfg.d_er, cfg.d_ref, cfg.alpha);

    // Draw order is fixed: per CR an angle then its scattered entries, then
    // per ER an angle and its columns in order. Changing this order would
    // silently break seed reproducibility of every experiment.
    std::vector<CVec> h_cr;
    h_cr.reserve(cfg.l_count);
    for (int l = 0; l < cfg.l_count; ++l) {
        double theta = 2.0 * std::numbers::pi * ns.uniform01();
        h_cr.push_back(rician_vector(cfg.nt, gain_cr, cfg.rician_k, theta, ns));
    }
    std::vector<CMat> h_er;
    h_er.reserve(cfg.k_count);
    for (int k = 0; k < cfg.k_count; ++k) {
        double theta = 2.0 * std::numbers::pi * ns.uniform01();
        CMat h(cfg.nt, cfg.nr);
        for (int c = 0; c < cfg.nr; ++c)
            h.col(c) = rician_vector(cfg.nt, gain_er, cfg.rician_k, theta, ns);
        h_er.push_back(std::move(h));
    }
    return ChannelSet(std::move(h_cr), std::move(h_er));
}

double cr_rate_term(const SystemConfig& cfg, const CVec& h, const CMat& q_cov,
                    const CMat& w_cov, double rho) {
    double sig = quad_form(h, q_cov);
    double intf = rho * (cfg.sigma_c_sq + quad_form(h, w_cov)) + cfg.sigma_p_sq;
    return std::log2(1.0 + rho * sig / intf);
}

double er_rate_term(const SystemConfig& cfg, const CMat& h_er, const CMat& q_cov,
                    const CMat& w_cov) {
    const Index nr = h_er.cols();
    CMat noise = h_er.adjoint() * w_cov * h_er +
                 cfg.sigma_k_sq * CMat::Identity(nr, nr);
    CMat sig = h_er.adjoint() * q_cov * h_er;
    // log det(I + noise^{-1} sig) = log det(noise + sig) - log det(noise)
    double num = std::real(CMat(noise + sig).determinant());
    double den = std::real(noise.determinant());
    return std::log2(num / den);
}

Vec secrecy_rate(const SystemConfig& cfg, const ChannelSet& ch,
                 const BeamDesign& design) {
    double worst_er = 0.0;
    for (const CMat& h : ch.h_er)
        worst_er = std::max(worst_er,
                            er_rate_term(cfg, h, design.q_cov, design.w_cov));
    Vec rates(cfg.l_count);
    for (int l = 0; l < cfg.l_count; ++l) {
        double cr = cr_rate_term(cfg, ch.h_cr[l], design.q_cov, design.w_cov,
                                 design.rho[l]);
        rates[l] = std::max(0.0, cr - worst_er);
    }
    return rates;
}

std::pair<Vec, Vec> harvested_power(const SystemConfig& cfg, const ChannelSet& ch,
                                    const BeamDesign& design) {
    CMat total = design.q_cov + design.w_cov;
    Vec e_cr(cfg.l_count);
    for (int l = 0; l < cfg.l_count; ++l)
        e_cr[l] = cfg.eta_cr * (1.0 - design.rho[l]) *
                  (quad_form(ch.h_cr[l], total) + cfg.sigma_c_sq);
    Vec e_er(cfg.k_count);
    for (int k = 0; k < cfg.k_count; ++k) {
        const CMat& h = ch.h_er[k];
        double harvested =
            std::real(CMat(h.adjoint() * total * h).trace()) +
            cfg.nr * cfg.sigma_k_sq;
        e_er[k] = cfg.eta_er * harvested;
    }
    return {e_cr, e_er};
}

FeasibilityReport check_feasibility(const SystemConfig& cfg, const ChannelSet& ch,
                                    const BeamDesign& design, double tol_feas) {
    FeasibilityReport rep;
    rep.rate_margin = secrecy_rate(cfg, ch, design).array() - cfg.r_target;
    rep.power_margin = cfg.p_budget -
                       std::real(CMat(design.q_cov + design.w_cov).trace());
    auto [e_cr, e_er] = harvested_power(cfg, ch, design);
    rep.e_cr_margin = e_cr.array() - cfg.e_cr_target;
    rep.e_er_margin = e_er.array() - cfg.e_er_target;
    rep.q_min_eig = min_eig(design.q_cov);
    rep.w_min_eig = min_eig(design.w_cov);
    rep.rho_in_range = (design.rho.array() > 0.0).all() &&
                       (design.rho.array() <= 1.0 + tol_feas).all();

    const double e_cr_tol = tol_feas * (1.0 + cfg.e_cr_target);
    const double e_er_tol = tol_feas * (1.0 + cfg.e_er_target);
    const double psd_tol =
        tol_feas * (1.0 + std::real(CMat(design.q_cov + design.w_cov).trace()));
    rep.overall = (rep.rate_margin.array() >= -tol_feas).all() &&
                  rep.power_margin >= -tol_feas * (1.0 + cfg.p_budget) &&
                  (rep.e_cr_margin.array() >= -e_cr_tol).all() &&
                  (rep.e_er_margin.array() >= -e_er_tol).all() &&
                  rep.q_min_eig >= -psd_tol && rep.w_min_eig >= -psd_tol &&
                  rep.rho_in_range;
    return rep;
}

}  // namespace ansec
