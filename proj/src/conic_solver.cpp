#include "ansec/conic.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <optional>

namespace ansec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStepDamp = 0.99;

struct Blocks {
    // offsets of each block in a cone-space vector
    Index nonneg_off = 0, nonneg_dim = 0;
    std::vector<Index> soc_off, soc_dim;
    std::vector<Index> psd_off, psd_side;
    Index total = 0;

    explicit Blocks(const ConeDims& k) {
        nonneg_off = 0;
        nonneg_dim = k.nonneg;
        Index off = k.nonneg;
        for (Index q : k.soc) {
            soc_off.push_back(off);
            soc_dim.push_back(q);
            off += q;
        }
        for (Index s : k.psd) {
            psd_off.push_back(off);
            psd_side.push_back(s);
            off += svec_dim(s);
        }
        total = off;
    }
};

// Nesterov-Todd scaling, one entry per block
struct Scaling {
    Vec d;                        // nonneg part
    std::vector<double> beta;     // SOC
    std::vector<Vec> v;           // SOC, unit hyperbolic vectors
    std::vector<Mat> r, rti;      // PSD, rti = r^{-T}
    std::vector<Vec> sigma;       // PSD, lambda eigenvalues
};

Vec cone_identity(const Blocks& bl) {
    Vec e = Vec::Zero(bl.total);
    e.head(bl.nonneg_dim).setOnes();
    for (size_t i = 0; i < bl.soc_off.size(); ++i) e[bl.soc_off[i]] = 1.0;
    for (size_t i = 0; i < bl.psd_off.size(); ++i) {
        Index s = bl.psd_side[i];
        e.segment(bl.psd_off[i], svec_dim(s)) = svec(Mat::Identity(s, s));
    }
    return e;
}

// minimal t with u + t*e in K, i.e. -mineig(u)
double max_step_to_cone(const Blocks& bl, const Vec& u) {
    double t = -kInf;
    for (Index i = 0; i < bl.nonneg_dim; ++i) t = std::max(t, -u[i]);
    for (size_t i = 0; i < bl.soc_off.size(); ++i) {
        auto seg = u.segment(bl.soc_off[i], bl.soc_dim[i]);
        double tail = bl.soc_dim[i] > 1 ? seg.tail(bl.soc_dim[i] - 1).norm() : 0.0;
        t = std::max(t, tail - seg[0]);
    }
    for (size_t i = 0; i < bl.psd_off.size(); ++i) {
        Index s = bl.psd_side[i];
        Mat m = smat(u.segment(bl.psd_off[i], svec_dim(s)));
        Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
        t = std::max(t, -es.eigenvalues().minCoeff());
    }
    return t;
}

// maximal alpha >= 0 with lambda + alpha*dir in K (lambda strictly interior)
double max_alpha(const Blocks& bl, const Scaling& w, const Vec& lmbda, const Vec& dir) {
    double amax = kInf;
    for (Index i = 0; i < bl.nonneg_dim; ++i)
        if (dir[i] < 0.0) amax = std::min(amax, -lmbda[i] / dir[i]);
    for (size_t i = 0; i < bl.soc_off.size(); ++i) {
        Index q = bl.soc_dim[i];
        auto l = lmbda.segment(bl.soc_off[i], q);
        auto d = dir.segment(bl.soc_off[i], q);
        double l0 = l[0], d0 = d[0];
        double l1d1 = 0.0, d1n2 = 0.0, l1n2 = 0.0;
        if (q > 1) {
            l1d1 = l.tail(q - 1).dot(d.tail(q - 1));
            d1n2 = d.tail(q - 1).squaredNorm();
            l1n2 = l.tail(q - 1).squaredNorm();
        }
        // (l0+a d0)^2 - ||l1+a d1||^2 >= 0 and l0 + a d0 >= 0
        double a = d0 * d0 - d1n2;
        double b = 2.0 * (l0 * d0 - l1d1);
        double c = l0 * l0 - l1n2;  // > 0 strictly interior
        double bound = kInf;
        double disc = b * b - 4.0 * a * c;
        if (std::abs(a) < 1e-300) {
            if (b < 0.0) bound = -c / b;
        } else if (a > 0.0) {
            if (disc >= 0.0 && b < 0.0) bound = (-b - std::sqrt(disc)) / (2.0 * a);
        } else {
            // a < 0: exactly one positive root
            bound = (-b - std::sqrt(std::max(0.0, disc))) / (2.0 * a);
        }
        if (d0 < 0.0) bound = std::min(bound, -l0 / d0);
        if (bound >= 0.0) amax = std::min(amax, bound);
    }
    for (size_t i = 0; i < bl.psd_off.size(); ++i) {
        Index s = bl.psd_side[i];
        Mat dm = smat(dir.segment(bl.psd_off[i], svec_dim(s)));
        Vec isq = w.sigma[i].cwiseSqrt().cwiseInverse();
        Mat scaled = isq.asDiagonal() * dm * isq.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Mat> es(scaled, Eigen::EigenvaluesOnly);
        double m = es.eigenvalues().minCoeff();
        if (m < 0.0) amax = std::min(amax, -1.0 / m);
    }
    return amax;
}

std::optional<Scaling> compute_scaling(const Blocks& bl, const Vec& s, const Vec& z) {
    Scaling w;
    w.d = (s.head(bl.nonneg_dim).array() / z.head(bl.nonneg_dim).array()).sqrt();
    if (!w.d.allFinite()) return std::nullopt;
    for (size_t i = 0; i < bl.soc_off.size(); ++i) {
        Index q = bl.soc_dim[i];
        auto sb = s.segment(bl.soc_off[i], q);
        auto zb = z.segment(bl.soc_off[i], q);
        auto jnrm2 = [](const Eigen::Ref<const Vec>& u) {
            double t = u.size() > 1 ? u.tail(u.size() - 1).squaredNorm() : 0.0;
            return u[0] * u[0] - t;
        };
        double aa = jnrm2(sb), bb = jnrm2(zb);
        if (!(aa > 0.0) || !(bb > 0.0)) return std::nullopt;
        aa = std::sqrt(aa);
        bb = std::sqrt(bb);
        Vec sbar = sb / aa, zbar = zb / bb;
        double gamma2 = 0.5 * (1.0 + sbar.dot(zbar));
        if (!(gamma2 > 0.0)) return std::nullopt;
        double gamma = std::sqrt(gamma2);
        Vec jz = zbar;
        if (q > 1) jz.tail(q - 1) = -zbar.tail(q - 1);
        // NT scaling point, then the half-angle Householder vector so that
        // beta*(2vv' - J) maps z to lambda and s to lambda under the inverse
        Vec wpt = (sbar + jz) / (2.0 * gamma);
        if (!(wpt[0] + 1.0 > 0.0)) return std::nullopt;
        Vec vv = wpt;
        vv[0] += 1.0;
        vv /= std::sqrt(2.0 * (wpt[0] + 1.0));
        w.beta.push_back(std::sqrt(aa / bb));
        w.v.push_back(vv);
    }
    for (size_t i = 0; i < bl.psd_off.size(); ++i) {
        Index side = bl.psd_side[i];
        Mat sm = smat(s.segment(bl.psd_off[i], svec_dim(side)));
        Mat zm = smat(z.segment(bl.psd_off[i], svec_dim(side)));
        Eigen::LLT<Mat> ls(sm), lz(zm);
        if (ls.info() != Eigen::Success || lz.info() != Eigen::Success)
            return std::nullopt;
        Mat Ls = ls.matrixL();
        Mat Lz = lz.matrixL();
        Eigen::JacobiSVD<Mat> svd(Lz.transpose() * Ls,
                                  Eigen::ComputeFullU | Eigen::ComputeFullV);
        Vec sig = svd.singularValues();
        if (sig.minCoeff() <= 0.0) return std::nullopt;
        Vec sq = sig.cwiseSqrt();
        // r = Lz^{-T} U sqrt(Sigma), rti = Lz U Sigma^{-1/2}
        Mat r = Lz.transpose().triangularView<Eigen::Upper>().solve(
                    Mat(svd.matrixU())) *
                sq.asDiagonal();
        Mat rti = Lz * svd.matrixU() * sq.cwiseInverse().asDiagonal();
        w.r.push_back(r);
        w.rti.push_back(rti);
        w.sigma.push_back(sig);
    }
    return w;
}

enum class WMode { w, wt, winv, wtinv };

// apply the NT scaling (or its transpose/inverse) blockwise
Vec apply_scaling(const Blocks& bl, const Scaling& w, const Vec& u, WMode mode) {
    Vec out(bl.total);
    {
        auto ub = u.head(bl.nonneg_dim).array();
        auto db = w.d.array();
        if (mode == WMode::w || mode == WMode::wt)
            out.head(bl.nonneg_dim) = ub * db;
        else
            out.head(bl.nonneg_dim) = ub / db;
    }
    for (size_t i = 0; i < bl.soc_off.size(); ++i) {
        Index q = bl.soc_dim[i];
        auto ub = u.segment(bl.soc_off[i], q);
        const Vec& v = w.v[i];
        Vec ju = ub;
        if (q > 1) ju.tail(q - 1) = -ub.tail(q - 1);
        if (mode == WMode::w || mode == WMode::wt) {
            out.segment(bl.soc_off[i], q) =
                w.beta[i] * (2.0 * v * v.dot(ub) - ju);
        } else {
            Vec jv = v;
            if (q > 1) jv.tail(q - 1) = -v.tail(q - 1);
            out.segment(bl.soc_off[i], q) =
                (2.0 * jv * jv.dot(ub) - ju) / w.beta[i];
        }
    }
    for (size_t i = 0; i < bl.psd_off.size(); ++i) {
        Index s = bl.psd_side[i];
        Mat um = smat(u.segment(bl.psd_off[i], svec_dim(s)));
        const Mat& r = w.r[i];
        const Mat& rti = w.rti[i];
        Mat res;
        switch (mode) {
            case WMode::w: res = r.transpose() * um * r; break;
            case WMode::wt: res = r * um * r.transpose(); break;
            case WMode::winv: res = rti * um * rti.transpose(); break;
            case WMode::wtinv: res = rti.transpose() * um * rti; break;
        }
        out.segment(bl.psd_off[i], svec_dim(s)) = svec(res);
    }
    return out;
}

Vec jordan(const Blocks& bl, const Vec& u, const Vec& v) {
    Vec out(bl.total);
    out.head(bl.nonneg_dim) =
        u.head(bl.nonneg_dim).cwiseProduct(v.head(bl.nonneg_dim));
    for (size_t i = 0; i < bl.soc_off.size(); ++i) {
        Index q = bl.soc_dim[i];
        auto ub = u.segment(bl.soc_off[i], q);
        auto vb = v.segment(bl.soc_off[i], q);
        out[bl.soc_off[i]] = ub.dot(vb);
        if (q > 1)
            out.segment(bl.soc_off[i] + 1, q - 1) =
                ub[0] * vb.tail(q - 1) + vb[0] * ub.tail(q - 1);
    }
    for (size_t i = 0; i < bl.psd_off.size(); ++i) {
        Index s = bl.psd_side[i];
        Mat um = smat(u.segment(bl.psd_off[i], svec_dim(s)));
        Mat vm = smat(v.segment(bl.psd_off[i], svec_dim(s)));
        out.segment(bl.psd_off[i], svec_dim(s)) =
            svec(0.5 * (um * vm + vm * um));
    }
    return out;
}

// solve lambda o u = rhs for u; for PSD blocks mat(lambda) is diag(sigma)
Vec jordan_div(const Blocks& bl, const Scaling& w, const Vec& lmbda, const Vec& rhs) {
    Vec out(bl.total);
    out.head(bl.nonneg_dim) =
        rhs.head(bl.nonneg_dim).cwiseQuotient(lmbda.head(bl.nonneg_dim));
    for (size_t i = 0; i < bl.soc_off.size(); ++i) {
        Index q = bl.soc_dim[i];
        auto lb = lmbda.segment(bl.soc_off[i], q);
        auto rb = rhs.segment(bl.soc_off[i], q);
        double l1n2 = q > 1 ? lb.tail(q - 1).squaredNorm() : 0.0;
        double det = lb[0] * lb[0] - l1n2;
        double l1r1 = q > 1 ? lb.tail(q - 1).dot(rb.tail(q - 1)) : 0.0;
        double u0 = (lb[0] * rb[0] - l1r1) / det;
        out[bl.soc_off[i]] = u0;
        if (q > 1)
            out.segment(bl.soc_off[i] + 1, q - 1) =
                (rb.tail(q - 1) - u0 * lb.tail(q - 1)) / lb[0];
    }
    for (size_t i = 0; i < bl.psd_off.size(); ++i) {
        Index s = bl.psd_side[i];
        Mat rm = smat(rhs.segment(bl.psd_off[i], svec_dim(s)));
        const Vec& sig = w.sigma[i];
        Mat um(s, s);
        for (Index a = 0; a < s; ++a)
            for (Index b = 0; b < s; ++b)
                um(a, b) = 2.0 * rm(a, b) / (sig[a] + sig[b]);
        out.segment(bl.psd_off[i], svec_dim(s)) = svec(um);
    }
    return out;
}

// dense m x m matrix of the operator u -> W' W u
Mat wtw_matrix(const Blocks& bl, const Scaling& w) {
    Mat m = Mat::Zero(bl.total, bl.total);
    m.diagonal().head(bl.nonneg_dim) = w.d.cwiseProduct(w.d);
    for (size_t i = 0; i < bl.soc_off.size(); ++i) {
        Index q = bl.soc_dim[i];
        Mat jm = -Mat::Identity(q, q);
        jm(0, 0) = 1.0;
        Mat wm = w.beta[i] * (2.0 * w.v[i] * w.v[i].transpose() - jm);
        m.block(bl.soc_off[i], bl.soc_off[i], q, q) = wm * wm;
    }
    for (size_t i = 0; i < bl.psd_off.size(); ++i) {
        Index s = bl.psd_side[i];
        Index d = svec_dim(s);
        Mat m2 = w.r[i] * w.r[i].transpose();
        for (Index t = 0; t < d; ++t) {
            Vec e = Vec::Zero(d);
            e[t] = 1.0;
            m.block(bl.psd_off[i], bl.psd_off[i] + t, d, 1) =
                svec(m2 * smat(e) * m2);
        }
    }
    return m;
}

struct KktSystem {
    Index n, p, m;
    Mat mat;
    Eigen::PartialPivLU<Mat> lu;
    int refine;

    bool factor(const ConicProblem& prob, const Mat& wtw) {
        n = prob.num_vars();
        p = prob.A.rows();
        m = prob.cones.dim();
        mat = Mat::Zero(n + p + m, n + p + m);
        if (p > 0) {
            mat.block(0, n, n, p) = prob.A.transpose();
            mat.block(n, 0, p, n) = prob.A;
        }
        mat.block(0, n + p, n, m) = prob.G.transpose();
        mat.block(n + p, 0, m, n) = prob.G;
        mat.block(n + p, n + p, m, m) = -wtw;
        lu.compute(mat);
        Vec diag = lu.matrixLU().diagonal().cwiseAbs();
        return diag.allFinite() && diag.minCoeff() > 0.0;
    }

    // solve [0 A' G'; A 0 0; G 0 -W'W] (x,y,z) = (bx,by,bz)
    void solve(const Vec& bx, const Vec& by, const Vec& bz, Vec& x, Vec& y,
               Vec& z) const {
        Vec rhs(n + p + m);
        rhs.head(n) = bx;
        if (p > 0) rhs.segment(n, p) = by;
        rhs.tail(m) = bz;
        Vec u = lu.solve(rhs);
        for (int it = 0; it < refine; ++it) {
            Vec res = rhs - mat * u;
            u += lu.solve(res);
        }
        x = u.head(n);
        y = p > 0 ? Vec(u.segment(n, p)) : Vec(0);
        z = u.tail(m);
    }
};

}  // namespace

ConicSolution InteriorPointSolver::solve(const ConicProblem& prob) {
    prob.validate();
    const Index n = prob.num_vars();
    const Index p = prob.A.rows();
    Blocks bl(prob.cones);
    const Index m = bl.total;
    const double deg = static_cast<double>(prob.cones.degree());

    ConicSolution sol;
    sol.x = Vec::Zero(n);
    sol.y = Vec::Zero(p);
    sol.z = Vec::Zero(m);
    sol.s = Vec::Zero(m);

    const Vec e = cone_identity(bl);
    KktSystem kkt;
    kkt.refine = opts_.refine;

    // identity scaling for the initial point
    Scaling wid;
    wid.d = Vec::Ones(bl.nonneg_dim);
    for (size_t i = 0; i < bl.soc_off.size(); ++i) {
        Vec v = Vec::Zero(bl.soc_dim[i]);
        v[0] = 1.0;
        wid.beta.push_back(1.0);
        wid.v.push_back(v);
    }
    for (size_t i = 0; i < bl.psd_off.size(); ++i) {
        wid.r.push_back(Mat::Identity(bl.psd_side[i], bl.psd_side[i]));
        wid.rti.push_back(Mat::Identity(bl.psd_side[i], bl.psd_side[i]));
        wid.sigma.push_back(Vec::Ones(bl.psd_side[i]));
    }
    if (!kkt.factor(prob, wtw_matrix(bl, wid))) {
        sol.status = SolveStatus::numerical_failure;
        return sol;
    }

    Vec x, y, z, s, tmpx, tmpy;
    kkt.solve(Vec::Zero(n), prob.b, prob.h, x, y, z);
    s = -z;
    double ts = max_step_to_cone(bl, s);
    if (ts >= -1e-8 * std::max(1.0, s.norm())) s += (1.0 + ts) * e;
    kkt.solve(-prob.c, Vec::Zero(p), Vec::Zero(m), tmpx, y, z);
    double tz = max_step_to_cone(bl, z);
    if (tz >= -1e-8 * std::max(1.0, z.norm())) z += (1.0 + tz) * e;

    double tau = 1.0, kappa = 1.0;
    const double resb0 = std::max(1.0, prob.b.size() ? prob.b.norm() : 0.0);
    const double resh0 = std::max(1.0, prob.h.norm());
    const double resc0 = std::max(1.0, prob.c.norm());

    for (int iter = 0; iter <= opts_.max_iter; ++iter) {
        sol.iterations = iter;
        const double gap = s.dot(z);

        Vec rx = prob.G.transpose() * z + prob.c * tau;
        if (p > 0) rx += prob.A.transpose() * y;
        Vec ry = p > 0 ? Vec(prob.A * x - prob.b * tau) : Vec(0);
        Vec rz = prob.G * x + s - prob.h * tau;
        double hz = prob.h.dot(z);
        double by = p > 0 ? prob.b.dot(y) : 0.0;
        double cx = prob.c.dot(x);
        double rt = kappa + cx + by + hz;

        double pres = std::max(p > 0 ? ry.norm() / resb0 : 0.0,
                               rz.norm() / resh0) / tau;
        double dres = rx.norm() / resc0 / tau;
        double pcost = cx / tau;
        double dcost = -(by + hz) / tau;
        double agap = gap / (tau * tau);
        double relgap = kInf;
        if (pcost < 0.0)
            relgap = agap / (-pcost);
        else if (dcost > 0.0)
            relgap = agap / dcost;

        sol.primal_obj = pcost;
        sol.dual_obj = dcost;
        sol.gap = std::min(agap, relgap);
        sol.feas = std::max(pres, dres);

        if (pres <= opts_.tol_res && dres <= opts_.tol_res &&
            (agap <= opts_.tol_gap || relgap <= opts_.tol_gap)) {
            sol.x = x / tau;
            sol.y = y / tau;
            sol.z = z / tau;
            sol.s = s / tau;
            sol.status = SolveStatus::optimal;
            return sol;
        }
        // primal infeasibility certificate: A'y + G'z ~ 0, h'z + b'y < 0
        if (hz + by < 0.0) {
            Vec cert = prob.G.transpose() * z;
            if (p > 0) cert += prob.A.transpose() * y;
            if (cert.norm() / resc0 <= opts_.tol_res * (-(hz + by))) {
                sol.y = y / (-(hz + by));
                sol.z = z / (-(hz + by));
                sol.status = SolveStatus::infeasible;
                return sol;
            }
        }
        // dual infeasibility certificate (primal unbounded)
        if (cx < 0.0) {
            double nr1 = p > 0 ? (prob.A * x).norm() / resb0 : 0.0;
            double nr2 = (prob.G * x + s).norm() / resh0;
            if (std::max(nr1, nr2) <= opts_.tol_res * (-cx)) {
                sol.x = x / (-cx);
                sol.status = SolveStatus::unbounded;
                return sol;
            }
        }
        if (iter == opts_.max_iter) break;

        auto wopt = compute_scaling(bl, s, z);
        if (!wopt) {
            sol.status = SolveStatus::numerical_failure;
            return sol;
        }
        const Scaling& w = *wopt;
        Vec lmbda = apply_scaling(bl, w, z, WMode::w);
        if (!kkt.factor(prob, wtw_matrix(bl, w))) {
            sol.status = SolveStatus::numerical_failure;
            return sol;
        }

        Vec x1, y1, z1;
        kkt.solve(-prob.c, prob.b, prob.h, x1, y1, z1);

        const double mu = (gap + tau * kappa) / (deg + 1.0);
        Vec lxl = jordan(bl, lmbda, lmbda);

        Vec dx, dy, dz, ds, dsb_aff, dzb_aff;
        double dtau = 0.0, dkappa = 0.0, alpha_aff = 1.0;
        double dtau_aff = 0.0, dkappa_aff = 0.0;

        for (int pass = 0; pass < 2; ++pass) {
            double sigma = 0.0;
            Vec dsv;
            double dkv;
            if (pass == 0) {
                dsv = -lxl;
                dkv = -tau * kappa;
            } else {
                sigma = std::pow(1.0 - alpha_aff, 3);
                sigma = std::min(1.0, std::max(0.0, sigma));
                dsv = -lxl - jordan(bl, dsb_aff, dzb_aff) + sigma * mu * e;
                dkv = -tau * kappa - dtau_aff * dkappa_aff + sigma * mu;
            }
            const double damp = 1.0 - sigma;

            Vec lam_div = jordan_div(bl, w, lmbda, dsv);
            Vec bz2 = -damp * rz - apply_scaling(bl, w, lam_div, WMode::wt);
            Vec x2, y2, z2;
            kkt.solve(-damp * rx, p > 0 ? Vec(-damp * ry) : Vec(0), bz2, x2,
                      y2, z2);

            double denom = prob.c.dot(x1) + (p > 0 ? prob.b.dot(y1) : 0.0) +
                           prob.h.dot(z1) - kappa / tau;
            double num = -damp * rt - dkv / tau - prob.c.dot(x2) -
                         (p > 0 ? prob.b.dot(y2) : 0.0) - prob.h.dot(z2);
            if (std::abs(denom) < 1e-300) {
                sol.status = SolveStatus::numerical_failure;
                return sol;
            }
            double dt = num / denom;
            dx = x2 + dt * x1;
            dy = p > 0 ? Vec(y2 + dt * y1) : Vec(0);
            dz = z2 + dt * z1;
            dtau = dt;
            Vec dsb = lam_div - apply_scaling(bl, w, dz, WMode::w);
            ds = apply_scaling(bl, w, dsb, WMode::wt);
            dkappa = (dkv - kappa * dtau) / tau;

            Vec dzb = apply_scaling(bl, w, dz, WMode::w);
            double amax = std::min(max_alpha(bl, w, lmbda, dsb),
                                   max_alpha(bl, w, lmbda, dzb));
            if (dtau < 0.0) amax = std::min(amax, -tau / dtau);
            if (dkappa < 0.0) amax = std::min(amax, -kappa / dkappa);

            if (pass == 0) {
                alpha_aff = std::min(1.0, amax);
                dsb_aff = dsb;
                dzb_aff = dzb;
                dtau_aff = dtau;
                dkappa_aff = dkappa;
            } else {
                double alpha = std::min(1.0, kStepDamp * amax);
                if (!(alpha > 1e-12)) {
                    sol.status = SolveStatus::numerical_failure;
                    return sol;
                }
                x += alpha * dx;
                if (p > 0) y += alpha * dy;
                z += alpha * dz;
                s += alpha * ds;
                tau += alpha * dtau;
                kappa += alpha * dkappa;
            }
        }
    }

    sol.x = x / tau;
    sol.y = y / tau;
    sol.z = z / tau;
    sol.s = s / tau;
    sol.status = SolveStatus::max_iterations;
    return sol;
}

ConicSolution solve(const ConicProblem& p, double tol_gap, double tol_res,
                    int max_iter) {
    SolverOptions opts;
    opts.tol_gap = tol_gap;
    opts.tol_res = tol_res;
    opts.max_iter = max_iter;
    return InteriorPointSolver(opts).solve(p);
}

}  // namespace ansec
