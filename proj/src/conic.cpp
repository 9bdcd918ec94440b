#include "ansec/conic.hpp"

#include <cmath>
#include <ostream>

namespace ansec {

Index ConeDims::dim() const {
    Index d = nonneg;
    for (Index q : soc) d += q;
    for (Index s : psd) d += svec_dim(s);
    return d;
}

Index ConeDims::degree() const {
    Index d = nonneg + static_cast<Index>(soc.size());
    for (Index s : psd) d += s;
    return d;
}

void ConicProblem::validate() const {
    const Index n = c.size();
    const Index m = cones.dim();
    if (G.rows() != m || G.cols() != n)
        throw std::invalid_argument("conic: G shape does not match cones/variables");
    if (h.size() != m) throw std::invalid_argument("conic: h length mismatch");
    if (A.size() > 0 && A.cols() != n)
        throw std::invalid_argument("conic: A column count mismatch");
    if (A.rows() != b.size())
        throw std::invalid_argument("conic: A/b row mismatch");
    for (Index q : cones.soc)
        if (q < 1) throw std::invalid_argument("conic: SOC dimension < 1");
    for (Index s : cones.psd)
        if (s < 1) throw std::invalid_argument("conic: PSD side < 1");
    if (!c.allFinite() || !G.allFinite() || !h.allFinite() ||
        (A.size() > 0 && !A.allFinite()) || (b.size() > 0 && !b.allFinite()))
        throw std::invalid_argument("conic: non-finite coefficient data");
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
        case SolveStatus::max_iterations: return "max-iterations";
        case SolveStatus::numerical_failure: return "numerical-failure";
    }
    return "?";
}

Mat embed_hermitian(const CMat& h, double tol) {
    const Index n = h.rows();
    if (h.cols() != n) throw std::invalid_argument("embed_hermitian: not square");
    const double scale = std::max(1.0, h.norm());
    if ((h - h.adjoint()).norm() > tol * scale)
        throw std::invalid_argument("embed_hermitian: input is not Hermitian");
    Mat m(2 * n, 2 * n);
    m.topLeftCorner(n, n) = h.real();
    m.bottomRightCorner(n, n) = h.real();
    m.topRightCorner(n, n) = -h.imag();
    m.bottomLeftCorner(n, n) = h.imag();
    return m;
}

CMat extract_hermitian(const Mat& m, double tol) {
    const Index nn = m.rows();
    if (m.cols() != nn || nn % 2 != 0)
        throw std::invalid_argument("extract_hermitian: bad shape");
    const Index n = nn / 2;
    Mat a = 0.5 * (m.topLeftCorner(n, n) + m.bottomRightCorner(n, n));
    Mat b = 0.5 * (m.bottomLeftCorner(n, n) - m.topRightCorner(n, n));
    // symmetrize the real part, antisymmetrize the imaginary part
    Mat as = 0.5 * (a + a.transpose());
    Mat ba = 0.5 * (b - b.transpose());
    const double scale = std::max(1.0, m.norm());
    double dev = (m.topLeftCorner(n, n) - m.bottomRightCorner(n, n)).norm() +
                 (m.bottomLeftCorner(n, n) + m.topRightCorner(n, n)).norm() +
                 (a - as).norm() + (b - ba).norm();
    if (dev > tol * scale)
        throw std::runtime_error("extract_hermitian: embedding block symmetry violated");
    CMat h(n, n);
    h.real() = as;
    h.imag() = ba;
    return h;
}

Index svec_dim(Index side) { return side * (side + 1) / 2; }

Vec svec(const Mat& s) {
    const Index n = s.rows();
    const double r2 = std::sqrt(2.0);
    Vec v(svec_dim(n));
    Index k = 0;
    for (Index j = 0; j < n; ++j)
        for (Index i = j; i < n; ++i)
            v[k++] = (i == j) ? s(i, j) : r2 * 0.5 * (s(i, j) + s(j, i));
    return v;
}

Mat smat(const Vec& v) {
    const Index n = static_cast<Index>((std::sqrt(8.0 * static_cast<double>(v.size()) + 1.0) - 1.0) / 2.0 + 0.5);
    if (svec_dim(n) != v.size()) throw std::invalid_argument("smat: bad svec length");
    const double ir2 = 1.0 / std::sqrt(2.0);
    Mat s(n, n);
    Index k = 0;
    for (Index j = 0; j < n; ++j)
        for (Index i = j; i < n; ++i) {
            double val = (i == j) ? v[k] : ir2 * v[k];
            s(i, j) = val;
            s(j, i) = val;
            ++k;
        }
    return s;
}

void dump_problem(const ConicProblem& p, std::ostream& os) {
    os << "conic-problem v1\n";
    os << "vars " << p.num_vars() << " eqs " << p.A.rows() << " cone-rows "
       << p.cones.dim() << "\n";
    os << "segments nonneg " << p.cones.nonneg;
    os << " soc";
    for (Index q : p.cones.soc) os << " " << q;
    os << " psd";
    for (Index s : p.cones.psd) os << " " << s;
    os << "\n";
    if (!p.segment_names.empty()) {
        os << "names";
        for (const auto& nm : p.segment_names) os << " " << nm;
        os << "\n";
    }
    Eigen::IOFormat fmt(Eigen::FullPrecision, Eigen::DontAlignCols, " ", "\n");
    os << "c\n" << p.c.transpose().format(fmt) << "\n";
    if (p.A.rows() > 0) {
        os << "A\n" << p.A.format(fmt) << "\n";
        os << "b\n" << p.b.transpose().format(fmt) << "\n";
    }
    os << "G\n" << p.G.format(fmt) << "\n";
    os << "h\n" << p.h.transpose().format(fmt) << "\n";
}

}  // namespace ansec
