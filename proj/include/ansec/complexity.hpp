#pragma once

#include <cmath>
#include <stdexcept>

namespace ansec {

// Dimensions entering the analytic flop-count estimators. d_steps is the
// outer 1-D search resolution, q_iters the iteration budget of the
// convexified method.
struct ComplexityParams {
    int nt = 4;
    int l_count = 4;
    int k_count = 3;
    int nr = 2;
    int d_steps = 100;
    int q_iters = 8;

    void validate() const {
        if (nt < 1 || l_count < 1 || k_count < 1 || nr < 1 || d_steps < 0 ||
            q_iters < 0)
            throw std::invalid_argument("ComplexityParams: fields must be positive");
    }
};

// Flop-count order of the two-layer method: D interior-point SDP solves,
// each with n = 2 N_T^2 + L real variables, K LMIs of side N_R + 1, two of
// side N_T, and 4L + K + 1 scalar rows.
inline double flops_one_d(const ComplexityParams& p) {
    p.validate();
    const double nt = p.nt, l = p.l_count, k = p.k_count, nr = p.nr;
    const double n = 2.0 * nt * nt + l;
    const double barrier = std::sqrt(k * nr + 2.0 * k + 2.0 * nt + 4.0 * l + 1.0);
    const double per_iter =
        k * std::pow(nr + 1.0, 3) + 2.0 * std::pow(nt, 3) +
        n * (k * std::pow(nr + 1.0, 2) + 2.0 * nt * nt + 4.0 * l + k + 1.0) +
        n * n;
    return n * p.d_steps * barrier * per_iter;
}

// Flop-count order of the convexified method: Q second-order-cone solves
// with n = 2 N_T + 2L + K + 2 real variables.
inline double flops_spca(const ComplexityParams& p) {
    p.validate();
    const double nt = p.nt, l = p.l_count, k = p.k_count;
    const double n = 2.0 * nt + 2.0 * l + k + 2.0;
    const double barrier = std::sqrt(5.0 * k + 5.0 * l + 2.0);
    const double per_iter =
        (2.0 * k + l + 2.0) * nt + 3.0 * l + k + n * (3.0 * k + l) + n * n;
    return n * p.q_iters * barrier * per_iter;
}

}  // namespace ansec
