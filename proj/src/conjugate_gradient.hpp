#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace dpor::detail {

struct CgOutcome {
    std::size_t iterations = 0;
    double residual_norm = 0.0;
    bool converged = false;
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Jacobi-preconditioned CG for a symmetric positive semidefinite operator.
/// The right-hand side must lie in the operator's range. Stops when
/// |r| <= tol * |b|. Sequential, so results are bit-reproducible.
template <typename Apply>
CgOutcome conjugate_gradient(Apply&& apply, const std::vector<double>& diagonal, const std::vector<double>& b,
                             std::vector<double>& x, double tol, std::size_t max_iter) {
    const std::size_t n = b.size();
    x.assign(n, 0.0);
    CgOutcome out;
    const double b_norm = std::sqrt(dot(b, b));
    if (b_norm == 0.0) {
        out.converged = true;
        return out;
    }
    std::vector<double> r = b, z(n), p(n), ap(n);
    auto precondition = [&] {
        for (std::size_t i = 0; i < n; ++i) z[i] = diagonal[i] > 0.0 ? r[i] / diagonal[i] : 0.0;
    };
    precondition();
    p = z;
    double rz = dot(r, z);
    out.residual_norm = b_norm;
    for (std::size_t it = 0; it < max_iter; ++it) {
        apply(p, ap);
        const double pap = dot(p, ap);
        if (!(pap > 0.0)) break;
        const double step = rz / pap;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        out.iterations = it + 1;
        out.residual_norm = std::sqrt(dot(r, r));
        if (out.residual_norm <= tol * b_norm) {
            out.converged = true;
            return out;
        }
        precondition();
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    out.converged = out.residual_norm <= tol * b_norm;
    return out;
}

}  // namespace dpor::detail
