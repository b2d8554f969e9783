#ifndef SFADE_JACOBI_HPP
#define SFADE_JACOBI_HPP

// Jacobi polynomials P_j^{(a,b)} on [-1,1]: evaluation by three-term
// recurrence, derivatives by parameter shift, and Gauss-Jacobi quadrature.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sfade/specfun.hpp"

namespace sfade {

struct JacobiParams {
    double a = 0.0; // Legendre by default
    double b = 0.0;

    JacobiParams() = default;
    JacobiParams(double a_, double b_) : a(a_), b(b_) {
        if (!(a > -1.0) || !(b > -1.0))
            throw std::invalid_argument("JacobiParams: require a > -1 and b > -1");
    }
};

namespace detail {

inline void check_unit_interval(double x) {
    if (std::fabs(x) > 1.0 + 1.0e-14)
        throw std::domain_error("jacobi_eval: x outside [-1,1]");
}

// recurrence coefficients for P_{j+1} = (A x - B) P_j - C P_{j-1}, j >= 1
inline void jacobi_recurrence_coeffs(double a, double b, int j, double& A, double& B, double& C) {
    const double s = a + b;
    A = (s + 2 * j + 1) * (s + 2 * j + 2) / (2.0 * (j + 1) * (s + j + 1));
    B = (b * b - a * a) * (s + 2 * j + 1) / (2.0 * (j + 1) * (s + j + 1) * (s + 2 * j));
    C = (a + j) * (b + j) * (s + 2 * j + 2) / ((j + 1) * (s + j + 1) * (s + 2 * j));
}

} // namespace detail

/// P_j^{(a,b)}(x) by forward recurrence.
inline double jacobi_eval(const JacobiParams& p, int j, double x) {
    if (j < 0) throw std::invalid_argument("jacobi_eval: negative degree");
    detail::check_unit_interval(x);
    if (j == 0) return 1.0;
    double pm1 = 1.0;
    double pc = 0.5 * ((p.a + p.b + 2.0) * x + p.a - p.b);
    for (int i = 1; i < j; ++i) {
        double A, B, C;
        detail::jacobi_recurrence_coeffs(p.a, p.b, i, A, B, C);
        const double pn = (A * x - B) * pc - C * pm1;
        pm1 = pc;
        pc = pn;
    }
    return pc;
}

/// Fill out[k] = P_k^{(a,b)}(x) for k = 0..n with a single recurrence sweep.
inline void jacobi_eval_all(const JacobiParams& p, int n, double x,
                            Eigen::Ref<Eigen::VectorXd> out) {
    if (n < 0) throw std::invalid_argument("jacobi_eval_all: negative degree");
    detail::check_unit_interval(x);
    out[0] = 1.0;
    if (n == 0) return;
    out[1] = 0.5 * ((p.a + p.b + 2.0) * x + p.a - p.b);
    for (int i = 1; i < n; ++i) {
        double A, B, C;
        detail::jacobi_recurrence_coeffs(p.a, p.b, i, A, B, C);
        out[i + 1] = (A * x - B) * out[i] - C * out[i - 1];
    }
}

/// m-th derivative of P_j^{(a,b)} at x; zero when j < m.
/// Uses d^m/dx^m P_j^{(a,b)} = c * P_{j-m}^{(a+m,b+m)} with
/// c = Gamma(j+m+a+b+1) / (2^m Gamma(j+a+b+1)), a finite product.
inline double jacobi_deriv(const JacobiParams& p, int j, int m, double x) {
    if (m < 1) throw std::invalid_argument("jacobi_deriv: require m >= 1");
    if (j < m) return 0.0;
    double c = 1.0;
    for (int i = 1; i <= m; ++i) c *= 0.5 * (j + p.a + p.b + i);
    return c * jacobi_eval(JacobiParams(p.a + m, p.b + m), j - m, x);
}

struct QuadratureRule {
    JacobiParams params;
    Eigen::VectorXd nodes;   // strictly increasing, inside (-1,1)
    Eigen::VectorXd weights; // positive
};

namespace detail {

inline double gauss_jacobi_weight_prefactor(const JacobiParams& p, int n) {
    // 2^{a+b+1} Gamma(n+a+1) Gamma(n+b+1) / (Gamma(n+1) Gamma(n+a+b+1))
    return std::exp((p.a + p.b + 1.0) * std::log(2.0) + log_gamma(n + p.a + 1.0) +
                    log_gamma(n + p.b + 1.0) - log_gamma(n + 1.0) -
                    log_gamma(n + p.a + p.b + 1.0));
}

// roots of P_n^{(a,b)} by sign-change scan plus bisection; used when the
// Newton sweep fails to produce a valid node set
inline std::vector<double> jacobi_roots_bisection(const JacobiParams& p, int n) {
    const int grid = std::max(256, 32 * n);
    std::vector<double> xs(grid), fs(grid);
    constexpr double pi = 3.14159265358979323846;
    for (int i = 0; i < grid; ++i) {
        xs[i] = -std::cos(pi * i / (grid - 1.0));
        fs[i] = jacobi_eval(p, n, xs[i]);
    }
    std::vector<double> roots;
    for (int i = 0; i + 1 < grid; ++i) {
        if (fs[i] == 0.0) {
            roots.push_back(xs[i]);
            continue;
        }
        if (fs[i] * fs[i + 1] < 0.0) {
            double lo = xs[i], hi = xs[i + 1], flo = fs[i];
            for (int it = 0; it < 200 && hi - lo > 1.0e-16; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = jacobi_eval(p, n, mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (flo * fm < 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
    }
    if (static_cast<int>(roots.size()) != n)
        throw std::runtime_error("gauss_jacobi: root bracketing failed");
    return roots;
}

} // namespace detail

/// Gauss-Jacobi rule with npoints nodes: exact for polynomial integrands of
/// degree <= 2*npoints - 1 against the weight (1-x)^a (1+x)^b.
inline QuadratureRule gauss_jacobi(const JacobiParams& p, int npoints) {
    if (npoints < 1) throw std::invalid_argument("gauss_jacobi: require npoints >= 1");
    const int n = npoints;
    constexpr double pi = 3.14159265358979323846;

    std::vector<double> roots(n);
    bool newton_ok = true;
    for (int i = 1; i <= n; ++i) {
        // descending initial guess, then Newton on P_n
        double x = std::cos(pi * (0.5 * p.a + i - 0.25) / (0.5 * (1.0 + p.a + p.b) + n));
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            const double f = jacobi_eval(p, n, x);
            const double df = jacobi_deriv(p, n, 1, x);
            if (df == 0.0) break;
            const double dx = f / df;
            x -= dx;
            if (std::fabs(x) >= 1.0) x = std::copysign(1.0 - 1.0e-15, x);
            if (std::fabs(dx) < 1.0e-15 * (1.0 + std::fabs(x))) {
                converged = true;
                break;
            }
        }
        if (!converged) newton_ok = false;
        roots[n - i] = x;
    }
    if (newton_ok) {
        for (int i = 0; i + 1 < n; ++i)
            if (!(roots[i] < roots[i + 1])) newton_ok = false;
        if (!(roots.front() > -1.0 && roots.back() < 1.0)) newton_ok = false;
    }
    if (!newton_ok) roots = detail::jacobi_roots_bisection(p, n);

    QuadratureRule rule{p, Eigen::VectorXd(n), Eigen::VectorXd(n)};
    const double G = detail::gauss_jacobi_weight_prefactor(p, n);
    for (int i = 0; i < n; ++i) {
        const double x = roots[i];
        const double dp = jacobi_deriv(p, n, 1, x);
        const double w = G / ((1.0 - x * x) * dp * dp);
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::runtime_error("gauss_jacobi: invalid weight");
        rule.nodes[i] = x;
        rule.weights[i] = w;
    }
    return rule;
}

} // namespace sfade

#endif
