#ifndef SFADE_BASIS_HPP
#define SFADE_BASIS_HPP

// Modified Jacobi functions, the collocation basis phi_k on [0,ell], and
// closed forms for their left/right Riemann-Liouville fractional derivatives.
//
// phi_k(x) = lambda_k x (ell-x) P_k^{(1,1)}(2x/ell - 1) vanishes at both ends,
// and its fractional derivatives reduce to shifted-Jacobi expressions, so the
// collocation matrices can be assembled without any quadrature.
//
// Reflection: phi_k(ell-x) = (-1)^k phi_k(x), hence the right-sided derivative
// of phi_k at x equals (-1)^k times the left-sided one at ell-x. The (-1)^k
// sign (independent of the integer part of the order) was pinned down against
// Grunwald-Letnikov reference sums; see the operator tests.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "sfade/jacobi.hpp"
#include "sfade/specfun.hpp"

namespace sfade {

struct BasisSpec {
    double ell; // domain length
    int n;      // highest basis index (n+1 functions)

    BasisSpec(double ell_, int n_) : ell(ell_), n(n_) {
        if (!(ell > 0.0)) throw std::invalid_argument("BasisSpec: require ell > 0");
        if (n < 0) throw std::invalid_argument("BasisSpec: require n >= 0");
    }
};

struct MJFParams {
    double a, b;        // Jacobi exponents, > -1
    double rho, theta;  // boundary exponents, >= 0

    MJFParams(double a_, double b_, double rho_, double theta_)
        : a(a_), b(b_), rho(rho_), theta(theta_) {
        if (!(a > -1.0) || !(b > -1.0))
            throw std::invalid_argument("MJFParams: require a > -1 and b > -1");
        if (rho < 0.0 || theta < 0.0)
            throw std::invalid_argument("MJFParams: require rho, theta >= 0");
    }
};

namespace detail {

inline void check_domain(double x, double ell, const char* who) {
    if (x < -1.0e-14 * ell || x > ell * (1.0 + 1.0e-14))
        throw std::domain_error(std::string(who) + ": x outside [0, ell]");
}

} // namespace detail

/// x^rho (ell-x)^theta P_k^{(a,b)}(2x/ell - 1).
inline double mjf_eval(const MJFParams& p, double ell, int k, double x) {
    if (!(ell > 0.0)) throw std::invalid_argument("mjf_eval: require ell > 0");
    detail::check_domain(x, ell, "mjf_eval");
    const double y = 2.0 * x / ell - 1.0;
    const double poly = jacobi_eval(JacobiParams(p.a, p.b), k, std::clamp(y, -1.0, 1.0));
    return std::pow(x, p.rho) * std::pow(ell - x, p.theta) * poly;
}

/// Normalization lambda_k = (k+2)(2k+3) / ((k+1) ell^3).
inline double basis_lambda(int k, double ell) {
    return (k + 2.0) * (2.0 * k + 3.0) / ((k + 1.0) * ell * ell * ell);
}

/// Basis function phi_k(x) = lambda_k x (ell-x) P_k^{(1,1)}(2x/ell - 1).
/// Exactly zero at x = 0 and x = ell.
inline double phi(const BasisSpec& spec, int k, double x) {
    if (k < 0 || k > spec.n) throw std::invalid_argument("phi: index out of range");
    detail::check_domain(x, spec.ell, "phi");
    const double y = std::clamp(2.0 * x / spec.ell - 1.0, -1.0, 1.0);
    return basis_lambda(k, spec.ell) * x * (spec.ell - x) *
           jacobi_eval(JacobiParams(1.0, 1.0), k, y);
}

/// Fill out[k] = phi_k(x) for k = 0..n.
inline void phi_all(const BasisSpec& spec, double x, Eigen::Ref<Eigen::VectorXd> out) {
    detail::check_domain(x, spec.ell, "phi_all");
    const double y = std::clamp(2.0 * x / spec.ell - 1.0, -1.0, 1.0);
    jacobi_eval_all(JacobiParams(1.0, 1.0), spec.n, y, out);
    const double xfac = x * (spec.ell - x);
    for (int k = 0; k <= spec.n; ++k) out[k] *= basis_lambda(k, spec.ell) * xfac;
}

namespace detail {

inline void check_fractional_order(double sigma) {
    const bool ok = (sigma > 0.0 && sigma < 1.0) || (sigma > 1.0 && sigma <= 2.0);
    if (!ok)
        throw std::invalid_argument(
            "fractional order must lie in (0,1) or (1,2]; order 1 needs the classical derivative");
}

} // namespace detail

/// Fill out[k], k = 0..n, with the left Riemann-Liouville derivative of order
/// sigma of phi_k at x in (0, ell]. Singular at x = 0 when sigma > 1.
inline void psi_left_all(const BasisSpec& spec, double sigma, double x,
                         Eigen::Ref<Eigen::VectorXd> out) {
    detail::check_fractional_order(sigma);
    detail::check_domain(x, spec.ell, "psi_left_all");
    const double ell = spec.ell;
    const int n = spec.n;

    if (sigma == 2.0) {
        // integer order: plain second derivative of phi_k
        const double y = std::clamp(2.0 * x / ell - 1.0, -1.0, 1.0);
        Eigen::VectorXd p11(n + 1), p22(std::max(n, 1)), p33(std::max(n - 1, 1));
        jacobi_eval_all(JacobiParams(1.0, 1.0), n, y, p11);
        if (n >= 1) jacobi_eval_all(JacobiParams(2.0, 2.0), n - 1, y, p22);
        if (n >= 2) jacobi_eval_all(JacobiParams(3.0, 3.0), n - 2, y, p33);
        out[0] = -12.0 / (ell * ell * ell);
        for (int k = 1; k <= n; ++k) {
            const double t1 =
                (k >= 2) ? (k + 4.0) * (k + 3.0) * x * (ell - x) * p33[k - 2] : 0.0;
            const double t2 = 2.0 * ell * (k + 3.0) * (ell - 2.0 * x) * p22[k - 1];
            const double t3 = -2.0 * ell * ell * p11[k];
            out[k] = basis_lambda(k, ell) / (ell * ell) * (t1 + t2 + t3);
        }
        return;
    }

    if (x <= 0.0 && sigma > 1.0)
        throw std::domain_error("psi_left_all: singular at x = 0 for order > 1");

    const double xs = std::pow(x, 1.0 - sigma); // x^{1-sigma}; = 0 at x=0 for sigma < 1
    const double y = std::clamp(2.0 * x / ell - 1.0, -1.0, 1.0);

    out[0] = (6.0 / (ell * ell)) * std::pow(x, 1.0 - sigma) / gamma(2.0 - sigma) -
             (12.0 / (ell * ell * ell)) * std::pow(x, 2.0 - sigma) / gamma(3.0 - sigma);
    if (n == 0) return;

    Eigen::VectorXd pa(n + 1), pb(n + 1);
    jacobi_eval_all(JacobiParams(1.0 + sigma, 1.0 - sigma), n, y, pa);
    jacobi_eval_all(JacobiParams(1.0 + sigma, 2.0 - sigma), n, y, pb);

    // coefficient triples, advanced by exact ratios to avoid Gamma overflow
    double c1 = 15.0 / (ell * ell * gamma(3.0 - sigma));
    double c2 = 36.0 / (ell * ell * ell * gamma(4.0 - sigma));
    double c3 = 6.0 / (ell * ell * ell * gamma(3.0 - sigma));
    for (int k = 1; k <= n; ++k) {
        const double bracket = c1 * pa[k] - c2 * x * pb[k] - c3 * x * pb[k - 1];
        out[k] = xs * bracket;
        c1 *= (2.0 * k + 5.0) * (k + 1.0) * (k + 3.0) /
              ((2.0 * k + 3.0) * (k + 2.0) * (k + 2.0 - sigma));
        c2 *= (k + 3.0) * (k + 1.0) * (k + 4.0) /
              ((k + 2.0) * (k + 2.0) * (k + 3.0 - sigma));
        c3 *= (k + 3.0) / (k + 2.0 - sigma);
    }
}

/// Left Riemann-Liouville derivative of order sigma of phi_k at x.
inline double psi_left(const BasisSpec& spec, double sigma, int k, double x) {
    if (k < 0 || k > spec.n) throw std::invalid_argument("psi_left: index out of range");
    Eigen::VectorXd tmp(spec.n + 1);
    psi_left_all(spec, sigma, x, tmp);
    return tmp[k];
}

/// Fill out[k] with the right Riemann-Liouville derivative of order sigma of
/// phi_k at x in [0, ell). Computed by reflection: (-1)^k psi_left(ell - x).
inline void psi_right_all(const BasisSpec& spec, double sigma, double x,
                          Eigen::Ref<Eigen::VectorXd> out) {
    detail::check_fractional_order(sigma);
    detail::check_domain(x, spec.ell, "psi_right_all");
    if (x >= spec.ell && sigma > 1.0)
        throw std::domain_error("psi_right_all: singular at x = ell for order > 1");
    psi_left_all(spec, sigma, spec.ell - x, out);
    for (int k = 1; k <= spec.n; k += 2) out[k] = -out[k];
}

/// Right Riemann-Liouville derivative of order sigma of phi_k at x.
inline double psi_right(const BasisSpec& spec, double sigma, int k, double x) {
    if (k < 0 || k > spec.n) throw std::invalid_argument("psi_right: index out of range");
    Eigen::VectorXd tmp(spec.n + 1);
    psi_right_all(spec, sigma, x, tmp);
    return tmp[k];
}

/// Samples of the initial condition at the collocation nodes: F_i = f(node_i).
inline Eigen::VectorXd initial_projection_rhs(const BasisSpec& spec,
                                              const std::function<double(double)>& f,
                                              const Eigen::VectorXd& nodes) {
    (void)spec;
    Eigen::VectorXd F(nodes.size());
    for (Eigen::Index i = 0; i < nodes.size(); ++i) F[i] = f(nodes[i]);
    return F;
}

} // namespace sfade

#endif
