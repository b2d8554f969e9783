#ifndef SFADE_OPERATORS_HPP
#define SFADE_OPERATORS_HPP

// Collocation grid and the dense operator matrices of the semidiscretization.
//
// Convention used for ALL matrices here: row = collocation node, column =
// basis index. mass(i,k) = phi_k(node_i) and d_*(i,k) = psi_k(node_i); the
// closed-form mass inverse below is written in the same orientation (it is
// the transpose of the formula one gets with rows indexing basis functions).

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "sfade/basis.hpp"
#include "sfade/jacobi.hpp"

namespace sfade {

struct CollocationGrid {
    double ell;
    Eigen::VectorXd nodes; // shifted Gauss-Jacobi(1,1) nodes, inside (0, ell)
    QuadratureRule raw;    // underlying rule on (-1, 1)
};

/// n+1 shifted Gauss-Jacobi(1,1) nodes on (0, ell).
inline CollocationGrid build_grid(double ell, int n) {
    if (!(ell > 0.0)) throw std::invalid_argument("build_grid: require ell > 0");
    if (n < 0) throw std::invalid_argument("build_grid: require n >= 0");
    QuadratureRule rule = gauss_jacobi(JacobiParams(1.0, 1.0), n + 1);
    CollocationGrid grid{ell, Eigen::VectorXd(n + 1), std::move(rule)};
    for (int i = 0; i <= n; ++i)
        grid.nodes[i] = 0.5 * ell * (grid.raw.nodes[i] + 1.0);
    return grid;
}

/// Mass matrix M(i,k) = phi_k(node_i).
inline Eigen::MatrixXd build_mass(const CollocationGrid& grid, const BasisSpec& spec) {
    const int n = spec.n;
    if (grid.nodes.size() != n + 1 || grid.ell != spec.ell)
        throw std::invalid_argument("build_mass: grid and spec mismatch");
    Eigen::MatrixXd M(n + 1, n + 1);
    Eigen::VectorXd row(n + 1);
    for (int i = 0; i <= n; ++i) {
        phi_all(spec, grid.nodes[i], row);
        M.row(i) = row;
    }
    return M;
}

/// Closed-form inverse of the mass matrix:
/// (M^-1)(i,j) = ell w_j / (2 (1 - xi_j^2)) * P_i^{(1,1)}(xi_j).
inline Eigen::MatrixXd build_mass_inverse(const CollocationGrid& grid, const BasisSpec& spec) {
    const int n = spec.n;
    if (grid.nodes.size() != n + 1 || grid.ell != spec.ell)
        throw std::invalid_argument("build_mass_inverse: grid and spec mismatch");
    Eigen::MatrixXd Minv(n + 1, n + 1);
    Eigen::VectorXd col(n + 1);
    for (int j = 0; j <= n; ++j) {
        const double xi = grid.raw.nodes[j];
        const double scale = spec.ell * grid.raw.weights[j] / (2.0 * (1.0 - xi * xi));
        jacobi_eval_all(JacobiParams(1.0, 1.0), n, xi, col);
        Minv.col(j) = scale * col;
    }
    return Minv;
}

struct FractionalOperatorSet {
    int n;
    double alpha; // advection order, in (0,1)
    double beta;  // diffusion order, in (1,2]
    Eigen::MatrixXd mass;
    Eigen::MatrixXd mass_inv;
    Eigen::MatrixXd d_alpha_left;
    Eigen::MatrixXd d_alpha_right;
    Eigen::MatrixXd d_beta_left;
    Eigen::MatrixXd d_beta_right;
};

namespace detail {

inline Eigen::MatrixXd fractional_matrix(const CollocationGrid& grid, const BasisSpec& spec,
                                         double sigma, bool right_sided) {
    const int n = spec.n;
    Eigen::MatrixXd D(n + 1, n + 1);
    Eigen::VectorXd row(n + 1);
    for (int i = 0; i <= n; ++i) {
        if (right_sided)
            psi_right_all(spec, sigma, grid.nodes[i], row);
        else
            psi_left_all(spec, sigma, grid.nodes[i], row);
        D.row(i) = row;
    }
    if (!D.allFinite())
        throw std::runtime_error("fractional_matrix: non-finite entry (order " +
                                 std::to_string(sigma) + ")");
    return D;
}

} // namespace detail

/// Assemble mass, mass inverse and the four fractional differentiation
/// matrices for orders alpha (advection) and beta (diffusion).
inline FractionalOperatorSet build_fractional_matrices(const CollocationGrid& grid,
                                                       const BasisSpec& spec, double alpha,
                                                       double beta) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("build_fractional_matrices: alpha must be in (0,1)");
    if (!(beta > 1.0 && beta <= 2.0))
        throw std::invalid_argument("build_fractional_matrices: beta must be in (1,2]");
    FractionalOperatorSet ops;
    ops.n = spec.n;
    ops.alpha = alpha;
    ops.beta = beta;
    ops.mass = build_mass(grid, spec);
    ops.mass_inv = build_mass_inverse(grid, spec);
    ops.d_alpha_left = detail::fractional_matrix(grid, spec, alpha, false);
    ops.d_alpha_right = detail::fractional_matrix(grid, spec, alpha, true);
    ops.d_beta_left = detail::fractional_matrix(grid, spec, beta, false);
    ops.d_beta_right = detail::fractional_matrix(grid, spec, beta, true);
    return ops;
}

} // namespace sfade

#endif
