#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sfade/basis.hpp"
#include "sfade/operators.hpp"
#include "oracles.hpp"

using Catch::Approx;
using sfade::BasisSpec;
using sfade::MJFParams;

TEST_CASE("mjf boundary factors and classical reduction") {
    const MJFParams p(1, 1, 1, 1);
    for (int k : {0, 2, 7}) {
        CHECK(sfade::mjf_eval(p, 3.0, k, 0.0) == 0.0);
        CHECK(sfade::mjf_eval(p, 3.0, k, 3.0) == 0.0);
    }
    // rho = theta = 0 reduces to the shifted Jacobi polynomial itself
    CHECK(sfade::mjf_eval(MJFParams(1, 1, 0, 0), 2.0, 1, 1.5) == Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(sfade::mjf_eval(p, 2.0, 1, 2.5), std::domain_error);
}

TEST_CASE("mjf weighted orthogonality for the solver family") {
    // 9-point rule integrates the degree <= 16 polynomial integrand exactly
    const double ell = 2.0;
    const auto rule = sfade::gauss_jacobi(sfade::JacobiParams(1, 1), 9);
    const MJFParams p(1, 1, 1, 1);
    for (int i = 0; i <= 6; ++i) {
        for (int j = 0; j <= 6; ++j) {
            // integral of J_i J_j x^{-1}(ell-x)^{-1} over [0, ell]; mapping to
            // [-1,1] leaves (ell^3/8) * integral of (1-s)(1+s) P_i P_j ds
            double q = 0.0;
            for (int m = 0; m < 9; ++m) {
                const double x = 0.5 * ell * (rule.nodes[m] + 1.0);
                const double ji = sfade::mjf_eval(p, ell, i, x);
                const double jj = sfade::mjf_eval(p, ell, j, x);
                const double denom = x * (ell - x);
                q += rule.weights[m] * ji * jj / (denom * denom);
            }
            q *= ell * ell * ell / 8.0;
            const double gam = std::exp(3.0 * std::log(2.0) + sfade::log_gamma(j + 2.0) +
                                        sfade::log_gamma(j + 2.0) - sfade::log_gamma(j + 1.0) -
                                        sfade::log_gamma(j + 3.0)) /
                               (2.0 * j + 3.0);
            const double expected = (i == j) ? std::pow(ell / 2.0, 3.0) * gam : 0.0;
            CAPTURE(i, j);
            CHECK(q == Approx(expected).epsilon(1e-10).margin(1e-10));
        }
    }
}

TEST_CASE("phi hand value, boundary annihilation, reflection parity") {
    const BasisSpec spec(2.0, 50);
    CHECK(sfade::phi(spec, 0, 1.0) == Approx(0.75).epsilon(1e-15));
    for (int k = 0; k <= 50; ++k) {
        CHECK(sfade::phi(spec, k, 0.0) == 0.0);
        CHECK(sfade::phi(spec, k, 2.0) == 0.0);
    }
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> xd(0.0, 2.0);
    std::uniform_int_distribution<int> kd(0, 50);
    for (int rep = 0; rep < 40; ++rep) {
        const double x = xd(rng);
        const int k = kd(rng);
        const double sign = k % 2 ? -1.0 : 1.0;
        CHECK(sfade::phi(spec, k, 2.0 - x) ==
              Approx(sign * sfade::phi(spec, k, x)).epsilon(1e-11).margin(1e-12));
    }
}

TEST_CASE("phi_all matches phi") {
    const BasisSpec spec(1.5, 12);
    Eigen::VectorXd all(13);
    sfade::phi_all(spec, 0.37, all);
    for (int k = 0; k <= 12; ++k)
        CHECK(all[k] == Approx(sfade::phi(spec, k, 0.37)).epsilon(1e-14));
}

TEST_CASE("psi_left order-2 closed form") {
    const BasisSpec spec(2.0, 6);
    for (double x : {0.1, 0.5, 1.0, 1.9})
        CHECK(sfade::psi_left(spec, 2.0, 0, x) == Approx(-12.0 / 8.0).epsilon(1e-14));
    // second derivative of phi_k from the jacobi-side derivative identity
    for (int k : {1, 2, 5}) {
        for (double x : {0.3, 0.9, 1.4}) {
            const double y = 2.0 * x / 2.0 - 1.0;
            const double lam = sfade::basis_lambda(k, 2.0);
            const sfade::JacobiParams p11(1, 1);
            const double P = sfade::jacobi_eval(p11, k, y);
            const double dP = sfade::jacobi_deriv(p11, k, 1, y);
            const double ddP = sfade::jacobi_deriv(p11, k, 2, y);
            const double u2 = lam * (-2.0 * P + 2.0 * (2.0 - 2.0 * x) * dP +
                                     x * (2.0 - x) * ddP); // chain rule, dy/dx = 1
            CAPTURE(k, x);
            CHECK(sfade::psi_left(spec, 2.0, k, x) == Approx(u2).epsilon(1e-12));
        }
    }
}

TEST_CASE("psi_left integer-order limits") {
    const BasisSpec spec(2.0, 4);
    for (double x : {0.4, 1.0, 1.6}) {
        // sigma -> 1^- approaches the first derivative of phi_0
        const double d1 = 6.0 / 8.0 * (2.0 - 2.0 * x);
        CHECK(sfade::psi_left(spec, 1.0 - 1e-6, 0, x) == Approx(d1).margin(1e-4));
        // sigma -> 2^- approaches the second derivative
        CHECK(sfade::psi_left(spec, 2.0 - 1e-6, 0, x) == Approx(-12.0 / 8.0).margin(1e-4));
        CHECK(sfade::psi_left(spec, 2.0 - 1e-6, 3, x) ==
              Approx(sfade::psi_left(spec, 2.0, 3, x)).margin(2e-4));
    }
}

TEST_CASE("psi_left spot value against the GL oracle") {
    const BasisSpec spec(1.0, 3);
    const double val = sfade::psi_left(spec, 0.5, 3, 0.37);
    const double ref = sfade_test::gl_left(
        [](long double x) { return sfade_test::phi_ld(3, 1.0L, x); }, 0.5, 0.37, 1.0);
    CHECK(val == Approx(ref).margin(1e-6));
}

TEST_CASE("psi_right spot value against the right-sided GL oracle") {
    const BasisSpec spec(1.0, 2);
    const double val = sfade::psi_right(spec, 1.5, 1, 0.25);
    const double ref = sfade_test::gl_right(
        [](long double x) { return sfade_test::phi_ld(1, 1.0L, x); }, 1.5, 0.25, 1.0);
    CHECK(val == Approx(ref).margin(1e-6));
    // reflection-invariant case: constant psi for k = 0 at order 2
    CHECK(sfade::psi_right(spec, 2.0, 0, 0.3) == Approx(-12.0).epsilon(1e-13));
    CHECK(sfade::psi_left(spec, 2.0, 0, 0.3) == Approx(-12.0).epsilon(1e-13));
}

TEST_CASE("psi left/right match the GL oracles across orders, indices and points") {
    const double ell = 1.0;
    const int n = 8;
    const BasisSpec spec(ell, n);
    Eigen::VectorXd vals(n + 1);
    for (double sigma : {0.3, 0.5, 0.8, 1.2, 1.5, 1.8}) {
        for (int ip = 0; ip < 20; ++ip) {
            const double x = (ip + 0.5) / 20.0 * ell;
            const Eigen::VectorXd ref_l = sfade_test::gl_phi_family(n, sigma, x, ell, false);
            sfade::psi_left_all(spec, sigma, x, vals);
            for (int k = 0; k <= n; ++k) {
                CAPTURE(sigma, x, k);
                CHECK(vals[k] == Approx(ref_l[k]).margin(1e-6));
            }
            const Eigen::VectorXd ref_r = sfade_test::gl_phi_family(n, sigma, x, ell, true);
            sfade::psi_right_all(spec, sigma, x, vals);
            for (int k = 0; k <= n; ++k) {
                CAPTURE(sigma, x, k);
                CHECK(vals[k] == Approx(ref_r[k]).margin(1e-6));
            }
        }
    }
}

TEST_CASE("reflection consistency in magnitude") {
    const BasisSpec spec(1.3, 10);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> xd(0.05, 1.25);
    for (double sigma : {0.4, 1.7}) {
        for (int rep = 0; rep < 10; ++rep) {
            const double x = xd(rng);
            for (int k = 0; k <= 10; ++k) {
                const double r = sfade::psi_right(spec, sigma, k, x);
                const double l = sfade::psi_left(spec, sigma, k, 1.3 - x);
                CHECK(std::fabs(r) == Approx(std::fabs(l)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("fractional integration by parts links psi_right to left derivatives") {
    // integral of psi_k^{0.5-} g == integral of phi_k (D^{0.5+} g) for smooth g
    // vanishing at the endpoints
    const double ell = 2.0;
    const BasisSpec spec(ell, 4);
    auto g = [ell](double x) { return x * x * (ell - x) * (ell - x) / 16.0; };
    auto g_ld = [ell](long double x) { return x * x * (ell - x) * (ell - x) / 16.0L; };
    const auto rule = sfade::gauss_jacobi(sfade::JacobiParams(0, 0), 120);
    for (int k : {0, 1, 3}) {
        double lhs = 0.0, rhs = 0.0;
        for (int m = 0; m < 120; ++m) {
            const double x = 0.5 * ell * (rule.nodes[m] + 1.0);
            const double w = 0.5 * ell * rule.weights[m];
            lhs += w * sfade::psi_right(spec, 0.5, k, x) * g(x);
            rhs += w * sfade::phi(spec, k, x) * sfade_test::gl_left(g_ld, 0.5, x, ell, 1024);
        }
        CAPTURE(k);
        CHECK(lhs == Approx(rhs).margin(1e-6));
    }
}

TEST_CASE("psi error cases") {
    const BasisSpec spec(1.0, 3);
    CHECK_THROWS_AS(sfade::psi_left(spec, 1.0, 1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(sfade::psi_left(spec, 2.5, 1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(sfade::psi_left(spec, -0.3, 1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(sfade::psi_left(spec, 1.5, 1, 0.0), std::domain_error);
    CHECK_THROWS_AS(sfade::psi_right(spec, 1.5, 1, 1.0), std::domain_error);
    // order below 1 stays finite at the boundary
    CHECK_NOTHROW(sfade::psi_left(spec, 0.5, 1, 0.0));
}

TEST_CASE("initial projection right-hand side") {
    const double ell = 2.0;
    const int n = 4;
    const BasisSpec spec(ell, n);
    const auto grid = sfade::build_grid(ell, n);

    const Eigen::VectorXd zero = sfade::initial_projection_rhs(
        spec, [](double) { return 0.0; }, grid.nodes);
    CHECK(zero.norm() == 0.0);

    // f = phi_2 projects onto the unit coefficient vector
    const Eigen::VectorXd F = sfade::initial_projection_rhs(
        spec, [&](double x) { return sfade::phi(spec, 2, x); }, grid.nodes);
    const Eigen::MatrixXd Minv = sfade::build_mass_inverse(grid, spec);
    const Eigen::VectorXd a0 = Minv * F;
    for (int k = 0; k <= n; ++k)
        CHECK(a0[k] == Approx(k == 2 ? 1.0 : 0.0).margin(1e-10));

    auto f1 = [](double x) { return 4.0 * (2.0 - x) * (2.0 - x) * x * x; };
    const Eigen::VectorXd F1 = sfade::initial_projection_rhs(spec, f1, grid.nodes);
    for (int i = 0; i <= n; ++i) CHECK(F1[i] == Approx(f1(grid.nodes[i])).epsilon(1e-15));
}
