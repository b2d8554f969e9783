#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sfade/specfun.hpp"
#include "oracles.hpp"

using Catch::Approx;

TEST_CASE("gamma at integers and half-integers") {
    CHECK(sfade::gamma(1.0) == Approx(1.0).epsilon(1e-14));
    CHECK(sfade::gamma(5.0) == Approx(24.0).epsilon(1e-14));
    CHECK(sfade::gamma(0.5) == Approx(1.7724538509055160273).epsilon(1e-13));
}

TEST_CASE("gamma(1.2) against the 50-digit reference and the quadrature oracle") {
    const double ref = 0.91816874239976061064095165518583; // mpmath, 50 digits
    CHECK(sfade::gamma(1.2) == Approx(ref).epsilon(1e-13));
    CHECK(sfade::gamma(1.2) == Approx(sfade_test::gamma_by_quadrature(1.2)).epsilon(1e-12));
}

TEST_CASE("gamma matches the quadrature oracle across [0.1, 50]") {
    for (double z : {0.1, 0.3, 0.7, 1.0, 2.5, 3.7, 7.3, 12.0, 20.5, 33.0, 50.0}) {
        CAPTURE(z);
        CHECK(sfade::gamma(z) == Approx(sfade_test::gamma_by_quadrature(z)).epsilon(1e-12));
    }
}

TEST_CASE("gamma recurrence identity up to k = 40") {
    for (int k = 1; k <= 40; ++k) {
        const double lhs = sfade::gamma(k + 1.0);
        const double rhs = k * sfade::gamma(static_cast<double>(k));
        CHECK(std::fabs(lhs - rhs) / lhs <= 1e-13);
    }
}

TEST_CASE("gamma error cases") {
    CHECK_THROWS_AS(sfade::gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(sfade::gamma(-3.0), std::domain_error);
    CHECK_THROWS_AS(sfade::gamma(200.0), std::overflow_error);
    CHECK_THROWS_AS(sfade::gamma(std::nan("")), std::domain_error);
    // reflection keeps small negative non-integers meaningful
    CHECK(sfade::gamma(-0.5) == Approx(-2.0 * 1.7724538509055160273).epsilon(1e-12));
}

TEST_CASE("Fresnel values at zero and odd symmetry") {
    CHECK(sfade::fresnel_c(0.0) == 0.0);
    CHECK(sfade::fresnel_s(0.0) == 0.0);
    for (double x : {0.3, 1.0, 2.2, 5.5}) {
        CHECK(sfade::fresnel_c(-x) == Approx(-sfade::fresnel_c(x)).margin(1e-15));
        CHECK(sfade::fresnel_s(-x) == Approx(-sfade::fresnel_s(x)).margin(1e-15));
    }
}

TEST_CASE("Fresnel at 1 against the defining integral") {
    CHECK(sfade::fresnel_s(1.0) == Approx(0.43825914739035476608).margin(1e-12));
    CHECK(sfade::fresnel_c(1.0) == Approx(0.77989340037682282947).margin(1e-12));
    CHECK(sfade::fresnel_s(1.0) == Approx(sfade_test::fresnel_s_by_quadrature(1.0)).margin(1e-12));
}

TEST_CASE("Fresnel agrees with quadrature at 100 random points in [0, 5]") {
    std::mt19937 rng(20240917);
    std::uniform_real_distribution<double> dist(0.0, 5.0);
    for (int i = 0; i < 100; ++i) {
        const double x = dist(rng);
        CAPTURE(x);
        CHECK(sfade::fresnel_c(x) == Approx(sfade_test::fresnel_c_by_quadrature(x)).margin(1e-12));
        CHECK(sfade::fresnel_s(x) == Approx(sfade_test::fresnel_s_by_quadrature(x)).margin(1e-12));
    }
}

TEST_CASE("Fresnel branch seam and far tail") {
    // series/continued-fraction crossover sits at 1.5
    for (double x : {1.5 - 1e-9, 1.5, 1.5 + 1e-9}) {
        CHECK(sfade::fresnel_c(x) == Approx(0.44526117603982153506).margin(1e-9));
        CHECK(sfade::fresnel_s(x) == Approx(0.69750496008209301308).margin(1e-9));
    }
    CHECK(sfade::fresnel_c(1.5) == Approx(0.44526117603982153506).margin(1e-12));
    CHECK(sfade::fresnel_s(1.5) == Approx(0.69750496008209301308).margin(1e-12));
    CHECK(sfade::fresnel_c(3.7) == Approx(0.54194566215448756989).margin(1e-12));
    CHECK(sfade::fresnel_s(8.3) == Approx(0.49323233333085209334).margin(1e-12));
    CHECK(std::fabs(sfade::fresnel_c(50.0) - 0.5) <= 1e-2);
    CHECK(std::fabs(sfade::fresnel_s(50.0) - 0.5) <= 1e-2);
}

TEST_CASE("Fresnel up to x = 10 against quadrature") {
    for (double x = 0.25; x <= 10.0; x += 0.75) {
        CAPTURE(x);
        CHECK(sfade::fresnel_c(x) == Approx(sfade_test::fresnel_c_by_quadrature(x)).margin(1e-12));
        CHECK(sfade::fresnel_s(x) == Approx(sfade_test::fresnel_s_by_quadrature(x)).margin(1e-12));
    }
}
