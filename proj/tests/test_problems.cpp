#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "sfade/problems.hpp"
#include "oracles.hpp"

using Catch::Approx;
using sfade::BuiltinParams;
using sfade::builtin;

TEST_CASE("builtin example 1 data") {
    const auto p = builtin(1);
    CHECK(p.beta == 1.8);
    CHECK(p.ell == 2.0);
    CHECK(p.horizon == 5.0);
    CHECK(p.exact(1.0, 0.0) == Approx(4.0).epsilon(1e-14));
    CHECK(p.initial(1.0) == Approx(4.0).epsilon(1e-14));
    CHECK(p.c_alpha_plus(0.7, 0.3) == 0.0);
    CHECK(p.c_beta_plus(1.0, 0.0) == Approx(sfade::gamma(1.2)).epsilon(1e-14));
    CHECK(p.c_beta_minus(0.0, 0.0) == Approx(sfade::gamma(1.2) * std::pow(2.0, 1.8)).epsilon(1e-14));
    CHECK_FALSE(p.coefficients_time_dependent);
    CHECK_THROWS_AS(builtin(1, BuiltinParams{.alpha = 0.3}), std::invalid_argument);
}

TEST_CASE("builtin example 2 data") {
    const auto p = builtin(2, BuiltinParams{.alpha = 0.4, .beta = 1.6, .gamma = 2.0});
    CHECK(p.ell == 1.0);
    CHECK(p.initial(0.3) == 0.0);
    const double ca = 1.0 / std::cos(0.4 * sfade::pi_const / 2.0);
    CHECK(p.c_alpha_plus(0.2, 0.9) == Approx(ca).epsilon(1e-14));
    CHECK(p.c_beta_plus(0.2, 0.9) == Approx(-1.0 / std::cos(1.6 * sfade::pi_const / 2.0)).epsilon(1e-14));
    CHECK(p.c_beta_plus(0.2, 0.9) > 0.0);
    CHECK(p.exact(0.5, 1.0) ==
          Approx(std::exp(0.4) * 0.25 * 0.25).epsilon(1e-13));
    CHECK_THROWS_AS(builtin(2, BuiltinParams{.alpha = 1.2}), std::invalid_argument);
    CHECK_THROWS_AS(builtin(2, BuiltinParams{.case_id = 1}), std::invalid_argument);
}

TEST_CASE("builtin example 3 data") {
    const auto p = builtin(3);
    CHECK(p.alpha == 0.5);
    CHECK(p.beta == 1.5);
    CHECK(p.ell == Approx(sfade::pi_const));
    CHECK(p.horizon == 4.0);
    CHECK(p.exact(0.3, 0.7) == Approx(std::exp(-0.7) * std::sin(1.2)).epsilon(1e-14));
    // K_alpha = 2, K_beta = 0.1 defaults
    CHECK(p.c_alpha_plus(1.0, 1.0) == Approx(2.0 / (2.0 * std::cos(sfade::pi_const / 4.0))).epsilon(1e-14));
    CHECK(p.c_beta_plus(1.0, 1.0) ==
          Approx(-0.1 / (2.0 * std::cos(0.75 * sfade::pi_const))).epsilon(1e-14));

    const auto pz = builtin(3, BuiltinParams{.alpha = 0.9, .beta = 2.0, .zero_source = true});
    CHECK_FALSE(pz.has_exact());
    CHECK(pz.source(1.0, 0.5) == 0.0);
    CHECK(pz.source_is_zero);

    CHECK_THROWS_AS(builtin(3, BuiltinParams{.alpha = 0.3}), std::invalid_argument);
    CHECK_THROWS_AS(builtin(3, BuiltinParams{.gamma = 2.0}), std::invalid_argument);
}

TEST_CASE("builtin example 4 data") {
    const auto p1 = builtin(4, BuiltinParams{.case_id = 1});
    CHECK(p1.ell == 7.0);
    CHECK(p1.horizon == 1.0);
    CHECK_FALSE(p1.has_exact());
    CHECK(p1.source_is_zero);
    CHECK(p1.c_alpha_plus(3.3, 0.1) == 1.0);
    CHECK(p1.c_beta_plus(5.0, 0.0) == Approx(0.001));
    CHECK(p1.c_beta_plus(4.4999, 0.0) == Approx(0.1));
    CHECK(p1.c_beta_plus(7.0, 0.0) == Approx(0.001)); // closed at the right end
    const auto p2 = builtin(4, BuiltinParams{.case_id = 2});
    CHECK(p2.c_beta_plus(1.0, 0.0) == 0.0);
    CHECK(p2.c_beta_plus(4.5, 0.0) == Approx(0.7));
    // initial data plateaus
    CHECK(p1.initial(3.5) == 2.0);
    CHECK(p1.initial(1.0) == 1.0);
    CHECK(p1.initial(2.0) == 0.0);
    CHECK(p1.initial(5.5) == 4.0);
    CHECK(p1.initial(6.5) == 0.0);
    CHECK_THROWS_AS(builtin(4, BuiltinParams{.case_id = 3}), std::invalid_argument);
    CHECK_THROWS_AS(builtin(5), std::invalid_argument);
}

TEST_CASE("built-in source consistency against the GL oracles") {
    // substitute the exact solution into the equation via reference fractional
    // derivatives; the stored source must close the balance
    std::mt19937 rng(20250810);

    struct Case {
        sfade::ProblemSpec spec;
        std::function<double(double, double)> u_t;
        double margin;
    };
    const auto p1 = builtin(1);
    const auto p2 = builtin(2, BuiltinParams{.alpha = 0.4, .beta = 1.6, .gamma = 2.0});
    const auto p3 = builtin(3);
    std::vector<Case> cases;
    cases.push_back({p1, [&](double x, double t) { return -p1.exact(x, t); }, 1e-5});
    cases.push_back({p2,
                     [](double x, double t) {
                         return std::exp(0.4 * t) * (2.0 * t + 0.4 * t * t) * x * x *
                                (1.0 - x) * (1.0 - x);
                     },
                     1e-5});
    cases.push_back({p3, [&](double x, double t) { return -p3.exact(x, t); }, 1e-5});

    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        const auto& c = cases[ci];
        const auto& p = c.spec;
        std::uniform_real_distribution<double> xd(0.12 * p.ell, 0.88 * p.ell);
        std::uniform_real_distribution<double> td(0.05 * p.horizon, p.horizon);
        for (int rep = 0; rep < 20; ++rep) {
            const double x = xd(rng), t = td(rng);
            auto u_of_x = [&](long double xx) -> long double {
                return p.exact(static_cast<double>(xx), t);
            };
            const double dal = sfade_test::gl_left(u_of_x, p.alpha, x, p.ell, 2048);
            const double dar = sfade_test::gl_right(u_of_x, p.alpha, x, p.ell, 2048);
            const double dbl_ = sfade_test::gl_left(u_of_x, p.beta, x, p.ell, 2048);
            const double dbr = sfade_test::gl_right(u_of_x, p.beta, x, p.ell, 2048);
            const double residual = c.u_t(x, t) + p.c_alpha_plus(x, t) * dal +
                                    p.c_alpha_minus(x, t) * dar - p.c_beta_plus(x, t) * dbl_ -
                                    p.c_beta_minus(x, t) * dbr - p.source(x, t);
            CAPTURE(ci, x, t);
            CHECK(std::fabs(residual) <= c.margin);
        }
    }
}

namespace {

const char* config_text = R"JSON({
  "alpha": 0.4,
  "beta": 1.6,
  "ell": 1.0,
  "horizon": 0.5,
  "c_alpha_plus": "1/cos(0.2*3.141592653589793)",
  "c_alpha_minus": "1/cos(0.2*3.141592653589793)",
  "c_beta_plus": "-1/cos(0.8*3.141592653589793)",
  "c_beta_minus": "-1/cos(0.8*3.141592653589793)",
  "source": "t*x",
  "initial": "x^2*(1-x)^2",
  "exact": "exp(-t)*x^2*(1-x)^2"
})JSON";

} // namespace

TEST_CASE("problem config round trip") {
    const auto j = nlohmann::json::parse(config_text);
    const auto cfg = sfade::ProblemConfig::from_json(j);
    CHECK(cfg.alpha == 0.4);
    CHECK(cfg.horizon == 0.5);
    const auto p = cfg.to_problem();
    CHECK(p.c_alpha_plus(0.3, 0.1) == Approx(1.0 / std::cos(0.2 * sfade::pi_const)));
    CHECK(p.initial(0.5) == Approx(0.0625).epsilon(1e-14));
    CHECK(p.has_exact());
    CHECK(p.exact(0.5, 0.0) == Approx(0.0625).epsilon(1e-14));
    CHECK_FALSE(p.coefficients_time_dependent);
    CHECK_FALSE(p.source_is_zero);

    // file-based loading
    const std::string path = "test_config_tmp.json";
    {
        std::ofstream out(path);
        out << config_text;
    }
    const auto cfg2 = sfade::ProblemConfig::from_file(path);
    CHECK(cfg2.beta == 1.6);
    std::remove(path.c_str());
}

TEST_CASE("problem config validation errors") {
    auto base = nlohmann::json::parse(config_text);

    auto j1 = base;
    j1.erase("source");
    CHECK_THROWS_WITH(sfade::ProblemConfig::from_json(j1),
                      Catch::Matchers::ContainsSubstring("source"));

    auto j2 = base;
    j2["alpha"] = 1.5;
    CHECK_THROWS_WITH(sfade::ProblemConfig::from_json(j2),
                      Catch::Matchers::ContainsSubstring("alpha"));

    auto j3 = base;
    j3["initial"] = "x^^2";
    CHECK_THROWS_WITH(sfade::ProblemConfig::from_json(j3),
                      Catch::Matchers::ContainsSubstring("offset"));

    auto j4 = base;
    j4["c_beta_plus"] = 3.0; // must be an expression string
    CHECK_THROWS_AS(sfade::ProblemConfig::from_json(j4), std::invalid_argument);

    CHECK_THROWS_AS(sfade::ProblemConfig::from_file("does_not_exist.json"),
                    std::invalid_argument);
}

TEST_CASE("time-dependent coefficients are detected") {
    auto j = nlohmann::json::parse(config_text);
    j["c_beta_plus"] = "0.1*(1+t)";
    const auto p = sfade::ProblemConfig::from_json(j).to_problem();
    CHECK(p.coefficients_time_dependent);
    auto j2 = nlohmann::json::parse(config_text);
    j2["source"] = "0";
    const auto p2 = sfade::ProblemConfig::from_json(j2).to_problem();
    CHECK(p2.source_is_zero);
}
