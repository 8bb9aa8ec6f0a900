#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "acfront/flows.hpp"
#include "acfront/schedule.hpp"

using namespace acfront;

TEST_CASE("schedule closed forms at epsilon = 0.01") {
    Schedule s = make_schedule(0.01, 0.5, 0.75, 0.0, 2);
    CHECK(s.T_eps == doctest::Approx(2.3025850929940457).epsilon(1e-14));
    CHECK(s.L_eps == doctest::Approx(1.5174271293851464).epsilon(1e-14));
    CHECK(s.c_const == doctest::Approx(1.2655121234846454).epsilon(1e-14));
    CHECK(s.tau_star == doctest::Approx(2.029101936388596).epsilon(1e-14));
    CHECK(s.t_star == doctest::Approx(4.3316870293826416).epsilon(1e-14));
    CHECK(s.t1 == doctest::Approx(1.1512925464970228).epsilon(1e-14));
    CHECK(s.t2 == doctest::Approx(1.5389952800900951).epsilon(1e-14));
}

TEST_CASE("schedule ladder with kappa") {
    Schedule s = make_schedule(0.05, 0.5, 0.75, 0.2, 2);
    CHECK(s.T_eps == doctest::Approx(1.4978661367769954).epsilon(1e-12));
    CHECK(s.t_star == doctest::Approx(3.31197261).epsilon(1e-9));
    CHECK(s.t_star_kappa == doctest::Approx(3.531410351).epsilon(1e-9));
    CHECK(s.t2_kappa == doctest::Approx(0.7298340465).epsilon(1e-9));
    CHECK(s.t1 < s.t2);
}

TEST_CASE("schedule validation") {
    CHECK_THROWS_AS(make_schedule(0.5, 0.5, 0.75, 0.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_schedule(0.01, 0.8, 0.75, 0.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_schedule(0.01, 0.5, 0.75, -1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_schedule(0.01, 0.5, 0.75, 0.0, 1), std::invalid_argument);
}

TEST_CASE("phi pinned trajectory") {
    CHECK(phi(0.0, 1.0) == doctest::Approx(0.70710678118654752).epsilon(1e-14));
    CHECK(1.0 - phi(10.0, 0.3) == doctest::Approx(1.1450853e-8).epsilon(1e-4));
    CHECK(phi(5.0, -0.3) < 0.0);
    // ODE check: d/dt phi = phi - phi^3
    const double t = 0.7, u = 0.4, h = 1e-6;
    const double lhs = (phi(t + h, u) - phi(t - h, u)) / (2.0 * h);
    const double p = phi(t, u);
    CHECK(lhs == doctest::Approx(p - p * p * p).epsilon(1e-8));
}

TEST_CASE("phi_bar flow and semigroup") {
    CHECK(phi_bar(0.0, 0.37) == doctest::Approx(0.37).epsilon(1e-15));
    CHECK(phi_bar(1.0, 0.2) == doctest::Approx(0.48518275230605198).epsilon(1e-14));
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> ut(0.01, 2.0), uu(-1.5, 1.5);
    for (int i = 0; i < 100; ++i) {
        const double s = ut(rng), t = ut(rng), u = uu(rng);
        CHECK(std::abs(phi_bar(s, phi_bar(t, u)) - phi_bar(s + t, u)) < 1e-12);
    }
    // relation to the pinned flow: phi_bar(t,u) = phi(t, u/sqrt(1-u^2)), |u|<1
    for (int i = 0; i < 100; ++i) {
        const double t = ut(rng);
        const double u = std::uniform_real_distribution<double>(-0.95, 0.95)(rng);
        CHECK(std::abs(phi_bar(t, u) - phi(t, u / std::sqrt(1.0 - u * u))) < 1e-8);
    }
    CHECK_THROWS_AS(phi_bar(-5.0, 2.0), std::domain_error);
}

TEST_CASE("phi_bar derivatives match finite differences") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> ut(0.05, 2.0), uu(-1.2, 1.2);
    for (int i = 0; i < 50; ++i) {
        const double t = ut(rng), u = uu(rng), h = 1e-5;
        const PhiBarDerivs d = phi_bar_derivs(t, u);
        const double fd1 = (phi_bar(t, u + h) - phi_bar(t, u - h)) / (2.0 * h);
        const double fd2 = (phi_bar(t, u + h) - 2.0 * phi_bar(t, u) + phi_bar(t, u - h)) / (h * h);
        CHECK(d.d1 == doctest::Approx(fd1).epsilon(1e-8));
        CHECK(d.d2 == doctest::Approx(fd2).epsilon(2e-5));
    }
    // the second derivative is negative for u > 0 (concavity of the saturating flow)
    CHECK(phi_bar_derivs(1.0, 0.5).d2 < 0.0);
    CHECK(phi_bar_derivs(1.0, -0.5).d2 > 0.0);
}

TEST_CASE("a-priori envelope") {
    CHECK(apriori_bound(1.0) == doctest::Approx(1.0754151025300257).epsilon(1e-14));
    CHECK(apriori_bound(0.1) == doctest::Approx(2.3487561742605372).epsilon(1e-14));
    CHECK(apriori_bound(10.0) - 1.0 <= 1.1e-9);
    CHECK(apriori_bound(0.5) > apriori_bound(0.6));
    CHECK_THROWS_AS(apriori_bound(0.0), std::invalid_argument);
    // phi_bar pushes the envelope forward: phi_bar(s, Xi(r)) = Xi(r+s)
    CHECK(phi_bar(0.3, apriori_bound(0.2)) == doctest::Approx(apriori_bound(0.5)).epsilon(1e-12));
}
