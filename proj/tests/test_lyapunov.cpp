#include <doctest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "tripwave/kinetics.hpp"
#include "tripwave/lyapunov.hpp"

using namespace tripwave;

namespace {
const double uc = 0.37 / 1.56, vc = 0.4 / 1.56, wc = 0.75 / 1.56;
}

TEST_CASE("phi vanishes exactly at the co-existence state and is positive away") {
    Params p = tw_test::ps_b();
    CHECK(lyapunov_phi({uc, vc, wc}, p) == doctest::Approx(0.0).epsilon(1e-15));
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> unif(0.05, 1.5);
    for (int it = 0; it < 200; ++it) {
        KineticState x{unif(rng), unif(rng), unif(rng)};
        double dev = std::max({std::fabs(x.u - uc), std::fabs(x.v - vc), std::fabs(x.w - wc)});
        if (dev < 1e-3) continue;
        CHECK(lyapunov_phi(x, p) > 0.0);
    }
}

TEST_CASE("phi at (1,1,1) against an independent evaluation") {
    Params p = tw_test::ps_b();
    auto g = [](double x) { return x - std::log(x) - 1.0; };
    double expected = (p.r3 * p.a * uc / (p.b1 * p.r1)) * g(1.0 / uc) +
                      (p.r3 * p.a * vc / (p.b2 * p.r2)) * g(1.0 / vc) + wc * g(1.0 / wc);
    CHECK(lyapunov_phi({1, 1, 1}, p) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("domain errors") {
    Params p = tw_test::ps_b();
    CHECK_THROWS_AS(lyapunov_phi({0.0, 0.5, 0.5}, p), DomainError);
    CHECK_THROWS_AS(lie_derivative_phi({0.5, -0.1, 0.5}, p), DomainError);
    CHECK_THROWS_AS(lyapunov_phi({1, 1, 1}, tw_test::ps_a()), NoCoexistenceState);
}

TEST_CASE("lie derivative vanishes at the co-existence state") {
    Params p = tw_test::ps_b();
    CHECK(std::fabs(lie_derivative_phi({uc, vc, wc}, p)) <= 1e-15);
}

TEST_CASE("lie derivative equals the expanded quadratic form") {
    Params p = tw_test::ps_b();
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> unif(0.05, 1.5);
    for (int it = 0; it < 500; ++it) {
        KineticState x{unif(rng), unif(rng), unif(rng)};
        double du = x.u - uc, dv = x.v - vc, dw = x.w - wc;
        double quad = -(p.r3 * p.a / p.b1) * du * du - (p.r3 * p.a / p.b2) * dv * dv -
                      p.r3 * dw * dw -
                      (p.r3 * p.a * p.k / p.b1 + p.r3 * p.a * p.h / p.b2) * du * dv;
        CHECK(lie_derivative_phi(x, p) == doctest::Approx(quad).epsilon(1e-11));
    }
}

TEST_CASE("lie derivative is negative definite under the coupling bound") {
    Params p = tw_test::ps_b(); // k sqrt(b2/b1) + h sqrt(b1/b2) = 1.69 < 2
    // definiteness constant from the 2x2 cross block
    double A1 = p.r3 * p.a / p.b1, A2 = p.r3 * p.a / p.b2, A3 = p.r3;
    double cross = 0.5 * (p.r3 * p.a * p.k / p.b1 + p.r3 * p.a * p.h / p.b2);
    double tr = A1 + A2, det = A1 * A2 - cross * cross;
    double alpha = std::min(A3, (tr - std::sqrt(tr * tr - 4 * det)) / 2);
    REQUIRE(alpha > 0.0);
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> unif(0.1, 1.5);
    for (int it = 0; it < 1000; ++it) {
        KineticState x{unif(rng), unif(rng), unif(rng)};
        double du = x.u - uc, dv = x.v - vc, dw = x.w - wc;
        double lie = lie_derivative_phi(x, p);
        CHECK(lie <= 1e-14);
        CHECK(lie <= -0.999 * alpha * (du * du + dv * dv + dw * dw) + 1e-12);
    }
}

TEST_CASE("lie derivative is the directional derivative of phi along the flow") {
    Params p = tw_test::ps_b();
    KineticState x{0.8, 0.3, 0.6};
    auto f = kinetic_rhs(x, p);
    double lie = lie_derivative_phi(x, p);
    double best_err = 1e300;
    for (double delta : {1e-4, 1e-5, 1e-6}) {
        KineticState xp{x.u + delta * f[0], x.v + delta * f[1], x.w + delta * f[2]};
        double fd = (lyapunov_phi(xp, p) - lyapunov_phi(x, p)) / delta;
        best_err = std::min(best_err, std::fabs(fd - lie));
    }
    CHECK(best_err <= 1e-5);
}

TEST_CASE("phi decreases along kinetic trajectories and only stalls at Ec") {
    Params p = tw_test::ps_b();
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> unif(0.05, 1.5);
    double dt = default_kinetic_dt(p);
    for (int traj = 0; traj < 10; ++traj) {
        KineticState x{unif(rng), unif(rng), unif(rng)};
        double phi = lyapunov_phi(x, p);
        for (int step = 0; step < 20000; ++step) {
            x = kinetic_step(x, p, dt);
            double phi_next = lyapunov_phi(x, p);
            CHECK(phi_next <= phi + 1e-12);
            phi = phi_next;
        }
        if (std::fabs(lie_derivative_phi(x, p)) < 1e-14) {
            double dev = std::max({std::fabs(x.u - uc), std::fabs(x.v - vc),
                                   std::fabs(x.w - wc)});
            CHECK(dev < 1e-6);
        }
    }
}
