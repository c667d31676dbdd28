#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "test_support.hpp"
#include "tripwave/kinetics.hpp"

using namespace tripwave;

TEST_CASE("reaction terms vanish at steady states") {
    Params p = tw_test::ps_a();
    auto f0 = kinetic_rhs({0, 0, 0}, p);
    CHECK(f0[0] == 0.0);
    CHECK(f0[1] == 0.0);
    CHECK(f0[2] == 0.0);
    auto fE = kinetic_rhs({0.5, 0.0, 0.5}, p); // E^* for ps_a
    CHECK(fE[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(fE[1] == 0.0);
    CHECK(fE[2] == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("reaction terms by direct substitution at (1,1,1)") {
    Params p = tw_test::ps_a();
    auto f = kinetic_rhs({1, 1, 1}, p);
    CHECK(f[0] == doctest::Approx(0.1 * (1 - 1 - 1.5 - 1)).epsilon(1e-14));   // -0.25
    CHECK(f[1] == doctest::Approx(1.0 * (1 - 0.5 - 1 - 0.02)).epsilon(1e-14)); // -0.52
    CHECK(f[2] == doctest::Approx(0.5 * (-1 + 3 + 3 - 1)).epsilon(1e-14));     // 2.0
}

TEST_CASE("jacobian matches central finite differences of the reaction") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> unif(0.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        Params p = tw_test::random_params(rng);
        KineticState x{unif(rng), unif(rng), unif(rng)};
        auto J = kinetic_jacobian(x, p);
        const double h = 1e-6;
        for (int j = 0; j < 3; ++j) {
            KineticState xp = x, xm = x;
            (j == 0 ? xp.u : j == 1 ? xp.v : xp.w) += h;
            (j == 0 ? xm.u : j == 1 ? xm.v : xm.w) -= h;
            auto fp = kinetic_rhs(xp, p), fm = kinetic_rhs(xm, p);
            for (int i = 0; i < 3; ++i)
                CHECK(std::fabs(J[i][j] - (fp[i] - fm[i]) / (2 * h)) <= 1e-6);
        }
    }
}

TEST_CASE("jacobian at the origin is diag(r1, r2, -r3)") {
    Params p = tw_test::ps_b();
    auto J = kinetic_jacobian({0, 0, 0}, p);
    CHECK(J[0][0] == p.r1);
    CHECK(J[1][1] == p.r2);
    CHECK(J[2][2] == -p.r3);
    CHECK(J[0][1] == 0.0);
    CHECK(J[2][0] == 0.0);
}

TEST_CASE("integration from the co-existence state stays put") {
    Params p = tw_test::ps_b();
    KineticState ec{0.37 / 1.56, 0.4 / 1.56, 0.75 / 1.56};
    auto traj = integrate_kinetic(ec, p, 100.0, -1.0, 0);
    CHECK(std::fabs(traj.terminal.u - ec.u) <= 1e-10);
    CHECK(std::fabs(traj.terminal.v - ec.v) <= 1e-10);
    CHECK(std::fabs(traj.terminal.w - ec.w) <= 1e-10);
}

TEST_CASE("long integration converges to the co-existence state") {
    // the slowest relaxation rate at Ec for this set is ~7.5e-4, so reaching
    // 1e-6 takes t of order 2e4
    Params p = tw_test::ps_b();
    KineticState ec{0.37 / 1.56, 0.4 / 1.56, 0.75 / 1.56};
    auto traj = integrate_kinetic({0.5, 0.5, 0.5}, p, 20000.0, 0.05, 0);
    CHECK(std::fabs(traj.terminal.u - ec.u) <= 1e-6);
    CHECK(std::fabs(traj.terminal.v - ec.v) <= 1e-6);
    CHECK(std::fabs(traj.terminal.w - ec.w) <= 1e-6);
}

TEST_CASE("two-species subsystem converges to the weak-prey state") {
    Params p = tw_test::ps_a();
    auto traj = integrate_kinetic({0.9, 0.0, 0.1}, p, 400.0, -1.0, 0);
    CHECK(traj.terminal.v == 0.0); // v = 0 is invariant
    CHECK(std::fabs(traj.terminal.u - 0.5) <= 1e-8);
    CHECK(std::fabs(traj.terminal.w - 0.5) <= 1e-8);
}

TEST_CASE("trajectories stay in the invariant box") {
    std::mt19937 rng(7);
    for (const Params& p : {tw_test::ps_a(), tw_test::ps_b(), tw_test::ps_c()}) {
        std::uniform_real_distribution<double> uu(0.01, 1.0), uw(0.01, 2.0 * p.a - 1.0);
        double cap = std::max(1.0, 2.0 * p.a - 1.0) + 0.1;
        for (int trial = 0; trial < 10; ++trial) {
            KineticState x{uu(rng), uu(rng), uw(rng)};
            auto traj = integrate_kinetic(x, p, 50.0, -1.0, 37);
            for (const auto& s : traj.samples) {
                CHECK(s.x.u >= -1e-12);
                CHECK(s.x.v >= -1e-12);
                CHECK(s.x.w >= -1e-12);
                CHECK(s.x.u <= cap);
                CHECK(s.x.v <= cap);
                CHECK(s.x.w <= cap);
            }
        }
    }
}

TEST_CASE("wildly oversized steps are reported, not propagated") {
    Params p = tw_test::ps_b();
    CHECK_THROWS_AS(integrate_kinetic({0.5, 0.5, 0.5}, p, 1000.0, 100.0, 0), StepSizeError);
    CHECK_THROWS_AS(integrate_kinetic({0.5, 0.5, 0.5}, p, -1.0, 0.01, 0), StepSizeError);
}

TEST_CASE("trajectory CSV has the pinned header and full precision") {
    Params p = tw_test::ps_a();
    auto traj = integrate_kinetic({0.3, 0.2, 0.1}, p, 0.05, 0.01, 1);
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    std::string text = os.str();
    CHECK(text.rfind("t,u,v,w\n", 0) == 0);
    CHECK(text.find("0,0.3,0.2,0.1\n") != std::string::npos);
    // full-precision values appear verbatim
    KineticState one = kinetic_step({0.3, 0.2, 0.1}, p, 0.01);
    CHECK(text.find(fmt_g(one.u)) != std::string::npos);
}
