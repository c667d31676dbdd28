#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "test_support.hpp"
#include "tripwave/stability.hpp"

using namespace tripwave;

TEST_CASE("eigen_split on the identity") {
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(6, 6);
    EigenCounts c = eigen_split(I);
    CHECK(c.n_pos == 6);
    CHECK(c.n_neg == 0);
    CHECK(c.n_zero == 0);
}

TEST_CASE("eigen_split rejects non-finite input") {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(3, 3);
    M(1, 2) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(eigen_split(M), EigenSolveFailure);
}

TEST_CASE("origin of the wave system has a (1,5,0) eigenvalue split") {
    for (const Params& p : {tw_test::ps_a(), tw_test::ps_b(), tw_test::ps_c()}) {
        for (double s : {0.5, 1.0, 2.0}) {
            auto J = tw_jacobian(tw_rest_point({0, 0, 0}), p, s);
            EigenCounts c = eigen_split(J);
            CHECK(c.n_neg == 1);
            CHECK(c.n_pos == 5);
            CHECK(c.n_zero == 0);
        }
    }
}

TEST_CASE("(1,5,0) split at the origin persists over random valid parameters") {
    std::mt19937 rng(31337);
    for (int it = 0; it < 50; ++it) {
        Params p = tw_test::random_params(rng);
        for (double s : {0.5, 1.0, 2.0}) {
            EigenCounts c = eigen_split(tw_jacobian(tw_rest_point({0, 0, 0}), p, s));
            CHECK(c.n_neg == 1);
            CHECK(c.n_pos == 5);
        }
    }
}

TEST_CASE("wave-system jacobian block structure at the origin") {
    Params p = tw_test::ps_a();
    double s = 2.0;
    auto J = tw_jacobian(tw_rest_point({0, 0, 0}), p, s);
    CHECK(J(1, 0) == doctest::Approx(-p.r1 / p.d1));
    CHECK(J(1, 1) == doctest::Approx(s / p.d1));
    CHECK(J(3, 2) == doctest::Approx(-p.r2 / p.d2));
    CHECK(J(5, 4) == doctest::Approx(p.r3 / p.d3)); // predator decays alone: +r3/d3 entry
    CHECK(J(1, 2) == 0.0);
}

TEST_CASE("wave-system jacobian matches finite differences of the vector field") {
    // first-order field: (phi1', psi1', ...) with psi_i' = (s psi_i - reaction_i)/d_i
    auto field = [](const TWState& x, const Params& p, double s) {
        Eigen::Matrix<double, 6, 1> f;
        f(0) = x.psi1;
        f(1) = (s * x.psi1 - p.r1 * x.phi1 * (1 - x.phi1 - p.k * x.phi2 - p.b1 * x.phi3)) / p.d1;
        f(2) = x.psi2;
        f(3) = (s * x.psi2 - p.r2 * x.phi2 * (1 - p.h * x.phi1 - x.phi2 - p.b2 * x.phi3)) / p.d2;
        f(4) = x.psi3;
        f(5) = (s * x.psi3 - p.r3 * x.phi3 * (-1 + p.a * x.phi1 + p.a * x.phi2 - x.phi3)) / p.d3;
        return f;
    };
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> unif(-1.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        Params p = tw_test::random_params(rng);
        double s = 0.5 + unif(rng) + 1.0;
        TWState x{unif(rng), unif(rng), unif(rng), unif(rng), unif(rng), unif(rng)};
        auto J = tw_jacobian(x, p, s);
        double* comps[6] = {&x.phi1, &x.psi1, &x.phi2, &x.psi2, &x.phi3, &x.psi3};
        const double h = 1e-6;
        for (int j = 0; j < 6; ++j) {
            TWState xp = x, xm = x;
            double* cp[6] = {&xp.phi1, &xp.psi1, &xp.phi2, &xp.psi2, &xp.phi3, &xp.psi3};
            double* cm[6] = {&xm.phi1, &xm.psi1, &xm.phi2, &xm.psi2, &xm.phi3, &xm.psi3};
            *cp[j] += h;
            *cm[j] -= h;
            auto fp = field(xp, p, s), fm = field(xm, p, s);
            for (int i = 0; i < 6; ++i)
                CHECK(std::fabs(J(i, j) - (fp(i) - fm(i)) / (2 * h)) <= 1e-5);
        }
        (void)comps;
    }
}

TEST_CASE("eigenvalue counts recorded at the semi-co-existence rest points") {
    Params p = tw_test::ps_a();
    DerivedQuantities d = derive(p);
    auto J = tw_jacobian(tw_rest_point(d.estar()), p, 2.0);
    EigenCounts c = eigen_split(J);
    CHECK(c.n_pos >= 1);
    CHECK(c.n_neg + c.n_pos + c.n_zero == 6);
    // at the strong-prey state the counts give the manifold dimensions the
    // tail argument instantiates; they are recorded, not asserted, beyond
    // totals and hyperbolicity
    EigenCounts ce = eigen_split(tw_jacobian(tw_rest_point(d.elow()), p, 2.0));
    CHECK(ce.n_neg + ce.n_pos + ce.n_zero == 6);
    CHECK(ce.n_zero == 0);
}

TEST_CASE("classify_Ec for ps_b: stable, Routh-Hurwitz agrees, a0 closed form") {
    Params p = tw_test::ps_b();
    StabilityReport rep = classify_Ec(p);
    double uc = 0.37 / 1.56, vc = 0.4 / 1.56, wc = 0.75 / 1.56;
    CHECK(rep.a0 == doctest::Approx(p.r1 * p.r2 * p.r3 * uc * vc * wc * 1.56).epsilon(1e-12));
    CHECK(rep.a2 == doctest::Approx(p.r1 * uc + p.r2 * vc + p.r3 * wc).epsilon(1e-12));
    CHECK(rep.routh_hurwitz_stable);
    CHECK(rep.counts_ec.n_neg == 3);
    CHECK(rep.counts_ec.n_pos == 0);
    // characteristic coefficients equal trace/minor/determinant data of the
    // numeric jacobian
    Eigen::Matrix3d J = kinetic_jacobian_matrix({uc, vc, wc}, p);
    CHECK(rep.a2 == doctest::Approx(-J.trace()).epsilon(1e-10));
    CHECK(rep.a0 == doctest::Approx(-J.determinant()).epsilon(1e-10));
    double minors = J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0) + J(0, 0) * J(2, 2) -
                    J(0, 2) * J(2, 0) + J(1, 1) * J(2, 2) - J(1, 2) * J(2, 1);
    CHECK(rep.a1 == doctest::Approx(minors).epsilon(1e-10));
}

TEST_CASE("classify_Ec throws without a co-existence state") {
    CHECK_THROWS_AS(classify_Ec(tw_test::ps_a()), NoCoexistenceState);
}

TEST_CASE("Routh-Hurwitz verdict matches eigenvalue signs on random samples") {
    std::mt19937 rng(2024);
    int found = 0;
    for (int it = 0; it < 20000 && found < 200; ++it) {
        Params p = tw_test::random_params(rng);
        DerivedQuantities d = derive(p);
        if (!d.Ec) continue;
        ++found;
        StabilityReport rep = classify_Ec(p);
        // skip near-marginal spectra; sign counting is ambiguous there
        Eigen::Matrix3d J = kinetic_jacobian_matrix({(*d.Ec)[0], (*d.Ec)[1], (*d.Ec)[2]}, p);
        Eigen::EigenSolver<Eigen::Matrix3d> es(J, false);
        double min_abs_real = 1e300;
        for (auto ev : es.eigenvalues()) min_abs_real = std::min(min_abs_real, std::fabs(ev.real()));
        if (min_abs_real < 1e-9) continue;
        bool eig_stable = rep.counts_ec.n_neg == 3;
        CHECK(rep.routh_hurwitz_stable == eig_stable);
        if (d.Delta < 0) {
            CHECK_FALSE(rep.routh_hurwitz_stable);
            CHECK(rep.counts_ec.n_pos >= 1);
        }
    }
    CHECK(found >= 100);
}
