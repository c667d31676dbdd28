#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "tripwave/derived.hpp"
#include "tripwave/errors.hpp"
#include "tripwave/kinetics.hpp"

namespace tripwave {

/// Point of the six-dimensional first-order traveling-wave system
/// (profile values and their derivatives, interleaved).
struct TWState {
    double phi1, psi1, phi2, psi2, phi3, psi3;
};

struct EigenCounts {
    int n_neg = 0, n_pos = 0, n_zero = 0;
};

/// Counts of eigenvalue real parts below -tol, above +tol, and within +-tol.
inline EigenCounts eigen_split(const Eigen::MatrixXd& M, double tol = 1e-9) {
    if (!M.allFinite()) throw EigenSolveFailure("matrix has non-finite entries");
    Eigen::EigenSolver<Eigen::MatrixXd> solver(M, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw EigenSolveFailure("solver did not converge");
    EigenCounts c;
    for (const auto& ev : solver.eigenvalues()) {
        if (ev.real() < -tol)
            ++c.n_neg;
        else if (ev.real() > tol)
            ++c.n_pos;
        else
            ++c.n_zero;
    }
    return c;
}

inline Eigen::Matrix3d kinetic_jacobian_matrix(const KineticState& x, const Params& p) {
    auto J = kinetic_jacobian(x, p);
    Eigen::Matrix3d M;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) M(i, j) = J[i][j];
    return M;
}

/// Jacobian of the first-order traveling-wave vector field at a phase point.
/// State ordering (phi1, psi1, phi2, psi2, phi3, psi3); speed s enters the
/// psi rows as s/d_i on the diagonal.
inline Eigen::Matrix<double, 6, 6> tw_jacobian(const TWState& x, const Params& p, double s) {
    Eigen::Matrix<double, 6, 6> J = Eigen::Matrix<double, 6, 6>::Zero();
    J(0, 1) = 1.0;
    J(1, 0) = -(p.r1 / p.d1) * (1.0 - 2.0 * x.phi1 - p.k * x.phi2 - p.b1 * x.phi3);
    J(1, 1) = s / p.d1;
    J(1, 2) = (p.r1 / p.d1) * p.k * x.phi1;
    J(1, 4) = (p.r1 / p.d1) * p.b1 * x.phi1;
    J(2, 3) = 1.0;
    J(3, 0) = (p.r2 / p.d2) * p.h * x.phi2;
    J(3, 2) = -(p.r2 / p.d2) * (1.0 - 2.0 * x.phi2 - p.h * x.phi1 - p.b2 * x.phi3);
    J(3, 3) = s / p.d2;
    J(3, 4) = (p.r2 / p.d2) * p.b2 * x.phi2;
    J(4, 5) = 1.0;
    J(5, 0) = -(p.r3 / p.d3) * p.a * x.phi3;
    J(5, 2) = -(p.r3 / p.d3) * p.a * x.phi3;
    J(5, 4) = -(p.r3 / p.d3) * (-1.0 + p.a * x.phi1 + p.a * x.phi2 - 2.0 * x.phi3);
    J(5, 5) = s / p.d3;
    return J;
}

inline TWState tw_rest_point(const std::array<double, 3>& state) {
    return {state[0], 0.0, state[1], 0.0, state[2], 0.0};
}

/// Linear stability of the co-existence state Ec. a2, a1, a0 are the
/// characteristic-polynomial coefficients (lambda^3 + a2 lambda^2 + a1 lambda
/// + a0) in closed form; the Routh-Hurwitz verdict is a2>0, a0>0, a2*a1>a0.
/// Eigenvalue-sign counts are reported for all four kinetic equilibria.
struct StabilityReport {
    double a0 = 0, a1 = 0, a2 = 0;
    bool routh_hurwitz_stable = false;
    EigenCounts counts_origin, counts_estar, counts_elow, counts_ec;
};

inline StabilityReport classify_Ec(const Params& p, double tol = 1e-9) {
    const DerivedQuantities d = derive(p);
    if (!d.Ec) throw NoCoexistenceState();
    const auto [uc, vc, wc] = *d.Ec;
    StabilityReport rep;
    rep.a2 = p.r1 * uc + p.r2 * vc + p.r3 * wc;
    rep.a1 = p.r1 * p.r2 * uc * vc * (1.0 - p.h * p.k) +
             p.r1 * p.r3 * uc * wc * (1.0 + p.a * p.b1) +
             p.r2 * p.r3 * vc * wc * (1.0 + p.a * p.b2);
    rep.a0 = (p.r1 * p.r2 * p.r3 * uc * vc * wc) * d.Delta;
    rep.routh_hurwitz_stable = rep.a2 > 0.0 && rep.a0 > 0.0 && rep.a2 * rep.a1 > rep.a0;
    auto counts = [&](const KineticState& x) {
        return eigen_split(kinetic_jacobian_matrix(x, p), tol);
    };
    rep.counts_origin = counts({0.0, 0.0, 0.0});
    rep.counts_estar = counts({d.u_star, 0.0, d.w_star});
    rep.counts_elow = counts({0.0, d.v_lowstar, d.w_lowstar});
    rep.counts_ec = counts({uc, vc, wc});
    return rep;
}

} // namespace tripwave
