#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "tripwave/csv.hpp"
#include "tripwave/ul_profiles.hpp"

namespace tripwave {

/// Sampling window for pointwise verification. Defaults span the whole
/// corner set with generous tail margins.
struct GridSpec {
    double z_lo = 0.0, z_hi = 0.0;
    int n = 10000;
    double corner_exclusion = 1e-8; // radius skipped around each corner
};

// Left margin is rate-adaptive so the tail terms e^{lambda1 z} have decayed
// well below the tail tolerance at the first grid point.
inline GridSpec default_grid(const ULConstruction& c, int n = 10000) {
    double margin = std::max(50.0, 18.0 / c.lambda1);
    return GridSpec{c.leftmost_corner() - margin, c.rightmost_corner() + 20.0, n, 1e-8};
}

struct InequalityRecord {
    std::string name;
    double worst = 0.0; // max for the upper inequalities, min for the lower
    double at_z = 0.0;
};

/// Outcome of checking the six differential inequalities (upper ones <= 0,
/// lower ones >= 0), the pointwise ordering lower <= upper, the one-sided
/// derivative conditions at every corner, and the tail limit at the left end
/// of the grid.
struct VerificationReport {
    std::array<InequalityRecord, 3> upper; // must be <= tol
    std::array<InequalityRecord, 3> lower; // must be >= -tol
    double order_margin = 0.0;             // min over grid and components of upper-lower
    double order_at_z = 0.0;
    bool corners_ok = true;
    std::vector<std::string> corner_failures;
    double tail_residual = 0.0; // worst profile deviation from left_limit at z_lo
    double tol = 0.0, tail_tol = 0.0;
    bool pass = false;
    std::string note;
};

namespace detail {

struct SixValues {
    std::array<double, 3> up, up_d, up_dd, lo, lo_d, lo_dd;
};

inline SixValues eval_all(const ULConstruction& c, double z) {
    SixValues v;
    for (int i = 0; i < 3; ++i) {
        v.up[i] = c.upper[i].value(z);
        v.up_d[i] = c.upper[i].deriv(z);
        v.up_dd[i] = c.upper[i].second(z);
        v.lo[i] = c.lower[i].value(z);
        v.lo_d[i] = c.lower[i].deriv(z);
        v.lo_dd[i] = c.lower[i].second(z);
    }
    return v;
}

// The six inequality values at one point. The cross terms pair each profile
// with the opposite bound of the species it competes with or preys on; the
// second lower inequality carries the growth rate of the second species (r2).
inline std::array<double, 6> inequality_values(const ULConstruction& c, const Params& p,
                                               const SixValues& v) {
    double U1 = p.d1 * v.up_dd[0] - c.s * v.up_d[0] +
                p.r1 * v.up[0] * (1.0 - v.up[0] - p.k * v.lo[1] - p.b1 * v.lo[2]);
    double U2 = p.d2 * v.up_dd[1] - c.s * v.up_d[1] +
                p.r2 * v.up[1] * (1.0 - p.h * v.lo[0] - v.up[1] - p.b2 * v.lo[2]);
    double U3 = p.d3 * v.up_dd[2] - c.s * v.up_d[2] +
                p.r3 * v.up[2] * (-1.0 + p.a * v.up[0] + p.a * v.up[1] - v.up[2]);
    double L1 = p.d1 * v.lo_dd[0] - c.s * v.lo_d[0] +
                p.r1 * v.lo[0] * (1.0 - v.lo[0] - p.k * v.up[1] - p.b1 * v.up[2]);
    double L2 = p.d2 * v.lo_dd[1] - c.s * v.lo_d[1] +
                p.r2 * v.lo[1] * (1.0 - p.h * v.up[0] - v.lo[1] - p.b2 * v.up[2]);
    double L3 = p.d3 * v.lo_dd[2] - c.s * v.lo_d[2] +
                p.r3 * v.lo[2] * (-1.0 + p.a * v.lo[0] + p.a * v.lo[1] - v.lo[2]);
    return {U1, U2, U3, L1, L2, L3};
}

} // namespace detail

/// Pointwise certification of a constructed pair on the given grid. Corner
/// neighborhoods of radius grid.corner_exclusion are excluded from the
/// differential inequalities (derivatives jump there); ordering is checked at
/// every grid point; corner conditions use the analytic one-sided limits.
inline VerificationReport verify_ul(const ULConstruction& c, const Params& p,
                                    const GridSpec& grid, double tol = 1e-10,
                                    double tail_tol = 1e-6) {
    VerificationReport rep;
    rep.tol = tol;
    rep.tail_tol = tail_tol;
    rep.note = "second lower inequality evaluated with growth rate r2";
    const char* names_up[3] = {"U1", "U2", "U3"};
    const char* names_lo[3] = {"L1", "L2", "L3"};
    for (int i = 0; i < 3; ++i) {
        rep.upper[i] = {names_up[i], -std::numeric_limits<double>::infinity(), grid.z_lo};
        rep.lower[i] = {names_lo[i], std::numeric_limits<double>::infinity(), grid.z_lo};
    }
    rep.order_margin = std::numeric_limits<double>::infinity();

    const double dz = grid.n > 1 ? (grid.z_hi - grid.z_lo) / (grid.n - 1) : 0.0;
    for (int j = 0; j < grid.n; ++j) {
        const double z = grid.z_lo + j * dz;
        auto v = detail::eval_all(c, z);
        for (int i = 0; i < 3; ++i) {
            double om = v.up[i] - v.lo[i];
            if (om < rep.order_margin) {
                rep.order_margin = om;
                rep.order_at_z = z;
            }
        }
        bool near_corner = false;
        for (double zc : c.corners)
            if (std::fabs(z - zc) <= grid.corner_exclusion) near_corner = true;
        if (near_corner) continue;
        auto q = detail::inequality_values(c, p, v);
        for (int i = 0; i < 3; ++i) {
            if (q[i] > rep.upper[i].worst) {
                rep.upper[i].worst = q[i];
                rep.upper[i].at_z = z;
            }
            if (q[3 + i] < rep.lower[i].worst) {
                rep.lower[i].worst = q[3 + i];
                rep.lower[i].at_z = z;
            }
        }
    }

    // corner conditions: upper right-derivative <= left-derivative,
    // lower left-derivative <= right-derivative
    for (double zc : c.corners) {
        for (int i = 0; i < 3; ++i) {
            double ul = c.upper[i].deriv_left(zc), ur = c.upper[i].deriv_right(zc);
            if (ur > ul + tol)
                rep.corner_failures.push_back("upper phi" + std::to_string(i + 1) + " at z=" +
                                              fmt_g(zc));
            double ll = c.lower[i].deriv_left(zc), lr = c.lower[i].deriv_right(zc);
            if (ll > lr + tol)
                rep.corner_failures.push_back("lower phi" + std::to_string(i + 1) + " at z=" +
                                              fmt_g(zc));
        }
    }
    rep.corners_ok = rep.corner_failures.empty();

    auto tail = eval_ul(c, grid.z_lo);
    double tr = 0.0;
    for (int i = 0; i < 3; ++i) {
        tr = std::max(tr, std::fabs(tail.upper[i] - c.left_limit[i]));
        tr = std::max(tr, std::fabs(tail.lower[i] - c.left_limit[i]));
    }
    rep.tail_residual = tr;

    bool ineq_ok = true;
    for (int i = 0; i < 3; ++i)
        ineq_ok = ineq_ok && rep.upper[i].worst <= tol && rep.lower[i].worst >= -tol;
    rep.pass = ineq_ok && rep.order_margin >= -tol && rep.corners_ok &&
               rep.tail_residual <= tail_tol;
    return rep;
}

/// Per-point dump: z, the six inequality values, and the ordering margin.
inline void write_verification_csv(std::ostream& os, const ULConstruction& c, const Params& p,
                                   const GridSpec& grid) {
    os << "z,U1,U2,U3,L1,L2,L3,order_margin\n";
    const double dz = grid.n > 1 ? (grid.z_hi - grid.z_lo) / (grid.n - 1) : 0.0;
    for (int j = 0; j < grid.n; ++j) {
        const double z = grid.z_lo + j * dz;
        bool near_corner = false;
        for (double zc : c.corners)
            if (std::fabs(z - zc) <= grid.corner_exclusion) near_corner = true;
        if (near_corner) continue;
        auto v = detail::eval_all(c, z);
        auto q = detail::inequality_values(c, p, v);
        double om = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 3; ++i) om = std::min(om, v.up[i] - v.lo[i]);
        os << fmt_g(z);
        for (double x : q) os << ',' << fmt_g(x);
        os << ',' << fmt_g(om) << '\n';
    }
}

inline void print_verification(std::ostream& os, const VerificationReport& rep) {
    for (const auto& r : rep.upper)
        os << r.name << "  worst " << fmt_g(r.worst) << "  at z = " << fmt_g(r.at_z) << "\n";
    for (const auto& r : rep.lower)
        os << r.name << "  worst " << fmt_g(r.worst) << "  at z = " << fmt_g(r.at_z) << "\n";
    os << "ordering  min margin " << fmt_g(rep.order_margin) << "  at z = "
       << fmt_g(rep.order_at_z) << "\n";
    os << "corners   " << (rep.corners_ok ? "ok" : "FAILED") << "\n";
    for (const auto& f : rep.corner_failures) os << "  corner failure: " << f << "\n";
    os << "left tail residual " << fmt_g(rep.tail_residual) << "\n";
    os << "note: " << rep.note << "\n";
    os << (rep.pass ? "PASS" : "FAIL") << " (tol " << fmt_g(rep.tol) << ", tail tol "
       << fmt_g(rep.tail_tol) << ")\n";
}

} // namespace tripwave
