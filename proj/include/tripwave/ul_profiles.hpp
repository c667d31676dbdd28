#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "tripwave/conditions.hpp"
#include "tripwave/derived.hpp"
#include "tripwave/errors.hpp"

namespace tripwave {

/// Which of the four explicit upper/lower profile pairs to build.
/// estar_*: strong prey invades E^* = (u*,0,w*); elow_*: weak prey invades
/// E_* = (0,v_*,w_*). The *_critical variants are the minimal-speed pairs
/// with (-z) e^{lambda z} tails.
enum class ULCase { estar_super, estar_critical, elow_super, elow_critical };

inline const char* to_string(ULCase c) {
    switch (c) {
        case ULCase::estar_super: return "estar-super";
        case ULCase::estar_critical: return "estar-critical";
        case ULCase::elow_super: return "elow-super";
        case ULCase::elow_critical: return "elow-critical";
    }
    return "?";
}

/// One closed-form branch of a profile:
///   f(z) = c0 + (c_lin*(-z) + c_sqrt*sqrt(-z) + c_exp) e^{lam z} + b_exp e^{nu z}.
/// Derivatives are analytic; sqrt/linear terms are only used on z < 0.
struct Piece {
    double c0 = 0.0;
    double c_lin = 0.0, c_sqrt = 0.0, c_exp = 0.0, lam = 0.0;
    double b_exp = 0.0, nu = 0.0;

    double value(double z) const {
        double v = c0;
        if (c_lin != 0.0 || c_sqrt != 0.0 || c_exp != 0.0) {
            double poly = c_lin * (-z) + (c_sqrt != 0.0 ? c_sqrt * std::sqrt(-z) : 0.0) + c_exp;
            v += poly * std::exp(lam * z);
        }
        if (b_exp != 0.0) v += b_exp * std::exp(nu * z);
        return v;
    }

    double deriv(double z) const {
        double v = 0.0;
        if (c_lin != 0.0 || c_sqrt != 0.0 || c_exp != 0.0) {
            double sq = c_sqrt != 0.0 ? std::sqrt(-z) : 0.0;
            double poly = c_lin * (-z) + c_sqrt * sq + c_exp;
            double dpoly = -c_lin - (c_sqrt != 0.0 ? c_sqrt / (2.0 * sq) : 0.0);
            v += (dpoly + lam * poly) * std::exp(lam * z);
        }
        if (b_exp != 0.0) v += b_exp * nu * std::exp(nu * z);
        return v;
    }

    double second(double z) const {
        double v = 0.0;
        if (c_lin != 0.0 || c_sqrt != 0.0 || c_exp != 0.0) {
            double sq = c_sqrt != 0.0 ? std::sqrt(-z) : 0.0;
            double poly = c_lin * (-z) + c_sqrt * sq + c_exp;
            double dpoly = -c_lin - (c_sqrt != 0.0 ? c_sqrt / (2.0 * sq) : 0.0);
            double ddpoly = c_sqrt != 0.0 ? -(c_sqrt / 4.0) * std::pow(-z, -1.5) : 0.0;
            v += (ddpoly + 2.0 * lam * dpoly + lam * lam * poly) * std::exp(lam * z);
        }
        if (b_exp != 0.0) v += b_exp * nu * nu * std::exp(nu * z);
        return v;
    }
};

/// Continuous piecewise profile: pieces[i] applies on (breaks[i-1], breaks[i])
/// with the last piece extending to +infinity. Values agree at breakpoints;
/// derivatives may jump (the corner set of the construction).
struct PiecewiseCurve {
    std::vector<double> breaks;
    std::vector<Piece> pieces; // pieces.size() == breaks.size() + 1

    int piece_index(double z) const {
        int i = 0;
        while (i < static_cast<int>(breaks.size()) && z >= breaks[i]) ++i;
        return i;
    }
    double value(double z) const { return pieces[piece_index(z)].value(z); }
    double deriv(double z) const { return pieces[piece_index(z)].deriv(z); }
    double second(double z) const { return pieces[piece_index(z)].second(z); }

    // one-sided limits at a breakpoint
    double deriv_left(double zb) const {
        int i = piece_index(zb);
        if (i > 0 && zb <= breaks[i - 1]) i -= 1; // zb is the left edge of piece i
        return pieces[i].deriv(zb);
    }
    double deriv_right(double zb) const { return pieces[piece_index(zb)].deriv(zb); }
};

/// An explicit generalized upper/lower solution pair at speed s, with every
/// construction constant it was assembled from. For the estar cases lambda1,
/// lambda2 are the roots of G(x) = d2 x^2 - s x + r2 beta_upper; for the elow
/// cases they hold sigma1, sigma2, the roots of H(x) = d1 x^2 - s x +
/// r1 beta_lower. ratio is R (resp. S), amplitude is A = 2a-1-w^* (resp.
/// B = 2a-1-w_*), and Lstar/Mconst are the critical-case constants
/// lambda1 e^2/2 and (7/(2 lambda1 e))^{7/2}.
struct ULConstruction {
    ULCase kind;
    double s = 0.0;
    double lambda1 = 0.0, lambda2 = 0.0;
    double ratio = 0.0;     // R or S
    double amplitude = 0.0; // A or B
    double p = 0.0;         // p1 or p2
    double mu = 0.0;        // supercritical cases only
    double q = 0.0;
    double Lstar = 0.0;  // critical cases only
    double Mconst = 0.0; // critical cases only
    double z0 = std::numeric_limits<double>::quiet_NaN();
    double z1 = std::numeric_limits<double>::quiet_NaN();
    double z2 = std::numeric_limits<double>::quiet_NaN();

    std::array<double, 3> left_limit{}; // common tail target of the pair at -infinity
    std::array<PiecewiseCurve, 3> upper;
    std::array<PiecewiseCurve, 3> lower;
    std::vector<double> corners; // sorted, unique

    double leftmost_corner() const { return corners.front(); }
    double rightmost_corner() const { return corners.back(); }
};

struct ULValues {
    std::array<double, 3> upper, lower;
};

inline ULValues eval_ul(const ULConstruction& c, double z) {
    ULValues v;
    for (int i = 0; i < 3; ++i) {
        v.upper[i] = c.upper[i].value(z);
        v.lower[i] = c.lower[i].value(z);
    }
    return v;
}

namespace detail {

inline void require(bool ok, const char* condition) {
    if (!ok) throw HypothesisViolated(condition);
}

inline bool near_critical(double s, double s_crit) {
    return std::fabs(s - s_crit) <= 1e-9 * std::max(1.0, s_crit);
}

inline std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(),
                        [](double a, double b) { return std::fabs(a - b) < 1e-14; }),
            v.end());
    return v;
}

// Solves p*L*(-z)e^{lam z} = 1 on [-2/lam, -1/lam] by bisection. The bracket
// is guaranteed by p in [2/e, 1]: the left end gives p - 1 <= 0, the right
// end p*e/2 - 1 >= 0.
inline double solve_critical_corner(double p, double L, double lam) {
    auto f = [&](double z) { return p * L * (-z) * std::exp(lam * z) - 1.0; };
    double lo = -2.0 / lam, hi = -1.0 / lam;
    double flo = f(lo), fhi = f(hi);
    if (flo > 0.0 || fhi < 0.0)
        throw RootBracketFailure("corner equation has no sign change on [-2/lam, -1/lam]");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (flo * fm <= 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

inline Piece constant(double c) { return Piece{.c0 = c}; }
inline Piece exp_offset(double c0, double ce, double lam) {
    return Piece{.c0 = c0, .c_exp = ce, .lam = lam};
}
inline Piece lin_exp(double c0, double clin, double lam) {
    return Piece{.c0 = c0, .c_lin = clin, .lam = lam};
}

} // namespace detail

/// Builds one of the four profile pairs. Throws HypothesisViolated (naming
/// the failed inequality) when the case's assumptions do not hold, and
/// RootBracketFailure if the critical corner solve cannot bracket.
///
/// Free constants are pinned mid-range: p = (max(ratio, floor)+1)/2 with
/// floor = 2/e in the critical cases and 0 otherwise, mu = (1 + min(2,
/// lambda2/lambda1))/2, and q at twice its lower bound.
inline ULConstruction build_ul(const Params& p, double s, ULCase kind) {
    using detail::require;
    validate(p);
    const DerivedQuantities d = derive(p);
    ULConstruction c;
    c.kind = kind;
    c.s = s;
    const double cap = 2.0 * p.a - 1.0; // predator ceiling

    const bool estar_side = (kind == ULCase::estar_super || kind == ULCase::estar_critical);
    const bool critical = (kind == ULCase::estar_critical || kind == ULCase::elow_critical);

    if (estar_side) {
        require(d.beta_upper > 0.0, "beta_upper > 0");
        require(d.s_upper.has_value(), "s_upper defined");
        const double s_up = *d.s_upper;
        require(p.r2 * d.beta_upper >= p.r1 * (p.k + p.b1 * (2.0 * p.a - 1.0)),
                "r2*beta_upper >= r1*(k + b1*(2a-1))");
        if (kind == ULCase::estar_super) {
            require(s > s_up && !detail::near_critical(s, s_up), "s > s_upper");
            require(p.d2 >= std::max(p.d1, p.d3), "d2 >= max(d1, d3)");
            require(p.r2 * d.beta_upper >= p.r3, "r2*beta_upper >= r3");
        } else {
            require(detail::near_critical(s, s_up), "s = s_upper");
            c.s = s = s_up;
            require(p.d3 / 2.0 < p.d1, "d3/2 < d1");
            require(p.d1 == p.d2, "d1 = d2");
            require(p.d2 <= p.d3, "d2 <= d3");
            require(p.r2 * (2.0 - p.d3 / p.d2) * d.beta_upper >= p.r3,
                    "r2*(2 - d3/d2)*beta_upper >= r3");
        }

        const double us = d.u_star, ws = d.w_star;
        c.amplitude = cap - ws; // A
        c.left_limit = {us, 0.0, ws};

        if (!critical) {
            const double disc = s * s - 4.0 * p.d2 * p.r2 * d.beta_upper;
            c.lambda1 = (s - std::sqrt(disc)) / (2.0 * p.d2);
            c.lambda2 = (s + std::sqrt(disc)) / (2.0 * p.d2);
            const double l1 = c.lambda1;
            c.ratio = p.r1 * (p.k + p.b1 * (2.0 * p.a - 1.0)) / (s * l1 - p.d1 * l1 * l1);
            c.p = (std::max(c.ratio, 0.0) + 1.0) / 2.0;
            c.mu = (1.0 + std::min(2.0, c.lambda2 / c.lambda1)) / 2.0;
            auto G = [&](double x) { return p.d2 * x * x - s * x + p.r2 * d.beta_upper; };
            const double q_floor = std::max(
                1.0, p.r2 * (p.h * p.b1 * ws + 1.0 + p.b2 * c.amplitude) / (-G(c.mu * l1)));
            c.q = 2.0 * q_floor;
            c.z1 = -std::log(c.p) / l1;
            c.z2 = -std::log(c.q) / ((c.mu - 1.0) * l1);

            c.upper[0] = {{0.0}, {detail::exp_offset(us, p.b1 * ws, l1), detail::constant(1.0)}};
            c.lower[0] = {{c.z1}, {detail::exp_offset(us, -us * c.p, l1), detail::constant(0.0)}};
            c.upper[1] = {{0.0}, {detail::exp_offset(0.0, 1.0, l1), detail::constant(1.0)}};
            c.lower[1] = {{c.z2},
                          {Piece{.c_exp = 1.0, .lam = l1, .b_exp = -c.q, .nu = c.mu * l1},
                           detail::constant(0.0)}};
            c.upper[2] = {{0.0}, {detail::exp_offset(ws, c.amplitude, l1), detail::constant(cap)}};
            c.lower[2] = {{0.0}, {detail::exp_offset(ws, -ws, l1), detail::constant(0.0)}};
            c.corners = detail::sorted_unique({c.z2, 0.0, c.z1});
        } else {
            const double l1 = s / (2.0 * p.d2);
            c.lambda1 = c.lambda2 = l1;
            c.Lstar = l1 * std::exp(2.0) / 2.0;
            c.Mconst = std::pow(7.0 / (2.0 * l1 * std::exp(1.0)), 3.5);
            c.ratio = p.r1 * (p.k + p.b1 * (2.0 * p.a - 1.0)) / (s * l1 - p.d1 * l1 * l1);
            c.p = (std::max(c.ratio, 2.0 / std::exp(1.0)) + 1.0) / 2.0;
            const double q_floor = std::max(
                4.0 * p.r2 * c.Lstar * c.Lstar * c.Mconst *
                    (p.h * p.b1 * ws + 1.0 + p.b2 * c.amplitude) / p.d2,
                c.Lstar * std::sqrt(2.0 / l1));
            c.q = 2.0 * q_floor;
            const double hinge = -2.0 / l1;
            c.z2 = -(c.q / c.Lstar) * (c.q / c.Lstar);
            c.z1 = detail::solve_critical_corner(c.p, c.Lstar, l1);

            c.upper[0] = {{hinge},
                          {detail::lin_exp(us, c.Lstar * p.b1 * ws, l1), detail::constant(1.0)}};
            c.lower[0] = {{c.z1},
                          {detail::lin_exp(us, -us * c.p * c.Lstar, l1), detail::constant(0.0)}};
            c.upper[1] = {{hinge}, {detail::lin_exp(0.0, c.Lstar, l1), detail::constant(1.0)}};
            c.lower[1] = {{c.z2},
                          {Piece{.c_lin = c.Lstar, .c_sqrt = -c.q, .lam = l1},
                           detail::constant(0.0)}};
            c.upper[2] = {{hinge},
                          {detail::lin_exp(ws, c.Lstar * c.amplitude, l1), detail::constant(cap)}};
            c.lower[2] = {{hinge}, {detail::lin_exp(ws, -ws * c.Lstar, l1), detail::constant(0.0)}};
            c.corners = detail::sorted_unique({c.z2, hinge, c.z1});
        }
    } else {
        require(d.beta_lower > 0.0, "beta_lower > 0");
        require(d.s_lower.has_value(), "s_lower defined");
        const double s_lo = *d.s_lower;
        require(p.r1 * d.beta_lower >= p.r2 * (p.h + p.b2 * (2.0 * p.a - 1.0)),
                "r1*beta_lower >= r2*(h + b2*(2a-1))");
        if (kind == ULCase::elow_super) {
            require(s > s_lo && !detail::near_critical(s, s_lo), "s > s_lower");
            require(p.d1 >= std::max(p.d2, p.d3), "d1 >= max(d2, d3)");
            require(p.r1 * d.beta_lower >= p.r3, "r1*beta_lower >= r3");
        } else {
            require(detail::near_critical(s, s_lo), "s = s_lower");
            c.s = s = s_lo;
            require(p.d3 / 2.0 < p.d1, "d3/2 < d1");
            require(p.d1 == p.d2, "d1 = d2");
            require(p.d2 <= p.d3, "d2 <= d3");
            require(p.r1 * (2.0 - p.d3 / p.d1) * d.beta_lower >= p.r3,
                    "r1*(2 - d3/d1)*beta_lower >= r3");
        }

        const double vl = d.v_lowstar, wl = d.w_lowstar;
        c.amplitude = cap - wl; // B
        c.left_limit = {0.0, vl, wl};

        if (!critical) {
            const double disc = s * s - 4.0 * p.d1 * p.r1 * d.beta_lower;
            c.lambda1 = (s - std::sqrt(disc)) / (2.0 * p.d1); // sigma1
            c.lambda2 = (s + std::sqrt(disc)) / (2.0 * p.d1); // sigma2
            const double s1 = c.lambda1;
            c.ratio = p.r2 * (p.h + p.b2 * (2.0 * p.a - 1.0)) / (s * s1 - p.d2 * s1 * s1); // S
            c.p = (std::max(c.ratio, 0.0) + 1.0) / 2.0;
            c.mu = (1.0 + std::min(2.0, c.lambda2 / c.lambda1)) / 2.0;
            auto H = [&](double x) { return p.d1 * x * x - s * x + p.r1 * d.beta_lower; };
            const double q_floor = std::max(
                1.0, p.r1 * (1.0 + p.k * p.b2 * wl + p.b1 * c.amplitude) / (-H(c.mu * s1)));
            c.q = 2.0 * q_floor;
            c.z0 = -std::log(c.q) / ((c.mu - 1.0) * s1);
            c.z2 = -std::log(c.p) / s1;

            c.upper[0] = {{0.0}, {detail::exp_offset(0.0, 1.0, s1), detail::constant(1.0)}};
            c.lower[0] = {{c.z0},
                          {Piece{.c_exp = 1.0, .lam = s1, .b_exp = -c.q, .nu = c.mu * s1},
                           detail::constant(0.0)}};
            c.upper[1] = {{0.0}, {detail::exp_offset(vl, p.b2 * wl, s1), detail::constant(1.0)}};
            c.lower[1] = {{c.z2}, {detail::exp_offset(vl, -vl * c.p, s1), detail::constant(0.0)}};
            c.upper[2] = {{0.0}, {detail::exp_offset(wl, c.amplitude, s1), detail::constant(cap)}};
            c.lower[2] = {{0.0}, {detail::exp_offset(wl, -wl, s1), detail::constant(0.0)}};
            c.corners = detail::sorted_unique({c.z0, 0.0, c.z2});
        } else {
            const double s1 = s / (2.0 * p.d1);
            c.lambda1 = c.lambda2 = s1;
            c.Lstar = s1 * std::exp(2.0) / 2.0;
            c.Mconst = std::pow(7.0 / (2.0 * s1 * std::exp(1.0)), 3.5);
            c.ratio = p.r2 * (p.h + p.b2 * (2.0 * p.a - 1.0)) / (s * s1 - p.d2 * s1 * s1);
            c.p = (std::max(c.ratio, 2.0 / std::exp(1.0)) + 1.0) / 2.0;
            const double q_floor = std::max(
                4.0 * p.r1 * c.Lstar * c.Lstar * c.Mconst *
                    (1.0 + p.k * p.b2 * wl + p.b1 * c.amplitude) / p.d1,
                c.Lstar * std::sqrt(2.0 / s1));
            c.q = 2.0 * q_floor;
            const double hinge = -2.0 / s1;
            c.z0 = -(c.q / c.Lstar) * (c.q / c.Lstar);
            c.z2 = detail::solve_critical_corner(c.p, c.Lstar, s1);

            c.upper[0] = {{hinge}, {detail::lin_exp(0.0, c.Lstar, s1), detail::constant(1.0)}};
            c.lower[0] = {{c.z0},
                          {Piece{.c_lin = c.Lstar, .c_sqrt = -c.q, .lam = s1},
                           detail::constant(0.0)}};
            c.upper[1] = {{hinge},
                          {detail::lin_exp(vl, c.Lstar * p.b2 * wl, s1), detail::constant(1.0)}};
            c.lower[1] = {{c.z2},
                          {detail::lin_exp(vl, -vl * c.p * c.Lstar, s1), detail::constant(0.0)}};
            c.upper[2] = {{hinge},
                          {detail::lin_exp(wl, c.Lstar * c.amplitude, s1), detail::constant(cap)}};
            c.lower[2] = {{hinge}, {detail::lin_exp(wl, -wl * c.Lstar, s1), detail::constant(0.0)}};
            c.corners = detail::sorted_unique({c.z0, hinge, c.z2});
        }
    }
    return c;
}

} // namespace tripwave
