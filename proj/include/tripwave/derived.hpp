#pragma once

#include <array>
#include <cmath>
#include <optional>

#include "tripwave/params.hpp"

namespace tripwave {

/// Closed-form quantities attached to the kinetic equilibria.
///
/// E^* = (u_star, 0, w_star) is the predator/weak-prey state, E_* =
/// (0, v_lowstar, w_lowstar) the predator/strong-prey state. beta_upper and
/// beta_lower are the per-capita growth rates of the missing prey at E^* and
/// E_*; their signs decide invadability, and the linear invasion speeds are
/// s_upper = 2*sqrt(d2*r2*beta_upper), s_lower = 2*sqrt(d1*r1*beta_lower)
/// (present only when the corresponding beta is positive). Ec is the unique
/// positive co-existence state, given by the Cramer ratios of Delta_u,
/// Delta_v, Delta_w against Delta, and is present only when all three ratios
/// are strictly positive.
struct DerivedQuantities {
    double u_star, w_star;
    double v_lowstar, w_lowstar;
    double beta_upper, beta_lower;
    double Delta, Delta_u, Delta_v, Delta_w;
    std::optional<std::array<double, 3>> Ec;
    std::optional<double> s_upper;
    std::optional<double> s_lower;
    double gamma2; // 1 - h - b2*(2a-1); lower bound for the strong prey behind the front

    std::array<double, 3> estar() const { return {u_star, 0.0, w_star}; }
    std::array<double, 3> elow() const { return {0.0, v_lowstar, w_lowstar}; }
};

inline DerivedQuantities derive(const Params& p) {
    validate(p);
    DerivedQuantities d{};
    d.u_star = (1.0 + p.b1) / (1.0 + p.a * p.b1);
    d.w_star = (p.a - 1.0) / (1.0 + p.a * p.b1);
    d.v_lowstar = (1.0 + p.b2) / (1.0 + p.a * p.b2);
    d.w_lowstar = (p.a - 1.0) / (1.0 + p.a * p.b2);
    d.beta_upper = 1.0 - p.h * d.u_star - p.b2 * d.w_star;
    d.beta_lower = 1.0 - p.k * d.v_lowstar - p.b1 * d.w_lowstar;
    d.Delta = 1.0 - p.h * p.k + p.a * p.b1 * (1.0 - p.h) - p.a * p.b2 * (p.k - 1.0);
    d.Delta_u = -p.b1 * (p.a - 1.0) + p.b2 * (p.a - p.k) - (p.k - 1.0);
    d.Delta_v = p.b1 * (p.a - p.h) - p.b2 * (p.a - 1.0) + (1.0 - p.h);
    d.Delta_w = p.a * (2.0 - p.h - p.k) - (1.0 - p.h * p.k);
    if (d.Delta != 0.0) {
        double uc = d.Delta_u / d.Delta;
        double vc = d.Delta_v / d.Delta;
        double wc = d.Delta_w / d.Delta;
        if (uc > 0.0 && vc > 0.0 && wc > 0.0) d.Ec = {{uc, vc, wc}};
    }
    if (d.beta_upper > 0.0) d.s_upper = 2.0 * std::sqrt(p.d2 * p.r2 * d.beta_upper);
    if (d.beta_lower > 0.0) d.s_lower = 2.0 * std::sqrt(p.d1 * p.r1 * d.beta_lower);
    d.gamma2 = 1.0 - p.h - p.b2 * (2.0 * p.a - 1.0);
    return d;
}

} // namespace tripwave
