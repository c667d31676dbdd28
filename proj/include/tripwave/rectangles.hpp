#pragma once

#include <algorithm>
#include <cmath>

#include "tripwave/derived.hpp"
#include "tripwave/errors.hpp"

namespace tripwave {

/// Default spread parameter for the contracting boxes:
/// min(w_*/2, (a*gamma2 - 1)/2). The tightest admissible value also involves
/// the predator's tail infimum, which an analytic check cannot access; a
/// measured lower bound from a simulation may be passed instead.
inline double default_delta3(const Params& p) {
    const DerivedQuantities d = derive(p);
    return std::min(d.w_lowstar / 2.0, (p.a * d.gamma2 - 1.0) / 2.0);
}

/// Upper bound for the slack parameter eps: the minimum of the five
/// admissibility expressions. Requires beta_upper > 0 and a*gamma2 > 1.
inline double eps_max(const Params& p, double delta3) {
    const DerivedQuantities d = derive(p);
    if (!(d.beta_upper > 0.0)) throw HypothesisViolated("beta_upper > 0");
    const double g2 = d.gamma2;
    if (!(p.a * g2 - 1.0 > 0.0)) throw HypothesisViolated("a*gamma2 > 1");
    if (!(delta3 > 0.0)) throw HypothesisViolated("delta3 > 0");
    const double hk = p.h * p.k;
    return std::min({g2, delta3,
                     (hk * g2 + p.h * p.b1 * delta3) / (hk + p.h * p.b1 + p.b2),
                     (p.a * p.k * g2 + p.a * p.b1 * delta3) / (p.a * p.k + p.a * p.b1 + 1.0),
                     (p.a * g2 - delta3 - 1.0) / p.a});
}

/// One evaluation of the shrinking-box quantities at homotopy parameter
/// theta. [m2,M2] x [m3,M3] is the box for the surviving prey and the
/// predator; M1theta bounds the vanishing prey from above. alpha2 > 0,
/// omega2 < 0, alpha3 > 0, omega3 < 0 are the sign conditions that force the
/// box to keep contracting; alpha2_expanded is the algebraically expanded
/// form of alpha2 (agreement with alpha2 cross-checks the derivation).
struct RectangleCheck {
    double theta = 0.0, eps = 0.0, delta3 = 0.0;
    double m2 = 0.0, M2 = 0.0, m3 = 0.0, M3 = 0.0;
    double M1theta = 0.0;
    double alpha2 = 0.0, omega2 = 0.0, alpha3 = 0.0, omega3 = 0.0;
    double alpha2_expanded = 0.0;
    bool alpha2_pos = false, omega2_neg = false, alpha3_pos = false, omega3_neg = false;
    bool all_signs = false;
};

inline RectangleCheck rectangle_signs(const Params& p, double theta, double eps,
                                      double delta3) {
    const DerivedQuantities d = derive(p);
    if (!(d.beta_upper > 0.0)) throw HypothesisViolated("beta_upper > 0");
    if (!(d.beta_lower < 0.0)) throw HypothesisViolated("beta_lower < 0");
    if (!(p.a > 1.0 / (1.0 - p.h)) ||
        !(p.b2 < (p.a * (1.0 - p.h) - 1.0) / (p.a * (2.0 * p.a - 1.0))))
        throw HypothesisViolated("small-predation condition on (a, h, b2)");
    if (!(theta >= 0.0 && theta < 1.0)) throw HypothesisViolated("theta in [0,1)");
    if (!(delta3 > 0.0)) throw HypothesisViolated("delta3 > 0");
    if (!(eps > 0.0 && eps < eps_max(p, delta3))) throw HypothesisViolated("0 < eps < eps_max");

    RectangleCheck rc;
    rc.theta = theta;
    rc.eps = eps;
    rc.delta3 = delta3;
    const double g2 = d.gamma2, vl = d.v_lowstar, wl = d.w_lowstar;
    const double cap = 2.0 * p.a - 1.0;
    rc.m2 = (1.0 - theta) * (g2 - eps) + theta * vl;
    rc.M2 = (1.0 - theta) * (1.0 + eps * eps) + theta * vl;
    rc.m3 = (1.0 - theta) * (delta3 - eps) + theta * wl;
    rc.M3 = (1.0 - theta) * (cap + eps) + theta * wl;
    rc.M1theta = std::max(0.0, 1.0 - p.k * rc.m2 - p.b1 * rc.m3);
    rc.alpha2 = 1.0 - p.h * rc.M1theta - rc.m2 - p.b2 * rc.M3;
    rc.omega2 = 1.0 - rc.M2 - p.b2 * rc.m3;
    rc.alpha3 = -1.0 + p.a * rc.m2 - rc.m3;
    rc.omega3 = -1.0 + p.a * rc.M1theta + p.a * rc.M2 - rc.M3;
    if (rc.M1theta > 0.0) {
        rc.alpha2_expanded =
            (1.0 - theta) * (p.h * p.k * g2 + p.h * p.b1 * delta3 -
                             eps * (-1.0 + p.h * p.k + p.h * p.b1 + p.b2)) -
            theta * p.h * d.beta_lower;
    } else {
        rc.alpha2_expanded = (1.0 - theta) * (p.h + (1.0 - p.b2) * eps);
    }
    rc.alpha2_pos = rc.alpha2 > 0.0;
    rc.omega2_neg = rc.omega2 < 0.0;
    rc.alpha3_pos = rc.alpha3 > 0.0;
    rc.omega3_neg = rc.omega3 < 0.0;
    rc.all_signs = rc.alpha2_pos && rc.omega2_neg && rc.alpha3_pos && rc.omega3_neg;
    return rc;
}

} // namespace tripwave
