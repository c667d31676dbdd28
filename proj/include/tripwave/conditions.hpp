#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "tripwave/derived.hpp"

namespace tripwave {

enum class Sc1Tail { none, semi, coexist };

/// Booleans for the hypotheses that decide when invasion waves exist and
/// which stable tail they select, evaluated with exact floating comparison
/// (strict inequalities stay strict; see condition_margins for slack near
/// boundaries).
///
/// Naming: `positive`/`positive2` are the instability conditions for E^*/E_*
/// (equivalent to beta_upper > 0 / beta_lower > 0, but evaluated in the
/// coupling-coefficient form). `vr`, `vd`, `vvvd0` are the growth-rate and
/// diffusivity conditions for the strong-alien invasion (supercritical and
/// critical speed); `uur`, `uud`, `uuud0` the analogues for the weak-alien
/// invasion. `hb2` is the small-predation condition forcing the semi
/// co-existence tail; `co_ex` + `ode_lyapu` force the co-existence tail.
struct ConditionReport {
    bool cond_1_2 = false;
    bool positive = false;
    bool positive2 = false;
    bool co_ex = false;
    bool ode_lyapu = false;
    bool vr = false;
    bool vd = false;
    bool vvvd0 = false;
    bool hb2 = false;
    bool uur = false;
    bool uud = false;
    bool uuud0 = false;

    Sc1Tail sc1_tail = Sc1Tail::none;
    bool thm_sc1_applicable = false;
    bool thm_cs2_applicable = false;
    bool minimal_speed_defined = false;

    std::optional<double> speed; // the s supplied, if any
    std::vector<std::string> notes;
};

inline const char* to_string(Sc1Tail t) {
    switch (t) {
        case Sc1Tail::semi: return "semi";
        case Sc1Tail::coexist: return "coexist";
        default: return "none";
    }
}

namespace detail {

// Supplied speeds are classified against the critical value with a small
// relative window so that values round-tripped through text still count as
// critical; the condition inequalities themselves stay exact.
inline int speed_regime(double s, const std::optional<double>& s_crit) {
    if (!s_crit) return -1;
    double tol = 1e-9 * std::max(1.0, *s_crit);
    if (std::fabs(s - *s_crit) <= tol) return 0; // critical
    return s > *s_crit ? 1 : -1;                 // supercritical / below
}

} // namespace detail

inline ConditionReport check_conditions(const Params& p, std::optional<double> s = std::nullopt) {
    validate(p);
    const DerivedQuantities d = derive(p);
    ConditionReport c;
    c.speed = s;

    c.cond_1_2 = (p.a > 1.0) && (p.h < 1.0) && (1.0 < p.k);
    c.positive = p.b2 < (p.a - p.h) / (p.a - 1.0) * p.b1 + (1.0 - p.h) / (p.a - 1.0);
    c.positive2 = (p.a > p.k) &&
                  (p.b2 > (p.a - 1.0) / (p.a - p.k) * p.b1 + (p.k - 1.0) / (p.a - p.k));
    c.co_ex = d.Ec.has_value();
    c.ode_lyapu = p.k * std::sqrt(p.b2 / p.b1) + p.h * std::sqrt(p.b1 / p.b2) < 2.0;

    c.vr = p.r2 * d.beta_upper >= p.r1 * (p.k + p.b1 * (2.0 * p.a - 1.0));
    c.vd = (p.d2 >= std::max(p.d1, p.d3)) && (p.r2 * d.beta_upper >= p.r3);
    c.vvvd0 = (p.d3 / 2.0 < p.d1) && (p.d1 == p.d2) && (p.d2 <= p.d3) &&
              (p.r2 * (2.0 - p.d3 / p.d2) * d.beta_upper >= p.r3);
    c.hb2 = (p.a > 1.0 / (1.0 - p.h)) &&
            (p.b2 < (p.a * (1.0 - p.h) - 1.0) / (p.a * (2.0 * p.a - 1.0)));

    c.uur = p.r1 * d.beta_lower >= p.r2 * (p.h + p.b2 * (2.0 * p.a - 1.0));
    c.uud = (p.d1 >= std::max(p.d2, p.d3)) && (p.r1 * d.beta_lower >= p.r3);
    // The critical-speed growth condition for the weak-alien case is
    // evaluated with beta_lower (the invaded state here is E_*); the
    // beta_upper variant is reported alongside in condition_margins.
    c.uuud0 = (p.d3 / 2.0 < p.d1) && (p.d1 == p.d2) && (p.d2 <= p.d3) &&
              (p.r1 * (2.0 - p.d3 / p.d1) * d.beta_lower >= p.r3);
    c.notes.push_back(
        "uuud0 uses beta_lower in the growth condition; the beta_upper variant's slack "
        "is listed in the margin report");

    bool sc1_speed_ok, cs2_speed_ok;
    if (s) {
        int reg_up = detail::speed_regime(*s, d.s_upper);
        int reg_lo = detail::speed_regime(*s, d.s_lower);
        sc1_speed_ok = (reg_up == 1 && c.vd) || (reg_up == 0 && c.vvvd0);
        cs2_speed_ok = (reg_lo == 1 && c.uud) || (reg_lo == 0 && c.uuud0);
    } else {
        sc1_speed_ok = c.vd || c.vvvd0;
        cs2_speed_ok = c.uud || c.uuud0;
    }

    bool sc1_exists = c.positive && c.vr && sc1_speed_ok;
    if (sc1_exists && d.beta_lower < 0.0 && c.hb2)
        c.sc1_tail = Sc1Tail::semi;
    else if (sc1_exists && c.co_ex && c.ode_lyapu)
        c.sc1_tail = Sc1Tail::coexist;
    c.thm_sc1_applicable = c.sc1_tail != Sc1Tail::none;

    c.thm_cs2_applicable = c.positive2 && c.uur && cs2_speed_ok && c.co_ex && c.ode_lyapu;

    c.minimal_speed_defined = d.s_upper.has_value() || d.s_lower.has_value();
    return c;
}

struct ConditionMargin {
    std::string name;
    double slack; // >0 satisfied with room, <0 violated; 0 on the boundary
};

/// Slack of every strict inequality behind the booleans in ConditionReport.
/// Equality constraints (d1 = d2) report -|d1-d2|.
inline std::vector<ConditionMargin> condition_margins(const Params& p) {
    const DerivedQuantities d = derive(p);
    std::vector<ConditionMargin> m;
    auto add = [&m](const std::string& n, double v) { m.push_back({n, v}); };
    add("a-1", p.a - 1.0);
    add("1-h", 1.0 - p.h);
    add("k-1", p.k - 1.0);
    add("positive: beta_upper", d.beta_upper);
    add("positive2: beta_lower", d.beta_lower);
    if (d.Delta != 0.0) {
        add("co_ex: min Cramer ratio",
            std::min({d.Delta_u / d.Delta, d.Delta_v / d.Delta, d.Delta_w / d.Delta}));
    } else {
        add("co_ex: Delta", 0.0);
    }
    add("ode_lyapu: 2 - (k*sqrt(b2/b1)+h*sqrt(b1/b2))",
        2.0 - (p.k * std::sqrt(p.b2 / p.b1) + p.h * std::sqrt(p.b1 / p.b2)));
    add("vr: r2*beta_upper - r1*(k+b1*(2a-1))",
        p.r2 * d.beta_upper - p.r1 * (p.k + p.b1 * (2.0 * p.a - 1.0)));
    add("vd: d2 - max(d1,d3)", p.d2 - std::max(p.d1, p.d3));
    add("vd: r2*beta_upper - r3", p.r2 * d.beta_upper - p.r3);
    add("vvvd0: d1 - d3/2", p.d1 - p.d3 / 2.0);
    add("vvvd0: -(d1-d2)", -std::fabs(p.d1 - p.d2));
    add("vvvd0: d3 - d2", p.d3 - p.d2);
    add("vvvd0: r2*(2-d3/d2)*beta_upper - r3", p.r2 * (2.0 - p.d3 / p.d2) * d.beta_upper - p.r3);
    add("hb2: a - 1/(1-h)", p.a - 1.0 / (1.0 - p.h));
    add("hb2: (a(1-h)-1)/(a(2a-1)) - b2",
        (p.a * (1.0 - p.h) - 1.0) / (p.a * (2.0 * p.a - 1.0)) - p.b2);
    add("uur: r1*beta_lower - r2*(h+b2*(2a-1))",
        p.r1 * d.beta_lower - p.r2 * (p.h + p.b2 * (2.0 * p.a - 1.0)));
    add("uud: d1 - max(d2,d3)", p.d1 - std::max(p.d2, p.d3));
    add("uud: r1*beta_lower - r3", p.r1 * d.beta_lower - p.r3);
    add("uuud0: d1 - d3/2", p.d1 - p.d3 / 2.0);
    add("uuud0: -(d1-d2)", -std::fabs(p.d1 - p.d2));
    add("uuud0: d3 - d2", p.d3 - p.d2);
    add("uuud0: r1*(2-d3/d1)*beta_lower - r3",
        p.r1 * (2.0 - p.d3 / p.d1) * d.beta_lower - p.r3);
    add("uuud0 (beta_upper variant): r1*(2-d3/d1)*beta_upper - r3",
        p.r1 * (2.0 - p.d3 / p.d1) * d.beta_upper - p.r3);
    return m;
}

} // namespace tripwave
