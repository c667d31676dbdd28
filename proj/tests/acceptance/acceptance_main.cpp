// Acceptance suite: one pass/fail line per criterion. Anything that throws
// fails the criterion, every tolerance is pinned here, and heavy simulation
// runs are shared between related criteria (and re-executed byte-for-byte for
// the determinism criterion).

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tripwave/bvp.hpp"
#include "tripwave/conditions.hpp"
#include "tripwave/kinetics.hpp"
#include "tripwave/lyapunov.hpp"
#include "tripwave/pde.hpp"
#include "tripwave/rectangles.hpp"
#include "tripwave/stability.hpp"
#include "tripwave/ul_profiles.hpp"
#include "tripwave/ul_verify.hpp"

using namespace tripwave;

namespace {

Params ps_a() { return {0.5, 1.0, 0.5, 0.1, 1.0, 0.5, 0.5, 1.5, 3.0, 1.0, 0.02}; }
Params ps_a_prime() { return {1.0, 1.0, 1.5, 0.1, 1.0, 0.2, 0.5, 1.5, 3.0, 1.0, 0.02}; }
Params ps_b() { return {0.5, 1.0, 0.5, 0.01, 1.0, 0.05, 0.5, 1.1, 3.0, 1.0, 1.3}; }
Params ps_c() { return {1.0, 0.5, 0.5, 0.1, 0.001, 0.005, 0.5, 1.1, 3.0, 1.0, 1.3}; }
Params ps_c_prime() { return {1.0, 1.0, 1.5, 0.1, 0.001, 0.003, 0.5, 1.1, 3.0, 1.0, 1.3}; }

Params random_params(std::mt19937& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto logu = [&](double lo, double hi) { return lo * std::pow(hi / lo, u01(rng)); };
    Params p{};
    p.d1 = logu(0.1, 2.0);
    p.d2 = logu(0.1, 2.0);
    p.d3 = logu(0.1, 2.0);
    p.r1 = logu(0.01, 2.0);
    p.r2 = logu(0.01, 2.0);
    p.r3 = logu(0.01, 2.0);
    p.h = 0.05 + 0.9 * u01(rng);
    p.k = 1.05 + 1.95 * u01(rng);
    p.a = 1.1 + 3.9 * u01(rng);
    p.b1 = logu(0.05, 2.0);
    p.b2 = logu(0.05, 2.0);
    return p;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct SimProduct {
    pde::RunResult result;
    pde::Grid grid;
    std::string front_csv;
    std::string snapshot_csv;
};

SimProduct run_case(const Params& p, pde::ScenarioKind kind, double x_max, double dx,
                    double t_end, double sample_every, double level) {
    SimProduct sp;
    sp.grid = pde::make_grid(0.0, x_max, dx);
    pde::RunOptions opt;
    opt.t_end = t_end;
    opt.cfl_factor = 0.2;
    opt.sample_every = sample_every;
    opt.front_species = kind == pde::ScenarioKind::invade_elow ? 0 : 1;
    opt.front_level = level;
    sp.result = pde::run(sp.grid, p, {kind, 0.5, 5.0}, opt);
    std::ostringstream f, s;
    pde::write_front_csv(f, sp.result.front);
    pde::write_snapshot_csv(s, sp.result.terminal, sp.grid);
    sp.front_csv = f.str();
    sp.snapshot_csv = s.str();
    return sp;
}

// Simulation setups shared by criteria 8-11 and re-run by criterion 14.
SimProduct sim_psa() {
    DerivedQuantities d = derive(ps_a());
    return run_case(ps_a(), pde::ScenarioKind::invade_estar, 400.0, 0.2, 150.0, 0.5,
                    0.5 * d.v_lowstar);
}
SimProduct sim_psb() {
    DerivedQuantities d = derive(ps_b());
    return run_case(ps_b(), pde::ScenarioKind::invade_estar, 2900.0, 0.4, 4200.0, 5.0,
                    0.5 * (*d.Ec)[1]);
}
SimProduct sim_psc() {
    DerivedQuantities d = derive(ps_c());
    return run_case(ps_c(), pde::ScenarioKind::invade_elow, 5800.0, 0.5, 32000.0, 10.0,
                    0.5 * (*d.Ec)[0]);
}

std::optional<SimProduct> g_psa, g_psb, g_psc;

const SimProduct& psa_run() {
    if (!g_psa) g_psa = sim_psa();
    return *g_psa;
}
const SimProduct& psb_run() {
    if (!g_psb) g_psb = sim_psb();
    return *g_psb;
}
const SimProduct& psc_run() {
    if (!g_psc) g_psc = sim_psc();
    return *g_psc;
}

bool fields_bounded(const SimProduct& sp, const Params& p, std::string& msg) {
    double cap = std::max(1.0, 2.0 * p.a - 1.0) + 0.05;
    if (sp.result.min_value < -1e-10) {
        msg += " negativity " + fmt_g(sp.result.min_value) + ";";
        return false;
    }
    if (sp.result.max_value > cap) {
        msg += " exceeded bound " + fmt_g(sp.result.max_value) + " > " + fmt_g(cap) + ";";
        return false;
    }
    return true;
}

// Smallest translation-optimized violation of the sandwich
// lower(z - tau) <= phi(z) <= upper(z - tau) over the profile grid.
double sandwich_violation(const bvp::WaveProfile& wp, const ULConstruction& c, double tau) {
    double v = 0.0;
    for (int i = 0; i < wp.m(); ++i) {
        double z = wp.z(i) - tau;
        for (int comp = 0; comp < 3; ++comp) {
            double up = c.upper[comp].value(z);
            double lo = c.lower[comp].value(z);
            v = std::max(v, wp.phi(comp)[i] - up);
            v = std::max(v, lo - wp.phi(comp)[i]);
        }
    }
    return v;
}

double best_sandwich_violation(const bvp::WaveProfile& wp, const ULConstruction& c,
                               double* tau_best = nullptr) {
    double best_tau = 0.0, best = std::numeric_limits<double>::infinity();
    for (double tau = -10.0; tau <= 10.0 + 1e-12; tau += 0.05) {
        double v = sandwich_violation(wp, c, tau);
        if (v < best) {
            best = v;
            best_tau = tau;
        }
    }
    double lo = best_tau - 0.05, hi = best_tau + 0.05;
    for (int it = 0; it < 80; ++it) {
        double m1 = lo + 0.382 * (hi - lo), m2 = lo + 0.618 * (hi - lo);
        if (sandwich_violation(wp, c, m1) > sandwich_violation(wp, c, m2))
            lo = m1;
        else
            hi = m2;
    }
    double tau = 0.5 * (lo + hi);
    if (tau_best) *tau_best = tau;
    return sandwich_violation(wp, c, tau);
}

// ---------------------------------------------------------------- criteria

Outcome criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(20260808);
    double worst = 0.0;
    for (int it = 0; it < 1000; ++it) {
        Params p = random_params(rng);
        DerivedQuantities d = derive(p);
        worst = std::max(worst, std::fabs(d.u_star + p.b1 * d.w_star - 1.0));
        worst = std::max(worst, std::fabs(-1.0 + p.a * d.u_star - d.w_star));
        worst = std::max(worst, std::fabs(d.v_lowstar + p.b2 * d.w_lowstar - 1.0));
        worst = std::max(worst, std::fabs(-1.0 + p.a * d.v_lowstar - d.w_lowstar));
        double bu = (p.b1 * (p.a - p.h) - p.b2 * (p.a - 1) + (1 - p.h)) / (1 + p.a * p.b1);
        double bl = (-p.b1 * (p.a - 1) + p.b2 * (p.a - p.k) - (p.k - 1)) / (1 + p.a * p.b2);
        worst = std::max(worst, std::fabs(d.beta_upper - bu) / std::max(1.0, std::fabs(bu)));
        worst = std::max(worst, std::fabs(d.beta_lower - bl) / std::max(1.0, std::fabs(bl)));
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Outcome o;
    o.pass = worst <= 1e-12 && secs < 1.0;
    o.detail = "worst identity residual " + fmt_g(worst) + ", " + fmt_g(secs) + " s";
    return o;
}

Outcome criterion_2() {
    Outcome o;
    o.pass = true;
    for (double s : {2.0, 1.8, 2.2, 2.6}) {
        auto t0 = std::chrono::steady_clock::now();
        ULConstruction c = build_ul(ps_a(), s, ULCase::estar_super);
        VerificationReport rep = verify_ul(c, ps_a(), GridSpec{-60.0, 20.0, 10000, 1e-8},
                                           1e-10, 1e-6);
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        o.pass = o.pass && rep.pass && secs < 1.0;
        o.detail += "s=" + fmt_g(s) + (rep.pass ? " ok" : " FAIL") + " (tail " +
                    fmt_g(rep.tail_residual) + ", " + fmt_g(secs) + " s); ";
    }
    return o;
}

Outcome criterion_3() {
    Params p = ps_a_prime();
    DerivedQuantities d = derive(p);
    ULConstruction c = build_ul(p, *d.s_upper, ULCase::estar_critical);
    VerificationReport active = verify_ul(c, p, GridSpec{-80.0, 20.0, 10000, 1e-8}, 1e-10, 1e-6);
    VerificationReport span = verify_ul(c, p, default_grid(c), 1e-10, 1e-6);
    Outcome o;
    o.pass = active.pass && span.pass;
    o.detail = "s* = " + fmt_g(c.s) + ", active window " + (active.pass ? "ok" : "FAIL") +
               ", full span " + (span.pass ? "ok" : "FAIL");
    return o;
}

Outcome criterion_4() {
    Params pc = ps_c();
    DerivedQuantities dc = derive(pc);
    ULConstruction ce = build_ul(pc, 1.1 * *dc.s_lower, ULCase::elow_super);
    VerificationReport re = verify_ul(ce, pc, default_grid(ce), 1e-10, 1e-6);

    Params pcp = ps_c_prime();
    DerivedQuantities dcp = derive(pcp);
    ULConstruction cc = build_ul(pcp, *dcp.s_lower, ULCase::elow_critical);
    VerificationReport ra = verify_ul(
        cc, pcp, GridSpec{-2.0 / cc.lambda1 - 300.0, cc.rightmost_corner() + 20.0, 10000, 1e-8},
        1e-10, 1e-6);
    VerificationReport rs = verify_ul(cc, pcp, default_grid(cc), 1e-10, 1e-6);
    Outcome o;
    o.pass = re.pass && ra.pass && rs.pass;
    o.detail = "supercritical " + std::string(re.pass ? "ok" : "FAIL") + ", critical active " +
               (ra.pass ? "ok" : "FAIL") + ", critical span " + (rs.pass ? "ok" : "FAIL");
    return o;
}

Outcome criterion_5() {
    Params p = ps_a();
    Outcome o;
    o.pass = true;
    double worst_gap = 0.0;
    for (int i = 0; i <= 9; ++i) {
        double theta = 0.1 * i;
        RectangleCheck rc = rectangle_signs(p, theta, 0.03, 0.1);
        o.pass = o.pass && rc.all_signs;
        worst_gap = std::max(worst_gap, std::fabs(rc.alpha2 - rc.alpha2_expanded));
    }
    o.pass = o.pass && worst_gap <= 1e-12;
    o.detail = "signs on theta grid, alpha2 form agreement " + fmt_g(worst_gap);
    return o;
}

Outcome criterion_6() {
    Outcome o;
    o.pass = true;
    for (const Params& p : {ps_a(), ps_b(), ps_c()}) {
        for (double s : {0.5, 2.0}) {
            EigenCounts c = eigen_split(tw_jacobian(tw_rest_point({0, 0, 0}), p, s));
            bool ok = c.n_neg == 1 && c.n_pos == 5 && c.n_zero == 0;
            o.pass = o.pass && ok;
            if (!ok)
                o.detail += "counts (" + std::to_string(c.n_neg) + "," +
                            std::to_string(c.n_pos) + "," + std::to_string(c.n_zero) +
                            ") at s=" + fmt_g(s) + "; ";
        }
    }
    if (o.pass) o.detail = "(1,5,0) at the origin for all three sets, s in {0.5, 2}";
    return o;
}

Outcome criterion_7() {
    Params p = ps_b();
    DerivedQuantities d = derive(p);
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> unif(0.05, 1.5);
    double dt = default_kinetic_dt(p);
    double worst_uptick = 0.0, worst_dev = 0.0;
    for (int traj = 0; traj < 100; ++traj) {
        KineticState x{unif(rng), unif(rng), unif(rng)};
        double phi = lyapunov_phi(x, p);
        double t = 0.0;
        while (t < 5000.0 - 1e-9) {
            double sdt = std::min(dt, 5000.0 - t);
            x = kinetic_step(x, p, sdt);
            t += sdt;
            double phi_next = lyapunov_phi(x, p);
            worst_uptick = std::max(worst_uptick, phi_next - phi);
            phi = phi_next;
        }
        worst_dev = std::max({worst_dev, std::fabs(x.u - (*d.Ec)[0]),
                              std::fabs(x.v - (*d.Ec)[1]), std::fabs(x.w - (*d.Ec)[2])});
    }
    Outcome o;
    bool monotone = worst_uptick <= 1e-12;
    bool converged = worst_dev <= 1e-6;
    o.pass = monotone && converged;
    o.detail = "max phi increase/step " + fmt_g(worst_uptick) +
               (monotone ? " (ok)" : " (FAIL)") + ", max terminal deviation " +
               fmt_g(worst_dev) + (converged ? " (ok)" : " (FAIL: the slow relaxation rate "
               "~7.5e-4 at this state makes 1e-6 unreachable by t=5000; deviation ~1e-6 "
               "needs t of order 2e4)");
    return o;
}

Outcome criterion_8() {
    const SimProduct& sp = psa_run();
    DerivedQuantities d = derive(ps_a());
    pde::SpeedEstimate est = pde::estimate_speed(sp.result.front, 1, 0.5 * d.v_lowstar, 0.4);
    double target = *d.s_upper; // 1.720465...
    double gap = std::fabs(est.speed - target) / target;
    Outcome o;
    std::string bounds_msg;
    bool bounded = fields_bounded(sp, ps_a(), bounds_msg);
    o.pass = gap <= 0.10 && est.speed >= 0.95 * target && bounded;
    o.detail = "fitted " + fmt_g(est.speed) + " vs " + fmt_g(target) + " (gap " + fmt_g(gap) +
               ")" + bounds_msg;
    return o;
}

Outcome criterion_9() {
    const SimProduct& sp = psa_run();
    pde::TailReport rep = pde::tail_classify(sp.result.terminal, sp.grid, ps_a(), 10.0, 60.0,
                                             1e-2);
    const double target_v = 0.962264, target_w = 1.886792;
    double dev = std::max({std::fabs(rep.window_mean[0] - 0.0),
                           std::fabs(rep.window_mean[1] - target_v),
                           std::fabs(rep.window_mean[2] - target_w)});
    Outcome o;
    o.pass = rep.tag == pde::TailTag::elow && dev <= 1e-2;
    o.detail = std::string("tail ") + pde::to_string(rep.tag) + ", deviation " + fmt_g(dev) +
               " from (0, 0.962264, 1.886792)";
    return o;
}

Outcome criterion_10() {
    const SimProduct& sp = psb_run();
    DerivedQuantities d = derive(ps_b());
    pde::SpeedEstimate est = pde::estimate_speed(sp.result.front, 1, 0.5 * (*d.Ec)[1], 0.4);
    double gap = std::fabs(est.speed - 0.632456) / 0.632456;
    pde::TailReport rep = pde::tail_classify(sp.result.terminal, sp.grid, ps_b(), 5.0, 105.0,
                                             1e-2);
    double dev = std::max({std::fabs(rep.window_mean[0] - 0.237179),
                           std::fabs(rep.window_mean[1] - 0.256410),
                           std::fabs(rep.window_mean[2] - 0.480769)});
    Outcome o;
    std::string bounds_msg;
    bool bounded = fields_bounded(sp, ps_b(), bounds_msg);
    o.pass = gap <= 0.10 && rep.tag == pde::TailTag::ec && dev <= 1e-2 && bounded;
    o.detail = "speed " + fmt_g(est.speed) + " (gap " + fmt_g(gap) + "), tail " +
               pde::to_string(rep.tag) + " deviation " + fmt_g(dev) + bounds_msg;
    return o;
}

Outcome criterion_11() {
    const SimProduct& sp = psc_run();
    DerivedQuantities d = derive(ps_c());
    pde::SpeedEstimate est = pde::estimate_speed(sp.result.front, 0, 0.5 * (*d.Ec)[0], 0.4);
    double gap = std::fabs(est.speed - 0.173793) / 0.173793;
    pde::TailReport rep = pde::tail_classify(sp.result.terminal, sp.grid, ps_c(), 5.0, 105.0,
                                             1e-2);
    double dev = std::max({std::fabs(rep.window_mean[0] - 0.237179),
                           std::fabs(rep.window_mean[1] - 0.256410),
                           std::fabs(rep.window_mean[2] - 0.480769)});
    Outcome o;
    std::string bounds_msg;
    bool bounded = fields_bounded(sp, ps_c(), bounds_msg);
    o.pass = gap <= 0.15 && rep.tag == pde::TailTag::ec && dev <= 1e-2 && bounded;
    o.detail = "speed " + fmt_g(est.speed) + " (gap " + fmt_g(gap) + "), tail " +
               pde::to_string(rep.tag) + " deviation " + fmt_g(dev) + bounds_msg;
    return o;
}

Outcome criterion_12() {
    Params p = ps_a();
    DerivedQuantities d = derive(p);
    bvp::WaveProfile wp = bvp::solve_profile(p, 2.0, d.estar(), d.elow(), 150.0, 3001);
    double res = bvp::residual(wp, p).max_norm;
    ULConstruction c = build_ul(p, 2.0, ULCase::estar_super);
    double tau = 0.0;
    double viol = best_sandwich_violation(wp, c, &tau);

    bvp::WaveProfile wide = bvp::solve_profile(p, 2.0, d.estar(), d.elow(), 300.0, 6001);
    double drift = 0.0;
    for (int i = 1; i + 1 < wp.m(); ++i) {
        int j = static_cast<int>(std::lround((wp.z(i) - wide.z_min) / wide.dz));
        for (int comp = 0; comp < 3; ++comp)
            drift = std::max(drift, std::fabs(wp.phi(comp)[i] - wide.phi(comp)[j]));
    }
    Outcome o;
    o.pass = res <= 1e-8 && viol <= 1e-6 && drift < 1e-4;
    o.detail = "residual " + fmt_g(res) + ", sandwich violation " + fmt_g(viol) + " (tau " +
               fmt_g(tau) + "), domain-doubling drift " + fmt_g(drift);
    return o;
}

Outcome criterion_13() {
    Params p = ps_a();
    DerivedQuantities d = derive(p);
    double s_star = *d.s_upper;
    bvp::ContinuationResult cr =
        bvp::continue_in_speed(p, 2.5, 1.6, 45, d.estar(), d.elow(), 150.0, 3001);
    double gap = std::fabs(cr.last_good_speed - s_star) / s_star;
    bool solve_below_failed = false;
    std::string below_msg;
    try {
        bvp::solve_profile(p, 0.5 * s_star, d.estar(), d.elow(), 150.0, 3001);
        below_msg = "solve at 0.5 s* unexpectedly converged positive";
    } catch (const NewtonDivergence& e) {
        solve_below_failed = true;
        below_msg = "0.5 s*: divergence";
    } catch (const NonPositiveProfile& e) {
        solve_below_failed = true;
        below_msg = "0.5 s*: positivity violation";
    }
    Outcome o;
    o.pass = !cr.completed && gap <= 0.05 && solve_below_failed;
    o.detail = "last good speed " + fmt_g(cr.last_good_speed) + " vs s* " + fmt_g(s_star) +
               " (gap " + fmt_g(gap) + "); " + below_msg;
    return o;
}

Outcome criterion_14() {
    Outcome o;
    SimProduct a2 = sim_psa();
    SimProduct b2 = sim_psb();
    SimProduct c2 = sim_psc();
    bool same = a2.front_csv == psa_run().front_csv && a2.snapshot_csv == psa_run().snapshot_csv &&
                b2.front_csv == psb_run().front_csv && b2.snapshot_csv == psb_run().snapshot_csv &&
                c2.front_csv == psc_run().front_csv && c2.snapshot_csv == psc_run().snapshot_csv;
    o.pass = same;
    o.detail = same ? "re-runs of the three simulations are byte-identical"
                    : "re-run output differs";
    return o;
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> fn;
    };
    std::vector<Criterion> criteria = {
        {1, "closed-form equilibrium identities on random parameters", criterion_1},
        {2, "upper/lower certification, supercritical strong-alien pair", criterion_2},
        {3, "upper/lower certification, critical strong-alien pair", criterion_3},
        {4, "upper/lower certification, weak-alien pairs", criterion_4},
        {5, "contracting-box signs and alpha2 algebra", criterion_5},
        {6, "eigenvalue split (1,5,0) at the origin of the wave system", criterion_6},
        {7, "entropy decrease and kinetic convergence to the co-existence state", criterion_7},
        {8, "invasion speed of the strong alien", criterion_8},
        {9, "semi-co-existence stable tail", criterion_9},
        {10, "co-existence stable tail and speed", criterion_10},
        {11, "weak-alien invasion speed and tail", criterion_11},
        {12, "profile solve sandwiched by the analytic pair", criterion_12},
        {13, "minimal-speed boundary located by continuation", criterion_13},
        {14, "determinism of the simulation outputs", criterion_14},
    };
    int failures = 0;
    for (auto& c : criteria) {
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.name
                  << " -- " << o.detail << "\n"
                  << std::flush;
    }
    std::cout << (criteria.size() - failures) << "/" << criteria.size()
              << " criteria passed\n";
    return failures == 0 ? 0 : 1;
}
