#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tripwave/csv.hpp"
#include "tripwave/derived.hpp"
#include "tripwave/errors.hpp"
#include "tripwave/params.hpp"

namespace tripwave::pde {

struct Grid {
    double x_min = 0.0, x_max = 0.0;
    int n = 0;
    double dx() const { return (x_max - x_min) / (n - 1); }
    double x(int i) const { return x_min + i * dx(); }
};

inline Grid make_grid(double x_min, double x_max, double dx_target) {
    if (!(x_max > x_min) || !(dx_target > 0.0)) throw DomainError("bad grid extents");
    int n = static_cast<int>(std::lround((x_max - x_min) / dx_target)) + 1;
    if (n < 3) throw DomainError("grid needs at least 3 nodes");
    return Grid{x_min, x_max, n};
}

struct FieldState {
    double t = 0.0;
    std::vector<double> u, v, w;
};

enum class ScenarioKind { invade_estar, invade_elow, custom };

/// invade_estar: background E^* with a compact bump of the strong prey v at
/// the left edge. invade_elow: background E_* with a bump of the weak prey u.
struct Scenario {
    ScenarioKind kind = ScenarioKind::invade_estar;
    double amplitude = 0.5;
    double width = 5.0;
};

inline Scenario scenario_from_name(const std::string& name) {
    if (name == "invade-estar") return {ScenarioKind::invade_estar};
    if (name == "invade-elow") return {ScenarioKind::invade_elow};
    if (name == "custom") return {ScenarioKind::custom};
    throw ConfigError("unknown scenario `" + name + "`");
}

inline FieldState init_state(const Grid& g, const Params& p, const Scenario& sc) {
    if (!(sc.amplitude >= 0.0) || !(sc.width > 0.0))
        throw DomainError("scenario needs amplitude >= 0 and width > 0");
    const DerivedQuantities d = derive(p);
    std::array<double, 3> bg{};
    int alien;
    switch (sc.kind) {
        case ScenarioKind::invade_estar:
            if (!(d.beta_upper > 0.0)) throw HypothesisViolated("beta_upper > 0");
            bg = d.estar();
            alien = 1;
            break;
        case ScenarioKind::invade_elow:
            if (!(d.beta_lower > 0.0)) throw HypothesisViolated("beta_lower > 0");
            bg = d.elow();
            alien = 0;
            break;
        default:
            throw DomainError("custom scenario takes caller-supplied initial data; use run_from");
    }
    FieldState st;
    st.t = 0.0;
    st.u.assign(g.n, bg[0]);
    st.v.assign(g.n, bg[1]);
    st.w.assign(g.n, bg[2]);
    std::vector<double>* fields[3] = {&st.u, &st.v, &st.w};
    for (int i = 0; i < g.n; ++i) {
        double r = (g.x(i) - g.x_min) / sc.width;
        (*fields[alien])[i] += sc.amplitude * std::exp(-r * r);
    }
    return st;
}

inline double cfl_dt(const Grid& g, const Params& p, double cfl_factor = 0.2) {
    return cfl_factor * g.dx() * g.dx() / p.max_diffusivity();
}

namespace detail {

// Semi-discrete right-hand side: centered Laplacian with mirrored ghost
// nodes (zero flux) plus the reaction terms.
inline void rhs(const Grid& g, const Params& p, const std::vector<double>& u,
                const std::vector<double>& v, const std::vector<double>& w,
                std::vector<double>& fu, std::vector<double>& fv, std::vector<double>& fw) {
    const int n = g.n;
    const double idx2 = 1.0 / (g.dx() * g.dx());
    for (int i = 0; i < n; ++i) {
        const int im = i == 0 ? 1 : i - 1;
        const int ip = i == n - 1 ? n - 2 : i + 1;
        const double lu = (u[im] - 2.0 * u[i] + u[ip]) * idx2;
        const double lv = (v[im] - 2.0 * v[i] + v[ip]) * idx2;
        const double lw = (w[im] - 2.0 * w[i] + w[ip]) * idx2;
        fu[i] = p.d1 * lu + p.r1 * u[i] * (1.0 - u[i] - p.k * v[i] - p.b1 * w[i]);
        fv[i] = p.d2 * lv + p.r2 * v[i] * (1.0 - p.h * u[i] - v[i] - p.b2 * w[i]);
        fw[i] = p.d3 * lw + p.r3 * w[i] * (-1.0 + p.a * u[i] + p.a * v[i] - w[i]);
    }
}

} // namespace detail

struct StepWorkspace {
    std::vector<double> su, sv, sw;          // staged state
    std::vector<double> k1u, k1v, k1w;       // accumulated increment
    std::vector<double> fu, fv, fw;          // stage rhs
    void resize(int n) {
        for (auto* a : {&su, &sv, &sw, &k1u, &k1v, &k1w, &fu, &fv, &fw}) a->assign(n, 0.0);
    }
};

/// One explicit 4-stage Runge-Kutta step, in place. Throws CFLViolation when
/// dt exceeds cfl_factor*dx^2/max(d) and BlowUp when any value leaves
/// +-10*max(1, 2a-1).
inline void step(FieldState& st, const Grid& g, const Params& p, double dt,
                 StepWorkspace& ws, double cfl_factor = 0.2) {
    if (dt > cfl_dt(g, p, cfl_factor) * (1.0 + 1e-12))
        throw CFLViolation("dt=" + fmt_g(dt) + " exceeds " + fmt_g(cfl_dt(g, p, cfl_factor)));
    const int n = g.n;
    if (static_cast<int>(ws.su.size()) != n) ws.resize(n);

    const double stage_c[4] = {0.0, 0.5, 0.5, 1.0};
    const double weight[4] = {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0};
    std::fill(ws.k1u.begin(), ws.k1u.end(), 0.0);
    std::fill(ws.k1v.begin(), ws.k1v.end(), 0.0);
    std::fill(ws.k1w.begin(), ws.k1w.end(), 0.0);
    // fu/fv/fw hold the previous stage's slope
    for (int s = 0; s < 4; ++s) {
        if (s == 0) {
            detail::rhs(g, p, st.u, st.v, st.w, ws.fu, ws.fv, ws.fw);
        } else {
            const double c = stage_c[s] * dt;
            for (int i = 0; i < n; ++i) {
                ws.su[i] = st.u[i] + c * ws.fu[i];
                ws.sv[i] = st.v[i] + c * ws.fv[i];
                ws.sw[i] = st.w[i] + c * ws.fw[i];
            }
            detail::rhs(g, p, ws.su, ws.sv, ws.sw, ws.fu, ws.fv, ws.fw);
        }
        const double wdt = weight[s] * dt;
        for (int i = 0; i < n; ++i) {
            ws.k1u[i] += wdt * ws.fu[i];
            ws.k1v[i] += wdt * ws.fv[i];
            ws.k1w[i] += wdt * ws.fw[i];
        }
    }
    const double cap = 10.0 * std::max(1.0, 2.0 * p.a - 1.0);
    for (int i = 0; i < n; ++i) {
        st.u[i] += ws.k1u[i];
        st.v[i] += ws.k1v[i];
        st.w[i] += ws.k1w[i];
        if (!(std::fabs(st.u[i]) <= cap && std::fabs(st.v[i]) <= cap &&
              std::fabs(st.w[i]) <= cap))
            throw BlowUp("at x=" + fmt_g(g.x(i)) + ", t=" + fmt_g(st.t + dt));
    }
    st.t += dt;
}

inline void step(FieldState& st, const Grid& g, const Params& p, double dt,
                 double cfl_factor = 0.2) {
    StepWorkspace ws;
    step(st, g, p, dt, ws, cfl_factor);
}

/// Rightmost crossing of `level` by the given species (0=u,1=v,2=w), by
/// linear interpolation; nullopt when the field never crosses.
inline std::optional<double> front_position(const FieldState& st, const Grid& g, int species,
                                            double level) {
    const std::vector<double>& f = species == 0 ? st.u : species == 1 ? st.v : st.w;
    for (int i = g.n - 2; i >= 0; --i) {
        const double a = f[i] - level, b = f[i + 1] - level;
        if (a == 0.0) return g.x(i);
        if (a * b < 0.0) return g.x(i) + g.dx() * a / (a - b);
    }
    return std::nullopt;
}

struct FrontSample {
    double t;
    double x;
};

struct RunOptions {
    double t_end = 100.0;
    double dt = 0.0; // <=0: use the CFL bound
    double cfl_factor = 0.2;
    double sample_every = 0.5;
    int front_species = 1;
    double front_level = 0.5;
    double right_guard_dx = 50.0; // front must end at least this many dx from x_max
    int snapshot_stride = 0;      // emit every k-th sample via the callback; 0 = none
    std::function<void(const FieldState&)> snapshot_sink;
};

struct RunResult {
    FieldState terminal;
    std::vector<FrontSample> front;
    double min_value = 0.0, max_value = 0.0;
    long n_steps = 0;
};

/// Deterministic fixed-step run from caller-supplied initial data with front
/// sampling every `sample_every` time units. Errors out if the front ends
/// within right_guard_dx grid spacings of the right boundary (a contaminated
/// speed measurement).
inline RunResult run_from(FieldState st, const Grid& g, const Params& p,
                          const RunOptions& opt) {
    StepWorkspace ws;
    RunResult out;
    double dt = opt.dt > 0.0 ? opt.dt : cfl_dt(g, p, opt.cfl_factor);
    out.min_value = std::numeric_limits<double>::infinity();
    out.max_value = -std::numeric_limits<double>::infinity();
    auto track_minmax = [&](const FieldState& s) {
        for (const auto* f : {&s.u, &s.v, &s.w}) {
            for (double x : *f) {
                out.min_value = std::min(out.min_value, x);
                out.max_value = std::max(out.max_value, x);
            }
        }
    };
    track_minmax(st);
    auto sample = [&](long sample_idx) {
        if (auto fx = front_position(st, g, opt.front_species, opt.front_level))
            out.front.push_back({st.t, *fx});
        if (opt.snapshot_stride > 0 && opt.snapshot_sink &&
            sample_idx % opt.snapshot_stride == 0)
            opt.snapshot_sink(st);
    };
    sample(0);
    double next_sample = opt.sample_every;
    long sample_idx = 1;
    const double t_tol = 1e-9 * std::max(1.0, opt.t_end);
    while (st.t < opt.t_end - t_tol) {
        double step_dt = std::min(dt, opt.t_end - st.t);
        step(st, g, p, step_dt, ws, opt.cfl_factor);
        ++out.n_steps;
        if (st.t >= opt.t_end - t_tol) st.t = opt.t_end; // absorb accumulation error
        track_minmax(st);
        if (st.t >= next_sample - t_tol || st.t >= opt.t_end - t_tol) {
            sample(sample_idx++);
            next_sample += opt.sample_every;
        }
    }
    if (!out.front.empty()) {
        double limit = g.x_max - opt.right_guard_dx * g.dx();
        if (out.front.back().x > limit)
            throw DomainError("front ended at x=" + fmt_g(out.front.back().x) +
                              ", within " + fmt_g(opt.right_guard_dx) +
                              " dx of the right boundary; enlarge the domain");
    }
    out.terminal = std::move(st);
    return out;
}

inline RunResult run(const Grid& g, const Params& p, const Scenario& sc,
                     const RunOptions& opt) {
    return run_from(init_state(g, p, sc), g, p, opt);
}

struct SpeedEstimate {
    int species = 0;
    double level = 0.0;
    double speed = 0.0;
    double residual = 0.0; // RMS deviation of the linear fit
    int n_used = 0;
    double t_start = 0.0;
};

/// Least-squares slope of x(t) after discarding the leading fit_start_frac
/// fraction of samples. Throws InsufficientData with fewer than 10 retained
/// points.
inline SpeedEstimate estimate_speed(const std::vector<FrontSample>& series, int species,
                                    double level, double fit_start_frac = 0.4) {
    size_t skip = static_cast<size_t>(fit_start_frac * series.size());
    if (series.size() < skip + 10)
        throw InsufficientData("need >= 10 front samples after the transient discard, have " +
                               std::to_string(series.size() > skip ? series.size() - skip : 0));
    double st = 0, sx = 0, stt = 0, stx = 0;
    size_t m = series.size() - skip;
    for (size_t i = skip; i < series.size(); ++i) {
        st += series[i].t;
        sx += series[i].x;
        stt += series[i].t * series[i].t;
        stx += series[i].t * series[i].x;
    }
    double denom = m * stt - st * st;
    if (denom == 0.0) throw InsufficientData("degenerate time samples");
    SpeedEstimate est;
    est.species = species;
    est.level = level;
    est.speed = (m * stx - st * sx) / denom;
    double icept = (sx - est.speed * st) / m;
    double ss = 0.0;
    for (size_t i = skip; i < series.size(); ++i) {
        double r = series[i].x - (icept + est.speed * series[i].t);
        ss += r * r;
    }
    est.residual = std::sqrt(ss / m);
    est.n_used = static_cast<int>(m);
    est.t_start = series[skip].t;
    return est;
}

enum class TailTag { estar, elow, ec, unresolved };

inline const char* to_string(TailTag t) {
    switch (t) {
        case TailTag::estar: return "estar";
        case TailTag::elow: return "elow";
        case TailTag::ec: return "ec";
        default: return "unresolved";
    }
}

struct TailReport {
    TailTag tag = TailTag::unresolved;
    double max_deviation = 0.0; // against the chosen target, per component
    std::array<double, 3> window_mean{};
};

/// Averages (u,v,w) over [x_lo, x_hi] and matches the mean against the
/// equilibria E^*, E_*, and (when present) Ec. Unresolved when no target is
/// within tol per component.
inline TailReport tail_classify(const FieldState& st, const Grid& g, const Params& p,
                                double x_lo, double x_hi, double tol = 1e-2) {
    if (!(x_lo >= g.x_min && x_hi <= g.x_max && x_lo < x_hi))
        throw DomainError("tail window must lie inside the domain");
    const DerivedQuantities d = derive(p);
    int i_lo = static_cast<int>(std::ceil((x_lo - g.x_min) / g.dx() - 1e-9));
    int i_hi = static_cast<int>(std::floor((x_hi - g.x_min) / g.dx() + 1e-9));
    if (i_hi < i_lo) throw DomainError("tail window contains no grid node");
    TailReport rep;
    double su = 0, sv = 0, sw = 0;
    for (int i = i_lo; i <= i_hi; ++i) {
        su += st.u[i];
        sv += st.v[i];
        sw += st.w[i];
    }
    double m = i_hi - i_lo + 1;
    rep.window_mean = {su / m, sv / m, sw / m};
    struct Cand {
        TailTag tag;
        std::array<double, 3> target;
    };
    std::vector<Cand> cands{{TailTag::estar, d.estar()}, {TailTag::elow, d.elow()}};
    if (d.Ec) cands.push_back({TailTag::ec, *d.Ec});
    double best = std::numeric_limits<double>::infinity();
    TailTag best_tag = TailTag::unresolved;
    for (const auto& cand : cands) {
        double dev = 0.0;
        for (int i = 0; i < 3; ++i)
            dev = std::max(dev, std::fabs(rep.window_mean[i] - cand.target[i]));
        if (dev < best) {
            best = dev;
            best_tag = cand.tag;
        }
    }
    rep.max_deviation = best;
    rep.tag = best <= tol ? best_tag : TailTag::unresolved;
    return rep;
}

inline void write_snapshot_csv(std::ostream& os, const FieldState& st, const Grid& g) {
    os << "x,u,v,w\n";
    for (int i = 0; i < g.n; ++i)
        os << fmt_g(g.x(i)) << ',' << fmt_g(st.u[i]) << ',' << fmt_g(st.v[i]) << ','
           << fmt_g(st.w[i]) << '\n';
}

inline std::string snapshot_filename(double t) { return "snap_t" + fmt_g(t) + ".csv"; }

inline void write_front_csv(std::ostream& os, const std::vector<FrontSample>& front) {
    os << "t,front_x\n";
    for (const auto& s : front) os << fmt_g(s.t) << ',' << fmt_g(s.x) << '\n';
}

} // namespace tripwave::pde
