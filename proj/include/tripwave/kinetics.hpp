#pragma once

#include <array>
#include <cmath>
#include <ostream>
#include <vector>

#include "tripwave/csv.hpp"
#include "tripwave/errors.hpp"
#include "tripwave/params.hpp"

namespace tripwave {

struct KineticState {
    double u, v, w;
};

/// Reaction terms of the diffusionless system:
///   u' = r1 u (1 - u - k v - b1 w)
///   v' = r2 v (1 - h u - v - b2 w)
///   w' = r3 w (-1 + a u + a v - w)
inline std::array<double, 3> kinetic_rhs(const KineticState& x, const Params& p) {
    return {
        p.r1 * x.u * (1.0 - x.u - p.k * x.v - p.b1 * x.w),
        p.r2 * x.v * (1.0 - p.h * x.u - x.v - p.b2 * x.w),
        p.r3 * x.w * (-1.0 + p.a * x.u + p.a * x.v - x.w),
    };
}

/// Exact partial derivatives of kinetic_rhs.
inline std::array<std::array<double, 3>, 3> kinetic_jacobian(const KineticState& x,
                                                             const Params& p) {
    return {{
        {p.r1 * (1.0 - 2.0 * x.u - p.k * x.v - p.b1 * x.w), -p.r1 * x.u * p.k,
         -p.r1 * x.u * p.b1},
        {-p.r2 * x.v * p.h, p.r2 * (1.0 - p.h * x.u - 2.0 * x.v - p.b2 * x.w),
         -p.r2 * x.v * p.b2},
        {p.r3 * x.w * p.a, p.r3 * x.w * p.a,
         p.r3 * (-1.0 + p.a * x.u + p.a * x.v - 2.0 * x.w)},
    }};
}

inline double default_kinetic_dt(const Params& p) { return 0.01 / p.max_growth_rate(); }

/// One classical 4-stage Runge-Kutta step.
inline KineticState kinetic_step(const KineticState& x, const Params& p, double dt) {
    auto axpy = [](const KineticState& y, double c, const std::array<double, 3>& f) {
        return KineticState{y.u + c * f[0], y.v + c * f[1], y.w + c * f[2]};
    };
    auto k1 = kinetic_rhs(x, p);
    auto k2 = kinetic_rhs(axpy(x, dt / 2.0, k1), p);
    auto k3 = kinetic_rhs(axpy(x, dt / 2.0, k2), p);
    auto k4 = kinetic_rhs(axpy(x, dt, k3), p);
    return {x.u + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            x.v + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
            x.w + dt / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])};
}

struct KineticSample {
    double t;
    KineticState x;
};

struct KineticTrajectory {
    std::vector<KineticSample> samples;
    KineticState terminal{};
};

/// Fixed-step RK4 trajectory on [0, t_end]; the last step is shortened to
/// land on t_end exactly. Samples are stored every `stride` steps plus the
/// terminal state. Aborts if any component leaves the admissible range.
inline KineticTrajectory integrate_kinetic(const KineticState& x0, const Params& p,
                                           double t_end, double dt = -1.0,
                                           int stride = 1) {
    if (dt <= 0.0) dt = default_kinetic_dt(p);
    if (t_end < 0.0) throw StepSizeError("t_end must be nonnegative");
    KineticTrajectory traj;
    KineticState x = x0;
    double t = 0.0;
    long step_count = 0;
    traj.samples.push_back({t, x});
    while (t < t_end - 1e-12 * std::max(1.0, t_end)) {
        double step_dt = std::min(dt, t_end - t);
        x = kinetic_step(x, p, step_dt);
        t += step_dt;
        ++step_count;
        if (!(std::isfinite(x.u) && std::isfinite(x.v) && std::isfinite(x.w)))
            throw StepSizeError("state became non-finite at t=" + fmt_g(t));
        if (x.u < -1e-10 || x.v < -1e-10 || x.w < -1e-10)
            throw StepSizeError("state became negative at t=" + fmt_g(t));
        if (stride > 0 && step_count % stride == 0) traj.samples.push_back({t, x});
    }
    if (traj.samples.empty() || traj.samples.back().t != t) traj.samples.push_back({t, x});
    traj.terminal = x;
    return traj;
}

inline void write_trajectory_csv(std::ostream& os, const KineticTrajectory& traj) {
    os << "t,u,v,w\n";
    for (const auto& s : traj.samples) {
        os << fmt_g(s.t) << ',' << fmt_g(s.x.u) << ',' << fmt_g(s.x.v) << ','
           << fmt_g(s.x.w) << '\n';
    }
}

} // namespace tripwave
