#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tripwave/csv.hpp"
#include "tripwave/derived.hpp"
#include "tripwave/errors.hpp"
#include "tripwave/params.hpp"

namespace tripwave::bvp {

/// Discrete wave profile on a uniform grid z_min + i*dz, i = 0..m-1, moving
/// at speed s and connecting left_state (invaded, z -> -inf) to right_state
/// (invading, z -> +inf).
struct WaveProfile {
    double s = 0.0;
    double z_min = 0.0, dz = 0.0;
    std::vector<double> phi1, phi2, phi3;
    std::array<double, 3> left_state{}, right_state{};

    int m() const { return static_cast<int>(phi1.size()); }
    double z(int i) const { return z_min + i * dz; }
    double z_max() const { return z(m() - 1); }
    const std::vector<double>& phi(int c) const { return c == 0 ? phi1 : c == 1 ? phi2 : phi3; }
    std::vector<double>& phi(int c) { return c == 0 ? phi1 : c == 1 ? phi2 : phi3; }
};

struct ResidualReport {
    std::vector<double> res; // 3*m entries, node-major
    double max_norm = 0.0;
};

/// Centered second-order residual of the steady wave equations,
///   d_i phi'' - s phi' + reaction_i(phi) = 0,
/// at interior nodes; endpoint rows are the Dirichlet mismatches against
/// left_state / right_state.
inline ResidualReport residual(const WaveProfile& wp, const Params& p) {
    const int m = wp.m();
    ResidualReport rep;
    rep.res.assign(3 * m, 0.0);
    const double idz2 = 1.0 / (wp.dz * wp.dz);
    const double i2dz = 1.0 / (2.0 * wp.dz);
    auto react = [&p](double u, double v, double w, int c) {
        if (c == 0) return p.r1 * u * (1.0 - u - p.k * v - p.b1 * w);
        if (c == 1) return p.r2 * v * (1.0 - p.h * u - v - p.b2 * w);
        return p.r3 * w * (-1.0 + p.a * u + p.a * v - w);
    };
    const std::array<double, 3> dd{p.d1, p.d2, p.d3};
    for (int c = 0; c < 3; ++c) {
        const auto& f = wp.phi(c);
        rep.res[0 * 3 + c] = f[0] - wp.left_state[c];
        rep.res[(m - 1) * 3 + c] = f[m - 1] - wp.right_state[c];
        for (int i = 1; i + 1 < m; ++i) {
            double lap = (f[i - 1] - 2.0 * f[i] + f[i + 1]) * idz2;
            double drv = (f[i + 1] - f[i - 1]) * i2dz;
            rep.res[i * 3 + c] = dd[c] * lap - wp.s * drv +
                                 react(wp.phi1[i], wp.phi2[i], wp.phi3[i], c);
        }
    }
    for (double r : rep.res) rep.max_norm = std::max(rep.max_norm, std::fabs(r));
    return rep;
}

struct SolveOptions {
    double tol = 1e-8;
    int max_iter = 50;
    double pos_tol = 1e-10;   // interior components may not drop below -pos_tol
    int alien = -1;           // 0 or 1; -1 = the component vanishing at left_state
    bool check_positivity = true;
};

struct SolveStats {
    int iterations = 0;
    double final_residual = 0.0;
    std::vector<std::string> log; // one line per iteration
};

namespace detail {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

inline Vec3 solve3(Mat3 A, Vec3 b) {
    // Gaussian elimination with partial pivoting
    int perm[3] = {0, 1, 2};
    for (int c = 0; c < 2; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::fabs(A[r][c]) > std::fabs(A[piv][c])) piv = r;
        if (piv != c) {
            std::swap(A[c], A[piv]);
            std::swap(b[c], b[piv]);
            std::swap(perm[c], perm[piv]);
        }
        if (A[c][c] == 0.0) throw NewtonDivergence("singular 3x3 block");
        for (int r = c + 1; r < 3; ++r) {
            double f = A[r][c] / A[c][c];
            for (int j = c; j < 3; ++j) A[r][j] -= f * A[c][j];
            b[r] -= f * b[c];
        }
    }
    if (A[2][2] == 0.0) throw NewtonDivergence("singular 3x3 block");
    Vec3 x{};
    for (int r = 2; r >= 0; --r) {
        double s = b[r];
        for (int j = r + 1; j < 3; ++j) s -= A[r][j] * x[j];
        x[r] = s / A[r][r];
    }
    return x;
}

inline Mat3 mat_inv(const Mat3& A) {
    Mat3 inv{};
    for (int c = 0; c < 3; ++c) {
        Vec3 e{};
        e[c] = 1.0;
        Vec3 col = solve3(A, e);
        for (int r = 0; r < 3; ++r) inv[r][c] = col[r];
    }
    return inv;
}

inline Mat3 mat_mul(const Mat3& A, const Mat3& B) {
    Mat3 C{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += A[i][k] * B[k][j];
            C[i][j] = s;
        }
    return C;
}

inline Vec3 mat_vec(const Mat3& A, const Vec3& x) {
    Vec3 y{};
    for (int i = 0; i < 3; ++i) y[i] = A[i][0] * x[0] + A[i][1] * x[1] + A[i][2] * x[2];
    return y;
}

// Block-tridiagonal Thomas solve; A/B/C are sub/main/super diagonal blocks.
// B and R are overwritten.
inline void block_thomas(std::vector<Mat3>& A, std::vector<Mat3>& B, std::vector<Mat3>& C,
                         std::vector<Vec3>& R, std::vector<Vec3>& X) {
    const int m = static_cast<int>(B.size());
    for (int i = 1; i < m; ++i) {
        Mat3 mult = mat_mul(A[i], mat_inv(B[i - 1]));
        Mat3 corr = mat_mul(mult, C[i - 1]);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) B[i][r][c] -= corr[r][c];
        Vec3 rc = mat_vec(mult, R[i - 1]);
        for (int r = 0; r < 3; ++r) R[i][r] -= rc[r];
    }
    X.assign(m, Vec3{});
    X[m - 1] = solve3(B[m - 1], R[m - 1]);
    for (int i = m - 2; i >= 0; --i) {
        Vec3 rhs = R[i];
        Vec3 cx = mat_vec(C[i], X[i + 1]);
        for (int r = 0; r < 3; ++r) rhs[r] -= cx[r];
        X[i] = solve3(B[i], rhs);
    }
}

inline int detect_alien(const std::array<double, 3>& left) {
    if (left[0] == 0.0) return 0;
    if (left[1] == 0.0) return 1;
    throw DomainError("cannot identify the alien species: invaded state has no zero prey");
}

// Decay rate of the alien component at the invaded state. Below the minimal
// speed the roots are complex; the real part is returned so a (failing)
// solve can still be attempted.
inline double alien_decay_rate(const Params& p, const DerivedQuantities& d, int alien,
                               double s) {
    double diff = alien == 0 ? p.d1 : p.d2;
    double growth = alien == 0 ? p.r1 * d.beta_lower : p.r2 * d.beta_upper;
    if (!(growth > 0.0))
        throw HypothesisViolated("alien prey must have positive growth at the invaded state");
    double disc = s * s - 4.0 * diff * growth;
    if (disc < 0.0) return s / (2.0 * diff);
    return (s - std::sqrt(disc)) / (2.0 * diff);
}

// Slow root of the centered-difference dispersion relation
//   d * 2(cosh(nu h)-1)/h^2 - s sinh(nu h)/h + growth = 0.
// Anchoring the tail with this rate (rather than its continuum limit) keeps
// the solved translate independent of the truncation length.
inline double discrete_decay_rate(const Params& p, const DerivedQuantities& d, int alien,
                                  double s, double h) {
    double nu = alien_decay_rate(p, d, alien, s);
    double diff = alien == 0 ? p.d1 : p.d2;
    double growth = alien == 0 ? p.r1 * d.beta_lower : p.r2 * d.beta_upper;
    if (s * s - 4.0 * diff * growth < 0.0) return nu; // failure regime, rate only nominal
    for (int it = 0; it < 50; ++it) {
        double ch = std::cosh(nu * h), sh = std::sinh(nu * h);
        double g = diff * 2.0 * (ch - 1.0) / (h * h) - s * sh / h + growth;
        double dg = diff * 2.0 * sh / h - s * ch;
        double step = g / dg;
        nu -= step;
        if (std::fabs(step) <= 1e-14 * std::max(1.0, std::fabs(nu))) break;
    }
    return nu;
}

} // namespace detail

/// Exponential-ramp initial guess with the alien's slow decay rate, placed so
/// the ramp reaches the alien mid-level at z = 0.
inline WaveProfile initial_guess(double s, double z_min, double dz, int m,
                                 const std::array<double, 3>& left,
                                 const std::array<double, 3>& right, int alien,
                                 double lambda) {
    WaveProfile wp;
    wp.s = s;
    wp.z_min = z_min;
    wp.dz = dz;
    wp.left_state = left;
    wp.right_state = right;
    wp.phi1.resize(m);
    wp.phi2.resize(m);
    wp.phi3.resize(m);
    const double mid = 0.5 * (left[alien] + right[alien]);
    for (int i = 0; i < m; ++i) {
        double ramp = std::min(1.0, (mid / std::max(right[alien], 1e-300)) *
                                        std::exp(lambda * wp.z(i)));
        for (int c = 0; c < 3; ++c)
            wp.phi(c)[i] = left[c] + (right[c] - left[c]) * ramp;
        wp.phi(alien)[i] = std::min(mid * std::exp(lambda * wp.z(i)), right[alien]);
    }
    return wp;
}

/// Damped Newton solve of the truncated wave problem on [z_min, z_min +
/// (m-1) dz]. All components are pinned to the equilibria at both ends,
/// except that the alien component's left value is anchored to its slow-tail
/// amplitude mid*e^{lambda1*z_min}; that anchor both preserves the correct
/// e^{lambda1 z} tail (a zero value would force the steep-tail branch) and
/// fixes the translate, so no interior phase equation is needed and the
/// converged profile satisfies the plain Dirichlet residual to well below
/// tol. Throws NewtonDivergence or NonPositiveProfile.
inline WaveProfile solve_profile(const Params& p, double s,
                                 const std::array<double, 3>& left,
                                 const std::array<double, 3>& right, double half_length = 150.0,
                                 int m = 3001, const WaveProfile* init = nullptr,
                                 const SolveOptions& opt = {}, SolveStats* stats = nullptr) {
    validate(p);
    if (m < 5) throw DomainError("need at least 5 nodes");
    const DerivedQuantities d = derive(p);
    const int alien = opt.alien >= 0 ? opt.alien : detail::detect_alien(left);
    const double z_min = -half_length;
    const double dz = 2.0 * half_length / (m - 1);
    const double lambda = detail::discrete_decay_rate(p, d, alien, s, dz);
    if (lambda * half_length > 600.0)
        throw DomainError("domain too long for the tail anchor (amplitude underflows)");

    const double mid = 0.5 * (left[alien] + right[alien]);
    std::array<double, 3> left_anchored = left;
    left_anchored[alien] = mid * std::exp(-lambda * half_length);

    WaveProfile wp;
    if (init) {
        wp = *init;
        if (wp.m() != m || wp.dz != dz || wp.z_min != z_min) {
            // resample the seed onto this grid
            WaveProfile rs;
            rs.z_min = z_min;
            rs.dz = dz;
            rs.phi1.resize(m);
            rs.phi2.resize(m);
            rs.phi3.resize(m);
            for (int i = 0; i < m; ++i) {
                double z = z_min + i * dz;
                double pos = (z - init->z_min) / init->dz;
                int i0 = static_cast<int>(std::floor(pos));
                for (int c = 0; c < 3; ++c) {
                    if (i0 < 0)
                        rs.phi(c)[i] = init->phi(c).front();
                    else if (i0 + 1 >= init->m())
                        rs.phi(c)[i] = init->phi(c).back();
                    else {
                        double f = pos - i0;
                        rs.phi(c)[i] =
                            (1.0 - f) * init->phi(c)[i0] + f * init->phi(c)[i0 + 1];
                    }
                }
            }
            wp = rs;
        }
    } else {
        wp = initial_guess(s, z_min, dz, m, left, right, alien, lambda);
    }
    wp.s = s;
    wp.z_min = z_min;
    wp.dz = dz;
    wp.left_state = left;
    wp.right_state = right;
    for (int c = 0; c < 3; ++c) {
        wp.phi(c)[0] = left_anchored[c];
        wp.phi(c)[m - 1] = right[c];
    }

    const std::array<double, 3> dd{p.d1, p.d2, p.d3};
    const double idz2 = 1.0 / (dz * dz);
    const double i2dz = 1.0 / (2.0 * dz);

    auto eval_F = [&](const WaveProfile& y, std::vector<detail::Vec3>& F) {
        F.assign(m, detail::Vec3{});
        for (int c = 0; c < 3; ++c) {
            F[0][c] = y.phi(c)[0] - left_anchored[c];
            F[m - 1][c] = y.phi(c)[m - 1] - right[c];
        }
        for (int i = 1; i + 1 < m; ++i) {
            double u = y.phi1[i], v = y.phi2[i], w = y.phi3[i];
            double ru = p.r1 * u * (1.0 - u - p.k * v - p.b1 * w);
            double rv = p.r2 * v * (1.0 - p.h * u - v - p.b2 * w);
            double rw = p.r3 * w * (-1.0 + p.a * u + p.a * v - w);
            for (int c = 0; c < 3; ++c) {
                const auto& f = y.phi(c);
                double lap = (f[i - 1] - 2.0 * f[i] + f[i + 1]) * idz2;
                double drv = (f[i + 1] - f[i - 1]) * i2dz;
                F[i][c] = dd[c] * lap - s * drv + (c == 0 ? ru : c == 1 ? rv : rw);
            }
        }
    };
    auto max_norm = [](const std::vector<detail::Vec3>& F) {
        double n = 0.0;
        for (const auto& b : F)
            for (double x : b) n = std::max(n, std::fabs(x));
        return n;
    };

    std::vector<detail::Vec3> F, Ftrial, dX;
    std::vector<detail::Mat3> A(m), B(m), C(m);
    eval_F(wp, F);
    double nrm = max_norm(F);
    int it = 0;
    for (; it < opt.max_iter && nrm > opt.tol; ++it) {
        for (int i = 0; i < m; ++i) {
            A[i] = detail::Mat3{};
            B[i] = detail::Mat3{};
            C[i] = detail::Mat3{};
        }
        for (int c = 0; c < 3; ++c) {
            B[0][c][c] = 1.0;
            B[m - 1][c][c] = 1.0;
        }
        for (int i = 1; i + 1 < m; ++i) {
            double u = wp.phi1[i], v = wp.phi2[i], w = wp.phi3[i];
            B[i] = detail::Mat3{{{p.r1 * (1.0 - 2.0 * u - p.k * v - p.b1 * w),
                                  -p.r1 * u * p.k, -p.r1 * u * p.b1},
                                 {-p.r2 * v * p.h,
                                  p.r2 * (1.0 - p.h * u - 2.0 * v - p.b2 * w),
                                  -p.r2 * v * p.b2},
                                 {p.r3 * w * p.a, p.r3 * w * p.a,
                                  p.r3 * (-1.0 + p.a * u + p.a * v - 2.0 * w)}}};
            for (int c = 0; c < 3; ++c) {
                B[i][c][c] += -2.0 * dd[c] * idz2;
                A[i][c][c] = dd[c] * idz2 + s * i2dz;
                C[i][c][c] = dd[c] * idz2 - s * i2dz;
            }
        }
        std::vector<detail::Vec3> R(m);
        for (int i = 0; i < m; ++i)
            for (int c = 0; c < 3; ++c) R[i][c] = -F[i][c];
        detail::block_thomas(A, B, C, R, dX);

        double alpha = 1.0;
        bool accepted = false;
        WaveProfile trial = wp;
        for (int ls = 0; ls < 40; ++ls) {
            for (int i = 0; i < m; ++i)
                for (int c = 0; c < 3; ++c) trial.phi(c)[i] = wp.phi(c)[i] + alpha * dX[i][c];
            eval_F(trial, Ftrial);
            double tn = max_norm(Ftrial);
            if (std::isfinite(tn) && tn <= (1.0 - 1e-4 * alpha) * nrm) {
                wp = trial;
                F = Ftrial;
                nrm = tn;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (stats)
            stats->log.push_back("iter " + std::to_string(it) + "  step " + fmt_g(alpha) +
                                 "  residual " + fmt_g(nrm));
        if (!accepted) throw NewtonDivergence("line search failed at residual " + fmt_g(nrm));
    }
    if (nrm > opt.tol)
        throw NewtonDivergence("no convergence after " + std::to_string(opt.max_iter) +
                               " iterations (residual " + fmt_g(nrm) + ")");
    if (stats) {
        stats->iterations = it;
        stats->final_residual = nrm;
    }
    if (opt.check_positivity) {
        for (int c = 0; c < 3; ++c)
            for (int i = 1; i + 1 < m; ++i)
                if (wp.phi(c)[i] < -opt.pos_tol)
                    throw NonPositiveProfile("component " + std::to_string(c + 1) + " at z=" +
                                             fmt_g(wp.z(i)) + " is " + fmt_g(wp.phi(c)[i]));
    }
    return wp;
}

struct ContinuationResult {
    std::vector<double> speeds;        // speeds solved successfully
    std::vector<WaveProfile> profiles; // matching profiles
    double last_good_speed = std::numeric_limits<double>::quiet_NaN();
    bool completed = false; // reached s_to without failure
    std::string stop_reason;
};

/// Warm-started sweep of solve_profile over n_steps speeds from s_from to
/// s_to (inclusive). Stops at the first failure and reports the last speed
/// that solved.
inline ContinuationResult continue_in_speed(const Params& p, double s_from, double s_to,
                                            int n_steps, const std::array<double, 3>& left,
                                            const std::array<double, 3>& right,
                                            double half_length = 150.0, int m = 3001,
                                            const WaveProfile* seed = nullptr,
                                            const SolveOptions& opt = {}) {
    if (n_steps < 0) throw DomainError("n_steps must be >= 0");
    ContinuationResult out;
    const WaveProfile* prev = seed;
    for (int i = 0; i <= n_steps; ++i) {
        double s = n_steps == 0 ? s_from
                                : s_from + (s_to - s_from) * static_cast<double>(i) / n_steps;
        try {
            WaveProfile wp = solve_profile(p, s, left, right, half_length, m, prev, opt);
            out.speeds.push_back(s);
            out.profiles.push_back(std::move(wp));
            out.last_good_speed = s;
            prev = &out.profiles.back();
        } catch (const Error& e) {
            out.stop_reason = e.what();
            return out;
        }
    }
    out.completed = true;
    return out;
}

/// Seeds a wave profile from a simulated field: the snapshot is recentered on
/// the measured front position and resampled onto the profile grid (the
/// simulation moves the pattern at +s in x, so z = x - front_x up to
/// translation).
inline WaveProfile profile_from_field(const std::vector<double>& xs,
                                      const std::array<const std::vector<double>*, 3>& fields,
                                      double front_x, double s, double z_min, double dz, int m,
                                      const std::array<double, 3>& left,
                                      const std::array<double, 3>& right) {
    WaveProfile wp;
    wp.s = s;
    wp.z_min = z_min;
    wp.dz = dz;
    wp.left_state = left;
    wp.right_state = right;
    wp.phi1.resize(m);
    wp.phi2.resize(m);
    wp.phi3.resize(m);
    const size_t n = xs.size();
    for (int i = 0; i < m; ++i) {
        // the simulated front moves right, so the invaded state (z -> -inf)
        // lies ahead of it: x = front_x - z
        double x = front_x - (z_min + i * dz);
        for (int c = 0; c < 3; ++c) {
            const auto& f = *fields[c];
            if (x <= xs.front())
                wp.phi(c)[i] = f.front();
            else if (x >= xs.back())
                wp.phi(c)[i] = f.back();
            else {
                double pos = (x - xs.front()) / (xs[1] - xs[0]);
                size_t i0 = static_cast<size_t>(pos);
                if (i0 + 1 >= n) i0 = n - 2;
                double frac = pos - i0;
                wp.phi(c)[i] = (1.0 - frac) * f[i0] + frac * f[i0 + 1];
            }
        }
    }
    return wp;
}

inline void write_profile_csv(std::ostream& os, const WaveProfile& wp) {
    os << "z,phi1,phi2,phi3\n";
    for (int i = 0; i < wp.m(); ++i)
        os << fmt_g(wp.z(i)) << ',' << fmt_g(wp.phi1[i]) << ',' << fmt_g(wp.phi2[i]) << ','
           << fmt_g(wp.phi3[i]) << '\n';
}

} // namespace tripwave::bvp
