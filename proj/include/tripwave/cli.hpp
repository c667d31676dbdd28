#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tripwave/bvp.hpp"
#include "tripwave/conditions.hpp"
#include "tripwave/csv.hpp"
#include "tripwave/kinetics.hpp"
#include "tripwave/lyapunov.hpp"
#include "tripwave/pde.hpp"
#include "tripwave/rectangles.hpp"
#include "tripwave/stability.hpp"
#include "tripwave/sweep.hpp"
#include "tripwave/ul_profiles.hpp"
#include "tripwave/ul_verify.hpp"

namespace tripwave::cli {

// Exit codes: 0 pass/success, 1 verification failure, hypothesis violation or
// solver failure, 2 usage/config error.

namespace detail {

inline ULCase parse_case(const std::string& name) {
    if (name == "estar-super") return ULCase::estar_super;
    if (name == "estar-crit" || name == "estar-critical") return ULCase::estar_critical;
    if (name == "elow-super") return ULCase::elow_super;
    if (name == "elow-crit" || name == "elow-critical") return ULCase::elow_critical;
    throw ConfigError("unknown case `" + name +
                      "` (estar-super, estar-crit, elow-super, elow-crit)");
}

inline std::array<double, 3> parse_state(const std::string& name, const DerivedQuantities& d) {
    if (name == "estar") return d.estar();
    if (name == "elow") return d.elow();
    if (name == "ec") {
        if (!d.Ec) throw ConfigError("co-existence state does not exist for these parameters");
        return *d.Ec;
    }
    throw ConfigError("unknown state `" + name + "` (estar, elow, ec)");
}

struct SimSetup {
    pde::Grid grid;
    pde::Scenario scenario;
    pde::RunOptions opt;
    int alien = 1;
    std::array<double, 3> expected_tail{};
};

// Simulation setup from config keys (scenario, amplitude, width, x_min,
// x_max, dx, cfl_factor, t_end, sample_every, level_frac, fit_start_frac).
inline SimSetup sim_setup(const Config& cfg, const Params& p) {
    SimSetup s;
    s.scenario = pde::scenario_from_name(cfg.get_string_or("scenario", "invade-estar"));
    s.scenario.amplitude = cfg.get_number_or("amplitude", 0.5);
    s.scenario.width = cfg.get_number_or("width", 5.0);
    s.grid = pde::make_grid(cfg.get_number_or("x_min", 0.0), cfg.get_number_or("x_max", 400.0),
                            cfg.get_number_or("dx", 0.2));
    s.opt.cfl_factor = cfg.get_number_or("cfl_factor", 0.2);
    s.opt.t_end = cfg.get_number_or("t_end", 150.0);
    s.opt.sample_every = cfg.get_number_or("sample_every", 0.5);
    const DerivedQuantities d = derive(p);
    const ConditionReport cr = check_conditions(p);
    if (s.scenario.kind == pde::ScenarioKind::invade_elow) {
        s.alien = 0;
        s.expected_tail = (cr.thm_cs2_applicable && d.Ec) ? *d.Ec : d.estar();
    } else {
        s.alien = 1;
        s.expected_tail = (cr.sc1_tail == Sc1Tail::coexist && d.Ec) ? *d.Ec : d.elow();
    }
    s.opt.front_species = s.alien;
    s.opt.front_level = cfg.get_number_or("level_frac", 0.5) * s.expected_tail[s.alien];
    return s;
}

inline double fit_start_frac(const Config& cfg) {
    return cfg.get_number_or("fit_start_frac", 0.4);
}

inline void headline(std::ostream& out, double v) { out << "headline " << fmt_g(v) << "\n"; }

inline void print_derived(std::ostream& out, const DerivedQuantities& d) {
    out << "u_star      = " << fmt_g(d.u_star) << "\n";
    out << "w_star      = " << fmt_g(d.w_star) << "\n";
    out << "v_lowstar   = " << fmt_g(d.v_lowstar) << "\n";
    out << "w_lowstar   = " << fmt_g(d.w_lowstar) << "\n";
    out << "beta_upper  = " << fmt_g(d.beta_upper) << "\n";
    out << "beta_lower  = " << fmt_g(d.beta_lower) << "\n";
    out << "Delta       = " << fmt_g(d.Delta) << "\n";
    out << "Delta_u     = " << fmt_g(d.Delta_u) << "\n";
    out << "Delta_v     = " << fmt_g(d.Delta_v) << "\n";
    out << "Delta_w     = " << fmt_g(d.Delta_w) << "\n";
    out << "gamma2      = " << fmt_g(d.gamma2) << "\n";
    if (d.Ec)
        out << "Ec          = (" << fmt_g((*d.Ec)[0]) << ", " << fmt_g((*d.Ec)[1]) << ", "
            << fmt_g((*d.Ec)[2]) << ")\n";
    else
        out << "Ec          = absent\n";
    out << "s_upper     = " << (d.s_upper ? fmt_g(*d.s_upper) : "undefined") << "\n";
    out << "s_lower     = " << (d.s_lower ? fmt_g(*d.s_lower) : "undefined") << "\n";
}

inline void print_conditions(std::ostream& out, const ConditionReport& c) {
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    out << "cond_1_2    = " << yn(c.cond_1_2) << "\n";
    out << "positive    = " << yn(c.positive) << "\n";
    out << "positive2   = " << yn(c.positive2) << "\n";
    out << "co_ex       = " << yn(c.co_ex) << "\n";
    out << "ode_lyapu   = " << yn(c.ode_lyapu) << "\n";
    out << "vr          = " << yn(c.vr) << "\n";
    out << "vd          = " << yn(c.vd) << "\n";
    out << "vvvd0       = " << yn(c.vvvd0) << "\n";
    out << "hb2         = " << yn(c.hb2) << "\n";
    out << "uur         = " << yn(c.uur) << "\n";
    out << "uud         = " << yn(c.uud) << "\n";
    out << "uuud0       = " << yn(c.uuud0) << "\n";
    out << "thm_sc1_applicable = " << yn(c.thm_sc1_applicable) << " (tail "
        << to_string(c.sc1_tail) << ")\n";
    out << "thm_cs2_applicable = " << yn(c.thm_cs2_applicable) << "\n";
    out << "minimal_speed_defined = " << yn(c.minimal_speed_defined) << "\n";
    for (const auto& n : c.notes) out << "note: " << n << "\n";
}

inline int dispatch_impl(const std::vector<std::string>& args, std::ostream& out,
                         std::ostream& err, bool allow_sweep);

// Runs a subcommand for one sweep point, output captured to a log file.
inline PointResult sweep_point(const SweepSpec& spec, int index,
                               const std::vector<std::pair<std::string, double>>& kv) {
    namespace fs = std::filesystem;
    Config cfg = Config::parse_file(spec.base_config);
    for (const auto& [key, value] : kv) cfg.set(key, fmt_g(value));
    char tag[16];
    std::snprintf(tag, sizeof(tag), "%05d", index);
    fs::path dir = fs::path(spec.out_dir) / (std::string("point_") + tag);
    fs::create_directories(dir);
    fs::path cfg_path = dir / "point.cfg";
    {
        std::ofstream f(cfg_path);
        f << cfg.to_text();
    }
    std::vector<std::string> argv = spec.command;
    argv.push_back("--config");
    argv.push_back(cfg_path.string());
    std::ostringstream log;
    int code = dispatch_impl(argv, log, log, /*allow_sweep=*/false);
    fs::path log_path = dir / "point.log";
    {
        std::ofstream f(log_path);
        f << log.str();
    }
    PointResult pr;
    pr.outcome = code == 0 ? "pass" : code == 1 ? "fail" : "error";
    pr.path = log_path.string();
    // the subcommand's last `headline <x>` line carries the scalar of record
    std::istringstream scan(log.str());
    std::string line;
    while (std::getline(scan, line)) {
        if (line.rfind("headline ", 0) == 0) pr.headline = std::atof(line.c_str() + 9);
    }
    return pr;
}

inline int dispatch_impl(const std::vector<std::string>& args, std::ostream& out,
                         std::ostream& err, bool allow_sweep) {
    CLI::App app{"tripwave: traveling waves of a two-prey one-predator reaction-diffusion system"};
    app.require_subcommand(1);

    std::string config_path, case_name = "estar-super", out_path, scenario_override;
    std::string left_name = "estar", right_name = "elow", init_name = "ramp";
    std::string sweep_command, sweep_out;
    std::vector<std::string> axis_specs;
    double s_arg = -1.0, tol = 1e-10, tail_tol = 1e-6;
    double z_lo = 0.0, z_hi = 0.0;
    int n_points = 10000;
    double delta3 = -1.0, eps = -1.0, theta_max = 0.9;
    int theta_steps = 10;
    double pu = 1.0, pv = 1.0, pw = 1.0, t_end_arg = -1.0;
    int n_random = 0;
    unsigned seed = 12345;
    double half_length = 150.0;
    int m_nodes = 3001;
    double s_from = 0.0, s_to = 0.0;
    int n_steps = 20;
    double speed_tol = 0.10;
    int jobs = 0;

    auto* analyze = app.add_subcommand("analyze", "derived quantities and condition report");
    analyze->add_option("--config", config_path)->required();
    analyze->add_option("--s", s_arg, "speed used for the regime-dependent conditions");

    auto* verify = app.add_subcommand("verify-ul", "build and verify an upper/lower pair");
    verify->add_option("--config", config_path)->required();
    verify->add_option("--case", case_name, "estar-super|estar-crit|elow-super|elow-crit");
    verify->add_option("--s", s_arg, "wave speed (defaults to the critical speed)");
    verify->add_option("--z-lo", z_lo);
    verify->add_option("--z-hi", z_hi);
    verify->add_option("--n", n_points);
    verify->add_option("--tol", tol);
    verify->add_option("--tail-tol", tail_tol);
    verify->add_option("--out", out_path, "per-point CSV");

    auto* rect = app.add_subcommand("rect", "contracting-box sign check over a theta grid");
    rect->add_option("--config", config_path)->required();
    rect->add_option("--delta3", delta3);
    rect->add_option("--eps", eps);
    rect->add_option("--theta-steps", theta_steps);
    rect->add_option("--theta-max", theta_max);

    auto* lyap = app.add_subcommand("lyapunov", "entropy functional and its decrease");
    lyap->add_option("--config", config_path)->required();
    lyap->add_option("--u", pu);
    lyap->add_option("--v", pv);
    lyap->add_option("--w", pw);
    lyap->add_option("--random", n_random, "check decrease along N random trajectories");
    lyap->add_option("--t-end", t_end_arg);
    lyap->add_option("--seed", seed);
    std::string traj_path;
    lyap->add_option("--trajectory", traj_path,
                     "integrate from (--u,--v,--w) and write a t,u,v,w CSV");

    auto* simulate = app.add_subcommand("simulate", "method-of-lines run with snapshots");
    simulate->add_option("--config", config_path)->required();
    simulate->add_option("--scenario", scenario_override);
    simulate->add_option("--out", out_path, "output directory");

    auto* speed = app.add_subcommand("speed", "fit the invasion front speed");
    speed->add_option("--config", config_path)->required();
    speed->add_option("--scenario", scenario_override);
    speed->add_option("--tol", speed_tol, "relative gap to the linear speed for exit 0");
    speed->add_option("--out", out_path, "output directory");

    auto* bvp_cmd = app.add_subcommand("bvp", "solve the wave profile two-point problem");
    bvp_cmd->add_option("--config", config_path)->required();
    bvp_cmd->add_option("--s", s_arg)->required();
    bvp_cmd->add_option("--left", left_name);
    bvp_cmd->add_option("--right", right_name);
    bvp_cmd->add_option("--half-length", half_length);
    bvp_cmd->add_option("--m", m_nodes);
    bvp_cmd->add_option("--init", init_name, "ramp (alias tanh) | from-pde");
    bvp_cmd->add_option("--out", out_path, "profile CSV");

    auto* cont = app.add_subcommand("continue", "continuation of the profile solve in speed");
    cont->add_option("--config", config_path)->required();
    cont->add_option("--s-from", s_from)->required();
    cont->add_option("--s-to", s_to)->required();
    cont->add_option("--n-steps", n_steps);
    cont->add_option("--left", left_name);
    cont->add_option("--right", right_name);
    cont->add_option("--half-length", half_length);
    cont->add_option("--m", m_nodes);

    auto* sweep_cmd = app.add_subcommand("sweep", "run a subcommand over a parameter grid");
    sweep_cmd->add_option("--config", config_path)->required();
    sweep_cmd->add_option("--axis", axis_specs, "key:min:max:n:lin|log (repeatable)")
        ->required();
    sweep_cmd->add_option("--command", sweep_command, "subcommand line applied per point")
        ->required();
    sweep_cmd->add_option("--out", sweep_out)->required();
    sweep_cmd->add_option("--jobs", jobs);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(analyze)) {
            Params p = load_params(config_path);
            DerivedQuantities d = derive(p);
            ConditionReport c = check_conditions(
                p, s_arg > 0 ? std::optional<double>(s_arg) : std::nullopt);
            print_derived(out, d);
            print_conditions(out, c);
            out << "margins:\n";
            for (const auto& mgn : condition_margins(p))
                out << "  " << mgn.name << " : " << fmt_g(mgn.slack) << "\n";
            headline(out, d.beta_upper);
            return 0;
        }

        if (app.got_subcommand(verify)) {
            Config cfg = Config::parse_file(config_path);
            Params p = params_from_config(cfg);
            ULCase kind = parse_case(case_name);
            double s = s_arg;
            if (s <= 0.0 && cfg.has("s")) s = cfg.get_number("s"); // sweepable speed key
            if (s <= 0.0) {
                DerivedQuantities d = derive(p);
                bool estar = kind == ULCase::estar_super || kind == ULCase::estar_critical;
                auto sc = estar ? d.s_upper : d.s_lower;
                if (!sc) throw HypothesisViolated("minimal speed undefined");
                s = (kind == ULCase::estar_super || kind == ULCase::elow_super) ? 1.5 * *sc : *sc;
            }
            ULConstruction c = build_ul(p, s, kind);
            GridSpec grid = default_grid(c, n_points);
            if (z_hi > z_lo) {
                grid.z_lo = z_lo;
                grid.z_hi = z_hi;
            }
            VerificationReport rep = verify_ul(c, p, grid, tol, tail_tol);
            out << "case " << to_string(kind) << ", s = " << fmt_g(c.s) << "\n";
            out << "lambda1 = " << fmt_g(c.lambda1) << ", lambda2 = " << fmt_g(c.lambda2)
                << ", ratio = " << fmt_g(c.ratio) << ", p = " << fmt_g(c.p)
                << ", q = " << fmt_g(c.q) << "\n";
            print_verification(out, rep);
            if (!out_path.empty()) {
                std::ofstream f(out_path);
                write_verification_csv(f, c, p, grid);
            }
            double worst = std::numeric_limits<double>::infinity();
            for (int i = 0; i < 3; ++i)
                worst = std::min({worst, -rep.upper[i].worst, rep.lower[i].worst});
            headline(out, worst);
            return rep.pass ? 0 : 1;
        }

        if (app.got_subcommand(rect)) {
            Params p = load_params(config_path);
            double d3v = delta3 > 0 ? delta3 : default_delta3(p);
            double em = eps_max(p, d3v);
            double ev = eps > 0 ? eps : 0.9 * em;
            out << "delta3 = " << fmt_g(d3v) << ", eps = " << fmt_g(ev) << ", eps_max = "
                << fmt_g(em) << "\n";
            out << "theta,m2,M2,m3,M3,M1,alpha2,omega2,alpha3,omega3,signs\n";
            bool all_ok = true;
            double worst = std::numeric_limits<double>::infinity();
            for (int i = 0; i <= theta_steps; ++i) {
                double theta = theta_max * i / std::max(1, theta_steps);
                RectangleCheck rc = rectangle_signs(p, theta, ev, d3v);
                all_ok = all_ok && rc.all_signs;
                worst = std::min({worst, rc.alpha2, -rc.omega2, rc.alpha3, -rc.omega3});
                out << fmt_g(theta) << ',' << fmt_g(rc.m2) << ',' << fmt_g(rc.M2) << ','
                    << fmt_g(rc.m3) << ',' << fmt_g(rc.M3) << ',' << fmt_g(rc.M1theta) << ','
                    << fmt_g(rc.alpha2) << ',' << fmt_g(rc.omega2) << ',' << fmt_g(rc.alpha3)
                    << ',' << fmt_g(rc.omega3) << ',' << (rc.all_signs ? "ok" : "FAIL") << "\n";
            }
            headline(out, worst);
            return all_ok ? 0 : 1;
        }

        if (app.got_subcommand(lyap)) {
            Params p = load_params(config_path);
            if (!traj_path.empty()) {
                double t_end = t_end_arg > 0 ? t_end_arg : 100.0;
                auto traj = integrate_kinetic({pu, pv, pw}, p, t_end);
                std::ofstream f(traj_path);
                write_trajectory_csv(f, traj);
                out << "trajectory written to " << traj_path << "\n";
            }
            if (n_random <= 0) {
                KineticState x{pu, pv, pw};
                out << "phi = " << fmt_g(lyapunov_phi(x, p)) << "\n";
                out << "lie_derivative = " << fmt_g(lie_derivative_phi(x, p)) << "\n";
                headline(out, lyapunov_phi(x, p));
                return 0;
            }
            double t_end = t_end_arg > 0 ? t_end_arg : 5000.0;
            std::mt19937 rng(seed);
            std::uniform_real_distribution<double> unif(0.05, 1.5);
            double worst_uptick = 0.0, worst_term = 0.0;
            DerivedQuantities d = derive(p);
            if (!d.Ec) throw NoCoexistenceState();
            double dt = default_kinetic_dt(p);
            for (int i = 0; i < n_random; ++i) {
                KineticState x{unif(rng), unif(rng), unif(rng)};
                double phi = lyapunov_phi(x, p), t = 0.0;
                while (t < t_end - 1e-12) {
                    double sdt = std::min(dt, t_end - t);
                    x = kinetic_step(x, p, sdt);
                    t += sdt;
                    double phi2 = lyapunov_phi(x, p);
                    worst_uptick = std::max(worst_uptick, phi2 - phi);
                    phi = phi2;
                }
                double dev = std::max({std::fabs(x.u - (*d.Ec)[0]), std::fabs(x.v - (*d.Ec)[1]),
                                       std::fabs(x.w - (*d.Ec)[2])});
                worst_term = std::max(worst_term, dev);
            }
            out << "trajectories = " << n_random << ", t_end = " << fmt_g(t_end) << "\n";
            out << "max per-step increase of phi = " << fmt_g(worst_uptick) << "\n";
            out << "max terminal deviation from Ec = " << fmt_g(worst_term) << "\n";
            headline(out, worst_uptick);
            return worst_uptick <= 1e-12 ? 0 : 1;
        }

        if (app.got_subcommand(simulate) || app.got_subcommand(speed)) {
            namespace fs = std::filesystem;
            Config cfg = Config::parse_file(config_path);
            if (!scenario_override.empty()) cfg.set("scenario", scenario_override);
            Params p = params_from_config(cfg);
            SimSetup su = sim_setup(cfg, p);
            std::ofstream snap_file;
            long snap_count = 0;
            if (app.got_subcommand(simulate) && !out_path.empty()) {
                fs::create_directories(out_path);
                su.opt.snapshot_stride = 1;
                su.opt.snapshot_sink = [&](const pde::FieldState& st) {
                    std::ofstream f(fs::path(out_path) / pde::snapshot_filename(st.t));
                    pde::write_snapshot_csv(f, st, su.grid);
                    ++snap_count;
                };
            }
            pde::RunResult rr = pde::run(su.grid, p, su.scenario, su.opt);
            out << "t_end = " << fmt_g(rr.terminal.t) << ", steps = " << rr.n_steps << "\n";
            out << "field range = [" << fmt_g(rr.min_value) << ", " << fmt_g(rr.max_value)
                << "]\n";
            if (!out_path.empty()) {
                fs::create_directories(out_path);
                std::ofstream f(fs::path(out_path) / "front.csv");
                pde::write_front_csv(f, rr.front);
                std::ofstream g(fs::path(out_path) /
                                pde::snapshot_filename(rr.terminal.t));
                pde::write_snapshot_csv(g, rr.terminal, su.grid);
            }
            if (rr.front.empty()) {
                out << "no front detected\n";
                headline(out, 0.0);
                return app.got_subcommand(simulate) ? 0 : 1;
            }
            double front_x = rr.front.back().x;
            out << "front at t_end: x = " << fmt_g(front_x) << "\n";
            double dist = front_x - su.grid.x_min;
            double w_lo = su.grid.x_min + 0.05 * dist, w_hi = su.grid.x_min + 0.25 * dist;
            pde::TailReport tail = pde::tail_classify(rr.terminal, su.grid, p, w_lo, w_hi);
            out << "tail in [" << fmt_g(w_lo) << ", " << fmt_g(w_hi) << "]: "
                << pde::to_string(tail.tag) << " (max deviation " << fmt_g(tail.max_deviation)
                << ", mean " << fmt_g(tail.window_mean[0]) << ", " << fmt_g(tail.window_mean[1])
                << ", " << fmt_g(tail.window_mean[2]) << ")\n";
            if (app.got_subcommand(simulate)) {
                headline(out, front_x);
                return 0;
            }
            pde::SpeedEstimate est = pde::estimate_speed(rr.front, su.alien, su.opt.front_level,
                                                         fit_start_frac(cfg));
            DerivedQuantities d = derive(p);
            auto target = su.alien == 0 ? d.s_lower : d.s_upper;
            out << "fitted speed = " << fmt_g(est.speed) << " (residual " << fmt_g(est.residual)
                << ", " << est.n_used << " samples from t = " << fmt_g(est.t_start) << ")\n";
            double gap = std::numeric_limits<double>::quiet_NaN();
            if (target) {
                gap = std::fabs(est.speed - *target) / *target;
                out << "linear speed = " << fmt_g(*target) << ", relative gap = " << fmt_g(gap)
                    << "\n";
            }
            headline(out, est.speed);
            return (target && gap <= speed_tol) ? 0 : 1;
        }

        if (app.got_subcommand(bvp_cmd)) {
            Params p = load_params(config_path);
            DerivedQuantities d = derive(p);
            auto left = parse_state(left_name, d);
            auto right = parse_state(right_name, d);
            bvp::SolveStats stats;
            bvp::WaveProfile seed;
            const bvp::WaveProfile* seed_ptr = nullptr;
            if (init_name != "ramp" && init_name != "tanh" && init_name != "from-pde")
                throw ConfigError("unknown init `" + init_name + "` (ramp, tanh, from-pde)");
            if (init_name == "from-pde") {
                Config cfg = Config::parse_file(config_path);
                SimSetup su = sim_setup(cfg, p);
                su.opt.t_end = std::min(su.opt.t_end, 60.0);
                pde::RunResult rr = pde::run(su.grid, p, su.scenario, su.opt);
                if (rr.front.empty()) throw NoFront("seed run produced no front");
                std::vector<double> xs(su.grid.n);
                for (int i = 0; i < su.grid.n; ++i) xs[i] = su.grid.x(i);
                int m_seed = m_nodes;
                seed = bvp::profile_from_field(
                    xs, {&rr.terminal.u, &rr.terminal.v, &rr.terminal.w}, rr.front.back().x,
                    s_arg, -half_length, 2.0 * half_length / (m_seed - 1), m_seed, left, right);
                seed_ptr = &seed;
            }
            bvp::WaveProfile wp = bvp::solve_profile(p, s_arg, left, right, half_length,
                                                     m_nodes, seed_ptr, {}, &stats);
            for (const auto& line : stats.log) out << line << "\n";
            bvp::ResidualReport res = bvp::residual(wp, p);
            out << "converged in " << stats.iterations << " iterations, residual max-norm = "
                << fmt_g(res.max_norm) << "\n";
            if (!out_path.empty()) {
                std::ofstream f(out_path);
                bvp::write_profile_csv(f, wp);
            }
            headline(out, res.max_norm);
            return 0;
        }

        if (app.got_subcommand(cont)) {
            Params p = load_params(config_path);
            DerivedQuantities d = derive(p);
            auto left = parse_state(left_name, d);
            auto right = parse_state(right_name, d);
            bvp::ContinuationResult cr = bvp::continue_in_speed(p, s_from, s_to, n_steps, left,
                                                                right, half_length, m_nodes);
            out << "solved " << cr.speeds.size() << " speeds\n";
            if (!cr.completed) out << "stopped: " << cr.stop_reason << "\n";
            if (!cr.speeds.empty()) {
                out << "last good speed = " << fmt_g(cr.last_good_speed) << "\n";
                headline(out, cr.last_good_speed);
                return 0;
            }
            headline(out, std::numeric_limits<double>::quiet_NaN());
            return 1;
        }

        if (app.got_subcommand(sweep_cmd)) {
            if (!allow_sweep) throw ConfigError("sweep may not invoke sweep");
            SweepSpec spec;
            spec.base_config = config_path;
            spec.out_dir = sweep_out;
            spec.jobs = jobs;
            for (const auto& as : axis_specs) {
                SweepAxis ax;
                std::istringstream ss(as);
                std::string part;
                std::vector<std::string> parts;
                while (std::getline(ss, part, ':')) parts.push_back(part);
                if (parts.size() != 5) throw ConfigError("axis must be key:min:max:n:lin|log");
                ax.key = parts[0];
                ax.min = std::atof(parts[1].c_str());
                ax.max = std::atof(parts[2].c_str());
                ax.n_points = std::atoi(parts[3].c_str());
                if (parts[4] == "log")
                    ax.log_scale = true;
                else if (parts[4] == "lin")
                    ax.log_scale = false;
                else
                    throw ConfigError("axis scale must be lin or log");
                spec.axes.push_back(ax);
            }
            {
                std::istringstream ss(sweep_command);
                std::string tok;
                while (ss >> tok) spec.command.push_back(tok);
            }
            if (!spec.command.empty() && spec.command.front() == "sweep")
                throw ConfigError("sweep may not invoke sweep");
            validate_spec(spec);
            Config::parse_file(spec.base_config); // fail early on a bad base config
            std::filesystem::create_directories(spec.out_dir);
            auto records = run_sweep(spec, [&spec](int index, const auto& kv) {
                return sweep_point(spec, index, kv);
            });
            std::ofstream f(std::filesystem::path(spec.out_dir) / "summary.csv");
            write_sweep_summary(f, spec, records);
            int n_pass = 0;
            for (const auto& r : records) n_pass += r.outcome == "pass";
            out << records.size() << " points, " << n_pass << " pass\n";
            out << "summary: " << (std::filesystem::path(spec.out_dir) / "summary.csv").string()
                << "\n";
            headline(out, static_cast<double>(n_pass));
            return 0;
        }
    } catch (const ConfigError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return 1;
    }
    err << "no subcommand\n";
    return 2;
}

} // namespace detail

/// Entry point shared by the binary, the tests, and the sweep runner.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out,
                    std::ostream& err) {
    return detail::dispatch_impl(args, out, err, /*allow_sweep=*/true);
}

} // namespace tripwave::cli
