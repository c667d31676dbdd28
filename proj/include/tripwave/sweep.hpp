#pragma once

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "tripwave/config.hpp"
#include "tripwave/csv.hpp"
#include "tripwave/errors.hpp"

namespace tripwave {

struct SweepAxis {
    std::string key;
    double min = 0.0, max = 0.0;
    int n_points = 1;
    bool log_scale = false;
};

struct SweepSpec {
    std::string base_config;
    std::vector<SweepAxis> axes;
    std::vector<std::string> command; // subcommand argv applied per point
    std::string out_dir;
    int jobs = 0; // 0: TRIPWAVE_JOBS or hardware concurrency
};

struct RunRecord {
    int index = -1;
    std::vector<double> values; // one per axis, input order
    std::string outcome;        // pass | fail | error
    double headline = std::numeric_limits<double>::quiet_NaN();
    std::string path;
};

struct PointResult {
    std::string outcome;
    double headline = std::numeric_limits<double>::quiet_NaN();
    std::string path;
};

inline double axis_value(const SweepAxis& ax, int i) {
    if (ax.n_points <= 1) return ax.min;
    double t = static_cast<double>(i) / (ax.n_points - 1);
    if (ax.log_scale) return ax.min * std::pow(ax.max / ax.min, t);
    return ax.min + (ax.max - ax.min) * t;
}

inline void validate_spec(const SweepSpec& spec) {
    if (spec.axes.empty()) throw ConfigError("sweep needs at least one axis");
    for (const auto& ax : spec.axes) {
        if (ax.key.empty()) throw ConfigError("sweep axis needs a key");
        if (ax.n_points < 1) throw ConfigError("sweep axis needs n_points >= 1");
        if (ax.log_scale && !(ax.min > 0.0 && ax.max > 0.0))
            throw ConfigError("log axis needs positive endpoints");
    }
    if (spec.command.empty()) throw ConfigError("sweep needs a command");
    if (spec.out_dir.empty()) throw ConfigError("sweep needs an output directory");
}

inline int default_jobs() {
    if (const char* env = std::getenv("TRIPWAVE_JOBS")) {
        int j = std::atoi(env);
        if (j > 0) return j;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Evaluates `runner` on every grid point of the axis product (first axis
/// outermost). Points run concurrently up to the job limit; records are
/// returned in input-index order and a runner failure is captured in the
/// record, never propagated.
inline std::vector<RunRecord> run_sweep(
    const SweepSpec& spec,
    const std::function<PointResult(int index, const std::vector<std::pair<std::string, double>>&)>&
        runner) {
    validate_spec(spec);
    long total = 1;
    for (const auto& ax : spec.axes) total *= ax.n_points;
    std::vector<RunRecord> records(total);

    auto point_values = [&](int index) {
        std::vector<std::pair<std::string, double>> kv(spec.axes.size());
        long rem = index;
        for (int a = static_cast<int>(spec.axes.size()) - 1; a >= 0; --a) {
            int i = static_cast<int>(rem % spec.axes[a].n_points);
            rem /= spec.axes[a].n_points;
            kv[a] = {spec.axes[a].key, axis_value(spec.axes[a], i)};
        }
        return kv;
    };

    std::atomic<long> next{0};
    auto worker = [&]() {
        for (;;) {
            long idx = next.fetch_add(1);
            if (idx >= total) return;
            auto kv = point_values(static_cast<int>(idx));
            RunRecord rec;
            rec.index = static_cast<int>(idx);
            for (const auto& [k, v] : kv) rec.values.push_back(v);
            try {
                PointResult pr = runner(static_cast<int>(idx), kv);
                rec.outcome = pr.outcome;
                rec.headline = pr.headline;
                rec.path = pr.path;
            } catch (const std::exception&) {
                rec.outcome = "error";
            }
            records[idx] = std::move(rec);
        }
    };
    int jobs = spec.jobs > 0 ? spec.jobs : default_jobs();
    jobs = static_cast<int>(std::min<long>(jobs, total));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return records;
}

inline void write_sweep_summary(std::ostream& os, const SweepSpec& spec,
                                const std::vector<RunRecord>& records) {
    os << "index";
    for (const auto& ax : spec.axes) os << ',' << ax.key;
    os << ",outcome,headline,path\n";
    for (const auto& r : records) {
        os << r.index;
        for (double v : r.values) os << ',' << fmt_g(v);
        os << ',' << r.outcome << ',' << fmt_g(r.headline) << ',' << r.path << '\n';
    }
}

} // namespace tripwave
