#pragma once

#include <array>
#include <cmath>
#include <string>

#include "tripwave/config.hpp"
#include "tripwave/errors.hpp"

namespace tripwave {

/// Model constants of the three-species system: two competing preys (u, v)
/// with diffusivities d1, d2 and growth rates r1, r2, one predator (w) with
/// d3, r3; interspecific prey competition h, k; predation rates b1, b2 and a
/// common conversion rate a. Prey carrying capacities are scaled to one.
struct Params {
    double d1, d2, d3;
    double r1, r2, r3;
    double h, k;
    double a;
    double b1, b2;

    std::array<double, 3> diffusivities() const { return {d1, d2, d3}; }
    std::array<double, 3> growth_rates() const { return {r1, r2, r3}; }
    double max_diffusivity() const { return std::max(d1, std::max(d2, d3)); }
    double max_growth_rate() const { return std::max(r1, std::max(r2, r3)); }
};

/// Throws InvalidParams naming the violated constraint. Valid parameters are
/// strictly positive with a > 1 and h < 1 < k (weak/strong competing preys).
inline void validate(const Params& p) {
    const std::pair<const char*, double> fields[] = {
        {"d1", p.d1}, {"d2", p.d2}, {"d3", p.d3}, {"r1", p.r1}, {"r2", p.r2},
        {"r3", p.r3}, {"h", p.h},   {"k", p.k},   {"a", p.a},   {"b1", p.b1},
        {"b2", p.b2},
    };
    for (const auto& [name, value] : fields) {
        if (!(value > 0.0) || !std::isfinite(value))
            throw InvalidParams(std::string(name) + ">0");
    }
    if (!(p.a > 1.0)) throw InvalidParams("a>1");
    if (!(p.h < 1.0 && 1.0 < p.k)) throw InvalidParams("h<1<k");
}

inline Params params_from_config(const Config& cfg) {
    Params p{};
    p.d1 = cfg.get_number("d1");
    p.d2 = cfg.get_number("d2");
    p.d3 = cfg.get_number("d3");
    p.r1 = cfg.get_number("r1");
    p.r2 = cfg.get_number("r2");
    p.r3 = cfg.get_number("r3");
    p.h = cfg.get_number("h");
    p.k = cfg.get_number("k");
    p.a = cfg.get_number("a");
    p.b1 = cfg.get_number("b1");
    p.b2 = cfg.get_number("b2");
    validate(p);
    return p;
}

inline Params load_params(const std::string& path) {
    return params_from_config(Config::parse_file(path));
}

} // namespace tripwave
