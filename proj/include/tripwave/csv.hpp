#pragma once

#include <cstdio>
#include <ostream>
#include <string>

namespace tripwave {

// Fixed numeric formatting for all emitted data files: 15 significant digits,
// shortest form. Identical inputs therefore produce byte-identical output.
inline std::string fmt_g(double x) {
    if (x == 0.0) x = 0.0; // drop the sign of negative zero
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

inline std::ostream& put_g(std::ostream& os, double x) { return os << fmt_g(x); }

} // namespace tripwave
