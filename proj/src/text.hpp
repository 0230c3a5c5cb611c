#pragma once

#include <cstdio>
#include <string>

namespace nlcs {

// Fixed float rendering for every text surface: 12 significant digits keeps
// CSV output byte-stable across runs and platforms with the same libc.
inline std::string fmt_g(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

} // namespace nlcs
